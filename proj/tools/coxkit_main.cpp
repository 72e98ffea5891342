#include <iostream>

int main() {
  std::cout << "coxkit: not wired up yet\n";
  return 2;
}
