#include "coxkit/intensity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "coxkit/numeric.hpp"
#include "coxkit/stats.hpp"
#include "test_util.hpp"

namespace coxkit {
namespace {

TEST(IntensityPath, ConstructionRejectsBadInput) {
  EXPECT_THROW(IntensityPath({0.5}, {1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(IntensityPath({0.0, 0.0}, {1.0, 2.0}, 1.0),
               std::invalid_argument);
  EXPECT_THROW(IntensityPath({0.0}, {-1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(IntensityPath({0.0}, {1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(IntensityPath({0.0, 1.0}, {1.0}, 2.0), std::invalid_argument);
  EXPECT_THROW(IntensityPath({0.0, 2.0}, {1.0, 1.0}, 2.0),
               std::invalid_argument);
}

TEST(IntensityPath, CumulativeClosedForm) {
  const auto flat = IntensityPath::constant(2.0, 3.0);
  EXPECT_DOUBLE_EQ(flat.cumulative(3.0), 6.0);
  EXPECT_DOUBLE_EQ(flat.cumulative(0.0), 0.0);

  const IntensityPath two_piece({0.0, 1.0}, {1.0, 3.0}, 2.0);
  EXPECT_DOUBLE_EQ(two_piece.cumulative(2.0), 4.0);
  EXPECT_DOUBLE_EQ(two_piece.cumulative(1.0), 1.0);
  EXPECT_DOUBLE_EQ(two_piece.cumulative(1.5), 2.5);

  EXPECT_THROW(flat.cumulative(-0.1), std::domain_error);
  EXPECT_THROW(flat.cumulative(3.1), std::domain_error);
}

TEST(IntensityPath, ValueAtIsRightContinuous) {
  const IntensityPath path({0.0, 1.0}, {1.0, 3.0}, 2.0);
  EXPECT_DOUBLE_EQ(path.value_at(0.0), 1.0);
  EXPECT_DOUBLE_EQ(path.value_at(1.0), 3.0);
  EXPECT_DOUBLE_EQ(path.value_at(0.999999), 1.0);
  EXPECT_DOUBLE_EQ(path.value_at(2.0), 3.0);
  EXPECT_DOUBLE_EQ(path.value_extended(5.0), 3.0);
  EXPECT_DOUBLE_EQ(path.cumulative_extended(3.0), 4.0 + 3.0);
}

TEST(IntensityPath, InverseCumulativeExamples) {
  const auto flat = IntensityPath::constant(2.0, 3.0);
  EXPECT_DOUBLE_EQ(*flat.inverse_cumulative(4.0), 2.0);
  EXPECT_DOUBLE_EQ(*flat.inverse_cumulative(0.0), 0.0);
  EXPECT_FALSE(flat.inverse_cumulative(6.0 + 1e-9).has_value());
  EXPECT_THROW(flat.inverse_cumulative(-1.0), std::domain_error);

  // Zero plateau then rate 1: Λ = 0 on [0,1], t - 1 afterwards, so the
  // first time Λ reaches 0.5 is t = 1.5.
  const IntensityPath plateau({0.0, 1.0}, {0.0, 1.0}, 2.0);
  EXPECT_DOUBLE_EQ(*plateau.inverse_cumulative(0.5), 1.5);
  // Smallest-t rule at the plateau boundary.
  const IntensityPath mid_plateau({0.0, 1.0, 1.5}, {1.0, 0.0, 1.0}, 2.0);
  EXPECT_DOUBLE_EQ(*mid_plateau.inverse_cumulative(1.0), 1.0);
}

TEST(IntensityPath, CumulativeMonotoneOnRandomPaths) {
  RngStream rng(101, 0, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto path = test::random_path(rng);
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double t = prev_t + (path.horizon() - prev_t) * rng.uniform01();
      const double v = path.cumulative(t);
      ASSERT_GE(v, prev_v);
      prev_t = t;
      prev_v = v;
    }
  }
}

TEST(IntensityPath, InverseRoundTripProperties) {
  RngStream rng(102, 0, 0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto path = test::random_path(rng);
    const double t = path.horizon() * rng.uniform01();
    const auto back = path.inverse_cumulative(path.cumulative(t));
    ASSERT_TRUE(back.has_value());
    // Smallest-t inverse can only move left.
    ASSERT_LE(*back, t + 1e-12);
    const double u = path.total_mass() * rng.uniform01();
    const auto s = path.inverse_cumulative(u);
    ASSERT_TRUE(s.has_value());
    ASSERT_NEAR(path.cumulative(*s), u, 1e-12 * (1.0 + u));
  }
}

TEST(IntensityPath, InverseIsExactOffPlateaus) {
  RngStream rng(103, 0, 0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto path = test::random_path(rng, 2.0, /*allow_zero_levels=*/false);
    const double t = path.horizon() * rng.uniform01();
    if (path.value_at(t) <= 0.0) continue;
    const auto back = path.inverse_cumulative(path.cumulative(t));
    ASSERT_TRUE(back.has_value());
    ASSERT_NEAR(*back, t, 4e-16 * (1.0 + t));
  }
}

TEST(CumulativeProduct, HandValueAndRiemannCheck) {
  const IntensityPath x({0.0, 1.0}, {1.0, 3.0}, 2.0);
  const IntensityPath y({0.0, 0.5}, {2.0, 0.0}, 2.0);
  EXPECT_DOUBLE_EQ(cumulative_product(x, y, 0.0, 2.0), 1.0);

  RngStream rng(104, 0, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = test::random_path(rng);
    const auto b = test::random_path(rng);
    const double from = 0.5 * rng.uniform01();
    const double to = from + (a.horizon() - from) * rng.uniform01();
    const double exact = cumulative_product(a, b, from, to);
    const int cells = 20000;
    double riemann = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double mid = from + (to - from) * (i + 0.5) / cells;
      riemann += a.value_at(mid) * b.value_at(mid) * (to - from) / cells;
    }
    ASSERT_NEAR(exact, riemann, 1e-2 * (1.0 + std::fabs(exact)));
  }
}

TEST(PriorSpec, FixedIsIdentity) {
  const IntensityPath path({0.0, 1.0}, {1.0, 3.0}, 2.0);
  const auto prior = PriorSpec::fixed(path);
  RngStream rng(105, 0, 0);
  const auto drawn = sample_prior(prior, rng);
  ASSERT_EQ(drawn.segment_count(), path.segment_count());
  for (std::size_t j = 0; j < path.segment_count(); ++j) {
    EXPECT_EQ(drawn.breakpoints()[j], path.breakpoints()[j]);
    EXPECT_EQ(drawn.levels()[j], path.levels()[j]);
  }
}

TEST(PriorSpec, DegenerateRandomLevel) {
  const auto prior =
      PriorSpec::random_level(LevelLaw::discrete({1.0}, {1.0}), 2.0);
  RngStream rng(106, 0, 0);
  const auto drawn = sample_prior(prior, rng);
  EXPECT_EQ(drawn.segment_count(), 1u);
  EXPECT_EQ(drawn.levels()[0], 1.0);
}

TEST(PriorSpec, CompoundPoissonStructure) {
  CompoundPoissonIntensitySpec spec;
  spec.x0 = 1.0;
  spec.jump_rate = 2.0;
  spec.jump_law = JumpLaw::fixed(0.5);
  const auto prior = PriorSpec::compound_poisson(spec, 10.0);
  RngStream rng(107, 0, 0);
  const auto path = sample_prior(prior, rng);
  EXPECT_EQ(path.levels()[0], 1.0);
  for (std::size_t j = 1; j < path.segment_count(); ++j)
    EXPECT_DOUBLE_EQ(path.levels()[j], path.levels()[j - 1] + 0.5);
  EXPECT_FALSE(prior.admits_zero_level());
}

TEST(PriorSpec, CompoundPoissonPathsNondecreasingAboveX0) {
  CompoundPoissonIntensitySpec spec;
  spec.x0 = 0.7;
  spec.jump_rate = 1.5;
  spec.jump_law = JumpLaw::exponential(0.8);
  const auto prior = PriorSpec::compound_poisson(spec, 3.0);
  for (std::uint64_t rep = 0; rep < 300; ++rep) {
    RngStream rng(108, rep, 0);
    const auto path = sample_prior(prior, rng);
    double prev = spec.x0;
    EXPECT_EQ(path.levels()[0], spec.x0);
    for (double level : path.levels()) {
      ASSERT_GE(level, prev - 1e-15);
      ASSERT_GE(level, spec.x0);
      prev = level;
    }
  }
}

// Jump count over [0, 10] at rate 2 is Poisson(20); chi-square over many
// seeded draws.
TEST(PriorSpec, CompoundPoissonJumpCountLaw) {
  CompoundPoissonIntensitySpec spec;
  spec.x0 = 1.0;
  spec.jump_rate = 2.0;
  spec.jump_law = JumpLaw::fixed(0.5);
  const auto prior = PriorSpec::compound_poisson(spec, 10.0);
  const int replicates = 20000;
  const int max_count = 45;
  std::vector<double> observed(max_count + 1, 0.0);
  for (int rep = 0; rep < replicates; ++rep) {
    RngStream rng(109, static_cast<std::uint64_t>(rep), 0);
    const auto path = sample_prior(prior, rng);
    const long jumps = static_cast<long>(path.segment_count()) - 1;
    observed[std::min<long>(jumps, max_count)] += 1.0;
  }
  std::vector<double> expected(max_count + 1, 0.0);
  for (long k = 0; k < max_count; ++k)
    expected[k] = replicates * poisson_pmf(k, 20.0);
  expected[max_count] =
      replicates * (1.0 - poisson_cdf(max_count - 1, 20.0));
  const auto res = chi_square_gof(observed, expected);
  EXPECT_TRUE(res.passes(0.001)) << "p=" << res.p_value;
}

TEST(PriorSpec, ZeroLevelDetection) {
  EXPECT_TRUE(PriorSpec::fixed(IntensityPath({0.0, 1.0}, {1.0, 0.0}, 2.0))
                  .admits_zero_level());
  EXPECT_FALSE(PriorSpec::fixed(IntensityPath::constant(1.0, 1.0))
                   .admits_zero_level());
  EXPECT_TRUE(
      PriorSpec::random_level(LevelLaw::discrete({0.0, 2.0}, {0.5, 0.5}), 1.0)
          .admits_zero_level());
  EXPECT_TRUE(PriorSpec::random_level(LevelLaw::uniform(0.0, 1.0), 1.0)
                  .admits_zero_level());
  EXPECT_FALSE(PriorSpec::random_level(LevelLaw::uniform(0.5, 1.0), 1.0)
                   .admits_zero_level());
}

TEST(JumpLaw, ValidationAndSampling) {
  EXPECT_THROW(JumpLaw::exponential(-1.0), ConfigError);
  EXPECT_THROW(JumpLaw::fixed(0.0), ConfigError);
  EXPECT_THROW(JumpLaw::discrete({1.0}, {0.5}), ConfigError);
  EXPECT_THROW(JumpLaw::discrete({-1.0}, {1.0}), ConfigError);

  const auto law = JumpLaw::discrete({0.5, 1.5}, {0.25, 0.75});
  RngStream rng(110, 0, 0);
  int hi = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) hi += law.sample(rng) == 1.5;
  EXPECT_NEAR(static_cast<double>(hi) / n, 0.75, 0.01);
}

}  // namespace
}  // namespace coxkit
