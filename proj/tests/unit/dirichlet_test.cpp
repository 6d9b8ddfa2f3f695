#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wep/dirichlet.hpp"
#include "wep/stats.hpp"

using namespace wep;

namespace {

// E||beta||_2^2 for Beta(1, M) sticks: E V^2 / (1 - E(1-V)^2) with
// E V^2 = 2/((M+1)(M+2)) and E(1-V)^2 = M/(M+2), i.e. 1/(M+1).
double expected_sq_l2(double m) {
  const double ev2 = 2.0 / ((m + 1.0) * (m + 2.0));
  const double e1v2 = m / (m + 2.0);
  return ev2 / (1.0 - e1v2);
}

}  // namespace

TEST(StickBreaking, MomentIdentityOracle) {
  for (double m : {0.5, 1.0, 5.0, 20.0}) EXPECT_NEAR(expected_sq_l2(m), 1.0 / (m + 1.0), 1e-15);
}

TEST(StickBreaking, DecompositionAndTolerance) {
  Rng rng(1);
  for (double m : {0.1, 1.0, 5.0, 200.0}) {
    for (int r = 0; r < 50; ++r) {
      const auto draw = sample_sticks(m, 1e-10, rng);
      EXPECT_NEAR(draw.weights.l1() + draw.remainder(), 1.0, 1e-12);
      EXPECT_LT(draw.remainder(), 1e-10);
      // weights reconstruct from the stored stick fractions
      double rest = 1.0;
      for (std::size_t i = 0; i < draw.weights.size(); ++i) {
        EXPECT_NEAR(draw.weights.weights()[i], draw.stick_fractions[i] * rest, 1e-15);
        rest *= 1.0 - draw.stick_fractions[i];
      }
    }
  }
}

TEST(StickBreaking, SquaredL2MeanIsOneOverMPlusOne) {
  for (double m : {1.0, 5.0}) {
    Rng rng(derive_seed(2, static_cast<std::uint64_t>(m)));
    std::vector<double> sq;
    for (int r = 0; r < 20000; ++r) {
      const double l2 = lr_norm(sample_stick_weights(m, 1e-10, rng), 2.0);
      sq.push_back(l2 * l2);
    }
    const MeanEstimate est = mean_and_se(sq);
    EXPECT_NEAR(est.mean, 1.0 / (m + 1.0), 3 * est.se) << "M=" << m;
  }
}

TEST(StickBreaking, SmallConcentrationPutsMassOnFirstStick) {
  Rng rng(3);
  std::vector<double> first;
  for (int r = 0; r < 2000; ++r) first.push_back(sample_stick_weights(1e-3, 1e-10, rng).weights()[0]);
  const MeanEstimate est = mean_and_se(first);
  // E V_1 = 1/(M+1)
  EXPECT_NEAR(est.mean, 1.0 / 1.001, 3 * est.se + 1e-6);
  EXPECT_GT(est.mean, 0.99);
}

TEST(StickBreaking, ExpectedLengthGrowsLikeMLogInverseTol) {
  // log(rest) is a sum of Exp(M)-distributed log(1-V) terms; the number of
  // sticks to pass log(tol) is 1 + Poisson(M ln(1/tol)).
  Rng rng(4);
  std::vector<double> lengths;
  for (int r = 0; r < 5000; ++r) {
    lengths.push_back(static_cast<double>(sample_stick_weights(1.0, 1e-10, rng).size()));
  }
  const MeanEstimate est = mean_and_se(lengths);
  const double expected = 1.0 + std::log(1e10);
  EXPECT_NEAR(est.mean, expected, 3 * est.se);
  EXPECT_NEAR(est.mean, 23.0, 1.0);
}

TEST(StickBreaking, RejectsBadArguments) {
  Rng rng(5);
  EXPECT_THROW(sample_stick_weights(0.0, 1e-6, rng), std::domain_error);
  EXPECT_THROW(sample_stick_weights(1.0, 0.0, rng), std::domain_error);
  EXPECT_THROW(sample_stick_weights(1.0, -1.0, rng), std::domain_error);
}

TEST(AliasTable, FrequenciesMatchMasses) {
  const auto p = DiscreteMeasure::probability({{2, 0.5}, {5, 0.3}, {9, 0.15}, {11, 0.05}});
  const AliasTable table(p);
  Rng rng(6);
  std::map<AtomId, int> counts;
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[table.sample(rng)];
  for (const Atom& a : p.atoms()) {
    const double se = std::sqrt(a.mass * (1 - a.mass) / n);
    EXPECT_NEAR(counts[a.id] / static_cast<double>(n), a.mass, 4 * se);
  }
}

TEST(SampleDp, DegenerateBase) {
  Rng rng(7);
  const DpParams params{DiscreteMeasure::dirac(0), 2.0};
  const auto d = sample_dp(params, 1e-10, rng);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.atoms()[0].id, 0u);
  EXPECT_GT(d.atoms()[0].mass, 1.0 - 1e-10);
  EXPECT_LE(d.atoms()[0].mass, 1.0);
}

TEST(SampleDp, MatchesStickBreakingDrawOnSameStream) {
  const DpParams params{DiscreteMeasure::uniform(4), 3.0};
  Rng a(8), b(8);
  const auto measure = sample_dp(params, 1e-8, a);
  const auto draw = sample_stick_breaking(params, 1e-8, b);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < draw.atoms.size(); ++i) atoms.push_back({draw.atoms[i], draw.weights.weights()[i]});
  EXPECT_LT(tv_distance(measure, DiscreteMeasure::from_atoms(atoms)), 1e-14);
  EXPECT_NEAR(measure.total_mass(), 1.0 - draw.remainder(), 1e-12);
}

TEST(SampleDp, MeanMeasureOfFixedSetsIsBase) {
  const auto base = DiscreteMeasure::probability({{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}});
  const DpSampler sampler({base, 2.0});
  const std::vector<std::vector<AtomId>> sets{{0}, {1, 3}, {0, 2}};
  std::vector<std::vector<double>> values(sets.size());
  for (int r = 0; r < 10000; ++r) {
    Rng rng(9, Stream::test, r);
    const auto d = sampler.draw(rng);
    for (std::size_t s = 0; s < sets.size(); ++s) values[s].push_back(d.mass_of(sets[s]));
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const MeanEstimate est = mean_and_se(values[s]);
    EXPECT_NEAR(est.mean, base.mass_of(sets[s]), 3 * est.se) << "set " << s;
  }
}

TEST(Posterior, NoDataLeavesPriorUnchanged) {
  const DpParams prior{DiscreteMeasure::dirac(2), 1.0};
  const DpParams post = posterior_params(prior, {});
  EXPECT_EQ(post.concentration, 1.0);
  EXPECT_EQ(tv_distance(post.base, prior.base), 0.0);
}

TEST(Posterior, ConjugateUpdateArithmetic) {
  const DpParams prior{DiscreteMeasure::dirac(2), 1.0};
  const std::vector<AtomId> xs{0, 0, 1};
  const DpParams post = posterior_params(prior, xs);
  EXPECT_DOUBLE_EQ(post.concentration, 4.0);
  EXPECT_NEAR(post.base.mass(0), 0.5, 1e-15);
  EXPECT_NEAR(post.base.mass(1), 0.25, 1e-15);
  EXPECT_NEAR(post.base.mass(2), 0.25, 1e-15);
}

TEST(Posterior, BaseApproachesEmpiricalForLargeN) {
  const DpParams prior{DiscreteMeasure::uniform(3), 1.0};
  std::vector<AtomId> xs;
  Rng rng(10);
  for (int i = 0; i < 100000; ++i) xs.push_back(rng.below(2));
  const DpParams post = posterior_params(prior, xs);
  const double theta = 1.0 / 100001.0;
  // ||alpha_x - P_x||_TV = theta ||alpha - P_x||_TV <= theta
  EXPECT_LE(tv_distance(post.base, DiscreteMeasure::empirical(xs)), theta + 1e-15);
}

TEST(Posterior, MonteCarloMeanMatchesPosteriorBase) {
  const DpParams prior{DiscreteMeasure::uniform(5), 2.0};
  const std::vector<AtomId> xs{0, 0, 1, 4, 4, 4};
  const DpSampler sampler(posterior_params(prior, xs));
  const std::vector<AtomId> set{0, 4};
  std::vector<double> v;
  for (int r = 0; r < 10000; ++r) {
    Rng rng(11, Stream::test, r);
    v.push_back(sampler.draw(rng).mass_of(set));
  }
  const MeanEstimate est = mean_and_se(v);
  EXPECT_NEAR(est.mean, sampler.params().base.mass_of(set), 3 * est.se);
}

TEST(Posterior, RescaledNormsUnderGrowingConcentration) {
  // Concentration 1 + n: sqrt(n)||beta||_2 -> 1 while sqrt(n)||beta||_4
  // decays like n^{-1/4} (sum beta_i^4 ~ 24 / n^3).
  auto medians = [](double n) {
    std::vector<double> l2, l4;
    for (int r = 0; r < 40; ++r) {
      Rng rng(12, Stream::test, r);
      const WeightSeq w = sample_stick_weights(1.0 + n, 1e-10, rng);
      l2.push_back(std::sqrt(n) * lr_norm(w, 2.0));
      l4.push_back(std::sqrt(n) * lr_norm(w, 4.0));
    }
    return std::pair{quantile(l2, 0.5), quantile(l4, 0.5)};
  };
  const auto [l2_small, l4_small] = medians(100.0);
  const auto [l2_large, l4_large] = medians(1e4);
  EXPECT_NEAR(l2_large, 1.0, 0.05);
  EXPECT_NEAR(l2_small, 1.0, 0.2);
  EXPECT_GT(l4_large / l4_small, 0.2);
  EXPECT_LT(l4_large / l4_small, 0.45);
}
