#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "phantom/analysis.hpp"
#include "phantom/errors.hpp"

namespace phantom::analysis {
namespace {

TrafficParams traffic(double ln, double lh, double mu, int t, int g) {
  TrafficParams p;
  p.lambda_n = ln;
  p.lambda_h = lh;
  p.mu_c = mu;
  p.total_channels = t;
  p.guard_channels = g;
  return p;
}

TEST(Blocking, SingleChannelErlang) { EXPECT_DOUBLE_EQ(blocking_probability(traffic(0.5, 0.5, 1, 1, 0)), 0.5); }

TEST(Blocking, TwoChannelsOneGuard) { EXPECT_NEAR(blocking_probability(traffic(1, 1, 1, 2, 1)), 0.25, 1e-15); }

TEST(Blocking, NoChannelsAlwaysBlocks) { EXPECT_EQ(blocking_probability(traffic(1, 1, 1, 0, 0)), 1.0); }

TEST(Blocking, InvalidParams) {
  EXPECT_THROW(blocking_probability(traffic(0, 1, 1, 2, 0)), DomainError);
  EXPECT_THROW(blocking_probability(traffic(1, 1, 1, 2, 3)), DomainError);
  EXPECT_THROW(blocking_probability(traffic(1, 1, 1, 2, -1)), DomainError);
}

TEST(Blocking, MatchesBirthDeathSolveOnGrid) {
  for (int t = 1; t <= 20; ++t) {
    for (int g = 0; g <= t; ++g) {
      for (double rho : {0.1, 1.0, 5.0, 10.0}) {
        const TrafficParams p = traffic(0.6 * rho, 0.4 * rho, 1.0, t, g);
        ASSERT_NEAR(blocking_probability(p), oracle::birth_death_blocking(p), 1e-12) << t << " " << g << " " << rho;
        if (g == 0) ASSERT_NEAR(blocking_probability(p), oracle::erlang_b(t, rho), 1e-12);
      }
    }
  }
}

TEST(Blocking, MonotoneInArrivalRates) {
  for (int t = 1; t <= 12; ++t) {
    for (int g = 0; g <= t; ++g) {
      double prev_n = 0.0;
      double prev_h = 0.0;
      for (double lam = 0.1; lam <= 10.0; lam *= 1.3) {
        const double bn = blocking_probability(traffic(lam, 1.0, 1.0, t, g));
        const double bh = blocking_probability(traffic(1.0, lam, 1.0, t, g));
        ASSERT_GE(bn, prev_n - 1e-15);
        ASSERT_GE(bh, prev_h - 1e-15);
        prev_n = bn;
        prev_h = bh;
      }
    }
  }
}

TEST(Dwell, Examples) {
  EXPECT_EQ(dwell_exceed_probability(7, 7), 0.5);
  EXPECT_EQ(dwell_exceed_probability(15, 5), 0.75);
  EXPECT_EQ(dwell_exceed_probability(3, 0), 1.0);
  EXPECT_THROW(dwell_exceed_probability(0, 0), DomainError);
  EXPECT_THROW(dwell_exceed_probability(-1, 2), DomainError);
}

TEST(Dwell, MatchesExponentialMonteCarlo) {
  EXPECT_NEAR(dwell_exceed_probability(15, 5), oracle::mc_dwell_exceed(15, 5, 1'000'000, 3), 1e-2);
  EXPECT_NEAR(dwell_exceed_probability(2, 9), oracle::mc_dwell_exceed(2, 9, 1'000'000, 4), 1e-2);
}

TEST(Dwell, ComplementSumsToOne) {
  for (double d : {0.0, 0.5, 3.0, 15.0, 100.0})
    for (double e : {0.1, 5.0, 40.0}) EXPECT_NEAR(dwell_exceed_probability(d, e) + dwell_short_probability(d, e), 1.0, 1e-15);
}

TEST(Access, ConfiguredValue) {
  EXPECT_EQ(access_probability(), 0.5);
  EXPECT_EQ(access_probability(1.0), 1.0);
  EXPECT_EQ(transition_prob_s2_to_s1({0.9, access_probability(0.0), 0.8, 0.7}), 0.0);
  EXPECT_THROW(access_probability(1.5), DomainError);
}

TEST(Gaussian, Examples) {
  EXPECT_EQ(gaussian_exceed_probability(2.0, 2.0, 0.3), 0.5);
  EXPECT_NEAR(gaussian_exceed_probability(1.3, 1.0, 0.3), 0.158655, 1e-6);
  EXPECT_NEAR(gaussian_exceed_probability(0.0, 1.0, 1e-3), 1.0, 1e-15);
  EXPECT_THROW(gaussian_exceed_probability(0.0, 1.0, 0.0), DomainError);
}

TEST(Gaussian, ReflectionSymmetry) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), s(0.01, 3);
  for (int i = 0; i < 1000; ++i) {
    const double th = u(rng), mu = u(rng), sigma = s(rng);
    EXPECT_NEAR(gaussian_exceed_probability(th, mu, sigma) + gaussian_exceed_probability(-th, -mu, sigma), 1.0,
                1e-15);
  }
}

TEST(JointCross, IndependentMedians) {
  EXPECT_NEAR(joint_cross_probability(0.0, {0, 0, 1, 1, 0}), 0.25, 1e-10);
}

TEST(JointCross, PerfectCorrelationCannotCross) {
  EXPECT_NEAR(joint_cross_probability(0.3, {0.2, 0.2, 0.5, 0.5, 1.0}), 0.0, 1e-15);
}

TEST(JointCross, MatchesBivariateMonteCarlo) {
  const SinrProcessParams p{0, 0, 1, 1, 0.9};
  EXPECT_NEAR(joint_cross_probability(0.0, p), oracle::mc_joint_cross(0.0, p, 10'000'000, 8), 3e-3);
}

TEST(JointCross, FrechetBound) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> mu(-1, 1), sig(0.1, 2), r(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const SinrProcessParams p{mu(rng), mu(rng), sig(rng), sig(rng), r(rng)};
    const double th = mu(rng);
    const double v = joint_cross_probability(th, p);
    const double above_now = gaussian_exceed_probability(th, p.mu_curr, p.sigma_curr);
    const double below_prev = 1.0 - gaussian_exceed_probability(th, p.mu_prev, p.sigma_prev);
    EXPECT_LE(v, std::min(above_now, below_prev) + 1e-8);
    EXPECT_GE(v, 0.0);
  }
}

TEST(JointCross, InvalidParams) {
  EXPECT_THROW(joint_cross_probability(0, {0, 0, 0, 1, 0}), DomainError);
  EXPECT_THROW(joint_cross_probability(0, {0, 0, 1, 1, 1.5}), DomainError);
}

TEST(State2, Examples) {
  EXPECT_EQ(state2_probability({1.0, 0, 0, 0, 0}).value, 0.0);
  EXPECT_EQ(state2_probability({1.0, 0.5, 0, 0, 0}).value, 0.5);
  const ClampedProbability c = state2_probability({0.8, 0.5, 0.3, 0.25, 0.25});
  EXPECT_TRUE(c.clamped);
  EXPECT_DOUBLE_EQ(c.value, 0.8);
  EXPECT_DOUBLE_EQ(c.raw, 0.8 * 1.3);
  EXPECT_FALSE(state2_probability({0.8, 0.1, 0.1, 0.1, 0.1}).clamped);
}

TEST(TransitionS2S1, Products) {
  EXPECT_EQ(transition_prob_s2_to_s1({1, 0, 1, 1}), 0.0);
  EXPECT_EQ(transition_prob_s2_to_s1({1, 1, 1, 1}), 1.0);
  EXPECT_NEAR(transition_prob_s2_to_s1({0.8, 0.5, 0.75, 0.75}), 0.225, 1e-15);
  EXPECT_THROW(transition_prob_s2_to_s1({1.1, 1, 1, 1}), DomainError);
}

TEST(ConditionalSinr, RatioOfJointToMarginal) {
  ConditionalSinrInputs in;
  in.components = {0.9, 0.5, 0.1, 0.2, 0.3};
  in.phantom_above_now = 0.6;
  in.joint_cross = 0.15;
  const ConditionalSinr c = conditional_sinr_probability(in);
  const double den = 0.9 * (0.5 + 0.1 + 0.2 + 0.3);
  const double num = 0.9 * (0.6 * 0.5 + 0.6 * 0.1 + 0.6 * 0.2 + 0.15);
  EXPECT_NEAR(c.denominator, den, 1e-15);
  EXPECT_NEAR(c.numerator, num, 1e-15);
  EXPECT_NEAR(c.value, num / den, 1e-15);
}

TEST(ConditionalSinr, ZeroDenominatorUndefined) {
  ConditionalSinrInputs in;
  in.components = {0.0, 0.5, 0.1, 0.2, 0.3};
  EXPECT_THROW(conditional_sinr_probability(in), UndefinedConditionalError);
}

TEST(Stationary, IdentityHasNoUniqueVector) {
  EXPECT_THROW(stationary_distribution(TransitionMatrix::Identity()), MultiplicityError);
}

TEST(Stationary, ThreeCycleIsUniform) {
  TransitionMatrix p;
  p << 0, 0, 1,
       1, 0, 0,
       0, 1, 0;
  const StateVector pi = stationary_distribution(p);
  EXPECT_NEAR(pi(0), 1.0 / 3.0, 1e-12);
}

TEST(Stationary, UniformColumns) {
  const TransitionMatrix p = TransitionMatrix::Constant(1.0 / 3.0);
  const StateVector pi = stationary_distribution(p);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(pi(i), 1.0 / 3.0, 1e-15);
}

TEST(Stationary, MatchesMatrixPower) {
  TransitionMatrix p;
  p << 0.9, 0.2, 0.0,
       0.1, 0.7, 0.3,
       0.0, 0.1, 0.7;
  const StateVector pi = stationary_distribution(p);
  const StateVector brute = oracle::matrix_power_stationary(p, 1000);
  EXPECT_LT((pi - brute).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((p * pi - pi).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
}

TEST(Stationary, RandomChainsResidual) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    TransitionMatrix p;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) p(k, j) = u(rng);
      p.col(j) /= p.col(j).sum();
    }
    const StateVector pi = stationary_distribution(p);
    EXPECT_LT((p * pi - pi).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
    EXPECT_GE(pi.minCoeff(), 0.0);
  }
}

TEST(Stationary, RejectsNonStochastic) {
  TransitionMatrix p = TransitionMatrix::Constant(0.5);
  EXPECT_THROW(stationary_distribution(p), DomainError);
}

TEST(EstimateMarkov, StillUserGivesIdentity) {
  const std::vector<LabelSequence> seqs{LabelSequence(50, StateLabel::s1)};
  const MarkovEstimate e = estimate_markov(seqs);
  EXPECT_EQ(e.p, TransitionMatrix::Identity());
  EXPECT_FALSE(e.unobserved[0]);
  EXPECT_TRUE(e.unobserved[1]);
  EXPECT_TRUE(e.unobserved[2]);
}

TEST(EstimateMarkov, AllS3OnlyThirdColumn) {
  const std::vector<LabelSequence> seqs{LabelSequence(10, StateLabel::s3), LabelSequence(4, StateLabel::s3)};
  const MarkovEstimate e = estimate_markov(seqs);
  EXPECT_TRUE(e.unobserved[0]);
  EXPECT_TRUE(e.unobserved[1]);
  EXPECT_FALSE(e.unobserved[2]);
  EXPECT_EQ(e.departures[2], 12);
}

TEST(EstimateMarkov, EmptyTraceRejected) {
  EXPECT_THROW(estimate_markov(std::vector<LabelSequence>{}), DataError);
  EXPECT_THROW(estimate_markov(std::vector<LabelSequence>{LabelSequence(1, StateLabel::s2)}), DataError);
}

TEST(EstimateMarkov, RecoversKnownChain) {
  TransitionMatrix p;
  p << 0.8, 0.3, 0.1,
       0.15, 0.5, 0.2,
       0.05, 0.2, 0.7;
  const std::vector<LabelSequence> seqs{oracle::markov_trace(p, 1'000'000, 12)};
  const MarkovEstimate e = estimate_markov(seqs);
  EXPECT_LE((e.p - p).cwiseAbs().maxCoeff(), 0.005);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(e.p.col(j).sum(), 1.0, 1e-12);
}

TEST(AssembleReport, GuardChannelExample) {
  AnalysisParams params;
  params.traffic = traffic(1, 1, 1, 2, 1);
  const AnalysisReport r = assemble_report(params);
  EXPECT_NEAR(r.blocking, 0.25, 1e-15);
  EXPECT_EQ(r.dwell_ok, 0.75);
  EXPECT_NEAR(r.factors.capacity_free, 0.75, 1e-15);
  EXPECT_NEAR(r.matrix(0, 1), r.p12, 0.0);
  EXPECT_NEAR(r.matrix(1, 1), 1.0 - r.p12 - params.p32, 1e-15);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.matrix.col(j).sum(), 1.0, 1e-12);
  EXPECT_LT((r.matrix * r.stationary - r.stationary).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(AssembleReport, NegativeDiagonalRejected) {
  AnalysisParams params;
  params.p32 = 0.99;
  params.access = 1.0;
  params.mean_dwell = 1e6;
  EXPECT_THROW(assemble_report(params), DomainError);
}

}  // namespace
}  // namespace phantom::analysis
