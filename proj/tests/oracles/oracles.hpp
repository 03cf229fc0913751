#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

#include "phantom/analysis.hpp"

namespace phantom::oracle {

/// Full-occupancy probability from a direct linear solve of the guard-channel
/// birth-death generator, pi Q = 0 with sum(pi) = 1, in long double.
inline double birth_death_blocking(const analysis::TrafficParams& p) {
  const int t = p.total_channels;
  const int n = t + 1;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  Mat q = Mat::Zero(n, n);
  for (int k = 0; k < t; ++k) {
    const long double up = k < t - p.guard_channels ? p.lambda_n + p.lambda_h : p.lambda_h;
    q(k, k + 1) = up;
    q(k, k) -= up;
  }
  for (int k = 1; k <= t; ++k) {
    q(k, k - 1) = static_cast<long double>(k) * p.mu_c;
    q(k, k) -= static_cast<long double>(k) * p.mu_c;
  }
  Mat a = q.transpose();
  a.row(n - 1).setOnes();
  Vec b = Vec::Zero(n);
  b(n - 1) = 1.0L;
  const Vec pi = a.fullPivLu().solve(b);
  return static_cast<double>(pi(t));
}

/// Erlang-B by the standard recursion B(k) = rho B(k-1) / (k + rho B(k-1)).
inline double erlang_b(int channels, double rho) {
  long double b = 1.0L;
  for (int k = 1; k <= channels; ++k) b = rho * b / (k + rho * b);
  return static_cast<double>(b);
}

/// Fraction of samples with Exp(mean_dwell) >= Exp(mean_expected).
inline double mc_dwell_exceed(double mean_dwell, double mean_expected, long long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> dwell(1.0 / mean_dwell);
  std::exponential_distribution<double> expected(1.0 / mean_expected);
  long long hits = 0;
  for (long long i = 0; i < samples; ++i) {
    const double d = dwell(rng);
    if (d >= expected(rng)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

/// Fraction of bivariate-normal pairs with prev < th and curr > th.
inline double mc_joint_cross(double th, const analysis::SinrProcessParams& p, long long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double c = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
  long long hits = 0;
  for (long long i = 0; i < samples; ++i) {
    const double z1 = normal(rng);
    const double z2 = p.rho * z1 + c * normal(rng);
    if (p.mu_prev + p.sigma_prev * z1 < th && p.mu_curr + p.sigma_curr * z2 > th) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

/// One label sequence of `steps` states drawn from a column-stochastic P.
inline analysis::LabelSequence markov_trace(const analysis::TransitionMatrix& p, long long steps,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  analysis::LabelSequence seq;
  seq.reserve(static_cast<size_t>(steps));
  int s = 0;
  for (long long k = 0; k < steps; ++k) {
    seq.push_back(static_cast<analysis::StateLabel>(s));
    const double x = u(rng);
    double acc = 0.0;
    int next = 2;
    for (int i = 0; i < 3; ++i) {
      acc += p(i, s);
      if (x < acc) {
        next = i;
        break;
      }
    }
    s = next;
  }
  return seq;
}

/// P^power applied to the uniform vector.
inline analysis::StateVector matrix_power_stationary(const analysis::TransitionMatrix& p, int power) {
  analysis::StateVector v = analysis::StateVector::Constant(1.0 / 3.0);
  for (int k = 0; k < power; ++k) v = p * v;
  return v;
}

}  // namespace phantom::oracle
