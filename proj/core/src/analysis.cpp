#include "phantom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phantom/errors.hpp"

namespace phantom::analysis {

void TrafficParams::validate() const {
  if (!(lambda_n > 0.0) || !(lambda_h > 0.0) || !(mu_c > 0.0))
    throw DomainError("traffic rates must be > 0");
  if (total_channels < 0) throw DomainError("total_channels must be >= 0");
  if (guard_channels < 0 || guard_channels > total_channels)
    throw DomainError("guard_channels must lie in [0, total_channels]");
}

void SinrProcessParams::validate() const {
  if (!(sigma_prev > 0.0) || !(sigma_curr > 0.0)) throw DomainError("SINR standard deviations must be > 0");
  if (!(std::abs(rho) <= 1.0)) throw DomainError("correlation coefficient must lie in [-1, 1]");
}

double blocking_probability(const TrafficParams& params) {
  params.validate();
  const int t = params.total_channels;
  if (t == 0) return 1.0;
  const int shared = t - params.guard_channels;
  const double rho = params.rho();
  const double rho_h = params.rho_handover();
  // Unnormalized stationary weights: rho^j / j! up to the shared boundary,
  // then rho^(T-g) rho_h^(j-(T-g)) / j! in the guard region.
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j <= t; ++j) {
    term *= (j <= shared ? rho : rho_h) / j;
    sum += term;
  }
  return term / sum;
}

double dwell_exceed_probability(double mean_dwell, double mean_expected) {
  if (!(mean_dwell >= 0.0) || !(mean_expected >= 0.0)) throw DomainError("mean durations must be >= 0");
  if (mean_dwell == 0.0 && mean_expected == 0.0) throw DomainError("mean durations cannot both be zero");
  return mean_dwell / (mean_expected + mean_dwell);
}

double dwell_short_probability(double mean_dwell, double mean_expected) {
  if (!(mean_dwell >= 0.0) || !(mean_expected >= 0.0)) throw DomainError("mean durations must be >= 0");
  if (mean_dwell == 0.0 && mean_expected == 0.0) throw DomainError("mean durations cannot both be zero");
  return mean_expected / (mean_expected + mean_dwell);
}

double access_probability(double configured) {
  if (!(configured >= 0.0 && configured <= 1.0)) throw DomainError("access probability must lie in [0, 1]");
  return configured;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_exceed_probability(double threshold, double mean, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
  return q_function((threshold - mean) / sigma);
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double joint_cross_probability(double threshold, const SinrProcessParams& proc) {
  proc.validate();
  const double slope = proc.rho * proc.sigma_curr / proc.sigma_prev;
  const double sigma_cond = proc.sigma_curr * std::sqrt(std::max(0.0, 1.0 - proc.rho * proc.rho));

  if (sigma_cond == 0.0) {
    // eta[k] is an affine function of eta[k-1]; the crossing set is an interval.
    const double z_th = (threshold - proc.mu_prev) / proc.sigma_prev;
    const double x0 = proc.mu_prev + (threshold - proc.mu_curr) / slope;
    const double z0 = (x0 - proc.mu_prev) / proc.sigma_prev;
    if (slope > 0.0) return std::max(0.0, normal_cdf(z_th) - normal_cdf(z0));
    return normal_cdf(std::min(z_th, z0));
  }

  constexpr double kTruncationSigmas = 10.0;
  constexpr double kAbsTolerance = 1e-8;
  const double lower = proc.mu_prev - kTruncationSigmas * proc.sigma_prev;
  if (threshold <= lower) return 0.0;

  const double norm = 1.0 / (proc.sigma_prev * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double x) {
    const double z = (x - proc.mu_prev) / proc.sigma_prev;
    const double density = norm * std::exp(-0.5 * z * z);
    const double mu_cond = proc.mu_curr + slope * (x - proc.mu_prev);
    return density * q_function((threshold - mu_cond) / sigma_cond);
  };

  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lower, threshold,
                                                                                     20, 1e-12, &error, &l1);
  if (!(error <= kAbsTolerance) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "joint_cross_probability: quadrature error estimate " << error << " exceeds " << kAbsTolerance
        << " (threshold=" << threshold << ", mu_prev=" << proc.mu_prev << ", mu_curr=" << proc.mu_curr
        << ", sigma_prev=" << proc.sigma_prev << ", sigma_curr=" << proc.sigma_curr << ", rho=" << proc.rho
        << ", L1=" << l1 << ")";
    throw NumericError(msg.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void require_components(const State2Components& c) {
  require_probability(c.macro_above, "macro_above");
  require_probability(c.access_denied, "access_denied");
  require_probability(c.cell_full, "cell_full");
  require_probability(c.dwell_short, "dwell_short");
  require_probability(c.phantom_below, "phantom_below");
}

}  // namespace

ClampedProbability state2_probability(const State2Components& c) {
  require_components(c);
  const double bracket = c.access_denied + c.cell_full + c.dwell_short + c.phantom_below;
  ClampedProbability out;
  out.raw = c.macro_above * bracket;
  out.clamped = bracket > 1.0;
  out.value = c.macro_above * std::min(bracket, 1.0);
  return out;
}

double transition_prob_s2_to_s1(const TransitionFactors& f) {
  require_probability(f.sinr_given_s2, "sinr_given_s2");
  require_probability(f.access, "access");
  require_probability(f.capacity_free, "capacity_free");
  require_probability(f.dwell_ok, "dwell_ok");
  return f.sinr_given_s2 * f.access * f.capacity_free * f.dwell_ok;
}

ConditionalSinr conditional_sinr_probability(const ConditionalSinrInputs& in) {
  require_components(in.components);
  require_probability(in.phantom_above_now, "phantom_above_now");
  require_probability(in.joint_cross, "joint_cross");
  const State2Components& c = in.components;
  ConditionalSinr out;
  out.denominator = state2_probability(c).raw;
  out.numerator = c.macro_above * (in.phantom_above_now * c.access_denied + in.phantom_above_now * c.cell_full +
                                   in.phantom_above_now * c.dwell_short + in.joint_cross);
  if (!(out.denominator > 0.0)) throw UndefinedConditionalError("P(S2) is zero; conditional SINR factor undefined");
  out.value = out.numerator / out.denominator;
  return out;
}

StateVector stationary_distribution(const TransitionMatrix& p) {
  constexpr double kTol = 1e-9;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (!(p(i, j) >= -kTol && p(i, j) <= 1.0 + kTol)) throw DomainError("transition entries must lie in [0, 1]");
    }
    if (std::abs(p.col(j).sum() - 1.0) > kTol) throw DomainError("transition matrix columns must sum to 1");
  }
  const TransitionMatrix a = p - TransitionMatrix::Identity();
  Eigen::FullPivLU<TransitionMatrix> rank_check(a);
  rank_check.setThreshold(1e-10);
  if (rank_check.rank() != 2) throw MultiplicityError("chain has no unique stationary distribution");

  TransitionMatrix system = a;
  system.row(2).setOnes();
  const StateVector rhs(0.0, 0.0, 1.0);
  StateVector pi = system.fullPivLu().solve(rhs);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  return pi;
}

MarkovEstimate estimate_markov(std::span<const LabelSequence> sequences) {
  Eigen::Matrix3d counts = Eigen::Matrix3d::Zero();
  long long total = 0;
  for (const LabelSequence& seq : sequences) {
    for (size_t k = 1; k < seq.size(); ++k) {
      counts(static_cast<int>(seq[k]), static_cast<int>(seq[k - 1])) += 1.0;
      ++total;
    }
  }
  if (total == 0) throw DataError("state trace holds no transitions");
  MarkovEstimate est;
  for (int j = 0; j < 3; ++j) {
    const double n = counts.col(j).sum();
    est.departures[static_cast<size_t>(j)] = static_cast<long long>(n);
    if (n == 0.0) {
      est.unobserved[static_cast<size_t>(j)] = true;
      est.p.col(j) = TransitionMatrix::Identity().col(j);
    } else {
      est.p.col(j) = counts.col(j) / n;
    }
  }
  return est;
}

AnalysisReport assemble_report(const AnalysisParams& params) {
  AnalysisReport r;
  r.blocking = blocking_probability(params.traffic);
  r.dwell_ok = dwell_exceed_probability(params.mean_dwell, params.t_expected);
  r.access = access_probability(params.access);

  State2Components& c = r.components;
  c.macro_above = gaussian_exceed_probability(params.eta_m_th, params.macro_mean, params.macro_sigma);
  c.access_denied = 1.0 - r.access;
  c.cell_full = r.blocking;
  c.dwell_short = 1.0 - r.dwell_ok;
  c.phantom_below = 1.0 - gaussian_exceed_probability(params.eta_ph_th, params.phantom.mu_prev,
                                                      params.phantom.sigma_prev);
  r.state2 = state2_probability(c);

  r.phantom_above_now =
      gaussian_exceed_probability(params.eta_ph_th, params.phantom.mu_curr, params.phantom.sigma_curr);
  r.joint_cross = joint_cross_probability(params.eta_ph_th, params.phantom);
  r.conditional = conditional_sinr_probability({c, r.phantom_above_now, r.joint_cross});

  r.factors.sinr_given_s2 = std::min(r.conditional.value, 1.0);
  r.factors.access = r.access;
  r.factors.capacity_free = 1.0 - r.blocking;
  r.factors.dwell_ok = r.dwell_ok;
  r.p12 = transition_prob_s2_to_s1(r.factors);

  require_probability(params.p32, "p32");
  const double p22 = 1.0 - r.p12 - params.p32;
  if (p22 < 0.0) throw DomainError("P12 + P32 exceeds 1; lower p32");
  for (int i = 0; i < 3; ++i) {
    r.matrix(i, 0) = params.from_s1[static_cast<size_t>(i)];
    r.matrix(i, 2) = params.from_s3[static_cast<size_t>(i)];
  }
  r.matrix(0, 1) = r.p12;
  r.matrix(1, 1) = p22;
  r.matrix(2, 1) = params.p32;
  r.stationary = stationary_distribution(r.matrix);
  return r;
}

}  // namespace phantom::analysis
