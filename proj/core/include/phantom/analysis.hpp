#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace phantom::analysis {

/// Guard-channel traffic model of one phantom cell.
struct TrafficParams {
  double lambda_n = 1.0;  ///< new-call arrival rate, 1/s
  double lambda_h = 1.0;  ///< handover-call arrival rate, 1/s
  double mu_c = 1.0;      ///< channel release rate, 1/s
  int total_channels = 10;
  int guard_channels = 0;

  double rho() const { return (lambda_n + lambda_h) / mu_c; }
  double rho_handover() const { return lambda_h / mu_c; }
  void validate() const;
};

/// Two consecutive SINR samples of a phantom link, jointly Gaussian.
struct SinrProcessParams {
  double mu_prev = 0.0;
  double mu_curr = 0.0;
  double sigma_prev = 1.0;
  double sigma_curr = 1.0;
  double rho = 0.0;

  void validate() const;
};

/// Probability that every channel is busy in the guard-channel birth-death
/// chain: new and handover calls share the first T-g channels, the last g
/// accept handover calls only. Returns 1 when T = 0.
double blocking_probability(const TrafficParams& params);

/// P(T_dwell >= T_expected) for independent exponential durations with the
/// given means: mean_dwell / (mean_expected + mean_dwell).
double dwell_exceed_probability(double mean_dwell, double mean_expected);

/// P(T_dwell < T_expected), the complement of dwell_exceed_probability.
double dwell_short_probability(double mean_dwell, double mean_expected);

/// Probability that a phantom admits a given user; validated to [0, 1].
double access_probability(double configured = 0.5);

/// Standard normal upper tail.
double q_function(double x);

/// P(eta > threshold) for eta ~ N(mean, sigma^2).
double gaussian_exceed_probability(double threshold, double mean, double sigma);

/// P(eta[k] > threshold, eta[k-1] < threshold) for a correlated Gaussian pair,
/// integrating the previous-sample density against the conditional upper tail.
/// Throws NumericError if the quadrature misses its 1e-8 absolute tolerance.
double joint_cross_probability(double threshold, const SinrProcessParams& proc);

struct State2Components {
  double macro_above = 1.0;   ///< P(eta_M > eta_m_th)
  double access_denied = 0.0; ///< P(access = 0)
  double cell_full = 0.0;     ///< P(N > N_max)
  double dwell_short = 0.0;   ///< P(T_dwell < T_expected)
  double phantom_below = 0.0; ///< P(eta_ph[k-1] < eta_ph_th)
};

struct ClampedProbability {
  double value = 0.0;
  /// Union-bound sum before clamping.
  double raw = 0.0;
  bool clamped = false;
};

/// Union-bound probability of state S2, clamped to [0, 1] with a flag.
ClampedProbability state2_probability(const State2Components& c);

/// The four multiplicative factors of the S2 -> S1 transition.
struct TransitionFactors {
  double sinr_given_s2 = 1.0;  ///< P(eta_ph[k] > th | S2[k-1])
  double access = 0.5;         ///< P(access = 1)
  double capacity_free = 1.0;  ///< P(N < N_max)
  double dwell_ok = 1.0;       ///< P(T_dwell >= T_expected)
};

double transition_prob_s2_to_s1(const TransitionFactors& f);

/// Inputs of the conditional SINR factor.
struct ConditionalSinrInputs {
  State2Components components;
  double phantom_above_now = 0.0;  ///< P(eta_ph[k] > th)
  double joint_cross = 0.0;        ///< P(eta_ph[k] > th, eta_ph[k-1] < th)
};

struct ConditionalSinr {
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
};

/// Joint probability of a good phantom sample and S2 at the previous step,
/// divided by the (unclamped) union-bound P(S2). Throws
/// UndefinedConditionalError when P(S2) = 0.
ConditionalSinr conditional_sinr_probability(const ConditionalSinrInputs& in);

/// Column-stochastic 3x3 matrix: entry (i, j) is the probability of moving
/// from state j to state i, so next = P * current.
using TransitionMatrix = Eigen::Matrix3d;
using StateVector = Eigen::Vector3d;

enum class StateLabel : unsigned char { s1 = 0, s2 = 1, s3 = 2 };

/// Unique stationary vector of a column-stochastic matrix. Throws
/// MultiplicityError when the chain admits more than one, DomainError when the
/// matrix is not column-stochastic.
StateVector stationary_distribution(const TransitionMatrix& p);

struct MarkovEstimate {
  TransitionMatrix p = TransitionMatrix::Identity();
  /// Columns with no observed departures, filled with the identity column.
  std::array<bool, 3> unobserved{};
  std::array<long long, 3> departures{};
};

/// Per-user label sequences in time order.
using LabelSequence = std::vector<StateLabel>;

/// Empirical transition matrix from label sequences. Throws DataError when no
/// sequence has two or more steps.
MarkovEstimate estimate_markov(std::span<const LabelSequence> sequences);

/// Inputs of the `analyze` report. Entries of the transition matrix that the
/// model does not derive are taken as given.
struct AnalysisParams {
  TrafficParams traffic;
  double mean_dwell = 15.0;     ///< s
  double t_expected = 5.0;      ///< s
  double access = 0.5;
  double eta_m_th = 0.40;
  double eta_ph_th = 0.45;
  double macro_mean = 1.0;      ///< linear SINR
  double macro_sigma = 0.3;
  SinrProcessParams phantom{0.4, 0.5, 0.2, 0.2, 0.5};
  /// Column of departures from S1 (to S1, S2, S3).
  std::array<double, 3> from_s1{0.9, 0.1, 0.0};
  /// Probability of moving from S2 to S3.
  double p32 = 0.3;
  /// Column of departures from S3 (to S1, S2, S3).
  std::array<double, 3> from_s3{0.05, 0.1, 0.85};
};

struct AnalysisReport {
  double blocking = 0.0;
  double dwell_ok = 0.0;
  double access = 0.0;
  State2Components components;
  ClampedProbability state2;
  double phantom_above_now = 0.0;
  double joint_cross = 0.0;
  ConditionalSinr conditional;
  TransitionFactors factors;
  double p12 = 0.0;
  TransitionMatrix matrix = TransitionMatrix::Identity();
  StateVector stationary = StateVector::Zero();
};

/// Evaluates every analytic quantity and assembles the transition matrix, with
/// the S2 -> S2 entry set to 1 - P12 - P32. Throws DomainError if that entry
/// would be negative.
AnalysisReport assemble_report(const AnalysisParams& params);

}  // namespace phantom::analysis
