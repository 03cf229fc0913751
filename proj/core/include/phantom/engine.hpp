#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "phantom/analysis.hpp"
#include "phantom/attachment.hpp"
#include "phantom/radio.hpp"
#include "phantom/rng.hpp"
#include "phantom/scenario.hpp"

namespace phantom {

using analysis::StateLabel;

struct SimConfig {
  ScenarioConfig scenario;
  PropagationParams propagation;
  HandoverPolicy policy;
  double dt = 1.0;
  double duration = 1000.0;
  int replications = 10;
  std::uint64_t seed = 1;

  /// Table defaults for an environment.
  static SimConfig defaults_for(Environment env);
  void validate() const;
  int num_steps() const;
};

/// Per-step per-user state labels, step-major. Row 0 is the state right after
/// association.
struct StateTrace {
  int num_users = 0;
  std::vector<StateLabel> labels;

  int num_steps() const { return num_users == 0 ? 0 : static_cast<int>(labels.size()) / num_users; }
  StateLabel at(int step, UserId user) const {
    return labels[static_cast<size_t>(step) * static_cast<size_t>(num_users) + static_cast<size_t>(user)];
  }
  /// Sequences per user, as consumed by analysis::estimate_markov.
  std::vector<analysis::LabelSequence> per_user() const;
};

/// S3 with a phantom link, S2 inside any phantom disc without one, S1 otherwise.
StateLabel classify(const UserState& user, const ConnectionState& conn, const Topology& topology);

/// One independent replication, owning every piece of mutable state.
class Simulation {
 public:
  /// Builds the topology, spawns users and runs association from the given
  /// seed (the config's own seed is ignored).
  Simulation(const SimConfig& config, std::uint64_t seed);

  /// Advance users, resample shadowing, recompute SINR, run the handover
  /// branches in user-id order and label every user.
  void step();

  double time() const { return time_; }
  int steps_taken() const { return steps_; }
  const Topology& topology() const { return topology_; }
  std::span<const UserState> users() const { return users_; }
  const ConnectionState& connections() const { return conn_; }
  const SinrSnapshot& snapshot() const { return snapshot_; }
  const LinkTable& links() const { return links_; }
  const std::vector<HandoverEvent>& events() const { return events_; }
  /// Events emitted by the most recent step (or association).
  std::span<const HandoverEvent> last_events() const;
  const std::vector<StateLabel>& labels() const { return labels_; }
  long long unserved_user_steps() const { return unserved_; }
  const std::array<long long, 3>& occupancy_counts() const { return occupancy_; }

 private:
  void resample();
  void record_labels();

  SimConfig config_;
  Topology topology_;
  std::vector<UserState> users_;
  Rng shadow_rng_;
  LinkTable links_;
  SinrSnapshot snapshot_;
  ConnectionState conn_;
  std::vector<HandoverEvent> events_;
  size_t step_begin_ = 0;
  std::vector<StateLabel> labels_;
  std::array<long long, 3> occupancy_{};
  long long unserved_ = 0;
  double time_ = 0.0;
  int steps_ = 0;
};

struct ReplicationMetrics {
  int replication = 0;
  std::uint64_t seed = 0;
  long long handovers = 0;
  double avg_handover_per_user = 0.0;
  std::array<long long, kEventKindCount> counts_by_kind{};
  long long drops = 0;
  long long unserved_user_steps = 0;
  long long user_steps = 0;
  std::array<double, 3> occupancy{};
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation; 0 for a single replication
};

Summary summarize(std::span<const double> values);

struct MetricsReport {
  SimConfig config;
  std::vector<ReplicationMetrics> replications;
  Summary handovers;
  Summary avg_handover_per_user;
  std::array<Summary, kEventKindCount> counts_by_kind;
  Summary drops;
  Summary unserved_user_steps;
  std::array<double, 3> occupancy{};

  long long total_events() const;
};

MetricsReport aggregate(const SimConfig& config, std::vector<ReplicationMetrics> replications);

struct RunOptions {
  bool keep_events = false;
  bool keep_trace = false;
};

struct RunResult {
  MetricsReport report;
  /// Per replication, filled when RunOptions::keep_events is set.
  std::vector<std::vector<HandoverEvent>> events;
  /// Per replication, filled when RunOptions::keep_trace is set.
  std::vector<StateTrace> traces;
};

/// Replication i uses seed config.seed + i.
RunResult run(const SimConfig& config, const RunOptions& options);
MetricsReport run(const SimConfig& config);

/// Runs one replication and returns its metrics; the building block of run().
ReplicationMetrics run_replication(const SimConfig& config, int replication, std::vector<HandoverEvent>* events,
                                   StateTrace* trace);

enum class SweepAxis { num_users, hysteresis, dwell_toggle };

std::string_view to_string(SweepAxis axis);

/// Copy of `base` with the axis set to `value` (dwell_toggle: nonzero = on).
SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value);

/// One run per value, in input order, all sharing base.seed.
std::vector<MetricsReport> sweep(const SimConfig& base, SweepAxis axis, std::span<const double> values);

/// One row per replication plus `mean` and `std` rows.
void write_metrics_csv(std::ostream& out, const MetricsReport& report, char sep = ',');

/// `step,t,user,state`
void write_trace_csv(std::ostream& out, const StateTrace& trace, double dt, char sep = ',');

}  // namespace phantom
