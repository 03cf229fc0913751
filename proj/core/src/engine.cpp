#include "phantom/engine.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "phantom/config.hpp"
#include "phantom/csv.hpp"
#include "phantom/errors.hpp"

namespace phantom {

SimConfig SimConfig::defaults_for(Environment env) {
  SimConfig c;
  c.scenario = ScenarioConfig::defaults_for(env);
  c.propagation.environment = env;
  return c;
}

void SimConfig::validate() const {
  scenario.validate();
  propagation.validate();
  policy.validate();
  if (propagation.environment != scenario.environment)
    throw ConfigError("propagation environment disagrees with scenario environment");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(duration >= 0.0)) throw ConfigError("duration must be >= 0");
  if (duration > 0.0 && duration < dt) throw ConfigError("duration must be 0 or at least dt");
  if (replications < 1) throw ConfigError("replications must be >= 1");
}

int SimConfig::num_steps() const { return static_cast<int>(std::floor(duration / dt + 1e-9)); }

std::vector<analysis::LabelSequence> StateTrace::per_user() const {
  std::vector<analysis::LabelSequence> out(static_cast<size_t>(num_users));
  const int steps = num_steps();
  for (UserId u = 0; u < num_users; ++u) {
    auto& seq = out[static_cast<size_t>(u)];
    seq.reserve(static_cast<size_t>(steps));
    for (int k = 0; k < steps; ++k) seq.push_back(at(k, u));
  }
  return out;
}

StateLabel classify(const UserState& user, const ConnectionState& conn, const Topology& topology) {
  if (conn.phantom_link(user.id)) return StateLabel::s3;
  for (const CellSpec& c : topology.phantoms()) {
    if (c.disc().contains(user.position)) return StateLabel::s2;
  }
  return StateLabel::s1;
}

namespace {

SimConfig reseeded(SimConfig config, std::uint64_t seed) {
  config.seed = seed;
  config.scenario.seed = seed;
  return config;
}

}  // namespace

Simulation::Simulation(const SimConfig& config, std::uint64_t seed)
    : config_(reseeded(config, seed)),
      topology_(build_topology(config_.scenario)),
      users_(spawn_users(config_.scenario, topology_)),
      shadow_rng_(make_rng(seed, Stream::shadowing)) {
  config_.validate();
  resample();
  conn_ = associate(static_cast<int>(users_.size()), topology_, snapshot_, config_.policy);
  for (UserState& u : users_) {
    u.macro_link = conn_.macro_link(u.id);
    u.phantom_link = conn_.phantom_link(u.id);
  }
  record_labels();
}

void Simulation::resample() {
  sample_links(users_, topology_, config_.propagation, shadow_rng_, links_);
  compute_sinr(topology_, links_, config_.propagation, snapshot_);
}

void Simulation::record_labels() {
  labels_.resize(users_.size());
  const bool baseline = config_.policy.mode == PolicyMode::baseline;
  for (const UserState& u : users_) {
    const StateLabel label = classify(u, conn_, topology_);
    labels_[static_cast<size_t>(u.id)] = label;
    ++occupancy_[static_cast<size_t>(label)];
    const bool served = baseline ? (u.macro_link || u.phantom_link) : u.macro_link.has_value();
    if (!served) ++unserved_;
  }
}

std::span<const HandoverEvent> Simulation::last_events() const {
  return std::span<const HandoverEvent>(events_).subspan(step_begin_);
}

void Simulation::step() {
  step_begin_ = events_.size();
  time_ = (steps_ + 1) * config_.dt;
  for (UserState& u : users_) u = advance_user(u, config_.dt, topology_.region);
  resample();

  const DwellPredictor dwell = [this](UserId u, CellId c) {
    return predict_dwell_time(users_[static_cast<size_t>(u)], topology_.cells[static_cast<size_t>(c)]);
  };
  const StepContext ctx{topology_, snapshot_, config_.policy, dwell, time_};
  const bool baseline = config_.policy.mode == PolicyMode::baseline;
  for (const UserState& u : users_) {
    if (baseline) {
      baseline_step(u.id, conn_, ctx, events_);
    } else {
      macro_handover_step(u.id, conn_, ctx, events_);
      phantom_handover_step(u.id, conn_, ctx, events_);
      macro_to_phantom_step(u.id, conn_, ctx, events_);
    }
  }
  for (UserState& u : users_) {
    u.macro_link = conn_.macro_link(u.id);
    u.phantom_link = conn_.phantom_link(u.id);
  }
  record_labels();
  ++steps_;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

long long MetricsReport::total_events() const {
  long long total = 0;
  for (const auto& r : replications)
    for (long long c : r.counts_by_kind) total += c;
  return total;
}

MetricsReport aggregate(const SimConfig& config, std::vector<ReplicationMetrics> replications) {
  MetricsReport report;
  report.config = config;
  report.replications = std::move(replications);
  auto collect = [&](auto getter) {
    std::vector<double> v;
    for (const auto& r : report.replications) v.push_back(getter(r));
    return summarize(v);
  };
  report.handovers = collect([](const ReplicationMetrics& r) { return static_cast<double>(r.handovers); });
  report.avg_handover_per_user = collect([](const ReplicationMetrics& r) { return r.avg_handover_per_user; });
  for (size_t k = 0; k < kEventKindCount; ++k) {
    report.counts_by_kind[k] =
        collect([k](const ReplicationMetrics& r) { return static_cast<double>(r.counts_by_kind[k]); });
  }
  report.drops = collect([](const ReplicationMetrics& r) { return static_cast<double>(r.drops); });
  report.unserved_user_steps =
      collect([](const ReplicationMetrics& r) { return static_cast<double>(r.unserved_user_steps); });
  for (size_t s = 0; s < 3; ++s) {
    report.occupancy[s] = collect([s](const ReplicationMetrics& r) { return r.occupancy[s]; }).mean;
  }
  return report;
}

ReplicationMetrics run_replication(const SimConfig& config, int replication, std::vector<HandoverEvent>* events,
                                   StateTrace* trace) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(replication);
  Simulation sim(config, seed);
  const int steps = config.num_steps();
  if (trace) {
    trace->num_users = static_cast<int>(sim.users().size());
    trace->labels.clear();
    trace->labels.reserve(static_cast<size_t>(steps + 1) * sim.users().size());
    trace->labels.insert(trace->labels.end(), sim.labels().begin(), sim.labels().end());
  }
  for (int k = 0; k < steps; ++k) {
    sim.step();
    if (trace) trace->labels.insert(trace->labels.end(), sim.labels().begin(), sim.labels().end());
  }

  ReplicationMetrics m;
  m.replication = replication;
  m.seed = seed;
  for (const HandoverEvent& e : sim.events()) {
    ++m.counts_by_kind[static_cast<size_t>(e.kind)];
    if (is_handover(e.kind)) ++m.handovers;
  }
  m.drops = m.counts_by_kind[static_cast<size_t>(EventKind::phantom_drop)];
  const auto num_users = static_cast<long long>(sim.users().size());
  m.avg_handover_per_user = num_users > 0 ? static_cast<double>(m.handovers) / static_cast<double>(num_users) : 0.0;
  m.unserved_user_steps = sim.unserved_user_steps();
  m.user_steps = num_users * steps;
  const auto& occ = sim.occupancy_counts();
  const double labeled = static_cast<double>(occ[0] + occ[1] + occ[2]);
  for (size_t s = 0; s < 3; ++s) m.occupancy[s] = labeled > 0.0 ? static_cast<double>(occ[s]) / labeled : 0.0;
  if (events) *events = sim.events();
  return m;
}

RunResult run(const SimConfig& config, const RunOptions& options) {
  config.validate();
  RunResult result;
  std::vector<ReplicationMetrics> reps;
  for (int i = 0; i < config.replications; ++i) {
    std::vector<HandoverEvent> events;
    StateTrace trace;
    reps.push_back(run_replication(config, i, options.keep_events ? &events : nullptr,
                                   options.keep_trace ? &trace : nullptr));
    if (options.keep_events) result.events.push_back(std::move(events));
    if (options.keep_trace) result.traces.push_back(std::move(trace));
  }
  result.report = aggregate(config, std::move(reps));
  return result;
}

MetricsReport run(const SimConfig& config) { return run(config, RunOptions{}).report; }

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::num_users:
      return "num_users";
    case SweepAxis::hysteresis:
      return "hysteresis";
    case SweepAxis::dwell_toggle:
      return "dwell_toggle";
  }
  return "unknown";
}

SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value) {
  SimConfig c = base;
  switch (axis) {
    case SweepAxis::num_users:
      if (!(value >= 0.0) || value != std::floor(value)) throw ConfigError("num_users values must be integers >= 0");
      c.scenario.num_users = static_cast<int>(value);
      break;
    case SweepAxis::hysteresis:
      c.policy.hysteresis_macro = value;
      c.policy.hysteresis_phantom = value;
      break;
    case SweepAxis::dwell_toggle:
      c.policy.dwell_check = value != 0.0;
      break;
  }
  return c;
}

std::vector<MetricsReport> sweep(const SimConfig& base, SweepAxis axis, std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SimConfig> configs;
  for (double v : values) {
    configs.push_back(apply_axis(base, axis, v));
    configs.back().validate();
  }
  std::vector<MetricsReport> out;
  for (const SimConfig& c : configs) out.push_back(run(c));
  return out;
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report, char sep) {
  for (const std::string& line : describe_config(report.config)) out << "# " << line << '\n';
  out << "replication" << sep << "seed" << sep << "handovers" << sep << "avg_handover_per_user";
  for (int k = 0; k < kEventKindCount; ++k) out << sep << to_string(static_cast<EventKind>(k));
  out << sep << "unserved_user_steps" << sep << "user_steps" << sep << "occ_s1" << sep << "occ_s2" << sep
      << "occ_s3\n";
  for (const ReplicationMetrics& r : report.replications) {
    out << r.replication << sep << r.seed << sep << r.handovers << sep << format_double(r.avg_handover_per_user);
    for (long long c : r.counts_by_kind) out << sep << c;
    out << sep << r.unserved_user_steps << sep << r.user_steps;
    for (double o : r.occupancy) out << sep << format_double(o);
    out << '\n';
  }
  auto summary_row = [&](const char* name, auto pick) {
    out << name << sep << sep << format_double(pick(report.handovers)) << sep
        << format_double(pick(report.avg_handover_per_user));
    for (const Summary& s : report.counts_by_kind) out << sep << format_double(pick(s));
    out << sep << format_double(pick(report.unserved_user_steps)) << sep;
    for (size_t s = 0; s < 3; ++s) {
      out << sep;
      if (std::string_view(name) == "mean") out << format_double(report.occupancy[s]);
    }
    out << '\n';
  };
  summary_row("mean", [](const Summary& s) { return s.mean; });
  summary_row("std", [](const Summary& s) { return s.std; });
}

void write_trace_csv(std::ostream& out, const StateTrace& trace, double dt, char sep) {
  out << "step" << sep << "t" << sep << "user" << sep << "state\n";
  static constexpr const char* kNames[] = {"S1", "S2", "S3"};
  for (int k = 0; k < trace.num_steps(); ++k) {
    for (UserId u = 0; u < trace.num_users; ++u) {
      out << k << sep << format_double(k * dt) << sep << u << sep << kNames[static_cast<int>(trace.at(k, u))] << '\n';
    }
  }
}

}  // namespace phantom
