#include "phantom/attachment.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "phantom/csv.hpp"
#include "phantom/errors.hpp"

namespace phantom {

std::string_view to_string(PolicyMode mode) { return mode == PolicyMode::proposed ? "proposed" : "baseline"; }

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::macro_to_macro:
      return "macro_to_macro";
    case EventKind::phantom_to_phantom:
      return "phantom_to_phantom";
    case EventKind::macro_to_phantom:
      return "macro_to_phantom";
    case EventKind::phantom_drop:
      return "phantom_drop";
    case EventKind::baseline_phantom_to_macro:
      return "baseline_phantom_to_macro";
  }
  return "unknown";
}

void HandoverPolicy::validate() const {
  if (!(eta_m_th > 0.0) || !(eta_ph_th > 0.0)) throw ConfigError("SINR thresholds must be > 0");
  if (!(hysteresis_macro >= 0.0) || !(hysteresis_phantom >= 0.0)) throw ConfigError("hysteresis must be >= 0");
  if (!(t_expected >= 0.0)) throw ConfigError("t_expected must be >= 0");
}

ConnectionState::ConnectionState(const Topology& topology, int num_users)
    : num_macros_(topology.num_macros),
      macro_(static_cast<size_t>(num_users)),
      phantom_(static_cast<size_t>(num_users)),
      load_(topology.cells.size(), 0),
      num_phantoms_(topology.num_cells() - topology.num_macros) {
  capacity_.reserve(topology.cells.size());
  for (const CellSpec& c : topology.cells) capacity_.push_back(c.capacity);
  access_.assign(static_cast<size_t>(num_users) * static_cast<size_t>(num_phantoms_), 0);
  for (const CellSpec& c : topology.phantoms()) {
    const auto col = static_cast<size_t>(c.id - num_macros_);
    for (UserId u = 0; u < num_users; ++u) {
      access_[static_cast<size_t>(u) * static_cast<size_t>(num_phantoms_) + col] = c.admits(u) ? 1 : 0;
    }
  }
}

bool ConnectionState::connected(UserId user, CellId cell) const {
  const auto& slot = cell < num_macros_ ? macro_.at(static_cast<size_t>(user)) : phantom_.at(static_cast<size_t>(user));
  return slot == cell;
}

bool ConnectionState::has_access(UserId user, CellId cell) const {
  if (cell < num_macros_) return true;
  const auto col = static_cast<size_t>(cell - num_macros_);
  return access_.at(static_cast<size_t>(user) * static_cast<size_t>(num_phantoms_) + col) != 0;
}

void ConnectionState::connect(UserId user, CellId cell) {
  auto& slot = cell < num_macros_ ? macro_.at(static_cast<size_t>(user)) : phantom_.at(static_cast<size_t>(user));
  if (slot) throw std::logic_error("user " + std::to_string(user) + " already holds a link on this tier");
  if (!has_room(cell)) throw std::logic_error("cell " + std::to_string(cell) + " is at capacity");
  slot = cell;
  ++load_.at(static_cast<size_t>(cell));
}

void ConnectionState::disconnect(UserId user, CellId cell) {
  auto& slot = cell < num_macros_ ? macro_.at(static_cast<size_t>(user)) : phantom_.at(static_cast<size_t>(user));
  if (slot != cell) {
    throw std::logic_error("user " + std::to_string(user) + " is not connected to cell " + std::to_string(cell));
  }
  slot.reset();
  --load_.at(static_cast<size_t>(cell));
}

void ConnectionState::check_invariants() const {
  std::vector<int> counted(load_.size(), 0);
  for (size_t u = 0; u < macro_.size(); ++u) {
    if (macro_[u]) {
      if (*macro_[u] < 0 || *macro_[u] >= num_macros_) throw std::logic_error("macro slot holds a non-macro cell");
      ++counted[static_cast<size_t>(*macro_[u])];
    }
    if (phantom_[u]) {
      if (*phantom_[u] < num_macros_ || *phantom_[u] >= num_cells())
        throw std::logic_error("phantom slot holds a non-phantom cell");
      ++counted[static_cast<size_t>(*phantom_[u])];
    }
  }
  for (size_t j = 0; j < load_.size(); ++j) {
    if (counted[j] != load_[j]) throw std::logic_error("K(" + std::to_string(j) + ") disagrees with c");
    if (load_[j] > capacity_[j]) throw std::logic_error("K(" + std::to_string(j) + ") exceeds capacity");
  }
}

double predict_dwell_time(const UserState& user, const CellSpec& cell) {
  if (!(user.speed > 0.0)) return std::numeric_limits<double>::infinity();
  const auto hits = ray_circle(user.position, unit_vector(user.heading), cell.disc());
  if (!hits || hits->far <= 0.0) return 0.0;
  return hits->far / user.speed;
}

namespace {

// Tier cells whose SINR exceeds `threshold`, best first; equal SINR goes to
// the lower id. Walking this list is the repeated argmax-then-remove loop.
std::vector<CellId> ranked_candidates(const SinrSnapshot& snapshot, UserId user, CellId first, CellId last,
                                      double threshold) {
  std::vector<CellId> out;
  const double* eta = snapshot.row(user);
  for (CellId j = first; j < last; ++j)
    if (eta[j] > threshold) out.push_back(j);
  std::stable_sort(out.begin(), out.end(), [eta](CellId a, CellId b) { return eta[a] > eta[b]; });
  return out;
}

std::vector<CellId> macro_candidates(const StepContext& ctx, UserId user, double threshold) {
  return ranked_candidates(ctx.snapshot, user, 0, ctx.topology.num_macros, threshold);
}

std::vector<CellId> phantom_candidates(const StepContext& ctx, UserId user) {
  return ranked_candidates(ctx.snapshot, user, ctx.topology.first_phantom(), ctx.topology.num_cells(),
                           ctx.policy.eta_ph_th);
}

bool dwell_ok(const StepContext& ctx, UserId user, CellId target) {
  return !ctx.policy.dwell_check || ctx.dwell(user, target) >= ctx.policy.t_expected;
}

void emit(std::vector<HandoverEvent>& events, const StepContext& ctx, UserId user, EventKind kind,
          std::optional<CellId> source, std::optional<CellId> target) {
  if (ctx.policy.mode == PolicyMode::proposed && kind == EventKind::baseline_phantom_to_macro) {
    throw std::logic_error("phantom-to-macro handover emitted in proposed mode");
  }
  events.push_back({ctx.time, user, kind, source, target});
}

// Shared by the proposed macro branch and the baseline macro-attached user.
void macro_branch(UserId user, ConnectionState& conn, const StepContext& ctx, std::vector<HandoverEvent>& events) {
  const auto serving = conn.macro_link(user);
  if (!serving) return;
  const double* eta = ctx.snapshot.row(user);
  const double eta_serving = eta[*serving];
  if (!(eta_serving < ctx.policy.eta_m_th)) return;
  for (CellId target : macro_candidates(ctx, user, ctx.policy.eta_m_th)) {
    if (eta[target] - eta_serving > ctx.policy.hysteresis_macro && conn.has_room(target)) {
      conn.disconnect(user, *serving);
      conn.connect(user, target);
      emit(events, ctx, user, EventKind::macro_to_macro, serving, target);
      return;
    }
  }
}

// Best accessible phantom with room and enough predicted dwell; no hysteresis.
std::optional<CellId> hand_in_target(UserId user, const ConnectionState& conn, const StepContext& ctx) {
  for (CellId target : phantom_candidates(ctx, user)) {
    if (conn.has_access(user, target) && conn.has_room(target) && dwell_ok(ctx, user, target)) return target;
  }
  return std::nullopt;
}

// Best phantom passing hysteresis against the serving phantom plus the
// hand-in gates.
std::optional<CellId> phantom_target(UserId user, CellId serving, const ConnectionState& conn,
                                     const StepContext& ctx) {
  const double* eta = ctx.snapshot.row(user);
  for (CellId target : phantom_candidates(ctx, user)) {
    if (eta[target] - eta[serving] > ctx.policy.hysteresis_phantom && conn.has_access(user, target) &&
        conn.has_room(target) && dwell_ok(ctx, user, target)) {
      return target;
    }
  }
  return std::nullopt;
}

}  // namespace

ConnectionState associate(int num_users, const Topology& topology, const SinrSnapshot& snapshot,
                          const HandoverPolicy& policy) {
  ConnectionState conn(topology, num_users);
  for (UserId u = 0; u < num_users; ++u) {
    for (CellId j : ranked_candidates(snapshot, u, 0, topology.num_macros, policy.eta_m_th)) {
      if (conn.has_room(j)) {
        conn.connect(u, j);
        break;
      }
    }
    for (CellId j : ranked_candidates(snapshot, u, topology.first_phantom(), topology.num_cells(), policy.eta_ph_th)) {
      if (conn.has_access(u, j) && conn.has_room(j)) {
        conn.connect(u, j);
        break;
      }
    }
    if (policy.mode == PolicyMode::baseline && conn.phantom_link(u) && conn.macro_link(u)) {
      conn.disconnect(u, *conn.macro_link(u));
    }
  }
  return conn;
}

void macro_handover_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                         std::vector<HandoverEvent>& events) {
  macro_branch(user, conn, ctx, events);
}

void phantom_handover_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                           std::vector<HandoverEvent>& events) {
  const auto serving = conn.phantom_link(user);
  if (!serving) return;
  if (!(ctx.snapshot(user, *serving) < ctx.policy.eta_ph_th)) return;
  if (const auto target = phantom_target(user, *serving, conn, ctx)) {
    conn.disconnect(user, *serving);
    conn.connect(user, *target);
    emit(events, ctx, user, EventKind::phantom_to_phantom, serving, target);
    return;
  }
  conn.disconnect(user, *serving);
  emit(events, ctx, user, EventKind::phantom_drop, serving, std::nullopt);
}

void macro_to_phantom_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                           std::vector<HandoverEvent>& events) {
  if (conn.phantom_link(user)) return;
  if (const auto target = hand_in_target(user, conn, ctx)) {
    conn.connect(user, *target);
    emit(events, ctx, user, EventKind::macro_to_phantom, conn.macro_link(user), target);
  }
}

void baseline_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                   std::vector<HandoverEvent>& events) {
  if (const auto serving = conn.phantom_link(user)) {
    const double* eta = ctx.snapshot.row(user);
    if (!(eta[*serving] < ctx.policy.eta_ph_th)) return;
    if (const auto target = phantom_target(user, *serving, conn, ctx)) {
      conn.disconnect(user, *serving);
      conn.connect(user, *target);
      emit(events, ctx, user, EventKind::phantom_to_phantom, serving, target);
      return;
    }
    for (CellId macro : macro_candidates(ctx, user, ctx.policy.eta_m_th)) {
      if (eta[macro] - eta[*serving] > ctx.policy.hysteresis_macro && conn.has_room(macro)) {
        conn.disconnect(user, *serving);
        conn.connect(user, macro);
        emit(events, ctx, user, EventKind::baseline_phantom_to_macro, serving, macro);
        return;
      }
    }
    conn.disconnect(user, *serving);
    emit(events, ctx, user, EventKind::phantom_drop, serving, std::nullopt);
    return;
  }

  macro_branch(user, conn, ctx, events);
  if (const auto target = hand_in_target(user, conn, ctx)) {
    const auto macro = conn.macro_link(user);
    if (macro) conn.disconnect(user, *macro);
    conn.connect(user, *target);
    emit(events, ctx, user, EventKind::macro_to_phantom, macro, target);
  }
}

void write_events_csv(std::ostream& out, std::span<const HandoverEvent> events, char sep) {
  out << "t" << sep << "user" << sep << "kind" << sep << "source" << sep << "target\n";
  for (const HandoverEvent& e : events) {
    out << format_double(e.time) << sep << e.user << sep << to_string(e.kind) << sep << format_optional(e.source)
        << sep << format_optional(e.target) << '\n';
  }
}

}  // namespace phantom
