#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phantom/radio.hpp"
#include "phantom/scenario.hpp"

namespace phantom {

enum class PolicyMode { proposed, baseline };

std::string_view to_string(PolicyMode mode);

struct HandoverPolicy {
  double eta_m_th = 0.40;   ///< linear SINR threshold for macros
  double eta_ph_th = 0.45;  ///< linear SINR threshold for phantoms
  double hysteresis_macro = 0.1;
  double hysteresis_phantom = 0.1;
  double t_expected = 5.0;  ///< seconds
  bool dwell_check = true;
  PolicyMode mode = PolicyMode::proposed;

  void validate() const;
};

enum class EventKind {
  macro_to_macro,
  phantom_to_phantom,
  macro_to_phantom,
  phantom_drop,
  baseline_phantom_to_macro,
};

inline constexpr int kEventKindCount = 5;

std::string_view to_string(EventKind kind);

/// Drops release an F2 link without moving the user anywhere; every other
/// kind counts as a handover.
inline bool is_handover(EventKind kind) { return kind != EventKind::phantom_drop; }

struct HandoverEvent {
  double time = 0.0;
  UserId user = 0;
  EventKind kind = EventKind::macro_to_macro;
  std::optional<CellId> source;
  std::optional<CellId> target;

  friend bool operator==(const HandoverEvent&, const HandoverEvent&) = default;
};

/// Connection matrix c, load counters K and access matrix a. Each user holds
/// at most one macro link and at most one phantom link, so c is stored as two
/// per-user slots.
class ConnectionState {
 public:
  ConnectionState() = default;
  ConnectionState(const Topology& topology, int num_users);

  int num_users() const { return static_cast<int>(macro_.size()); }
  int num_cells() const { return static_cast<int>(load_.size()); }

  std::optional<CellId> macro_link(UserId user) const { return macro_.at(static_cast<size_t>(user)); }
  std::optional<CellId> phantom_link(UserId user) const { return phantom_.at(static_cast<size_t>(user)); }
  /// c(i, j)
  bool connected(UserId user, CellId cell) const;
  /// K(j)
  int load(CellId cell) const { return load_.at(static_cast<size_t>(cell)); }
  int capacity(CellId cell) const { return capacity_.at(static_cast<size_t>(cell)); }
  bool has_room(CellId cell) const { return load(cell) < capacity(cell); }
  /// a(i, j); always 1 for macros.
  bool has_access(UserId user, CellId cell) const;

  /// Sets c(i, j) = 1 and increments K(j). The tier slot must be free and the
  /// cell must have room; violations throw std::logic_error.
  void connect(UserId user, CellId cell);
  /// Sets c(i, j) = 0 and decrements K(j); throws std::logic_error if not connected.
  void disconnect(UserId user, CellId cell);

  /// Throws std::logic_error when K disagrees with c, a capacity is exceeded,
  /// or a link points at the wrong tier.
  void check_invariants() const;

 private:
  int num_macros_ = 0;
  std::vector<std::optional<CellId>> macro_;
  std::vector<std::optional<CellId>> phantom_;
  std::vector<int> load_;
  std::vector<int> capacity_;
  // Row-major users x phantoms.
  std::vector<unsigned char> access_;
  int num_phantoms_ = 0;
};

/// Predicted residence time (s) of a user in a cell.
using DwellPredictor = std::function<double(UserId, CellId)>;

/// Time until the user's straight-line path leaves the cell's disc. Infinity
/// for a stationary user; 0 when the user is outside and the path misses the
/// disc.
double predict_dwell_time(const UserState& user, const CellSpec& cell);

/// Cell association over a fresh snapshot, users in index order: best macro
/// above threshold with a free channel, then best accessible phantom above
/// threshold with a free channel. In baseline mode a user that obtains a
/// phantom gives up its macro channel.
ConnectionState associate(int num_users, const Topology& topology, const SinrSnapshot& snapshot,
                          const HandoverPolicy& policy);

/// Everything a per-user handover branch reads besides the connection state.
struct StepContext {
  const Topology& topology;
  const SinrSnapshot& snapshot;
  const HandoverPolicy& policy;
  const DwellPredictor& dwell;
  double time = 0.0;
};

/// Macro-to-macro branch. On candidate exhaustion the serving link is kept.
void macro_handover_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                         std::vector<HandoverEvent>& events);

/// Phantom-to-phantom branch; drops the F2 link when no candidate qualifies.
void phantom_handover_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                           std::vector<HandoverEvent>& events);

/// Re-activates F2 for a user without a phantom link. No hysteresis gate.
void macro_to_phantom_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                           std::vector<HandoverEvent>& events);

/// Single-attachment comparator: the user is served by exactly one cell.
void baseline_step(UserId user, ConnectionState& conn, const StepContext& ctx,
                   std::vector<HandoverEvent>& events);

/// `t,user,kind,source,target`
void write_events_csv(std::ostream& out, std::span<const HandoverEvent> events, char sep = ',');

}  // namespace phantom
