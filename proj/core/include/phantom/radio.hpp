#pragma once

#include <cmath>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "phantom/rng.hpp"
#include "phantom/scenario.hpp"

namespace phantom {

/// Which transmitters contribute to a link's interference term. Both variants
/// restrict interferers to the serving cell's own macro region.
enum class InterferenceModel {
  co_tier,        ///< only cells on the serving cell's band
  paper_literal,  ///< every other cell of the region, regardless of band
};

std::string_view to_string(InterferenceModel model);

struct PropagationParams {
  Environment environment = Environment::outdoor;
  double penetration_loss_db = 10.0;
  double wall_loss_db = 5.0;
  /// Standard deviation of log-normal shadowing.
  double shadow_sigma_db = 6.0;
  double noise_power_dbm = -170.0;
  InterferenceModel interference = InterferenceModel::co_tier;

  void validate() const;
};

/// Distances below this are clamped before taking logarithms.
inline constexpr double kMinDistanceM = 1.0;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Deterministic path loss in dB; shadowing is added separately.
///   outdoor macro   : 15.3 + 37.6 log10(d)
///   outdoor phantom : max(15.3 + 37.6 log10(d), 3 + 20 log10(d)) + L_ow
///   indoor macro    : 15.3 + 37.6 log10(d) + q*w + L_ow
///   indoor phantom  : 37 + 20 log10(d) + q*w
double path_loss_db(CellKind kind, Environment env, double distance_m, int walls,
                    const PropagationParams& params);

/// One zero-mean normal draw with standard deviation shadow_sigma_db.
double sample_shadowing(Rng& rng, const PropagationParams& params);

struct LinkSample {
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double gain_linear = 0.0;
  double received_power_mw = 0.0;
};

LinkSample make_link_sample(double path_loss_db, double shadowing_db, double tx_power_dbm);

/// Dense users x cells matrix.
template <typename T>
class UserCellMatrix {
 public:
  UserCellMatrix() = default;
  UserCellMatrix(int users, int cells, T init = T{})
      : users_(users), cells_(cells), data_(static_cast<size_t>(users) * static_cast<size_t>(cells), init) {}

  int users() const { return users_; }
  int cells() const { return cells_; }
  T& operator()(UserId u, CellId c) { return data_[index(u, c)]; }
  const T& operator()(UserId u, CellId c) const { return data_[index(u, c)]; }
  const T* row(UserId u) const { return data_.data() + static_cast<size_t>(u) * static_cast<size_t>(cells_); }
  T* row(UserId u) { return data_.data() + static_cast<size_t>(u) * static_cast<size_t>(cells_); }

 private:
  size_t index(UserId u, CellId c) const {
    return static_cast<size_t>(u) * static_cast<size_t>(cells_) + static_cast<size_t>(c);
  }
  int users_ = 0;
  int cells_ = 0;
  std::vector<T> data_;
};

/// Link samples plus the macro region each user was in when they were drawn.
/// The interference on any link comes from the base stations of that region.
struct LinkTable : UserCellMatrix<LinkSample> {
  using UserCellMatrix<LinkSample>::UserCellMatrix;
  std::vector<CellId> home;
};

/// Linear SINR per (user, cell).
using SinrSnapshot = UserCellMatrix<double>;

/// Macro whose center is nearest to `p`; the lower id on ties.
CellId home_macro(Point p, const Topology& topology);

/// eta = h p / (I + sigma^2), all linear, where I sums the other base
/// stations of the user's macro region (same band only under co_tier). Throws
/// LookupError for unknown ids.
double sinr(UserId user, CellId serving, const Topology& topology, const LinkTable& links,
            const PropagationParams& params);

/// Draws fresh shadowing for every (user, cell) pair in user-major, cell-minor
/// order and fills `links`. The number of draws is independent of any
/// connection state.
void sample_links(std::span<const UserState> users, const Topology& topology, const PropagationParams& params,
                  Rng& rng, LinkTable& links);

/// sinr() for every (user, cell) pair.
void compute_sinr(const Topology& topology, const LinkTable& links, const PropagationParams& params,
                  SinrSnapshot& out);

/// `user,cell,d_m,pl_db,shadow_db,rx_dbm,sinr_linear`
void write_link_trace_csv(std::ostream& out, std::span<const UserState> users, const Topology& topology,
                          const LinkTable& links, const SinrSnapshot& snapshot, char sep = ',');

}  // namespace phantom
