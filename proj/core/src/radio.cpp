#include "phantom/radio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "phantom/csv.hpp"
#include "phantom/errors.hpp"

namespace phantom {

std::string_view to_string(InterferenceModel model) {
  return model == InterferenceModel::co_tier ? "co_tier" : "paper_literal";
}

void PropagationParams::validate() const {
  if (!(shadow_sigma_db >= 0.0)) throw ConfigError("shadow_sigma_db must be >= 0");
  if (!(penetration_loss_db >= 0.0)) throw ConfigError("penetration_loss_db must be >= 0");
  if (!(wall_loss_db >= 0.0)) throw ConfigError("wall_loss_db must be >= 0");
}

double path_loss_db(CellKind kind, Environment env, double distance_m, int walls,
                    const PropagationParams& params) {
  // glibc's log10 goes through a slow compatibility wrapper; log is direct.
  const double lg = std::log(std::max(distance_m, kMinDistanceM)) * (1.0 / std::numbers::ln10);
  const double wall_term = walls * params.wall_loss_db;
  if (env == Environment::outdoor) {
    if (kind == CellKind::macro) return 15.3 + 37.6 * lg;
    return std::max(15.3 + 37.6 * lg, 3.0 + 20.0 * lg) + params.penetration_loss_db;
  }
  if (kind == CellKind::macro) return 15.3 + 37.6 * lg + wall_term + params.penetration_loss_db;
  return 37.0 + 20.0 * lg + wall_term;
}

double sample_shadowing(Rng& rng, const PropagationParams& params) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return params.shadow_sigma_db * dist(rng);
}

namespace {

// 10^(-loss/10) through exp, which is markedly cheaper than pow here.
double loss_to_gain(double loss_db) { return std::exp(-loss_db * (std::numbers::ln10 / 10.0)); }

}  // namespace

LinkSample make_link_sample(double path_loss_db, double shadowing_db, double tx_power_dbm) {
  LinkSample s;
  s.path_loss_db = path_loss_db;
  s.shadowing_db = shadowing_db;
  s.gain_linear = loss_to_gain(path_loss_db + shadowing_db);
  s.received_power_mw = s.gain_linear * dbm_to_mw(tx_power_dbm);
  return s;
}

CellId home_macro(Point p, const Topology& topology) {
  CellId best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (CellId m = 0; m < topology.num_macros; ++m) {
    const Point d = p - topology.cells[static_cast<size_t>(m)].center;
    const double d2 = d.x * d.x + d.y * d.y;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = m;
    }
  }
  return best;
}

namespace {

// Fills eta for every cell for one user. Interferers are the cells of the
// user's macro region (the macro, then its phantoms) that interfere with the
// target; each region cell's own interference is the sum of the others in its
// class, taken as prefix + suffix so nothing is subtracted.
void sinr_row(const Topology& t, CellId home, const LinkSample* row, const PropagationParams& params,
              double* eta) {
  const InterferenceModel model = params.interference;
  const double noise = dbm_to_mw(params.noise_power_dbm);
  const CellId first = t.first_phantom() + home * t.phantoms_per_macro;
  const CellId last = first + t.phantoms_per_macro;

  // One class per band under co_tier, a single class under paper_literal.
  // Region members are the macro then the phantoms; slot[m] is member m's
  // position within its class.
  constexpr size_t kClasses = 2;
  const auto class_of = [&](CellId c) {
    return model == InterferenceModel::paper_literal ? size_t{0}
                                                     : static_cast<size_t>(t.cells[static_cast<size_t>(c)].band);
  };
  const size_t members = static_cast<size_t>(t.phantoms_per_macro) + 1;
  thread_local std::vector<double> power[kClasses];
  thread_local std::vector<double> prefix[kClasses];
  thread_local std::vector<double> suffix[kClasses];
  thread_local std::vector<size_t> slot;
  slot.resize(members);
  size_t size[kClasses] = {0, 0};
  for (size_t k = 0; k < kClasses; ++k) {
    power[k].resize(members);
    prefix[k].resize(members + 1);
    suffix[k].resize(members + 1);
  }
  for (size_t m = 0; m < members; ++m) {
    const CellId c = m == 0 ? home : first + static_cast<CellId>(m - 1);
    const size_t k = class_of(c);
    slot[m] = size[k];
    power[k][size[k]++] = row[c].received_power_mw;
  }
  for (size_t k = 0; k < kClasses; ++k) {
    const size_t n = size[k];
    prefix[k][0] = 0.0;
    for (size_t i = 0; i < n; ++i) prefix[k][i + 1] = prefix[k][i] + power[k][i];
    suffix[k][n] = 0.0;
    for (size_t i = n; i-- > 0;) suffix[k][i] = suffix[k][i + 1] + power[k][i];
  }

  for (CellId j = 0; j < t.num_cells(); ++j) {
    const size_t k = class_of(j);
    double interference = prefix[k][size[k]];
    const bool in_region = j == home || (j >= first && j < last);
    if (in_region) {
      const size_t i = slot[j == home ? 0 : static_cast<size_t>(j - first) + 1];
      interference = prefix[k][i] + suffix[k][i + 1];
    }
    eta[j] = row[j].received_power_mw / (interference + noise);
  }
}

}  // namespace

double sinr(UserId user, CellId serving, const Topology& topology, const LinkTable& links,
            const PropagationParams& params) {
  topology.cell(serving);
  if (user < 0 || user >= links.users()) throw LookupError("unknown user id " + std::to_string(user));
  if (links.cells() != topology.num_cells() || links.home.size() != static_cast<size_t>(links.users()))
    throw LookupError("link table does not match topology");
  std::vector<double> eta(static_cast<size_t>(topology.num_cells()));
  sinr_row(topology, links.home[static_cast<size_t>(user)], links.row(user), params, eta.data());
  return eta[static_cast<size_t>(serving)];
}

void sample_links(std::span<const UserState> users, const Topology& topology, const PropagationParams& params,
                  Rng& rng, LinkTable& links) {
  const int n_cells = topology.num_cells();
  if (links.users() != static_cast<int>(users.size()) || links.cells() != n_cells) {
    links = LinkTable(static_cast<int>(users.size()), n_cells);
  }
  links.home.resize(users.size());
  std::vector<double> tx_mw(static_cast<size_t>(n_cells));
  for (const CellSpec& c : topology.cells) tx_mw[static_cast<size_t>(c.id)] = dbm_to_mw(c.tx_power_dbm);
  const bool with_walls = params.environment == Environment::indoor && !topology.walls.empty();
  std::optional<WallCounter> walls;
  if (with_walls) walls.emplace(topology);
  // Ziggurat sampler; several times faster than the standard library's here.
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  for (size_t u = 0; u < users.size(); ++u) {
    const Point p = users[u].position;
    const WallCounter::Site site = walls ? walls->locate(p) : WallCounter::Site{};
    LinkSample* row = links.row(static_cast<UserId>(u));
    links.home[u] = home_macro(p, topology);
    for (const CellSpec& c : topology.cells) {
      const int q = walls ? walls->count(walls->cell_site(c.id), site) : 0;
      const Point d = p - c.center;
      const double pl = path_loss_db(c.kind, params.environment, std::sqrt(d.x * d.x + d.y * d.y), q, params);
      const double sh = params.shadow_sigma_db * normal(rng);
      LinkSample& s = row[c.id];
      s.path_loss_db = pl;
      s.shadowing_db = sh;
      s.gain_linear = loss_to_gain(pl + sh);
      s.received_power_mw = s.gain_linear * tx_mw[static_cast<size_t>(c.id)];
    }
  }
}

void compute_sinr(const Topology& topology, const LinkTable& links, const PropagationParams& params,
                  SinrSnapshot& out) {
  if (out.users() != links.users() || out.cells() != topology.num_cells())
    out = SinrSnapshot(links.users(), topology.num_cells());
  for (UserId u = 0; u < links.users(); ++u)
    sinr_row(topology, links.home[static_cast<size_t>(u)], links.row(u), params, out.row(u));
}

void write_link_trace_csv(std::ostream& out, std::span<const UserState> users, const Topology& topology,
                          const LinkTable& links, const SinrSnapshot& snapshot, char sep) {
  out << "user" << sep << "cell" << sep << "d_m" << sep << "pl_db" << sep << "shadow_db" << sep << "rx_dbm"
      << sep << "sinr_linear\n";
  for (const UserState& u : users) {
    for (const CellSpec& c : topology.cells) {
      const LinkSample& s = links(u.id, c.id);
      out << u.id << sep << c.id << sep << format_double(distance(u.position, c.center)) << sep
          << format_double(s.path_loss_db) << sep << format_double(s.shadowing_db) << sep
          << format_double(mw_to_dbm(s.received_power_mw)) << sep << format_double(snapshot(u.id, c.id)) << '\n';
    }
  }
}

}  // namespace phantom
