#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phantom/geometry.hpp"

namespace phantom {

using CellId = int;
using UserId = int;

enum class CellKind { macro, phantom };
enum class Band { f1, f2 };
enum class AccessMode { open, closed };
enum class Environment { indoor, outdoor };

/// Where users are spawned and confined.
enum class UserRegion {
  macro_discs,  ///< union of the macrocell discs
  buildings,    ///< footprints of the apartment buildings (indoor only)
};

std::string_view to_string(CellKind kind);
std::string_view to_string(AccessMode mode);
std::string_view to_string(Environment env);
std::string_view to_string(UserRegion region);

struct CellSpec {
  CellId id = 0;
  CellKind kind = CellKind::macro;
  std::optional<CellId> parent_macro;
  Point center;
  double radius = 0.0;
  double tx_power_dbm = 0.0;
  Band band = Band::f1;
  int capacity = 1;
  AccessMode access_mode = AccessMode::open;
  /// Sorted user ids allowed into a closed phantom.
  std::vector<UserId> subscribers;

  bool is_macro() const { return kind == CellKind::macro; }
  bool is_phantom() const { return kind == CellKind::phantom; }
  /// Macro id whose region (interference group) this cell belongs to.
  CellId group() const { return is_macro() ? id : *parent_macro; }
  bool admits(UserId user) const;
  Disc disc() const { return {center, radius}; }
};

struct UserState {
  UserId id = 0;
  Point position;
  double heading = 0.0;  ///< radians in [0, 2*pi)
  double speed = 0.0;    ///< m/s, constant for the user's lifetime
  std::optional<CellId> macro_link;
  std::optional<CellId> phantom_link;
};

/// Union of discs and axis-aligned rectangles users move within.
struct Region {
  std::vector<Disc> discs;
  std::vector<Rect> rects;

  bool contains(Point p) const;
  bool empty() const { return discs.empty() && rects.empty(); }
};

/// Rectangular apartment grid; every room holds one phantom at its center and
/// room partitions run the full width/height of the building.
struct Building {
  CellId macro = 0;
  Rect footprint;
  int columns = 0;
  int rows = 0;
  double room_size = 0.0;
};

struct ScenarioConfig {
  Environment environment = Environment::outdoor;
  int num_macros = 2;
  int phantoms_per_macro = 8;
  int num_users = 100;
  double speed_min = 0.0;
  double speed_max = 8.3;
  double macro_radius = 1000.0;
  double phantom_radius = 250.0;
  /// Center-to-center distance of adjacent macros; 2R gives tangent discs.
  double macro_spacing = 2000.0;
  double macro_tx_dbm = 43.0;
  double phantom_tx_dbm = 31.5;
  int macro_capacity = 1000;
  int phantom_capacity = 10;
  double open_access_probability = 0.5;
  /// Fraction of users subscribed to each closed phantom.
  double subscriber_fraction = 0.1;
  UserRegion user_region = UserRegion::macro_discs;
  std::uint64_t seed = 1;

  static ScenarioConfig indoor_defaults();
  static ScenarioConfig outdoor_defaults();
  static ScenarioConfig defaults_for(Environment env);

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

struct Topology {
  Environment environment = Environment::outdoor;
  int num_macros = 0;
  int phantoms_per_macro = 0;
  std::vector<CellSpec> cells;
  std::vector<Building> buildings;
  std::vector<Segment> walls;
  Region region;

  CellId first_phantom() const { return num_macros; }
  int num_cells() const { return static_cast<int>(cells.size()); }
  const CellSpec& cell(CellId id) const;
  std::span<const CellSpec> macros() const { return {cells.data(), static_cast<size_t>(num_macros)}; }
  std::span<const CellSpec> phantoms() const {
    return {cells.data() + num_macros, cells.size() - static_cast<size_t>(num_macros)};
  }
};

/// Macros first (ids 0..M-1), then M*N phantoms grouped by parent macro.
/// Indoor phantoms sit at room centers of a per-macro apartment grid; outdoor
/// phantoms sit on two concentric rings. Access modes and closed-cell
/// subscribers are drawn from the config seed.
Topology build_topology(const ScenarioConfig& config);

/// Uniform positions over the region, uniform headings, uniform speeds.
std::vector<UserState> spawn_users(const ScenarioConfig& config, const Topology& topology);

/// Straight-line motion with specular reflection off the region boundary.
UserState advance_user(const UserState& user, double dt, const Region& region);

/// Walls strictly crossed by the segment p1-p2.
int count_walls(Point p1, Point p2, std::span<const Segment> walls);

/// Same result as count_walls over topology.walls, using the apartment grid
/// structure to skip segment tests where possible.
int count_walls(Point p1, Point p2, const Topology& topology);

/// Wall counts between many points and the fixed cell sites, for the hot
/// per-step loop. Each point is located in the apartment grid once; pairs in
/// the same room grid reduce to index differences. Anything unusual (a point
/// on a partition line, outside every building, extra walls) falls back to
/// count_walls, so results always agree with it.
class WallCounter {
 public:
  struct Site {
    Point p;
    int building = -1;  ///< -1: outside every footprint interior
    int hx = 0;         ///< 2*col+1 inside a room, 2*k on partition line k
    int hy = 0;
  };

  explicit WallCounter(const Topology& topology);

  Site locate(Point p) const;
  int count(const Site& a, const Site& b) const;
  const Site& cell_site(CellId c) const { return cells_[static_cast<size_t>(c)]; }

 private:
  int walls_to_exit(const Site& from, Point toward) const;

  const Topology* topology_;
  std::vector<Site> cells_;
  bool fast_ = false;
};

/// `cell_id,kind,parent,x,y,radius,power_dbm,capacity,access_mode`
void write_topology_csv(std::ostream& out, const Topology& topology, char sep = ',');

}  // namespace phantom
