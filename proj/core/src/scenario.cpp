#include "phantom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "phantom/csv.hpp"
#include "phantom/errors.hpp"
#include "phantom/rng.hpp"

namespace phantom {

std::string_view to_string(CellKind kind) { return kind == CellKind::macro ? "macro" : "phantom"; }
std::string_view to_string(AccessMode mode) { return mode == AccessMode::open ? "open" : "closed"; }
std::string_view to_string(Environment env) {
  return env == Environment::indoor ? "indoor" : "outdoor";
}
std::string_view to_string(UserRegion region) {
  return region == UserRegion::macro_discs ? "macro_discs" : "buildings";
}

bool CellSpec::admits(UserId user) const {
  if (access_mode == AccessMode::open) return true;
  return std::binary_search(subscribers.begin(), subscribers.end(), user);
}

bool Region::contains(Point p) const {
  return std::any_of(discs.begin(), discs.end(), [p](const Disc& d) { return d.contains(p); }) ||
         std::any_of(rects.begin(), rects.end(), [p](const Rect& r) { return r.contains(p); });
}

ScenarioConfig ScenarioConfig::indoor_defaults() {
  ScenarioConfig c;
  c.environment = Environment::indoor;
  c.phantoms_per_macro = 12;
  c.phantom_radius = 50.0;
  c.speed_max = 4.1;
  c.phantom_tx_dbm = 23.0;
  c.user_region = UserRegion::buildings;
  return c;
}

ScenarioConfig ScenarioConfig::outdoor_defaults() { return ScenarioConfig{}; }

ScenarioConfig ScenarioConfig::defaults_for(Environment env) {
  return env == Environment::indoor ? indoor_defaults() : outdoor_defaults();
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (num_macros < 1) fail("num_macros must be >= 1, got " + std::to_string(num_macros));
  if (phantoms_per_macro < 0)
    fail("phantoms_per_macro must be >= 0, got " + std::to_string(phantoms_per_macro));
  if (num_users < 0) fail("num_users must be >= 0, got " + std::to_string(num_users));
  if (!(speed_min >= 0.0) || !(speed_max >= speed_min))
    fail("speed range must satisfy 0 <= speed_min <= speed_max");
  if (!(macro_radius > 0.0)) fail("macro_radius must be > 0");
  if (!(phantom_radius > 0.0)) fail("phantom_radius must be > 0");
  if (phantom_radius > macro_radius) fail("phantom_radius must not exceed macro_radius");
  if (!(macro_spacing > 0.0)) fail("macro_spacing must be > 0");
  if (macro_capacity < 1) fail("macro_capacity must be >= 1");
  if (phantom_capacity < 1) fail("phantom_capacity must be >= 1");
  if (!(open_access_probability >= 0.0 && open_access_probability <= 1.0))
    fail("open_access_probability must lie in [0, 1]");
  if (!(subscriber_fraction >= 0.0 && subscriber_fraction <= 1.0))
    fail("subscriber_fraction must lie in [0, 1]");
  if (user_region == UserRegion::buildings && environment != Environment::indoor)
    fail("user_region = buildings requires the indoor environment");
  if (user_region == UserRegion::buildings && phantoms_per_macro == 0)
    fail("user_region = buildings requires at least one phantom per macro");
}

const CellSpec& Topology::cell(CellId id) const {
  if (id < 0 || id >= num_cells()) throw LookupError("unknown cell id " + std::to_string(id));
  return cells[static_cast<size_t>(id)];
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Building make_building(CellId macro, Point center, int count, double phantom_radius) {
  Building b;
  b.macro = macro;
  b.columns = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  b.rows = (count + b.columns - 1) / b.columns;
  b.room_size = 2.0 * phantom_radius;
  const double w = b.columns * b.room_size;
  const double h = b.rows * b.room_size;
  b.footprint = Rect{{center.x - w / 2.0, center.y - h / 2.0}, {center.x + w / 2.0, center.y + h / 2.0}};
  return b;
}

void add_building_walls(const Building& b, std::vector<Segment>& walls) {
  const Rect& f = b.footprint;
  for (int k = 0; k <= b.columns; ++k) {
    const double x = f.min.x + k * b.room_size;
    walls.push_back({{x, f.min.y}, {x, f.max.y}});
  }
  for (int k = 0; k <= b.rows; ++k) {
    const double y = f.min.y + k * b.room_size;
    walls.push_back({{f.min.x, y}, {f.max.x, y}});
  }
}

std::vector<Point> ring_layout(Point center, int count, double macro_radius, double phantom_radius) {
  std::vector<Point> out;
  const int inner = count >= 3 ? count / 3 : 0;
  const int outer = count - inner;
  const double outer_r = macro_radius - phantom_radius;
  const double inner_r = inner == 1 ? 0.0 : 0.4 * outer_r;
  for (int k = 0; k < inner; ++k) {
    const double a = kTwoPi * k / inner;
    out.push_back(center + inner_r * unit_vector(a));
  }
  for (int k = 0; k < outer; ++k) {
    const double a = kTwoPi * k / outer + std::numbers::pi / outer;
    out.push_back(center + outer_r * unit_vector(a));
  }
  return out;
}

}  // namespace

Topology build_topology(const ScenarioConfig& config) {
  config.validate();
  Topology topo;
  topo.environment = config.environment;
  topo.num_macros = config.num_macros;
  topo.phantoms_per_macro = config.phantoms_per_macro;

  const int m = config.num_macros;
  const int n = config.phantoms_per_macro;
  for (CellId id = 0; id < m; ++id) {
    CellSpec c;
    c.id = id;
    c.kind = CellKind::macro;
    c.center = {(id - (m - 1) / 2.0) * config.macro_spacing, 0.0};
    c.radius = config.macro_radius;
    c.tx_power_dbm = config.macro_tx_dbm;
    c.band = Band::f1;
    c.capacity = config.macro_capacity;
    c.access_mode = AccessMode::open;
    topo.cells.push_back(std::move(c));
  }

  Rng rng = make_rng(config.seed, Stream::topology);
  std::bernoulli_distribution open_draw(config.open_access_probability);
  CellId next = m;
  for (CellId macro = 0; macro < m; ++macro) {
    const Point mc = topo.cells[static_cast<size_t>(macro)].center;
    std::vector<Point> centers;
    if (config.environment == Environment::indoor && n > 0) {
      Building b = make_building(macro, mc, n, config.phantom_radius);
      for (int k = 0; k < n; ++k) {
        const int col = k % b.columns;
        const int row = k / b.columns;
        centers.push_back({b.footprint.min.x + (col + 0.5) * b.room_size,
                           b.footprint.min.y + (row + 0.5) * b.room_size});
      }
      add_building_walls(b, topo.walls);
      topo.buildings.push_back(b);
    } else {
      centers = ring_layout(mc, n, config.macro_radius, config.phantom_radius);
    }
    for (const Point& p : centers) {
      if (distance(p, mc) + config.phantom_radius > config.macro_radius + 1e-9)
        throw ConfigError("phantom layout does not fit inside macro " + std::to_string(macro) +
                          "; reduce phantoms_per_macro or phantom_radius");
      CellSpec c;
      c.id = next++;
      c.kind = CellKind::phantom;
      c.parent_macro = macro;
      c.center = p;
      c.radius = config.phantom_radius;
      c.tx_power_dbm = config.phantom_tx_dbm;
      c.band = Band::f2;
      c.capacity = config.phantom_capacity;
      c.access_mode = open_draw(rng) ? AccessMode::open : AccessMode::closed;
      topo.cells.push_back(std::move(c));
    }
  }

  Rng sub_rng = make_rng(config.seed, Stream::subscribers);
  const auto sample_size = static_cast<size_t>(std::lround(config.subscriber_fraction * config.num_users));
  std::vector<UserId> all_users(static_cast<size_t>(config.num_users));
  std::iota(all_users.begin(), all_users.end(), 0);
  for (CellSpec& c : topo.cells) {
    if (c.access_mode != AccessMode::closed) continue;
    std::sample(all_users.begin(), all_users.end(), std::back_inserter(c.subscribers), sample_size, sub_rng);
    std::sort(c.subscribers.begin(), c.subscribers.end());
  }

  if (config.user_region == UserRegion::buildings) {
    for (const Building& b : topo.buildings) topo.region.rects.push_back(b.footprint);
  } else {
    for (const CellSpec& c : topo.macros()) topo.region.discs.push_back(c.disc());
  }
  return topo;
}

namespace {

// Region shapes are addressed by a flat index: discs first, then rects.
struct ShapeRef {
  const Region* region;
  size_t index;

  bool is_disc() const { return index < region->discs.size(); }
  const Disc& disc() const { return region->discs[index]; }
  const Rect& rect() const { return region->rects[index - region->discs.size()]; }
  bool contains(Point p) const { return is_disc() ? disc().contains(p) : rect().contains(p); }
  double area() const {
    return is_disc() ? std::numbers::pi * disc().radius * disc().radius : rect().area();
  }
};

size_t shape_count(const Region& r) { return r.discs.size() + r.rects.size(); }

std::optional<size_t> first_containing(const Region& r, Point p) {
  for (size_t i = 0; i < shape_count(r); ++i)
    if (ShapeRef{&r, i}.contains(p)) return i;
  return std::nullopt;
}

Point sample_in(const ShapeRef& s, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (s.is_disc()) {
    const double rad = s.disc().radius * std::sqrt(u01(rng));
    const double ang = kTwoPi * u01(rng);
    return s.disc().center + rad * unit_vector(ang);
  }
  const Rect& r = s.rect();
  const double x = r.min.x + r.width() * u01(rng);
  const double y = r.min.y + r.height() * u01(rng);
  return {x, y};
}

// Distance along `dir` from `pos` to where the path leaves the shape, and the
// outward normal there. A corner exit of a rect returns a diagonal normal so
// the reflection reverses both components.
struct Exit {
  double distance;
  Point normal;
};

Exit exit_from(const ShapeRef& s, Point pos, Point dir) {
  if (s.is_disc()) {
    const Disc& d = s.disc();
    const auto hits = ray_circle(pos, dir, d);
    double t = hits ? std::max(hits->far, 0.0) : 0.0;
    const Point q = pos + t * dir;
    Point n = q - d.center;
    const double len = norm(n);
    n = len > 0.0 ? (1.0 / len) * n : Point{-dir.x, -dir.y};
    return {t, n};
  }
  const Rect& r = s.rect();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double tx = dir.x > 0.0 ? (r.max.x - pos.x) / dir.x : dir.x < 0.0 ? (r.min.x - pos.x) / dir.x : inf;
  const double ty = dir.y > 0.0 ? (r.max.y - pos.y) / dir.y : dir.y < 0.0 ? (r.min.y - pos.y) / dir.y : inf;
  const double t = std::max(std::min(tx, ty), 0.0);
  Point n{0.0, 0.0};
  if (tx <= ty) n.x = dir.x > 0.0 ? 1.0 : -1.0;
  if (ty <= tx) n.y = dir.y > 0.0 ? 1.0 : -1.0;
  return {t, n};
}

}  // namespace

std::vector<UserState> spawn_users(const ScenarioConfig& config, const Topology& topology) {
  config.validate();
  std::vector<UserState> users;
  if (config.num_users == 0) return users;
  const Region& region = topology.region;
  if (region.empty()) throw ConfigError("topology has an empty user region");

  std::vector<double> areas;
  for (size_t i = 0; i < shape_count(region); ++i) areas.push_back(ShapeRef{&region, i}.area());
  std::discrete_distribution<size_t> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> heading(0.0, kTwoPi);

  Rng rng = make_rng(config.seed, Stream::users);
  users.reserve(static_cast<size_t>(config.num_users));
  for (UserId id = 0; id < config.num_users; ++id) {
    Point p;
    for (;;) {
      const size_t s = pick(rng);
      p = sample_in(ShapeRef{&region, s}, rng);
      // Accept only in the lowest-index shape covering p: uniform over the union.
      if (first_containing(region, p) == s) break;
    }
    UserState u;
    u.id = id;
    u.position = p;
    u.heading = wrap_angle(heading(rng));
    if (config.speed_max > config.speed_min) {
      u.speed = std::uniform_real_distribution<double>(config.speed_min, config.speed_max)(rng);
    } else {
      u.speed = config.speed_min;
    }
    users.push_back(u);
  }
  return users;
}

UserState advance_user(const UserState& user, double dt, const Region& region) {
  UserState out = user;
  double remaining = user.speed * dt;
  if (!(remaining > 0.0) || region.empty()) return out;

  Point pos = user.position;
  Point dir = unit_vector(user.heading);
  auto current = first_containing(region, pos);
  if (!current) {
    // Off-region start (hand-built state): move freely.
    out.position = pos + remaining * dir;
    return out;
  }

  constexpr int kMaxBounces = 64;
  constexpr double kProbe = 1e-9;
  for (int bounce = 0; bounce < kMaxBounces && remaining > 0.0; ++bounce) {
    const ShapeRef shape{&region, *current};
    const Exit e = exit_from(shape, pos, dir);
    if (e.distance >= remaining) {
      pos = pos + remaining * dir;
      remaining = 0.0;
      break;
    }
    pos = pos + e.distance * dir;
    remaining -= e.distance;
    const Point probe = pos + kProbe * dir;
    std::optional<size_t> other;
    for (size_t i = 0; i < shape_count(region); ++i) {
      if (i != *current && ShapeRef{&region, i}.contains(probe)) {
        other = i;
        break;
      }
    }
    if (other) {
      current = other;
      continue;
    }
    const double nn = dot(e.normal, e.normal);
    dir = dir - (2.0 * dot(dir, e.normal) / nn) * e.normal;
    const double len = norm(dir);
    dir = (1.0 / len) * dir;
  }
  out.position = pos;
  out.heading = wrap_angle(std::atan2(dir.y, dir.x));
  return out;
}

int count_walls(Point p1, Point p2, std::span<const Segment> walls) {
  int q = 0;
  for (const Segment& w : walls) q += segments_cross(p1, p2, w) ? 1 : 0;
  return q;
}

namespace {

bool strictly_inside(const Rect& r, Point p) {
  return p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y;
}

// Integer floor and ceil without libm calls; grid coordinates stay far below
// the int range.
int floor_int(double v) {
  const int i = static_cast<int>(v);
  return i - (v < static_cast<double>(i) ? 1 : 0);
}

int ceil_int(double v) {
  const int i = static_cast<int>(v);
  return i + (v > static_cast<double>(i) ? 1 : 0);
}

// Interior partition lines origin + k*step, 0 < k < count, strictly between a
// and b. Outer walls are left to the caller, so clipped endpoints that round
// just past the footprint edge are harmless.
int interior_lines_between(double a, double b, double origin, double inv_step, int count) {
  if (a > b) std::swap(a, b);
  const int lo = std::max(floor_int((a - origin) * inv_step) + 1, 1);
  const int hi = std::min(ceil_int((b - origin) * inv_step) - 1, count - 1);
  return std::max(hi - lo + 1, 0);
}

int partitions_between(Point a, Point b, const Building& bd) {
  const double inv = 1.0 / bd.room_size;
  return interior_lines_between(a.x, b.x, bd.footprint.min.x, inv, bd.columns) +
         interior_lines_between(a.y, b.y, bd.footprint.min.y, inv, bd.rows);
}

// Position u (in room units) as 2*floor(u)+1 inside a room or 2*u on a line.
int half_index(double u, int cells) {
  const int k = floor_int(u);
  return std::clamp(u == k ? 2 * k : 2 * k + 1, 0, 2 * cells);
}

// Even half indices, i.e. partition lines, strictly between two half indices.
int lines_between(int a, int b) {
  if (a > b) std::swap(a, b);
  return std::max((b - 1) / 2 - (a + 2) / 2 + 1, 0);
}

}  // namespace

int count_walls(Point p1, Point p2, const Topology& topology) {
  size_t building_walls = 0;
  for (const Building& b : topology.buildings) building_walls += static_cast<size_t>(b.columns + 1 + b.rows + 1);
  int q = building_walls < topology.walls.size()
              ? count_walls(p1, p2, std::span<const Segment>(topology.walls).subspan(building_walls))
              : 0;
  for (const Building& b : topology.buildings) {
    // Both ends in one footprint: the segment stays inside it and meets no
    // other building.
    if (strictly_inside(b.footprint, p1) && strictly_inside(b.footprint, p2)) return q + partitions_between(p1, p2, b);
  }
  for (const Building& b : topology.buildings) {
    const Rect& f = b.footprint;
    if (std::max(p1.x, p2.x) < f.min.x || std::min(p1.x, p2.x) > f.max.x || std::max(p1.y, p2.y) < f.min.y ||
        std::min(p1.y, p2.y) > f.max.y)
      continue;
    // Clip p1 + t (p2 - p1), t in [0, 1], against the footprint.
    const Point d = p2 - p1;
    double t0 = 0.0;
    double t1 = 1.0;
    bool outside = false;
    auto clip = [&](double denom, double num) {
      if (denom == 0.0) {
        if (num < 0.0) outside = true;
        return;
      }
      const double t = num / denom;
      if (denom < 0.0) {
        t0 = std::max(t0, t);
      } else {
        t1 = std::min(t1, t);
      }
    };
    clip(-d.x, p1.x - f.min.x);
    clip(d.x, f.max.x - p1.x);
    clip(-d.y, p1.y - f.min.y);
    clip(d.y, f.max.y - p1.y);
    if (outside || !(t0 < t1)) continue;
    // Inside the convex footprint the segment crosses every partition line
    // between its clipped endpoints once; each endpoint beyond the footprint
    // adds one outer-wall crossing.
    q += partitions_between(p1 + t0 * d, p1 + t1 * d, b);
    if (!strictly_inside(f, p1) && t0 > 0.0) ++q;
    if (!strictly_inside(f, p2) && t1 < 1.0) ++q;
  }
  return q;
}

WallCounter::WallCounter(const Topology& topology) : topology_(&topology) {
  size_t building_walls = 0;
  for (const Building& b : topology.buildings) building_walls += static_cast<size_t>(b.columns + 1 + b.rows + 1);
  // Two buildings at most: a segment between them cannot pass through a third.
  fast_ = building_walls == topology.walls.size() && topology.buildings.size() <= 2;
  for (const CellSpec& c : topology.cells) cells_.push_back(locate(c.center));
}

WallCounter::Site WallCounter::locate(Point p) const {
  Site site;
  site.p = p;
  if (!fast_) return site;
  for (size_t i = 0; i < topology_->buildings.size(); ++i) {
    const Building& b = topology_->buildings[i];
    if (!strictly_inside(b.footprint, p)) continue;
    site.building = static_cast<int>(i);
    site.hx = half_index((p.x - b.footprint.min.x) / b.room_size, b.columns);
    site.hy = half_index((p.y - b.footprint.min.y) / b.room_size, b.rows);
    return site;
  }
  return site;
}

// Partitions between `from` and the point where the ray toward `toward`
// leaves its footprint, plus the outer wall itself.
int WallCounter::walls_to_exit(const Site& from, Point toward) const {
  const Building& b = topology_->buildings[static_cast<size_t>(from.building)];
  const Rect& f = b.footprint;
  const Point d = toward - from.p;
  const double tx = d.x == 0.0 ? std::numeric_limits<double>::infinity()
                               : ((d.x > 0.0 ? f.max.x : f.min.x) - from.p.x) / d.x;
  const double ty = d.y == 0.0 ? std::numeric_limits<double>::infinity()
                               : ((d.y > 0.0 ? f.max.y : f.min.y) - from.p.y) / d.y;
  const Point e = from.p + std::min(tx, ty) * d;
  const double inv = 1.0 / b.room_size;
  const int hx = half_index((e.x - f.min.x) * inv, b.columns);
  const int hy = half_index((e.y - f.min.y) * inv, b.rows);
  return lines_between(from.hx, hx) + lines_between(from.hy, hy) + 1;
}

int WallCounter::count(const Site& a, const Site& b) const {
  if (a.building < 0 || b.building < 0) return count_walls(a.p, b.p, *topology_);
  if (a.building == b.building) return lines_between(a.hx, b.hx) + lines_between(a.hy, b.hy);
  return walls_to_exit(a, b.p) + walls_to_exit(b, a.p);
}

void write_topology_csv(std::ostream& out, const Topology& topology, char sep) {
  out << "cell_id" << sep << "kind" << sep << "parent" << sep << "x" << sep << "y" << sep << "radius"
      << sep << "power_dbm" << sep << "capacity" << sep << "access_mode\n";
  for (const CellSpec& c : topology.cells) {
    out << c.id << sep << to_string(c.kind) << sep << format_optional(c.parent_macro) << sep
        << format_double(c.center.x) << sep << format_double(c.center.y) << sep << format_double(c.radius)
        << sep << format_double(c.tx_power_dbm) << sep << c.capacity << sep << to_string(c.access_mode)
        << '\n';
  }
}

}  // namespace phantom
