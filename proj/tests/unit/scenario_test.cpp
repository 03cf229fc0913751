#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "phantom/errors.hpp"
#include "phantom/scenario.hpp"

namespace phantom {
namespace {

ScenarioConfig indoor(int users = 50) {
  ScenarioConfig c = ScenarioConfig::indoor_defaults();
  c.num_users = users;
  return c;
}

TEST(BuildTopology, IndoorTwoMacrosTwelvePhantoms) {
  const Topology t = build_topology(indoor());
  ASSERT_EQ(t.num_cells(), 26);
  for (CellId id = 0; id < 26; ++id) {
    EXPECT_EQ(t.cells[static_cast<size_t>(id)].id, id);
    EXPECT_EQ(t.cells[static_cast<size_t>(id)].is_macro(), id < 2);
  }
  EXPECT_EQ(t.buildings.size(), 2u);
}

TEST(BuildTopology, SingleMacroNoPhantoms) {
  ScenarioConfig c;
  c.num_macros = 1;
  c.phantoms_per_macro = 0;
  const Topology t = build_topology(c);
  EXPECT_EQ(t.num_cells(), 1);
  EXPECT_TRUE(t.phantoms().empty());
}

TEST(BuildTopology, OutdoorIsReproducible) {
  ScenarioConfig c;
  c.seed = 42;
  const Topology a = build_topology(c);
  const Topology b = build_topology(c);
  ASSERT_EQ(a.num_cells(), 18);
  for (size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].center, b.cells[i].center);
    EXPECT_EQ(a.cells[i].access_mode, b.cells[i].access_mode);
    EXPECT_EQ(a.cells[i].subscribers, b.cells[i].subscribers);
  }
}

TEST(BuildTopology, RejectsInvalidCounts) {
  ScenarioConfig c;
  c.num_macros = 0;
  EXPECT_THROW(build_topology(c), ConfigError);
  c = ScenarioConfig{};
  c.phantoms_per_macro = -1;
  EXPECT_THROW(build_topology(c), ConfigError);
}

TEST(BuildTopology, CellInvariants) {
  for (Environment env : {Environment::indoor, Environment::outdoor}) {
    const Topology t = build_topology(ScenarioConfig::defaults_for(env));
    for (const CellSpec& c : t.cells) {
      EXPECT_GT(c.radius, 0.0);
      EXPECT_GE(c.capacity, 1);
      if (c.is_macro()) {
        EXPECT_EQ(c.band, Band::f1);
        EXPECT_EQ(c.access_mode, AccessMode::open);
      } else {
        EXPECT_EQ(c.band, Band::f2);
        const CellSpec& parent = t.cell(*c.parent_macro);
        EXPECT_LE(distance(c.center, parent.center) + c.radius, parent.radius + 1e-9);
      }
    }
  }
}

TEST(BuildTopology, OpenAccessFractionIsHalf) {
  long long phantoms = 0;
  long long open = 0;
  ScenarioConfig c;
  c.num_users = 0;
  c.num_macros = 4;
  c.phantoms_per_macro = 25;
  c.phantom_radius = 50.0;
  for (std::uint64_t seed = 1; phantoms < 100000; ++seed) {
    c.seed = seed;
    for (const CellSpec& p : build_topology(c).phantoms()) {
      ++phantoms;
      open += p.access_mode == AccessMode::open ? 1 : 0;
    }
  }
  EXPECT_NEAR(static_cast<double>(open) / static_cast<double>(phantoms), 0.5, 0.01);
}

TEST(BuildTopology, ClosedCellsGetSubscriberSample) {
  ScenarioConfig c;
  c.num_users = 200;
  const Topology t = build_topology(c);
  for (const CellSpec& p : t.phantoms()) {
    if (p.access_mode == AccessMode::closed) {
      EXPECT_EQ(p.subscribers.size(), 20u);
      EXPECT_TRUE(std::is_sorted(p.subscribers.begin(), p.subscribers.end()));
      for (UserId u : p.subscribers) EXPECT_TRUE(p.admits(u));
    } else {
      EXPECT_TRUE(p.subscribers.empty());
      EXPECT_TRUE(p.admits(7));
    }
  }
}

TEST(SpawnUsers, EmptyPopulation) {
  ScenarioConfig c;
  c.num_users = 0;
  EXPECT_TRUE(spawn_users(c, build_topology(c)).empty());
}

TEST(SpawnUsers, NegativeCountRejected) {
  ScenarioConfig c;
  c.num_users = -1;
  EXPECT_THROW(spawn_users(c, Topology{}), ConfigError);
}

TEST(SpawnUsers, Reproducible) {
  ScenarioConfig c;
  c.num_users = 100;
  c.seed = 1;
  const Topology t = build_topology(c);
  const auto a = spawn_users(c, t);
  const auto b = spawn_users(c, t);
  ASSERT_EQ(a.size(), 100u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].heading, b[i].heading);
    EXPECT_EQ(a[i].speed, b[i].speed);
  }
}

TEST(SpawnUsers, UniformOverDiscMeanDistance) {
  ScenarioConfig c;
  c.num_macros = 1;
  c.phantoms_per_macro = 0;
  c.num_users = 10000;
  const Topology t = build_topology(c);
  const auto users = spawn_users(c, t);
  double sum = 0.0;
  for (const UserState& u : users) sum += distance(u.position, t.cells[0].center);
  EXPECT_NEAR(sum / 10000.0, 2.0 * 1000.0 / 3.0, 0.01 * 2000.0 / 3.0);
}

TEST(SpawnUsers, StateRanges) {
  const ScenarioConfig c = indoor(500);
  const Topology t = build_topology(c);
  for (const UserState& u : spawn_users(c, t)) {
    EXPECT_TRUE(t.region.contains(u.position));
    EXPECT_GE(u.heading, 0.0);
    EXPECT_LT(u.heading, 2 * std::numbers::pi);
    EXPECT_GE(u.speed, c.speed_min);
    EXPECT_LE(u.speed, c.speed_max);
    EXPECT_FALSE(u.macro_link);
    EXPECT_FALSE(u.phantom_link);
  }
}

Region unit_region(double radius) {
  Region r;
  r.discs.push_back({{0, 0}, radius});
  return r;
}

TEST(AdvanceUser, StationaryUserStays) {
  UserState u;
  u.position = {3, 4};
  u.speed = 0.0;
  EXPECT_EQ(advance_user(u, 1.0, unit_region(100)).position, u.position);
}

TEST(AdvanceUser, StraightLineKinematics) {
  UserState u;
  u.position = {0, 0};
  u.heading = 0.0;
  u.speed = 2.0;
  const UserState v = advance_user(u, 1.0, unit_region(100));
  EXPECT_EQ(v.position.x, 2.0);
  EXPECT_EQ(v.position.y, 0.0);
}

TEST(AdvanceUser, RadialReflection) {
  UserState u;
  u.position = {99, 0};
  u.heading = 0.0;
  u.speed = 2.0;
  const UserState v = advance_user(u, 1.0, unit_region(100));
  EXPECT_NEAR(v.position.x, 99.0, 1e-9);
  EXPECT_NEAR(v.position.y, 0.0, 1e-9);
  EXPECT_NEAR(v.heading, std::numbers::pi, 1e-12);
  EXPECT_EQ(v.speed, 2.0);
}

TEST(AdvanceUser, RectangleCornerReflection) {
  Region r;
  r.rects.push_back({{0, 0}, {10, 10}});
  UserState u;
  u.position = {9, 9};
  u.heading = std::numbers::pi / 4;
  u.speed = 2.0 * std::sqrt(2.0);
  const UserState v = advance_user(u, 1.0, r);
  EXPECT_NEAR(v.position.x, 9.0, 1e-9);
  EXPECT_NEAR(v.position.y, 9.0, 1e-9);
  EXPECT_NEAR(v.heading, 5 * std::numbers::pi / 4, 1e-12);
}

TEST(AdvanceUser, NeverLeavesRegionAndKeepsSpeed) {
  for (Environment env : {Environment::indoor, Environment::outdoor}) {
    ScenarioConfig c = ScenarioConfig::defaults_for(env);
    c.num_users = 200;
    c.speed_max = 40.0;
    const Topology t = build_topology(c);
    auto users = spawn_users(c, t);
    for (int k = 0; k < 300; ++k) {
      for (UserState& u : users) {
        const double speed = u.speed;
        u = advance_user(u, 1.0, t.region);
        ASSERT_TRUE(t.region.contains(u.position)) << "user " << u.id << " step " << k;
        ASSERT_EQ(u.speed, speed);
      }
    }
  }
}

TEST(CountWalls, NoWalls) { EXPECT_EQ(count_walls({0, 0}, {5, 5}, std::span<const Segment>{}), 0); }

TEST(CountWalls, PerpendicularWall) {
  const std::vector<Segment> walls{{{1, -1}, {1, 1}}};
  EXPECT_EQ(count_walls({0, 0}, {2, 0}, walls), 1);
}

TEST(CountWalls, DiagonalOfThreeByThreeGrid) {
  std::vector<Segment> walls;
  for (int k = 0; k <= 3; ++k) {
    walls.push_back({{double(k), 0}, {double(k), 3}});
    walls.push_back({{0, double(k)}, {3, double(k)}});
  }
  EXPECT_EQ(count_walls({0.5, 0.4}, {2.5, 2.6}, walls), 4);
}

// Reference: every wall segment tested individually.
int brute(Point a, Point b, const Topology& t) { return count_walls(a, b, std::span<const Segment>(t.walls)); }

TEST(CountWalls, GridShortcutMatchesSegmentTest) {
  for (int n : {12, 8, 5, 1}) {
    ScenarioConfig c = indoor(0);
    c.phantoms_per_macro = n;
    const Topology t = build_topology(c);
    const WallCounter wc(t);
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> x(-1300, 1300), y(-250, 250);
    for (int i = 0; i < 20000; ++i) {
      const Point p{x(rng), y(rng)};
      const Point q{x(rng), y(rng)};
      const int expected = brute(p, q, t);
      ASSERT_EQ(count_walls(p, q, t), expected);
      ASSERT_EQ(wc.count(wc.locate(p), wc.locate(q)), expected);
    }
    for (const CellSpec& cell : t.cells) {
      for (int i = 0; i < 500; ++i) {
        const Point q{x(rng), y(rng)};
        ASSERT_EQ(wc.count(wc.cell_site(cell.id), wc.locate(q)), brute(cell.center, q, t));
      }
    }
  }
}

TEST(CountWalls, PointsOnPartitionLines) {
  const Topology t = build_topology(indoor(0));
  const WallCounter wc(t);
  const Building& b = t.buildings[0];
  const Point on_line{b.footprint.min.x + b.room_size, b.footprint.min.y + 0.3 * b.room_size};
  const Point on_cross{b.footprint.min.x + b.room_size, b.footprint.min.y + 2 * b.room_size};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-1300, 1300), y(-250, 250);
  for (int i = 0; i < 5000; ++i) {
    const Point q{x(rng), y(rng)};
    EXPECT_EQ(wc.count(wc.locate(on_line), wc.locate(q)), brute(on_line, q, t));
    EXPECT_EQ(wc.count(wc.locate(on_cross), wc.locate(q)), brute(on_cross, q, t));
  }
}

TEST(CountWalls, Symmetric) {
  const Topology t = build_topology(indoor(0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> x(-1300, 1300), y(-250, 250);
  for (int i = 0; i < 2000; ++i) {
    const Point p{x(rng), y(rng)};
    const Point q{x(rng), y(rng)};
    EXPECT_EQ(count_walls(p, q, t), count_walls(q, p, t));
  }
}

TEST(TopologyCsv, HeaderAndRows) {
  const Topology t = build_topology(indoor(0));
  std::ostringstream out;
  write_topology_csv(out, t);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "cell_id,kind,parent,x,y,radius,power_dbm,capacity,access_mode");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 27);
}

TEST(CellLookup, UnknownIdThrows) {
  const Topology t = build_topology(indoor(0));
  EXPECT_THROW(t.cell(26), LookupError);
  EXPECT_THROW(t.cell(-1), LookupError);
}

}  // namespace
}  // namespace phantom
