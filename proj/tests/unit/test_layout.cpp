#include <doctest.h>

#include <cmath>
#include <set>

#include "saslo/error.hpp"
#include "saslo/layout.hpp"
#include "saslo/workload.hpp"

using namespace saslo;

namespace {

ContextGrid flat_context(int n_g, std::vector<Cell> objects, double lum = 0.1) {
  return {LuminanceGrid(n_g, lum), std::move(objects)};
}

}  // namespace

TEST_CASE("feature vector layout and SOD slots") {
  Rng rng(1);
  const auto ctx = flat_context(12, random_objects(12, 6, rng));
  RewardConfig cfg;
  const auto curves = RewardCurves::defaults();
  const auto x = build_features(ctx, Layout{ctx.objects}, curves, cfg);
  CHECK(x.size() == 18);
  for (int i = 0; i < 6; ++i) {
    CHECK(x[3 * i + 2] == 1.0);
    CHECK(x[3 * i] == curves.luminance(0.1));
  }
  for (int i = 0; i < 18; ++i) CHECK((x[i] >= 0.0 && x[i] <= 1.0));
}

TEST_CASE("adjacent stimuli at 5 degrees per cell hit the bottom of the ISD curve") {
  RewardCurves curves = RewardCurves::defaults();
  curves.isd = RewardCurve({{5, 0.46}, {40, 0.92}});
  RewardConfig cfg;
  cfg.n_stimuli = 2;
  cfg.degrees_per_cell = 5.0;
  const auto ctx = flat_context(6, {{2, 2}, {3, 2}});
  const auto x = build_features(ctx, Layout{{{2, 2}, {3, 2}}}, curves, cfg);
  CHECK(x[1] == 0.0);
  CHECK(x[4] == 0.0);
}

TEST_CASE("single stimulus has no neighbour") {
  RewardConfig cfg;
  cfg.n_stimuli = 1;
  const auto ctx = flat_context(4, {{1, 1}});
  const auto a = assess_layout(ctx, Layout{{{1, 1}}}, cfg);
  CHECK(std::isinf(a[0].nearest_neighbor_distance));
  const auto curves = RewardCurves::defaults();
  CHECK(build_features(ctx, Layout{{{1, 1}}}, curves, cfg)[1] == curves.isd(45.0));
}

TEST_CASE("features reject positions outside the grid") {
  RewardConfig cfg;
  cfg.n_stimuli = 1;
  const auto ctx = flat_context(4, {{1, 1}});
  CHECK_THROWS_AS(build_features(ctx, Layout{{{4, 1}}}, RewardCurves::defaults(), cfg), Error);
  CHECK_THROWS_AS(build_features(ctx, Layout{{{1, 1}, {2, 2}}}, RewardCurves::defaults(), cfg), Error);
}

TEST_CASE("true_reward equals layout_reward of the assessment") {
  Rng rng(2);
  WorkloadConfig wl;
  RewardConfig cfg;
  const auto curves = RewardCurves::defaults();
  for (int k = 0; k < 20; ++k) {
    const auto ctx = synth_context(wl, rng);
    const auto arm = random_layout(ctx, cfg, rng);
    const double r = true_reward(ctx, arm, curves, cfg);
    CHECK(r == layout_reward(assess_layout(ctx, arm, cfg), curves, cfg));
    // Feature slots carry the same component rewards.
    const auto x = build_features(ctx, arm, curves, cfg);
    std::vector<ComponentRewards> parts;
    for (int i = 0; i < 6; ++i) parts.push_back({x[3 * i], x[3 * i + 1], x[3 * i + 2]});
    CHECK(aggregate_reward(parts, cfg.alpha) == doctest::Approx(r).epsilon(1e-14));
  }
}

TEST_CASE("feasible cells are exactly those within d_max") {
  const LuminanceGrid g(12);
  for (Cell o : {Cell{0, 0}, Cell{5, 6}, Cell{11, 3}}) {
    const auto cells = feasible_cells(g, o, kDefaultDMax);
    std::size_t expected = 0;
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 12; ++c)
        if (cell_distance({c, r}, o) <= kDefaultDMax + 1e-12) ++expected;
    CHECK(cells.size() == expected);
    for (Cell c : cells) CHECK(cell_distance(c, o) <= kDefaultDMax + 1e-12);
  }
  // Interior object: all (dx, dy) with dx^2 + dy^2 <= 18, i.e. 9 + 18 + 14 + 14 + 6 cells.
  CHECK(feasible_cells(g, {5, 6}, kDefaultDMax).size() == 61);
}

TEST_CASE("sampled layouts are feasible and collision free") {
  Rng rng(3);
  WorkloadConfig wl;
  RewardConfig cfg;
  for (int k = 0; k < 50; ++k) {
    const auto ctx = synth_context(wl, rng);
    const auto arm = random_layout(ctx, cfg, rng);
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < arm.positions.size(); ++i) {
      const Cell p = arm.positions[i];
      CHECK(ctx.grid.contains(p.col, p.row));
      CHECK(cell_distance(p, ctx.objects[i]) <= cfg.d_max + 1e-12);
      seen.insert({p.col, p.row});
    }
    CHECK(seen.size() == arm.positions.size());
  }
}

TEST_CASE("sampler errors name the object") {
  // Two objects whose only feasible cell is the same one.
  RewardConfig cfg;
  cfg.d_max = 0.5;
  const auto ctx = flat_context(4, {{1, 1}, {1, 1}});
  try {
    random_layout(ctx, cfg, *std::make_unique<Rng>(1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("object") != std::string::npos);
  }
}

TEST_CASE("random objects are distinct and inside the grid") {
  Rng rng(4);
  const auto objs = random_objects(3, 9, rng);
  std::set<std::pair<int, int>> s;
  for (Cell c : objs) s.insert({c.col, c.row});
  CHECK(s.size() == 9);
  CHECK_THROWS_AS(random_objects(3, 10, rng), Error);
}

TEST_CASE("synthetic training sets are reproducible and relabel consistently") {
  WorkloadConfig wl;
  wl.samples_per_scene = 10;
  RewardConfig cfg;
  const auto curves = RewardCurves::defaults();
  const auto a = synthetic_training_set(40, wl, curves, cfg, 7);
  const auto b = synthetic_training_set(40, wl, curves, cfg, 7);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].arm == b[i].arm);
    CHECK(a[i].reward == b[i].reward);
    CHECK(a[i].reward == true_reward(a[i].context, a[i].arm, curves, cfg));
  }
  RewardConfig loo = cfg;
  loo.include_isd = false;
  const auto re = relabel(a, curves, loo);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(re[i].reward == true_reward(a[i].context, a[i].arm, curves, loo));
}
