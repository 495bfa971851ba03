#include "saslo/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "saslo/error.hpp"

namespace saslo {

double cell_distance(Cell a, Cell b) {
  const double dx = a.col - b.col;
  const double dy = a.row - b.row;
  return std::sqrt(dx * dx + dy * dy);
}

void ContextGrid::validate() const {
  require(grid.n_g >= 2, "context grid must be at least 2x2");
  require(grid.cells.size() == static_cast<std::size_t>(grid.n_g) * grid.n_g,
          "context grid cell count mismatch");
  require(!objects.empty(), "context needs at least one object");
  for (std::size_t i = 0; i < objects.size(); ++i)
    require(grid.contains(objects[i].col, objects[i].row),
            "object " + std::to_string(i) + " lies outside the grid");
}

std::vector<StimulusAssessment> assess_layout(const ContextGrid& context, const Layout& arm,
                                              const RewardConfig& cfg) {
  const auto n = arm.positions.size();
  require(n == context.objects.size(), "layout has " + std::to_string(n) +
                                           " positions but context has " +
                                           std::to_string(context.objects.size()) + " objects");
  for (std::size_t i = 0; i < n; ++i) {
    const Cell p = arm.positions[i];
    require(context.grid.contains(p.col, p.row),
            "stimulus " + std::to_string(i) + " position (" + std::to_string(p.col) + "," +
                std::to_string(p.row) + ") lies outside the grid");
  }
  std::vector<StimulusAssessment> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell p = arm.positions[i];
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, cell_distance(p, arm.positions[j]));
    out[i].luminance = context.grid.at(p.col, p.row);
    out[i].nearest_neighbor_distance = nearest * cfg.degrees_per_cell;
    out[i].object_distance = cell_distance(p, context.objects[i]);
  }
  return out;
}

FeatureVector build_features(const ContextGrid& context, const Layout& arm,
                             const RewardCurves& curves, const RewardConfig& cfg) {
  const auto assessed = assess_layout(context, arm, cfg);
  FeatureVector x(3 * static_cast<Eigen::Index>(assessed.size()));
  for (std::size_t i = 0; i < assessed.size(); ++i) {
    const auto c = component_rewards(assessed[i], curves, cfg);
    x[3 * i] = c.luminance;
    x[3 * i + 1] = c.isd;
    x[3 * i + 2] = c.sod;
  }
  return x;
}

double true_reward(const ContextGrid& context, const Layout& arm, const RewardCurves& curves,
                   const RewardConfig& cfg) {
  return layout_reward(assess_layout(context, arm, cfg), curves, cfg);
}

std::vector<Cell> feasible_cells(const LuminanceGrid& grid, Cell object, double d_max) {
  std::vector<Cell> out;
  if (!grid.contains(object.col, object.row)) return out;
  const int reach = static_cast<int>(std::floor(d_max));
  for (int row = std::max(0, object.row - reach); row <= std::min(grid.n_g - 1, object.row + reach); ++row)
    for (int col = std::max(0, object.col - reach); col <= std::min(grid.n_g - 1, object.col + reach); ++col)
      if (cell_distance({col, row}, object) <= d_max + 1e-12) out.push_back({col, row});
  return out;
}

LayoutSampler::LayoutSampler(const ContextGrid& context, double d_max) : n_g_(context.grid.n_g) {
  require(!context.objects.empty(), "context needs at least one object");
  for (std::size_t i = 0; i < context.objects.size(); ++i) {
    feasible_.push_back(feasible_cells(context.grid, context.objects[i], d_max));
    if (feasible_.back().empty())
      fail("object " + std::to_string(i) + " has no feasible stimulus position");
  }
}

Layout LayoutSampler::draw(Rng& rng) const {
  const std::size_t n = feasible_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<char> taken(static_cast<std::size_t>(n_g_) * n_g_);
  std::vector<Cell> free_cells;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(taken.begin(), taken.end(), 0);
    Layout out{std::vector<Cell>(n)};
    bool ok = true;
    for (std::size_t i : order) {
      free_cells.clear();
      for (Cell c : feasible_[i])
        if (!taken[static_cast<std::size_t>(c.row) * n_g_ + c.col]) free_cells.push_back(c);
      if (free_cells.empty()) {
        ok = false;
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
      const Cell c = free_cells[pick(rng)];
      taken[static_cast<std::size_t>(c.row) * n_g_ + c.col] = 1;
      out.positions[i] = c;
    }
    if (ok) return out;
  }
  // Report the most constrained object as the culprit.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (feasible_[i].size() < feasible_[worst].size()) worst = i;
  fail("object " + std::to_string(worst) +
       " has no collision-free feasible stimulus position");
}

Layout random_layout(const ContextGrid& context, const RewardConfig& cfg, Rng& rng) {
  return LayoutSampler(context, cfg.d_max).draw(rng);
}

std::vector<Cell> random_objects(int n_g, int n, Rng& rng) {
  require(n <= n_g * n_g, "more objects than grid cells");
  std::vector<int> cells(static_cast<std::size_t>(n_g) * n_g);
  std::iota(cells.begin(), cells.end(), 0);
  std::vector<Cell> out;
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
    std::swap(cells[i], cells[pick(rng)]);
    out.push_back({cells[i] % n_g, cells[i] / n_g});
  }
  return out;
}

}  // namespace saslo
