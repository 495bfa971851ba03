#pragma once

// Bandit context (luminance grid + object cells), arms (stimulus layouts) and
// the 3N-dimensional context-arm feature vector.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "saslo/luminance.hpp"
#include "saslo/reward.hpp"
#include "saslo/rng.hpp"

namespace saslo {

struct Cell {
  int col = 0;
  int row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

double cell_distance(Cell a, Cell b);

struct ContextGrid {
  LuminanceGrid grid;
  std::vector<Cell> objects;  // one per stimulus

  void validate() const;
  int n_stimuli() const { return static_cast<int>(objects.size()); }
};

struct Layout {
  std::vector<Cell> positions;

  friend bool operator==(const Layout&, const Layout&) = default;
};

using FeatureVector = Eigen::VectorXd;

// Raw per-stimulus factors of a layout in a context: cell luminance,
// nearest-neighbour distance in degrees, distance to own object in cells.
std::vector<StimulusAssessment> assess_layout(const ContextGrid& context, const Layout& arm,
                                              const RewardConfig& cfg);

// Slot 3i / 3i+1 / 3i+2 hold the luminance, ISD and SOD rewards of stimulus i.
// With cfg.include_isd == false the ISD slots are zero.
FeatureVector build_features(const ContextGrid& context, const Layout& arm,
                             const RewardCurves& curves, const RewardConfig& cfg);

// Ground-truth layout reward for a context/arm pair.
double true_reward(const ContextGrid& context, const Layout& arm, const RewardCurves& curves,
                   const RewardConfig& cfg);

// Cells within d_max of `object`, in row-major order.
std::vector<Cell> feasible_cells(const LuminanceGrid& grid, Cell object, double d_max);

// Draws layouts with every stimulus on a distinct cell within d_max of its own
// object. Construction throws, naming the object, when an object has no
// feasible cell.
class LayoutSampler {
 public:
  LayoutSampler(const ContextGrid& context, double d_max);

  Layout draw(Rng& rng) const;
  const std::vector<Cell>& feasible(int stimulus) const { return feasible_[stimulus]; }

 private:
  int n_g_;
  std::vector<std::vector<Cell>> feasible_;
};

Layout random_layout(const ContextGrid& context, const RewardConfig& cfg, Rng& rng);

// N distinct random object cells on an n_g grid.
std::vector<Cell> random_objects(int n_g, int n, Rng& rng);

}  // namespace saslo
