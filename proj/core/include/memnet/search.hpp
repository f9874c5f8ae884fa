#pragma once

#include <string>
#include <utility>
#include <vector>

#include "memnet/graph.hpp"
#include "memnet/h2.hpp"
#include "memnet/simulate.hpp"

namespace memnet {

/// Coupling-gain regions with distinct optimal-depth behaviour:
///   low:    0 < beta <= 1/lambda_n   (deepest accessible memory is optimal)
///   high:   1/lambda_2 <= beta < 2/lambda_n  (depth 1 is optimal)
///   middle: between the two (empirical optimum only)
/// On complete graphs 1/lambda_2 = 1/lambda_n and the overlap point counts as
/// high, matching the smallest-depth tie-break there.
enum class BetaRegion { low, middle, high, out_of_range };

std::string to_string(BetaRegion region);

BetaRegion classify_beta(const Spectrum& s, double beta);

struct DepthSearchResult {
  int optimal_theta = 0;
  /// (theta, h2) for every evaluated stable depth, theta ascending.
  std::vector<std::pair<int, double>> values;
  BetaRegion beta_region = BetaRegion::out_of_range;
  /// True when instability cut the depth range short of theta_max.
  bool truncated = false;
};

enum class DepthMethod { analytic, simulate };

/// Evaluate the metric for theta = 1..theta_max and return the argmin, ties
/// broken toward the smallest depth. Depths that lose consensus are skipped
/// (for beta < 2/lambda_n instability at some depth ends the scan, since
/// deeper memory inherits it). The analytic method uses the reduced-system
/// route for beta < 2/lambda_n and the per-mode Lyapunov solve beyond it;
/// the simulate method needs the graph and a SimConfig.
/// Throws PreconditionError when no depth is stable.
DepthSearchResult optimal_depth(const Spectrum& s, double alpha, double beta,
                                int theta_max,
                                DepthMethod method = DepthMethod::analytic,
                                const WeightedGraph* g = nullptr,
                                const SimConfig* cfg = nullptr);

struct ParamSearchResult {
  double alpha_opt = 0.0;
  double beta_opt = 0.0;
  double value = 0.0;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  /// Coarse-grid metric values; NaN marks unstable cells.
  std::vector<std::vector<double>> grid_values;
};

/// Coarse grid scan of the analytic metric over stable cells followed by
/// refine_iters rounds of local refinement (spacing halved around the
/// incumbent each round; the incumbent only ever improves). Deterministic:
/// fixed scan order, first minimum wins.
/// Throws PreconditionError when every coarse cell is unstable.
ParamSearchResult optimal_params(const Spectrum& s, int theta,
                                 std::vector<double> alpha_grid,
                                 std::vector<double> beta_grid,
                                 int refine_iters, int threads = 0);

struct BetaSweepRow {
  double beta = 0.0;
  int optimal_theta = 0;  // 0 when no depth is stable at this beta
  double h2 = 0.0;        // NaN when no depth is stable
};

struct BetaSweep {
  std::vector<BetaSweepRow> rows;
  double inv_lambda2 = 0.0;
  double inv_lambda_n = 0.0;
  double two_inv_lambda_n = 0.0;
};

/// Run optimal_depth for every beta in the grid (all within (0, 2/lambda_n))
/// and report the per-beta optimum together with the reference gains.
BetaSweep sweep_beta(const Spectrum& s, double alpha, int theta_max,
                     const std::vector<double>& beta_grid, int threads = 0);

/// count evenly spaced points from lo to hi inclusive (count >= 1).
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace memnet
