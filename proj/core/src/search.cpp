#include "memnet/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "memnet/errors.hpp"
#include "memnet/parallel.hpp"

namespace memnet {

std::string to_string(BetaRegion region) {
  switch (region) {
    case BetaRegion::low: return "low";
    case BetaRegion::middle: return "middle";
    case BetaRegion::high: return "high";
    case BetaRegion::out_of_range: return "out_of_range";
  }
  return "unknown";
}

BetaRegion classify_beta(const Spectrum& s, double beta) {
  const double lambda_n = s.lambda_max();
  if (!(beta > 0.0) || beta >= 2.0 / lambda_n) return BetaRegion::out_of_range;
  // On complete graphs 1/lambda_2 == 1/lambda_n; the shared point counts as
  // high, where the smallest-depth tie-break applies.
  if (beta >= 1.0 / s.lambda2()) return BetaRegion::high;
  if (beta <= 1.0 / lambda_n) return BetaRegion::low;
  return BetaRegion::middle;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ParameterError("linspace: count must be >= 1");
  std::vector<double> points(count);
  if (count == 1) {
    points[0] = lo;
    return points;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) points[i] = lo + step * i;
  points.back() = hi;
  return points;
}

namespace {

double depth_metric(const Spectrum& s, double alpha, double beta, int theta,
                    DepthMethod method, const WeightedGraph* g, const SimConfig* cfg) {
  if (method == DepthMethod::simulate) {
    if (g == nullptr) {
      throw ParameterError("optimal_depth: simulate method needs the graph");
    }
    SimConfig local = cfg != nullptr ? *cfg : SimConfig{};
    const ProtocolParams params{alpha, beta, theta, theta};
    return estimate_msd(*g, params, local).msd_estimate;
  }
  const ProtocolParams params{alpha, beta, theta, theta};
  if (beta < 2.0 / s.lambda_max()) {
    if (alpha == 1.0) return h2_memoryless(s, beta).value;
    if (alpha == 0.0) return h2_pure_memory(s, beta, theta).value;
    return h2_analytic(s, params).value;
  }
  // Beyond the memoryless gain window the reduced-system route is not backed
  // by the depth-inheritance guarantee; the per-mode Lyapunov solve covers
  // whatever remains stable there.
  return h2_lyapunov_oracle(s, params).value;
}

}  // namespace

DepthSearchResult optimal_depth(const Spectrum& s, double alpha, double beta,
                                int theta_max, DepthMethod method,
                                const WeightedGraph* g, const SimConfig* cfg) {
  if (theta_max < 1) throw ParameterError("optimal_depth: theta_max must be >= 1");
  if (!s.connected()) {
    throw PreconditionError("optimal_depth: spectrum is not from a connected graph");
  }
  DepthSearchResult result;
  result.beta_region = classify_beta(s, beta);

  const bool prefix_only = beta < 2.0 / s.lambda_max();
  for (int theta = 1; theta <= theta_max; ++theta) {
    const ProtocolParams params{alpha, beta, theta, theta};
    if (!consensus_check(s, params)) {
      result.truncated = true;
      if (prefix_only) break;  // deeper depths inherit the instability
      continue;
    }
    result.values.emplace_back(theta,
                               depth_metric(s, alpha, beta, theta, method, g, cfg));
  }
  if (result.values.empty()) {
    throw PreconditionError("optimal_depth: no stable depth in 1..theta_max");
  }
  result.optimal_theta = result.values.front().first;
  double best = result.values.front().second;
  for (const auto& [theta, value] : result.values) {
    if (value < best) {  // strict: ties stay at the smallest depth
      best = value;
      result.optimal_theta = theta;
    }
  }
  return result;
}

ParamSearchResult optimal_params(const Spectrum& s, int theta,
                                 std::vector<double> alpha_grid,
                                 std::vector<double> beta_grid, int refine_iters,
                                 int threads) {
  if (alpha_grid.empty() || beta_grid.empty()) {
    throw ParameterError("optimal_params: grids must be nonempty");
  }
  const double beta_cap = 2.0 / s.lambda_max();
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ParameterError("optimal_params: alpha grid must lie in (0, 1)");
    }
  }
  for (double b : beta_grid) {
    if (!(b > 0.0 && b < beta_cap)) {
      throw ParameterError("optimal_params: beta grid must lie in (0, 2/lambda_n)");
    }
  }
  if (refine_iters < 0) throw ParameterError("optimal_params: refine_iters must be >= 0");

  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  auto cell_value = [&](double alpha, double beta) {
    const ProtocolParams params{alpha, beta, theta, theta};
    if (!consensus_check(s, params)) return kNaN;
    return h2_analytic(s, params).value;
  };

  ParamSearchResult result;
  result.alpha_grid = std::move(alpha_grid);
  result.beta_grid = std::move(beta_grid);
  const int rows = static_cast<int>(result.alpha_grid.size());
  const int cols = static_cast<int>(result.beta_grid.size());
  result.grid_values.assign(rows, std::vector<double>(cols, kNaN));
  parallel_for(rows * cols, threads, [&](int cell) {
    const int i = cell / cols;
    const int j = cell % cols;
    result.grid_values[i][j] = cell_value(result.alpha_grid[i], result.beta_grid[j]);
  });

  double best = std::numeric_limits<double>::infinity();
  double alpha_opt = kNaN, beta_opt = kNaN;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = result.grid_values[i][j];
      if (std::isfinite(v) && v < best) {
        best = v;
        alpha_opt = result.alpha_grid[i];
        beta_opt = result.beta_grid[j];
      }
    }
  }
  if (!std::isfinite(best)) {
    throw PreconditionError("optimal_params: every grid cell is unstable");
  }

  // Local refinement: halve the spacing around the incumbent each round and
  // rescan a fixed 7x7 neighbourhood clamped to the open parameter domain.
  double da = rows > 1 ? result.alpha_grid[1] - result.alpha_grid[0]
                       : 0.25 * std::min(alpha_opt, 1.0 - alpha_opt);
  double db = cols > 1 ? result.beta_grid[1] - result.beta_grid[0]
                       : 0.25 * std::min(beta_opt, beta_cap - beta_opt);
  constexpr int kLocal = 3;  // offsets -3..3
  for (int round = 0; round < refine_iters; ++round) {
    da *= 0.5;
    db *= 0.5;
    std::vector<std::pair<double, double>> candidates;
    for (int i = -kLocal; i <= kLocal; ++i) {
      for (int j = -kLocal; j <= kLocal; ++j) {
        const double a = alpha_opt + i * da;
        const double b = beta_opt + j * db;
        if (a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= beta_cap) continue;
        candidates.emplace_back(a, b);
      }
    }
    std::vector<double> values(candidates.size());
    parallel_for(static_cast<int>(candidates.size()), threads, [&](int k) {
      values[k] = cell_value(candidates[k].first, candidates[k].second);
    });
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (std::isfinite(values[k]) && values[k] < best) {
        best = values[k];
        alpha_opt = candidates[k].first;
        beta_opt = candidates[k].second;
      }
    }
  }

  result.alpha_opt = alpha_opt;
  result.beta_opt = beta_opt;
  result.value = best;
  return result;
}

BetaSweep sweep_beta(const Spectrum& s, double alpha, int theta_max,
                     const std::vector<double>& beta_grid, int threads) {
  if (beta_grid.empty()) throw ParameterError("sweep_beta: beta grid must be nonempty");
  const double beta_cap = 2.0 / s.lambda_max();
  for (double b : beta_grid) {
    if (!(b > 0.0 && b < beta_cap)) {
      throw ParameterError("sweep_beta: beta grid must lie in (0, 2/lambda_n)");
    }
  }
  BetaSweep sweep;
  sweep.inv_lambda2 = 1.0 / s.lambda2();
  sweep.inv_lambda_n = 1.0 / s.lambda_max();
  sweep.two_inv_lambda_n = beta_cap;
  sweep.rows.resize(beta_grid.size());
  parallel_for(static_cast<int>(beta_grid.size()), threads, [&](int i) {
    BetaSweepRow row;
    row.beta = beta_grid[i];
    try {
      const DepthSearchResult depth = optimal_depth(s, alpha, row.beta, theta_max);
      row.optimal_theta = depth.optimal_theta;
      for (const auto& [theta, value] : depth.values) {
        if (theta == depth.optimal_theta) row.h2 = value;
      }
    } catch (const PreconditionError&) {
      row.optimal_theta = 0;
      row.h2 = std::numeric_limits<double>::quiet_NaN();
    }
    sweep.rows[i] = row;
  });
  return sweep;
}

}  // namespace memnet
