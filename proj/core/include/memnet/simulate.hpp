#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "memnet/graph.hpp"
#include "memnet/stability.hpp"

namespace memnet {

struct SimConfig {
  std::uint64_t seed = 0;
  int trials = 64;
  int horizon = 20000;
  int burn_in = 2000;
  /// Spread of the random initial state layers; 0 starts every layer at
  /// consensus so the burn-in only has to cover noise transients.
  double init_scale = 0.0;

  void validate() const;  // throws ParameterError
};

struct SimResult {
  double msd_estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int horizon = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
};

/// Noise-free run of x(t+1) = alpha*phi(t) + (1-alpha)*phi(t-theta) with
/// phi(t) = (I - beta*L) x(t), from the supplied (theta+1) x n history
/// (rows x(-theta)..x(0)). Returns the disagreement norm ||x(t) - mean|| for
/// t = 0..horizon.
std::vector<double> simulate_noise_free(const WeightedGraph& g,
                                        const ProtocolParams& params,
                                        const Eigen::MatrixXd& x0_history,
                                        int horizon);

/// Monte Carlo estimate of the steady-state total mean-square deviation under
/// unit-covariance white noise. Trial k draws from SplitMix64 substream k of
/// cfg.seed (initial layers first if init_scale > 0, then n samples per step
/// in agent order); the per-trial time averages over (burn_in, horizon] are
/// reduced in trial order, so the result is bit-reproducible for a fixed
/// configuration regardless of `threads`.
/// Throws PreconditionError when the parameters do not give consensus.
SimResult estimate_msd(const WeightedGraph& g, const ProtocolParams& params,
                       const SimConfig& cfg, int threads = 0);

}  // namespace memnet
