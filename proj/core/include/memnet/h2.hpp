#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "memnet/graph.hpp"
#include "memnet/stability.hpp"

namespace memnet {

/// Modes with |phi| at or below this are routed to the exact phi = 0 branch
/// (contribution 1); the reduced linear system grows ill-conditioned there
/// while its limit is known.
inline constexpr double kTolPhi = 1e-10;

/// Per-eigenvalue scalars entering the analytic metric. psi is NaN when
/// eta == 0 (cannot happen for |phi| < 1 and alpha in [0,1]).
struct ModeQuantities {
  double phi;   // 1 - beta*lambda
  double zeta;  // 2*alpha*(1-alpha)*phi^2
  double eta;   // [(1-alpha)^2 + alpha^2]*phi^2 - 1
  double nu;    // alpha*phi
  double mu;    // (1-alpha)*phi
  double psi;   // alpha*zeta*phi/eta - (1-alpha)*phi
  int iota;     // floor((theta+1)/2), order of the reduced system
};

ModeQuantities mode_quantities(double alpha, double beta, int theta, double lambda);

/// Reduced iota x iota linear system whose solution's last component gives the
/// mode's Gramian corner entry. Requires alpha in (0,1) and |phi| > kTolPhi.
struct ModeSystem {
  Eigen::MatrixXd gamma;
  Eigen::VectorXd xi;
};

ModeSystem h2_mode_system(int theta, double alpha, const ModeQuantities& q);

enum class H2Method {
  table_ii,            // general-depth analytic route (reduced per-mode systems)
  closed_small_theta,  // closed rational forms, theta in 1..4
  half_alpha_cf,       // alpha = 1/2 continued-fraction route
  memoryless,          // alpha = 1
  pure_memory,         // alpha = 0 (theta-independent, equals memoryless)
  lyapunov_oracle,     // per-mode discrete Lyapunov solve (independent check)
  gramian_bruteforce,  // truncated Gramian sum on the full augmented system
  limit_half_alpha,    // nominal depth -> infinity reference value at alpha = 1/2
};

std::string to_string(H2Method method);

struct ModeContribution {
  double lambda;
  int multiplicity;
  double contribution;
};

/// Squared H2 norm of the noise-to-disagreement transfer matrix (equal to the
/// steady-state total mean-square deviation), with the per-distinct-eigenvalue
/// breakdown. value always equals the multiplicity-weighted sum of the
/// contributions.
struct H2Report {
  double value = 0.0;
  std::vector<ModeContribution> per_mode;
  H2Method method = H2Method::table_ii;
  double alpha = 0.0;
  double beta = 0.0;
  int theta = 0;  // 0 when the method does not depend on a depth
};

/// General-depth analytic metric: for each nonzero mode solve the reduced
/// system and accumulate (-1 - zeta*w)/eta, with phi = 0 modes contributing 1.
/// Requires alpha in (0,1), 0 < beta < 2/lambda_n, and consensus at theta.
H2Report h2_analytic(const Spectrum& s, const ProtocolParams& params);

/// Closed rational expressions for theta in {1,2,3,4}.
H2Report h2_closed_small_theta(const Spectrum& s, const ProtocolParams& params);

/// Continued-fraction sequences over x -> 2/tau - 1/x with bases F_0 = 1 and
/// G_0 = 1/tau; defined for tau in (-1,0) or (0,1), where |F_n|, |G_n| > 1 for
/// n >= 1 keeps the forward recursion stable.
double cf_F(int n, double tau);
double cf_G(int n, double tau);

/// alpha = 1/2 route: per-mode value (phi - 2H)/((phi^2-2)H + phi) with H the
/// order-(iota-1) continued fraction (F for odd theta, G for even theta).
H2Report h2_half_alpha(const Spectrum& s, double beta, int theta);

/// Sum of 1/(1 - phi_i^2) over nonzero modes (alpha = 1).
H2Report h2_memoryless(const Spectrum& s, double beta);

/// alpha = 0: depth-independent and equal to the memoryless value.
H2Report h2_pure_memory(const Spectrum& s, double beta, int theta);

/// Sum of 2/(2 - phi_i^2) over nonzero modes: the nominal large-depth
/// reference value for alpha = 1/2.
H2Report h2_limit_half_alpha(const Spectrum& s, double beta);

/// Independent oracle: per mode build the (theta+1)-dimensional companion-form
/// system (shift structure, last row [(1-alpha)phi, 0, ..., 0, alpha*phi],
/// input on the last coordinate), solve the discrete Lyapunov equation
/// A W A^T + B B^T = W through the vectorized linear system, and accumulate
/// the output-coordinate diagonal entry. Valid for any alpha in [0,1] with
/// consensus at theta.
H2Report h2_lyapunov_oracle(const Spectrum& s, const ProtocolParams& params);

struct GramianSum {
  double value = 0.0;
  /// Geometric extrapolation of the truncated tail; accurate when < 1e-10.
  double tail_bound = 0.0;
  bool tail_ok = false;
};

/// Truncated Gramian sum on the full n*(theta+1)-dimensional augmented system,
/// with the disagreement projector applied at readout. Dimension is capped at
/// 400; an unmet tail bound is reported, not thrown.
GramianSum h2_gramian_bruteforce(const WeightedGraph& g, const ProtocolParams& params,
                                 int horizon);

}  // namespace memnet
