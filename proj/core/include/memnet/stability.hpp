#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "memnet/graph.hpp"

namespace memnet {

/// A root counts as inside the unit circle iff its modulus is < 1 - kTolSchur;
/// boundary cases are classified unstable.
inline constexpr double kTolSchur = 1e-9;
/// Threshold below which a vanishing leading entry of a reduction row makes the
/// tabular stability test report "marginal" (mapped to unstable).
inline constexpr double kTolJury = 1e-12;

/// Protocol parameters: convex weight alpha between the real-time term and the
/// memory term, coupling gain beta on the Laplacian feedback, memory depth
/// theta, and the maximum accessible depth theta_max.
struct ProtocolParams {
  double alpha = 0.5;
  double beta = 0.1;
  int theta = 1;
  int theta_max = 1;

  /// Throws ParameterError unless 0 <= alpha <= 1, beta > 0,
  /// 1 <= theta <= theta_max.
  void validate() const;
};

/// Characteristic trinomial of one error mode,
///   gamma^(theta+1) - alpha*(1-beta*lambda)*gamma^theta - (1-alpha)*(1-beta*lambda),
/// stored as ascending coefficients (length theta+2, leading coefficient 1;
/// only powers 0, theta, theta+1 may be nonzero).
struct ModePolynomial {
  std::vector<double> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  int theta() const { return degree() - 1; }
  double eval(double gamma) const;

  /// gamma^(theta+1) + a_theta*gamma^theta + a0, for tests that need
  /// trinomials outside the protocol's parameter range.
  static ModePolynomial trinomial(int theta, double a0, double a_theta);
};

ModePolynomial mode_polynomial(const ProtocolParams& params, double lambda);

/// All roots, from the companion-matrix eigendecomposition.
std::vector<std::complex<double>> polynomial_roots(const ModePolynomial& p);

/// Largest root modulus.
double spectral_radius(const ModePolynomial& p);

/// True iff every root has modulus < 1 - kTolSchur (companion-matrix route).
bool is_schur_roots(const ModePolynomial& p);

/// Tabular Schur test: value conditions at +-1 plus the |first| > |last|
/// cascade over reduction rows. Agrees with is_schur_roots away from the
/// stability boundary; marginal tables (leading entry below kTolJury) report
/// false.
bool jury_schur(const ModePolynomial& p);

/// True iff every non-consensus mode polynomial is Schur, i.e. (alpha, beta)
/// lies in the depth-theta consensus region. The zero eigenvalue is excluded
/// by construction; duplicate eigenvalues are tested once.
/// Throws PreconditionError for a disconnected spectrum.
bool consensus_check(const Spectrum& s, const ProtocolParams& params);

struct ConsensusRegion {
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  /// stable[i][j] = consensus at (alpha_grid[i], beta_grid[j]).
  std::vector<std::vector<std::uint8_t>> stable;
};

/// Evaluate consensus_check over the grid; cells are independent and are
/// evaluated on up to `threads` workers (0 = hardware concurrency).
ConsensusRegion consensus_region(const Spectrum& s, int theta,
                                 std::vector<double> alpha_grid,
                                 std::vector<double> beta_grid,
                                 int threads = 0);

/// True iff consensus at depth theta+1 implies consensus at depth theta.
/// Requires 0 < beta < 2/lambda_n, where the implication is guaranteed.
bool verify_inheritance(const Spectrum& s, double alpha, double beta, int theta);

}  // namespace memnet
