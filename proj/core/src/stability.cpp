#include "memnet/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "memnet/errors.hpp"
#include "memnet/parallel.hpp"

namespace memnet {

void ProtocolParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("ProtocolParams: alpha must lie in [0, 1]");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError("ProtocolParams: beta must be positive");
  }
  if (theta < 1 || theta > theta_max) {
    throw ParameterError("ProtocolParams: need 1 <= theta <= theta_max");
  }
}

double ModePolynomial::eval(double gamma) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = acc * gamma + *it;
  }
  return acc;
}

ModePolynomial ModePolynomial::trinomial(int theta, double a0, double a_theta) {
  ModePolynomial p;
  p.coefficients.assign(static_cast<std::size_t>(theta) + 2, 0.0);
  p.coefficients[0] = a0;
  p.coefficients[theta] = a_theta;
  p.coefficients[theta + 1] = 1.0;
  return p;
}

ModePolynomial mode_polynomial(const ProtocolParams& params, double lambda) {
  params.validate();
  const double phi = 1.0 - params.beta * lambda;
  return ModePolynomial::trinomial(params.theta, -(1.0 - params.alpha) * phi,
                                   -params.alpha * phi);
}

std::vector<std::complex<double>> polynomial_roots(const ModePolynomial& p) {
  const int m = p.degree();
  if (m < 1) throw ParameterError("polynomial_roots: degree must be >= 1");
  if (m == 1) return {{-p.coefficients[0], 0.0}};
  // Companion matrix (monic by construction: leading coefficient 1).
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -p.coefficients[i];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("polynomial_roots: companion eigensolver failed");
  }
  std::vector<std::complex<double>> roots(m);
  for (int i = 0; i < m; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

double spectral_radius(const ModePolynomial& p) {
  double radius = 0.0;
  for (const auto& root : polynomial_roots(p)) radius = std::max(radius, std::abs(root));
  return radius;
}

bool is_schur_roots(const ModePolynomial& p) {
  return spectral_radius(p) < 1.0 - kTolSchur;
}

bool jury_schur(const ModePolynomial& p) {
  const int m = p.degree();
  if (m < 1) throw ParameterError("jury_schur: degree must be >= 1");
  std::vector<double> row = p.coefficients;
  if (row.back() < 0.0) {
    for (double& c : row) c = -c;
  }
  if (m == 1) return std::abs(row[0]) < row[1];

  // Value conditions at the two real unit-circle points.
  if (!(p.eval(1.0) > 0.0)) return false;
  const double at_minus_one = p.eval(-1.0) * (m % 2 == 0 ? 1.0 : -1.0);
  if (!(at_minus_one > 0.0)) return false;
  if (!(std::abs(row[0]) < row.back())) return false;

  // Reduction cascade: each round pairs the row with its reverse and must keep
  // |first| strictly above |last|. Entries are quadratic in the previous row,
  // so each derived row is rescaled to unit max magnitude (the conditions are
  // scale invariant); a vanishing leading entry on the rescaled row makes the
  // table degenerate ("marginal") and reports unstable.
  while (row.size() > 3) {
    const std::size_t len = row.size();
    std::vector<double> next(len - 1);
    double scale = 0.0;
    for (std::size_t k = 0; k + 1 < len; ++k) {
      next[k] = row[0] * row[k] - row[len - 1] * row[len - 1 - k];
      scale = std::max(scale, std::abs(next[k]));
    }
    if (scale == 0.0) return false;
    for (double& v : next) v /= scale;
    if (std::abs(next[0]) <= kTolJury) return false;
    if (!(std::abs(next[0]) > std::abs(next[len - 2]))) return false;
    row = std::move(next);
  }
  return true;
}

bool consensus_check(const Spectrum& s, const ProtocolParams& params) {
  params.validate();
  if (!s.connected()) {
    throw PreconditionError("consensus_check: spectrum is not from a connected graph");
  }
  for (const Mode& mode : nonzero_modes(s)) {
    if (!is_schur_roots(mode_polynomial(params, mode.lambda))) return false;
  }
  return true;
}

ConsensusRegion consensus_region(const Spectrum& s, int theta,
                                 std::vector<double> alpha_grid,
                                 std::vector<double> beta_grid, int threads) {
  if (alpha_grid.empty() || beta_grid.empty()) {
    throw ParameterError("consensus_region: grids must be nonempty");
  }
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ParameterError("consensus_region: alpha grid must lie in (0, 1)");
    }
  }
  for (double b : beta_grid) {
    if (!(b > 0.0)) throw ParameterError("consensus_region: beta grid must be positive");
  }
  ConsensusRegion region;
  region.alpha_grid = std::move(alpha_grid);
  region.beta_grid = std::move(beta_grid);
  const int rows = static_cast<int>(region.alpha_grid.size());
  const int cols = static_cast<int>(region.beta_grid.size());
  region.stable.assign(rows, std::vector<std::uint8_t>(cols, 0));
  parallel_for(rows * cols, threads, [&](int cell) {
    const int i = cell / cols;
    const int j = cell % cols;
    const ProtocolParams params{region.alpha_grid[i], region.beta_grid[j], theta, theta};
    region.stable[i][j] = consensus_check(s, params) ? 1 : 0;
  });
  return region;
}

bool verify_inheritance(const Spectrum& s, double alpha, double beta, int theta) {
  if (!(beta > 0.0 && beta < 2.0 / s.lambda_max())) {
    throw PreconditionError("verify_inheritance: beta must lie in (0, 2/lambda_n)");
  }
  const ProtocolParams deeper{alpha, beta, theta + 1, theta + 1};
  if (!consensus_check(s, deeper)) return true;  // vacuous
  const ProtocolParams shallower{alpha, beta, theta, theta};
  return consensus_check(s, shallower);
}

}  // namespace memnet
