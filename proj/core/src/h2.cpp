#include "memnet/h2.hpp"

#include <Eigen/LU>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "memnet/errors.hpp"

namespace memnet {

namespace {

void require_gain_window(const Spectrum& s, double beta, const char* who) {
  if (!s.connected()) {
    throw PreconditionError(std::string(who) + ": spectrum is not from a connected graph");
  }
  if (!(beta > 0.0 && beta < 2.0 / s.lambda_max())) {
    throw PreconditionError(std::string(who) + ": beta must lie in (0, 2/lambda_n)");
  }
}

void require_interior_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError(std::string(who) +
                         ": alpha must lie in (0, 1); use h2_memoryless or "
                         "h2_pure_memory at the endpoints");
  }
}

H2Report accumulate_report(H2Method method, double alpha, double beta, int theta,
                           const Spectrum& s,
                           const std::function<double(const Mode&)>& contribution) {
  H2Report report;
  report.method = method;
  report.alpha = alpha;
  report.beta = beta;
  report.theta = theta;
  for (const Mode& mode : nonzero_modes(s)) {
    const double c = contribution(mode);
    report.per_mode.push_back({mode.lambda, mode.multiplicity, c});
    report.value += mode.multiplicity * c;
  }
  return report;
}

}  // namespace

std::string to_string(H2Method method) {
  switch (method) {
    case H2Method::table_ii: return "table_ii";
    case H2Method::closed_small_theta: return "closed_small_theta";
    case H2Method::half_alpha_cf: return "half_alpha_cf";
    case H2Method::memoryless: return "memoryless";
    case H2Method::pure_memory: return "pure_memory";
    case H2Method::lyapunov_oracle: return "lyapunov_oracle";
    case H2Method::gramian_bruteforce: return "gramian_bruteforce";
    case H2Method::limit_half_alpha: return "limit_half_alpha";
  }
  return "unknown";
}

ModeQuantities mode_quantities(double alpha, double beta, int theta, double lambda) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("mode_quantities: alpha must lie in [0, 1]");
  }
  if (!(beta > 0.0)) throw ParameterError("mode_quantities: beta must be positive");
  if (theta < 1) throw ParameterError("mode_quantities: theta must be >= 1");
  ModeQuantities q;
  q.phi = 1.0 - beta * lambda;
  const double phi2 = q.phi * q.phi;
  q.zeta = 2.0 * alpha * (1.0 - alpha) * phi2;
  q.eta = ((1.0 - alpha) * (1.0 - alpha) + alpha * alpha) * phi2 - 1.0;
  q.nu = alpha * q.phi;
  q.mu = (1.0 - alpha) * q.phi;
  q.psi = q.eta == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                       : alpha * q.zeta * q.phi / q.eta - (1.0 - alpha) * q.phi;
  q.iota = (theta + 1) / 2;
  return q;
}

ModeSystem h2_mode_system(int theta, double alpha, const ModeQuantities& q) {
  if (theta < 1) throw ParameterError("h2_mode_system: theta must be >= 1");
  require_interior_alpha(alpha, "h2_mode_system");
  if (std::abs(q.phi) <= kTolPhi) {
    throw PreconditionError(
        "h2_mode_system: |phi| <= tolerance, use the exact phi = 0 branch");
  }

  const int iota = (theta + 1) / 2;
  ModeSystem sys;
  sys.gamma = Eigen::MatrixXd::Zero(iota, iota);
  sys.xi = Eigen::VectorXd::Zero(iota);

  if (iota == 1) {
    // theta = 1: gamma = -psi - 1, xi = alpha*phi/eta
    // theta = 2: gamma = -psi*phi - 1, xi = alpha*phi^2/eta
    sys.gamma(0, 0) = theta == 1 ? -q.psi - 1.0 : -q.psi * q.phi - 1.0;
    sys.xi(0) = theta == 1 ? q.nu / q.eta : q.nu * q.phi / q.eta;
    return sys;
  }

  // iota >= 2: anti-tridiagonal band. First row ends with
  // [nu, -mu*psi - 1], interior rows carry [nu, (1-2a)phi^2 - 1, nu] across
  // the anti-diagonal, and the last row holds the parity-dependent corner
  // entries chi_1, chi_2.
  const bool odd = theta % 2 != 0;
  const double band = (1.0 - 2.0 * alpha) * q.phi * q.phi - 1.0;
  const double chi1 = odd ? (1.0 - 2.0 * alpha) / (1.0 - alpha) * q.phi - 1.0
                          : (1.0 - 2.0 * alpha) / (1.0 - alpha) * q.phi * q.phi - 1.0;
  const double chi2 = odd ? alpha / (1.0 - alpha) : alpha * q.phi / (1.0 - alpha);

  sys.gamma(0, iota - 2) = q.nu;
  sys.gamma(0, iota - 1) = -q.mu * q.psi - 1.0;
  for (int r = 1; r <= iota - 2; ++r) {
    sys.gamma(r, iota - 2 - r) = q.nu;
    sys.gamma(r, iota - 1 - r) = band;
    sys.gamma(r, iota - r) = q.nu;
  }
  sys.gamma(iota - 1, 0) = chi1;
  sys.gamma(iota - 1, 1) = chi2;
  sys.xi(0) = q.nu * q.mu / q.eta;
  return sys;
}

namespace {

double reduced_system_contribution(double alpha, int theta, const ModeQuantities& q,
                                   double lambda) {
  if (std::abs(q.phi) <= kTolPhi) return 1.0;
  const ModeSystem sys = h2_mode_system(theta, alpha, q);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.gamma);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "h2_analytic: singular mode system at lambda = " << lambda;
    throw NumericError(msg.str());
  }
  const double w = lu.solve(sys.xi)(q.iota - 1);
  return (-1.0 - q.zeta * w) / q.eta;
}

}  // namespace

H2Report h2_analytic(const Spectrum& s, const ProtocolParams& params) {
  params.validate();
  require_interior_alpha(params.alpha, "h2_analytic");
  require_gain_window(s, params.beta, "h2_analytic");
  if (!consensus_check(s, params)) {
    throw PreconditionError("h2_analytic: parameters do not give consensus");
  }
  return accumulate_report(
      H2Method::table_ii, params.alpha, params.beta, params.theta, s,
      [&](const Mode& mode) {
        const ModeQuantities q =
            mode_quantities(params.alpha, params.beta, params.theta, mode.lambda);
        return reduced_system_contribution(params.alpha, params.theta, q, mode.lambda);
      });
}

H2Report h2_closed_small_theta(const Spectrum& s, const ProtocolParams& params) {
  params.validate();
  if (params.theta < 1 || params.theta > 4) {
    throw ParameterError("h2_closed_small_theta: theta must lie in 1..4");
  }
  require_interior_alpha(params.alpha, "h2_closed_small_theta");
  require_gain_window(s, params.beta, "h2_closed_small_theta");
  if (!consensus_check(s, params)) {
    throw PreconditionError("h2_closed_small_theta: parameters do not give consensus");
  }
  const double a = params.alpha;
  return accumulate_report(
      H2Method::closed_small_theta, a, params.beta, params.theta, s,
      [&](const Mode& mode) {
        const ModeQuantities q = mode_quantities(a, params.beta, params.theta, mode.lambda);
        const double phi = q.phi;
        const double mu = q.mu;
        if (std::abs(phi) <= kTolPhi) return 1.0;
        switch (params.theta) {
          case 1:
            return (1.0 - mu) /
                   ((1.0 - phi) * (1.0 + mu) * ((2.0 * a - 1.0) * phi + 1.0));
          case 2:
            return (1.0 - mu * phi) /
                   ((1.0 - phi * phi) * (1.0 - (1.0 - 2.0 * a) * mu * phi));
          case 3: {
            const double num = (1.0 - 2.0 * a) * mu * phi * phi - mu * mu - mu + 1.0;
            const double den = (1.0 - phi) * ((1.0 - 2.0 * a) * phi - 1.0) *
                               ((1.0 - 2.0 * a) * mu * phi * phi + mu * mu - mu - 1.0);
            return num / den;
          }
          default: {  // theta == 4
            const double c = 1.0 - 2.0 * a;
            const double num = c * mu * phi * phi * phi - (2.0 - a) * mu * phi + 1.0;
            const double den = (1.0 - phi * phi) *
                               (c * c * mu * phi * phi * phi +
                                (3.0 * a - 2.0) * mu * phi + 1.0);
            return num / den;
          }
        }
      });
}

namespace {

double cf_run(int n, double tau, double x0, const char* who) {
  if (n < 0) throw ParameterError(std::string(who) + ": order must be >= 0");
  if (!(std::abs(tau) > 0.0 && std::abs(tau) < 1.0)) {
    throw ParameterError(std::string(who) + ": tau must lie in (-1,0) or (0,1)");
  }
  const double two_over_tau = 2.0 / tau;
  double x = x0;
  for (int k = 0; k < n; ++k) x = two_over_tau - 1.0 / x;
  return x;
}

}  // namespace

double cf_F(int n, double tau) { return cf_run(n, tau, 1.0, "cf_F"); }

double cf_G(int n, double tau) { return cf_run(n, tau, 1.0 / tau, "cf_G"); }

H2Report h2_half_alpha(const Spectrum& s, double beta, int theta) {
  require_gain_window(s, beta, "h2_half_alpha");
  const ProtocolParams params{0.5, beta, theta, theta};
  params.validate();
  if (!consensus_check(s, params)) {
    throw PreconditionError("h2_half_alpha: parameters do not give consensus");
  }
  const int iota = (theta + 1) / 2;
  const bool odd = theta % 2 != 0;
  return accumulate_report(
      H2Method::half_alpha_cf, 0.5, beta, theta, s, [&](const Mode& mode) {
        const double phi = 1.0 - beta * mode.lambda;
        if (std::abs(phi) <= kTolPhi) return 1.0;
        const double cf = odd ? cf_F(iota - 1, phi) : cf_G(iota - 1, phi);
        return (phi - 2.0 * cf) / ((phi * phi - 2.0) * cf + phi);
      });
}

H2Report h2_memoryless(const Spectrum& s, double beta) {
  require_gain_window(s, beta, "h2_memoryless");
  return accumulate_report(H2Method::memoryless, 1.0, beta, 0, s,
                           [&](const Mode& mode) {
                             const double phi = 1.0 - beta * mode.lambda;
                             return 1.0 / (1.0 - phi * phi);
                           });
}

H2Report h2_pure_memory(const Spectrum& s, double beta, int theta) {
  if (theta < 1) throw ParameterError("h2_pure_memory: theta must be >= 1");
  require_gain_window(s, beta, "h2_pure_memory");
  H2Report report = h2_memoryless(s, beta);
  report.method = H2Method::pure_memory;
  report.alpha = 0.0;
  report.theta = theta;
  return report;
}

H2Report h2_limit_half_alpha(const Spectrum& s, double beta) {
  require_gain_window(s, beta, "h2_limit_half_alpha");
  return accumulate_report(H2Method::limit_half_alpha, 0.5, beta, 0, s,
                           [&](const Mode& mode) {
                             const double phi = 1.0 - beta * mode.lambda;
                             return 2.0 / (2.0 - phi * phi);
                           });
}

namespace {

/// Gramian corner entry of the single-mode augmented system via the
/// vectorized discrete Lyapunov equation (I - A (x) A) vec(W) = vec(B B^T).
double lyapunov_mode_contribution(double alpha, double phi, int theta) {
  const int d = theta + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) a(i, i + 1) = 1.0;
  a(d - 1, 0) = (1.0 - alpha) * phi;
  a(d - 1, d - 1) += alpha * phi;

  const int dim = d * d;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j < d; ++j) {
        for (int l = 0; l < d; ++l) {
          system(i * d + k, j * d + l) -= a(i, j) * a(k, l);
        }
      }
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(dim - 1) = 1.0;

  const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
  if (!((system * solution - rhs).cwiseAbs().maxCoeff() <= 1e-8)) {
    throw NumericError("h2_lyapunov_oracle: vectorized system is singular (mode on the stability boundary)");
  }
  return solution(dim - 1);
}

}  // namespace

H2Report h2_lyapunov_oracle(const Spectrum& s, const ProtocolParams& params) {
  params.validate();
  if (!consensus_check(s, params)) {
    throw PreconditionError("h2_lyapunov_oracle: parameters do not give consensus");
  }
  return accumulate_report(
      H2Method::lyapunov_oracle, params.alpha, params.beta, params.theta, s,
      [&](const Mode& mode) {
        const double phi = 1.0 - params.beta * mode.lambda;
        return lyapunov_mode_contribution(params.alpha, phi, params.theta);
      });
}

GramianSum h2_gramian_bruteforce(const WeightedGraph& g, const ProtocolParams& params,
                                 int horizon) {
  params.validate();
  if (horizon < 1) throw ParameterError("h2_gramian_bruteforce: horizon must be >= 1");
  const int n = g.size();
  const int layers = params.theta + 1;
  const int h = n * layers;
  if (h > 400) {
    throw ParameterError("h2_gramian_bruteforce: n*(theta+1) must be <= 400");
  }
  const Spectrum s = spectrum(g);
  if (!consensus_check(s, params)) {
    throw PreconditionError("h2_gramian_bruteforce: parameters do not give consensus");
  }

  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(h, h);
  for (int k = 0; k + 1 < layers; ++k) {
    big.block(k * n, (k + 1) * n, n, n).setIdentity();
  }
  const Eigen::MatrixXd feedback =
      Eigen::MatrixXd::Identity(n, n) - params.beta * laplacian(g);
  big.block((layers - 1) * n, 0, n, n) = (1.0 - params.alpha) * feedback;
  big.block((layers - 1) * n, (layers - 1) * n, n, n) += params.alpha * feedback;

  const Eigen::MatrixXd projector =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd propagated = Eigen::MatrixXd::Zero(h, n);
  propagated.bottomRows(n).setIdentity();

  GramianSum result;
  double last_term = 0.0;
  for (int k = 0; k <= horizon; ++k) {
    last_term = (projector * propagated.bottomRows(n)).squaredNorm();
    result.value += last_term;
    if (k < horizon) propagated = big * propagated;
  }

  double radius = 0.0;
  for (const Mode& mode : nonzero_modes(s)) {
    radius = std::max(radius, spectral_radius(mode_polynomial(params, mode.lambda)));
  }
  result.tail_bound = last_term * radius * radius / (1.0 - radius * radius);
  result.tail_ok = result.tail_bound < 1e-10;
  return result;
}

}  // namespace memnet
