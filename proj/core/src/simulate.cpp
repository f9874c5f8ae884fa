#include "memnet/simulate.hpp"

#include <cmath>
#include <vector>

#include "memnet/errors.hpp"
#include "memnet/parallel.hpp"
#include "memnet/rng.hpp"

namespace memnet {

void SimConfig::validate() const {
  if (trials < 1) throw ParameterError("SimConfig: trials must be >= 1");
  if (horizon < 1) throw ParameterError("SimConfig: horizon must be >= 1");
  if (burn_in < 0 || burn_in >= horizon) {
    throw ParameterError("SimConfig: need 0 <= burn_in < horizon");
  }
  if (!(init_scale >= 0.0)) throw ParameterError("SimConfig: init_scale must be >= 0");
}

namespace {

/// Protocol stepper with a ring buffer of the theta most recent feedback
/// layers phi(t-theta)..phi(t-1); O(n*theta) memory instead of the full
/// n*(theta+1)-dimensional augmented state.
class ProtocolStepper {
 public:
  ProtocolStepper(const WeightedGraph& g, const ProtocolParams& params,
                  const Eigen::MatrixXd& x0_history)
      : alpha_(params.alpha),
        feedback_(Eigen::MatrixXd::Identity(g.size(), g.size()) -
                  params.beta * laplacian(g)),
        ring_(params.theta) {
    const int n = g.size();
    if (x0_history.rows() != params.theta + 1 || x0_history.cols() != n) {
      throw ParameterError("x0_history must be (theta+1) x n");
    }
    // Rows are x(-theta)..x(0); the ring gets phi(-theta)..phi(-1).
    for (int k = 0; k < params.theta; ++k) {
      ring_[k] = feedback_ * x0_history.row(k).transpose();
    }
    state_ = x0_history.row(params.theta).transpose();
  }

  /// Advance one step; `noise` may be empty (noise-free).
  void step(const Eigen::VectorXd& noise) {
    Eigen::VectorXd phi_now = feedback_ * state_;
    state_ = alpha_ * phi_now + (1.0 - alpha_) * ring_[head_];
    if (noise.size() > 0) state_ += noise;
    ring_[head_] = std::move(phi_now);
    head_ = (head_ + 1) % static_cast<int>(ring_.size());
  }

  const Eigen::VectorXd& state() const { return state_; }

  double disagreement_sq() const {
    const double mean = state_.mean();
    return (state_.array() - mean).matrix().squaredNorm();
  }

 private:
  double alpha_;
  Eigen::MatrixXd feedback_;
  std::vector<Eigen::VectorXd> ring_;
  Eigen::VectorXd state_;
  int head_ = 0;
};

}  // namespace

std::vector<double> simulate_noise_free(const WeightedGraph& g,
                                        const ProtocolParams& params,
                                        const Eigen::MatrixXd& x0_history,
                                        int horizon) {
  params.validate();
  if (horizon <= 0) throw ParameterError("simulate_noise_free: horizon must be positive");
  ProtocolStepper stepper(g, params, x0_history);
  std::vector<double> disagreement;
  disagreement.reserve(horizon + 1);
  disagreement.push_back(std::sqrt(stepper.disagreement_sq()));
  const Eigen::VectorXd no_noise;
  for (int t = 1; t <= horizon; ++t) {
    stepper.step(no_noise);
    disagreement.push_back(std::sqrt(stepper.disagreement_sq()));
  }
  return disagreement;
}

SimResult estimate_msd(const WeightedGraph& g, const ProtocolParams& params,
                       const SimConfig& cfg, int threads) {
  params.validate();
  cfg.validate();
  const Spectrum s = spectrum(g);
  if (!consensus_check(s, params)) {
    throw PreconditionError("estimate_msd: parameters do not give consensus");
  }

  const int n = g.size();
  std::vector<double> trial_mean(cfg.trials, 0.0);
  parallel_for(cfg.trials, threads, [&](int trial) {
    GaussianStream normal(SplitMix64::substream(cfg.seed, trial));
    Eigen::MatrixXd history = Eigen::MatrixXd::Zero(params.theta + 1, n);
    if (cfg.init_scale > 0.0) {
      for (int layer = 0; layer <= params.theta; ++layer) {
        for (int agent = 0; agent < n; ++agent) {
          history(layer, agent) = cfg.init_scale * normal.next();
        }
      }
    }
    ProtocolStepper stepper(g, params, history);
    Eigen::VectorXd noise(n);
    double acc = 0.0;
    for (int t = 1; t <= cfg.horizon; ++t) {
      for (int agent = 0; agent < n; ++agent) noise(agent) = normal.next();
      stepper.step(noise);
      if (t > cfg.burn_in) acc += stepper.disagreement_sq();
    }
    trial_mean[trial] = acc / (cfg.horizon - cfg.burn_in);
  });

  // Fixed reduction order over trial indices keeps the result bit-identical
  // for any thread count.
  double mean = 0.0;
  for (double v : trial_mean) mean += v;
  mean /= cfg.trials;
  double var = 0.0;
  for (double v : trial_mean) var += (v - mean) * (v - mean);
  const double std_error =
      cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1) / cfg.trials) : 0.0;

  return SimResult{mean, std_error, cfg.trials, cfg.horizon, cfg.burn_in, cfg.seed};
}

}  // namespace memnet
