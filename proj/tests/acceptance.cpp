// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line with measured evidence. Run all criteria (no arguments) or a
// single one with --criterion N. The process exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memnet/graph.hpp"
#include "memnet/h2.hpp"
#include "memnet/search.hpp"
#include "memnet/simulate.hpp"
#include "memnet/stability.hpp"
#include "testutil.hpp"

using namespace memnet;
using testutil::Sampler;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

WeightedGraph family_graph(int which, int n, Sampler& sampler) {
  switch (which % 5) {
    case 0: return generate_graph(GraphFamily::complete, n);
    case 1: return generate_graph(GraphFamily::star, n);
    case 2: return generate_graph(GraphFamily::chain, n);
    case 3: {
      const int d = sampler.uniform_int(1, std::max(1, (n - 1) / 2));
      return generate_graph(GraphFamily::ring_lattice, n, d);
    }
    default: {
      const int m = sampler.uniform_int(1, std::min(4, n - 1));
      return generate_graph(GraphFamily::barabasi_albert, n, std::nullopt, m,
                            sampler.uniform_int(1, 1 << 20));
    }
  }
}

// --- 1. cross-method agreement -------------------------------------------

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  Sampler sampler(0xC0FFEE);
  double worst = 0.0;
  int closed_used = 0, half_used = 0;
  for (int k = 0; k < 200; ++k) {
    WeightedGraph g = family_graph(k, sampler.uniform_int(4, 25), sampler);
    const Spectrum s = spectrum(g);
    const bool half = k % 3 == 0;
    ProtocolParams params;
    for (;;) {
      params = ProtocolParams{half ? 0.5 : sampler.uniform(0.05, 0.95),
                              sampler.uniform(0.02, 0.98) * 2.0 / s.lambda_max(),
                              sampler.uniform_int(1, 10), 10};
      params.theta_max = params.theta;
      if (consensus_check(s, params)) break;
    }
    std::vector<double> values;
    values.push_back(h2_analytic(s, params).value);
    values.push_back(h2_lyapunov_oracle(s, params).value);
    if (params.theta <= 4) {
      values.push_back(h2_closed_small_theta(s, params).value);
      ++closed_used;
    }
    if (half) {
      values.push_back(h2_half_alpha(s, params.beta, params.theta).value);
      ++half_used;
    }
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        worst = std::max(worst, std::abs(values[a] - values[b]) /
                                    std::max(1.0, std::abs(values[a])));
      }
    }
  }
  const double secs = elapsed_s(start);
  std::ostringstream detail;
  detail << "200 stable instances (" << closed_used << " with closed forms, "
         << half_used << " with the alpha=1/2 route), worst pairwise rel diff "
         << worst << ", " << secs << " s";
  return Outcome{worst <= 1e-9 && secs < 60.0, detail.str()};
}

// --- 2. derived ground truth on K3 ----------------------------------------

Outcome criterion2() {
  const Spectrum s = spectrum(generate_graph(GraphFamily::complete, 3));
  const double beta = 1.0 / 6.0;
  double worst = 0.0;
  auto record = [&worst](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  const double targets[] = {2.4, 7.0 / 3.0, 44.0 / 19.0};
  for (int theta = 1; theta <= 3; ++theta) {
    const ProtocolParams p{0.5, beta, theta, theta};
    record(h2_analytic(s, p).value, targets[theta - 1]);
    record(h2_closed_small_theta(s, p).value, targets[theta - 1]);
    record(h2_half_alpha(s, beta, theta).value, targets[theta - 1]);
  }
  record(h2_limit_half_alpha(s, beta).value, 16.0 / 7.0);
  record(h2_memoryless(s, beta).value, 8.0 / 3.0);
  record(h2_pure_memory(s, beta, 5).value, 8.0 / 3.0);
  std::ostringstream detail;
  detail << "K3 targets 2.4, 7/3, 44/19, 16/7, 8/3 across analytic routes, worst abs err "
         << worst;
  return Outcome{worst <= 1e-12, detail.str()};
}

// --- 3. phi = 0 family -----------------------------------------------------

Outcome criterion3() {
  double worst_exact = 0.0, worst_solver = 0.0;
  for (int n = 3; n <= 30; ++n) {
    const WeightedGraph g = generate_graph(GraphFamily::complete, n);
    const Spectrum s = spectrum(g);
    const double beta = 1.0 / n;
    const double want = n - 1.0;
    auto exact = [&](double got) {
      worst_exact = std::max(worst_exact, std::abs(got - want) / n);
    };
    auto solver = [&](double got) {
      worst_solver = std::max(worst_solver, std::abs(got - want) / n);
    };
    for (int theta : {1, 2, 3, 4, 7, 10}) {
      const ProtocolParams p{0.4, beta, theta, theta};
      exact(h2_analytic(s, p).value);
      if (theta <= 4) exact(h2_closed_small_theta(s, p).value);
      exact(h2_half_alpha(s, beta, theta).value);
      exact(h2_pure_memory(s, beta, theta).value);
      solver(h2_lyapunov_oracle(s, p).value);
    }
    exact(h2_memoryless(s, beta).value);
    exact(h2_limit_half_alpha(s, beta).value);
    for (int theta : {1, 3, 10}) {
      const ProtocolParams p{0.4, beta, theta, theta};
      solver(h2_gramian_bruteforce(g, p, 3 * (theta + 1)).value);
    }
  }
  std::ostringstream detail;
  detail << "K_n, beta=1/n, n=3..30: analytic routes worst rel err " << worst_exact
         << ", solver routes " << worst_solver;
  return Outcome{worst_exact <= 1e-12 && worst_solver <= 1e-9, detail.str()};
}

// --- 4. Monte Carlo --------------------------------------------------------

Outcome criterion4() {
  const auto start = std::chrono::steady_clock::now();
  Sampler sampler(0x5EED5);
  int outside = 0;
  double worst_sigma = 0.0, worst_rel_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto inst = sampler.stable_instance(3, 10, 5, 0.1, 0.9,
                                              /*half_alpha=*/k % 2 == 0,
                                              /*radius_cap=*/0.985);
    const double analytic = h2_analytic(inst.spec, inst.params).value;
    SimConfig cfg;
    cfg.seed = 5000 + k;
    const SimResult r = estimate_msd(inst.graph, inst.params, cfg);
    const double sigmas = std::abs(r.msd_estimate - analytic) / r.std_error;
    worst_sigma = std::max(worst_sigma, sigmas);
    worst_rel_err = std::max(worst_rel_err, r.std_error / r.msd_estimate);
    if (sigmas > 3.0) ++outside;
  }
  const double secs = elapsed_s(start);
  std::ostringstream detail;
  detail << "20 instances, worst |estimate-analytic| " << worst_sigma
         << " sigma, worst std_error/value " << worst_rel_err << ", " << secs << " s";
  return Outcome{outside == 0 && worst_rel_err <= 0.05 && secs < 300.0, detail.str()};
}

// --- 5. depth orderings at alpha = 1/2 -------------------------------------

Outcome criterion5() {
  std::vector<WeightedGraph> graphs;
  Sampler sampler(0xABCD);
  for (int n : {3, 8, 15, 20}) graphs.push_back(generate_graph(GraphFamily::complete, n));
  for (int n : {4, 9, 16, 20}) graphs.push_back(generate_graph(GraphFamily::star, n));
  for (int n : {4, 9, 16, 20}) graphs.push_back(generate_graph(GraphFamily::chain, n));
  for (int n : {5, 11, 20}) graphs.push_back(generate_graph(GraphFamily::ring_lattice, n, 1));
  for (int n : {7, 14, 20}) graphs.push_back(generate_graph(GraphFamily::ring_lattice, n, 2));
  for (int n : {9, 20}) graphs.push_back(generate_graph(GraphFamily::ring_lattice, n, 3));
  graphs.push_back(generate_graph(GraphFamily::barabasi_albert, 12, std::nullopt, 1, 11));
  graphs.push_back(generate_graph(GraphFamily::barabasi_albert, 18, std::nullopt, 2, 22));
  graphs.push_back(generate_graph(GraphFamily::barabasi_albert, 25, std::nullopt, 3, 33));

  const int theta_hat = 10;
  long triples = 0;
  int violations = 0, unstable_pairs = 0, equality_cases = 0;
  std::ostringstream first_violation;

  for (const WeightedGraph& g : graphs) {
    const Spectrum s = spectrum(g);
    const double cap = 2.0 / s.lambda_max();
    const bool complete_like = nonzero_modes(s).size() == 1;
    std::vector<double> betas;
    for (double rel : linspace(0.02, 0.98, 44)) betas.push_back(rel * cap);
    if (1.0 / s.lambda2() < cap) betas.push_back(1.0 / s.lambda2());

    for (double beta : betas) {
      if (!consensus_check(s, ProtocolParams{0.5, beta, theta_hat, theta_hat})) {
        ++unstable_pairs;  // hypothesis of the orderings not met; skip
        continue;
      }
      std::vector<double> v(theta_hat + 1, 0.0);
      for (int theta = 1; theta <= theta_hat; ++theta) {
        v[theta] = h2_half_alpha(s, beta, theta).value;
      }
      triples += theta_hat;
      const double memoryless = h2_memoryless(s, beta).value;
      const double scale = std::max(1.0, memoryless);
      const double tol = 1e-9 * scale;
      const bool low = beta <= 1.0 / s.lambda_max();
      const bool high = beta >= 1.0 / s.lambda2();

      auto violate = [&](const char* what, int theta) {
        ++violations;
        if (violations == 1) {
          first_violation << " first: " << what << " theta=" << theta
                          << " beta=" << beta << " n=" << s.n();
        }
      };

      // (1) memory never hurts.
      for (int theta = 1; theta <= theta_hat; ++theta) {
        if (v[theta] > memoryless + tol) violate("memory<=memoryless", theta);
      }
      // (2) even-depth chain is non-increasing in steps of two.
      for (int theta = 2; theta + 2 <= theta_hat; theta += 2) {
        if (v[theta] < v[theta + 2] - tol) violate("even chain", theta);
      }
      // (3) odd-depth orderings in the two gain regions.
      for (int theta = 1; theta + 2 <= theta_hat; theta += 2) {
        if (low) {
          if (v[theta] < v[theta + 1] - tol || v[theta + 1] < v[theta + 2] - tol) {
            violate("odd chain low", theta);
          }
        } else if (high) {
          if (v[theta] > v[theta + 2] + tol || v[theta + 2] > v[theta + 1] + tol) {
            violate("odd chain high", theta);
          }
        }
      }
      // (4) argmin depth per region (machine ties count as attaining the bound).
      int argmin = 1;
      for (int theta = 2; theta <= theta_hat; ++theta) {
        if (v[theta] < v[argmin]) argmin = theta;
      }
      if (low && !(argmin == theta_hat || v[theta_hat] <= v[argmin] + 1e-12 * scale)) {
        violate("argmin low", argmin);
      }
      if (high && !(argmin == 1 || v[1] <= v[argmin] + 1e-12 * scale)) {
        violate("argmin high", argmin);
      }
      // Equality only on unit-weight complete graphs at beta = 1/lambda_2.
      double max_gap = 0.0;
      for (int theta = 1; theta <= theta_hat; ++theta) {
        max_gap = std::max(max_gap, std::abs(v[theta] - memoryless));
      }
      if (max_gap <= 1e-12 * scale) {
        ++equality_cases;
        if (!(complete_like && std::abs(beta * s.lambda2() - 1.0) <= 1e-9)) {
          violate("equality off the complete graph", 0);
        }
      }
    }
  }
  std::ostringstream detail;
  detail << triples << " (spectrum,beta,theta) triples over " << graphs.size()
         << " spectra, " << violations << " violations, " << equality_cases
         << " equality cases, " << unstable_pairs << " skipped pairs"
         << first_violation.str();
  return Outcome{triples >= 10000 && violations == 0, detail.str()};
}

// --- 6. continued fraction orderings and identities ------------------------

Outcome criterion6() {
  int ordering_violations = 0;
  double worst_identity = 0.0;
  for (int step = 1; step <= 19; ++step) {
    for (double sign : {1.0, -1.0}) {
      const double tau = sign * 0.05 * step;
      for (int n = 1; n < 50; ++n) {
        const double f = cf_F(n, tau), f_next = cf_F(n + 1, tau);
        const double g = cf_G(n, tau), g_next = cf_G(n + 1, tau);
        // Past convergence to the shared fixed point the strict gaps drop
        // below double resolution; a few ulp of slack is the checkable form.
        const double ulp = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(g);
        bool ok;
        if (tau > 0) {
          ok = g_next >= g - ulp && g > 1.0 && f_next >= g - ulp && g >= f - ulp &&
               f > 1.0;
        } else {
          ok = g_next <= g + ulp && g < -1.0 && f <= f_next + ulp && f_next <= g + ulp;
        }
        if (!ok) ++ordering_violations;
      }
      worst_identity = std::max(
          worst_identity, std::abs(cf_G(1, tau) - cf_F(1, tau) - (1.0 - tau)));
      worst_identity = std::max(
          worst_identity,
          std::abs(cf_F(2, tau) - cf_G(1, tau) - (tau - tau / (2.0 - tau))));
    }
  }
  std::ostringstream detail;
  detail << "38 tau values, orders 1..50: " << ordering_violations
         << " ordering violations, worst identity residual " << worst_identity;
  return Outcome{ordering_violations == 0 && worst_identity <= 1e-14, detail.str()};
}

// --- 7. depth inheritance and Jury agreement -------------------------------

Outcome criterion7() {
  Sampler sampler(0x7777);
  int inheritance_failures = 0;
  for (int k = 0; k < 500; ++k) {
    const WeightedGraph g = sampler.random_graph(3, 15);
    const Spectrum s = spectrum(g);
    const double beta = sampler.uniform(0.02, 0.98) * 2.0 / s.lambda_max();
    const double alpha = sampler.uniform(0.0, 1.0);
    const int theta = sampler.uniform_int(1, 8);
    if (!verify_inheritance(s, alpha, beta, theta)) ++inheritance_failures;
  }
  int jury_disagreements = 0, tested = 0;
  while (tested < 1000) {
    const int theta = sampler.uniform_int(1, 12);
    const ModePolynomial p = ModePolynomial::trinomial(
        theta, sampler.uniform(-1.5, 1.5), sampler.uniform(-1.5, 1.5));
    if (std::abs(spectral_radius(p) - 1.0) <= 10.0 * kTolSchur) continue;
    if (jury_schur(p) != is_schur_roots(p)) ++jury_disagreements;
    ++tested;
  }
  std::ostringstream detail;
  detail << "500 inheritance draws: " << inheritance_failures
         << " counterexamples; 1000 off-boundary trinomials: " << jury_disagreements
         << " Jury/root disagreements";
  return Outcome{inheritance_failures == 0 && jury_disagreements == 0, detail.str()};
}

// --- 8. figure-scale sweep -------------------------------------------------

Outcome criterion8() {
  const auto start = std::chrono::steady_clock::now();
  struct FamilyCase {
    const char* name;
    WeightedGraph graph;
    bool hard_transition;  // optimal depth must reach <= 2 inside the middle region
  };
  std::vector<FamilyCase> cases;
  cases.push_back({"K20", generate_graph(GraphFamily::complete, 20), false});
  cases.push_back({"S20", generate_graph(GraphFamily::star, 20), false});
  cases.push_back({"P20", generate_graph(GraphFamily::chain, 20), false});
  cases.push_back({"C1_20", generate_graph(GraphFamily::ring_lattice, 20, 1), false});
  cases.push_back({"C2_20", generate_graph(GraphFamily::ring_lattice, 20, 2), true});
  cases.push_back({"C3_20", generate_graph(GraphFamily::ring_lattice, 20, 3), true});

  const int theta_hat = 10;
  int problems = 0;
  std::ostringstream detail;
  for (auto& fc : cases) {
    const Spectrum s = spectrum(fc.graph);
    const double cap = 2.0 / s.lambda_max();
    const BetaSweep sweep = sweep_beta(s, 0.5, theta_hat,
                                       linspace(0.01 * cap, 0.99 * cap, 60));
    const bool high_nonempty = 1.0 / s.lambda2() < cap;
    int low_bad = 0, high_bad = 0;
    int middle_first = -1, middle_min = theta_hat, middle_count = 0;
    for (const auto& row : sweep.rows) {
      const BetaRegion region = classify_beta(s, row.beta);
      if (region == BetaRegion::low) {
        // Deepest memory optimal, allowing machine ties near beta = 1/lambda_n.
        if (row.optimal_theta != theta_hat) {
          const DepthSearchResult full = optimal_depth(s, 0.5, row.beta, theta_hat);
          const double v_hat = full.values.back().second;
          if (!(v_hat <= row.h2 + 1e-12 * std::max(1.0, row.h2))) ++low_bad;
        }
      } else if (region == BetaRegion::high) {
        if (row.optimal_theta != 1) ++high_bad;
      } else if (region == BetaRegion::middle) {
        ++middle_count;
        if (middle_first < 0) middle_first = row.optimal_theta;
        middle_min = std::min(middle_min, row.optimal_theta);
      }
    }
    bool ok = low_bad == 0 && high_bad == 0;
    if (fc.name == std::string("K20") && !high_nonempty) ok = false;
    if (fc.name != std::string("K20") && high_nonempty) ok = false;
    if (middle_count > 0) {
      // The middle region starts long (deepest still optimal) and shortens
      // toward the right edge; dense lattices must reach depth <= 2.
      if (middle_first != theta_hat) ok = false;
      if (middle_min >= theta_hat) ok = false;
      if (fc.hard_transition && middle_min > 2) ok = false;
    }
    if (!ok) ++problems;
    detail << fc.name << "(middle min theta*=" << (middle_count ? middle_min : -1)
           << (ok ? " ok) " : " BAD) ");
  }
  const double secs = elapsed_s(start);
  detail << secs << " s";
  return Outcome{problems == 0 && secs < 120.0, detail.str()};
}

// --- 9. marginal utility of depth ------------------------------------------

Outcome criterion9() {
  struct Case {
    const char* name;
    WeightedGraph graph;
    double beta_rel;  // fraction of 2/lambda_n
  };
  std::vector<Case> cases;
  cases.push_back({"K3", generate_graph(GraphFamily::complete, 3), 0.25});
  cases.push_back({"P15", generate_graph(GraphFamily::chain, 15), 0.2});

  bool monotone = true, below = true;
  std::ostringstream detail;
  for (auto& c : cases) {
    const Spectrum s = spectrum(c.graph);
    const double beta = c.beta_rel * 2.0 / s.lambda_max();
    const double reference = h2_limit_half_alpha(s, beta).value;
    std::vector<double> gap(41, 0.0);
    for (int theta = 1; theta <= 40; ++theta) {
      gap[theta] = std::abs(h2_half_alpha(s, beta, theta).value - reference);
    }
    for (int theta = 1; theta + 2 <= 40; ++theta) {
      if (gap[theta + 2] > gap[theta] + 1e-12) monotone = false;
    }
    if (gap[39] > 1e-6 || gap[40] > 1e-6) below = false;
    detail << c.name << " gap(theta=40)=" << gap[40] << " ";
  }
  detail << "(monotone per parity: " << (monotone ? "yes" : "no") << ")";
  return Outcome{monotone && below, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only != 0 && i != only) continue;
    const Outcome outcome = criteria[i - 1]();
    std::printf("%s criterion %d: %s\n", outcome.pass ? "PASS" : "FAIL", i,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
