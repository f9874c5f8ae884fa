// memnet: command line front end for consensus-network robustness analysis.
// Every subcommand is deterministic given its flags (and --seed where the job
// is stochastic); outputs are JSON or CSV on stdout or --out.
//
// Exit codes: 0 success, 2 parameter error, 3 precondition error (e.g.
// unstable parameters, disconnected graph), 4 numeric error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "memnet/errors.hpp"
#include "memnet/graph.hpp"
#include "memnet/h2.hpp"
#include "memnet/io.hpp"
#include "memnet/rng.hpp"
#include "memnet/search.hpp"
#include "memnet/simulate.hpp"
#include "memnet/stability.hpp"

namespace {

using namespace memnet;

struct GraphOptions {
  std::string family;
  int n = 0;
  int d = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::string file;
  CLI::Option* seed_opt = nullptr;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--family", family,
                    "graph family: complete|star|chain|ring_lattice|barabasi_albert "
                    "(ring<k> is shorthand for ring_lattice with --d k)");
    cmd->add_option("--n", n, "vertex count");
    cmd->add_option("--d", d, "ring_lattice half-bandwidth (each vertex links to its 2d nearest)");
    cmd->add_option("--m", m, "barabasi_albert edges per arriving vertex");
    seed_opt = cmd->add_option("--seed", seed, "RNG seed (required for stochastic jobs)");
    cmd->add_option("--graph-file", file, "edge-list file (first line 'n m', then 'i j w', 1-based)");
  }

  bool seed_given() const { return seed_opt != nullptr && seed_opt->count() > 0; }

  WeightedGraph resolve() const {
    if (!file.empty()) {
      if (!family.empty()) {
        throw ParameterError("give either --graph-file or --family, not both");
      }
      return load_edge_list_file(file);
    }
    if (family.empty()) {
      throw ParameterError("a graph is required: --family/--n or --graph-file");
    }
    std::string name = family;
    std::optional<int> dd = d > 0 ? std::optional<int>(d) : std::nullopt;
    if (name.rfind("ring", 0) == 0 && name != "ring_lattice") {
      const std::string suffix = name.substr(4);
      if (suffix.empty() || suffix.find_first_not_of("0123456789") != std::string::npos) {
        throw ParameterError("unknown graph family: " + family);
      }
      dd = std::stoi(suffix);
      name = "ring_lattice";
    }
    std::optional<int> mm = m > 0 ? std::optional<int>(m) : std::nullopt;
    std::optional<std::uint64_t> ss =
        seed_given() ? std::optional<std::uint64_t>(seed) : std::nullopt;
    if (name == "complete") return generate_graph(GraphFamily::complete, n);
    if (name == "star") return generate_graph(GraphFamily::star, n);
    if (name == "chain") return generate_graph(GraphFamily::chain, n);
    if (name == "ring_lattice") return generate_graph(GraphFamily::ring_lattice, n, dd);
    if (name == "barabasi_albert") {
      return generate_graph(GraphFamily::barabasi_albert, n, std::nullopt, mm, ss);
    }
    throw ParameterError("unknown graph family: " + family);
  }
};

struct BetaOption {
  double beta = 0.0;
  double beta_rel = 0.0;
  CLI::Option* abs_opt = nullptr;
  CLI::Option* rel_opt = nullptr;

  void add_flags(CLI::App* cmd) {
    abs_opt = cmd->add_option("--beta", beta, "coupling gain (dimensionless)");
    rel_opt = cmd->add_option("--beta-rel", beta_rel,
                              "coupling gain as a fraction of 2/lambda_n");
    abs_opt->excludes(rel_opt);
  }

  double resolve(const Spectrum& s) const {
    if (rel_opt != nullptr && rel_opt->count() > 0) return beta_rel * 2.0 / s.lambda_max();
    if (abs_opt != nullptr && abs_opt->count() > 0) return beta;
    throw ParameterError("a coupling gain is required: --beta or --beta-rel");
  }
};

struct OutputOptions {
  std::string path;
  std::string format = "json";

  void add_flags(CLI::App* cmd, const std::string& formats = "json,csv") {
    cmd->add_option("--out", path, "output file (default: stdout)");
    std::vector<std::string> allowed;
    std::stringstream ss(formats);
    for (std::string item; std::getline(ss, item, ',');) allowed.push_back(item);
    format = allowed.front();
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember(allowed))
        ->capture_default_str();
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot open output file: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
};

std::string render(const std::string& format, const std::function<std::string()>& json_fn,
                   const std::function<void(std::ostream&)>& csv_fn) {
  if (format == "json") return json_fn();
  std::ostringstream out;
  csv_fn(out);
  return out.str();
}

H2Report run_h2_method(const std::string& method, const WeightedGraph& g,
                       const Spectrum& s, const ProtocolParams& params, int horizon) {
  std::string chosen = method;
  if (chosen == "auto") {
    if (params.alpha == 1.0) chosen = "memoryless";
    else if (params.alpha == 0.0) chosen = "pure_memory";
    else chosen = "table_ii";
  }
  if (chosen == "table_ii") return h2_analytic(s, params);
  if (chosen == "closed_small_theta") return h2_closed_small_theta(s, params);
  if (chosen == "half_alpha_cf") {
    if (params.alpha != 0.5) {
      throw ParameterError("half_alpha_cf requires --alpha 0.5");
    }
    return h2_half_alpha(s, params.beta, params.theta);
  }
  if (chosen == "memoryless") return h2_memoryless(s, params.beta);
  if (chosen == "pure_memory") return h2_pure_memory(s, params.beta, params.theta);
  if (chosen == "lyapunov_oracle") return h2_lyapunov_oracle(s, params);
  if (chosen == "limit_half_alpha") return h2_limit_half_alpha(s, params.beta);
  if (chosen == "gramian_bruteforce") {
    const GramianSum sum = h2_gramian_bruteforce(g, params, horizon);
    if (!sum.tail_ok) {
      std::cerr << "warning: truncated Gramian tail estimate " << sum.tail_bound
                << " exceeds 1e-10; increase --horizon\n";
    }
    H2Report report;
    report.value = sum.value;
    report.method = H2Method::gramian_bruteforce;
    report.alpha = params.alpha;
    report.beta = params.beta;
    report.theta = params.theta;
    return report;
  }
  throw ParameterError("unknown method: " + method);
}

int dispatch(CLI::App& app, int argc, char** argv) {
  GraphOptions g_graph, g_region, g_h2, g_sim, g_depth, g_params, g_fig;
  BetaOption b_h2, b_sim, b_depth, b_fig;
  OutputOptions graph_out, region_out, h2_out, sim_out, depth_out, params_out, fig_out;

  double alpha = 0.5;
  int theta = 1, theta_max = 0;
  std::string method = "auto";
  int bf_horizon = 400;
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker cap for grid/trial parallelism, 0 = all cores (never affects results)")
      ->capture_default_str();

  // ---- graph ----
  auto* graph_cmd = app.add_subcommand(
      "graph", "generate or load a graph; emit it as an edge list or JSON");
  g_graph.add_flags(graph_cmd);
  graph_out.add_flags(graph_cmd, "edges,json");

  // ---- region ----
  auto* region_cmd = app.add_subcommand(
      "region", "consensus region over an (alpha, beta) grid at fixed depth");
  g_region.add_flags(region_cmd);
  region_out.add_flags(region_cmd);
  int alpha_steps = 50, beta_steps = 50;
  double alpha_min = 0.02, alpha_max = 0.98;
  double beta_min_rel = 0.02, beta_max_rel = 2.25;
  region_cmd->add_option("--theta", theta, "memory depth (steps)")->capture_default_str();
  region_cmd->add_option("--alpha-steps", alpha_steps, "grid points in alpha")->capture_default_str();
  region_cmd->add_option("--beta-steps", beta_steps, "grid points in beta")->capture_default_str();
  region_cmd->add_option("--alpha-min", alpha_min, "lowest alpha")->capture_default_str();
  region_cmd->add_option("--alpha-max", alpha_max, "highest alpha")->capture_default_str();
  region_cmd->add_option("--beta-min-rel", beta_min_rel, "lowest beta as a fraction of 2/lambda_n")
      ->capture_default_str();
  region_cmd->add_option("--beta-max-rel", beta_max_rel, "highest beta as a fraction of 2/lambda_n")
      ->capture_default_str();

  // ---- h2 ----
  auto* h2_cmd = app.add_subcommand("h2", "H2 performance metric (squared norm)");
  g_h2.add_flags(h2_cmd);
  b_h2.add_flags(h2_cmd);
  h2_out.add_flags(h2_cmd);
  h2_cmd->add_option("--alpha", alpha, "memory factor in [0,1]")->capture_default_str();
  h2_cmd->add_option("--theta", theta, "memory depth (steps)")->capture_default_str();
  h2_cmd->add_option("--theta-max", theta_max, "maximum accessible depth (default: theta)");
  h2_cmd->add_option("--method", method,
                     "auto|table_ii|closed_small_theta|half_alpha_cf|memoryless|"
                     "pure_memory|lyapunov_oracle|gramian_bruteforce|limit_half_alpha")
      ->check(CLI::IsMember({"auto", "table_ii", "closed_small_theta", "half_alpha_cf",
                             "memoryless", "pure_memory", "lyapunov_oracle",
                             "gramian_bruteforce", "limit_half_alpha"}))
      ->capture_default_str();
  h2_cmd->add_option("--horizon", bf_horizon, "truncation horizon for gramian_bruteforce (steps)")
      ->capture_default_str();

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo estimate of the steady-state mean-square deviation");
  g_sim.add_flags(sim_cmd);
  b_sim.add_flags(sim_cmd);
  sim_out.add_flags(sim_cmd);
  SimConfig sim_cfg;
  bool noise_free = false;
  int nf_horizon = 500;
  sim_cmd->add_option("--alpha", alpha, "memory factor in [0,1]")->capture_default_str();
  sim_cmd->add_option("--theta", theta, "memory depth (steps)")->capture_default_str();
  sim_cmd->add_option("--trials", sim_cfg.trials, "independent trials")->capture_default_str();
  sim_cmd->add_option("--horizon", sim_cfg.horizon, "steps per trial")->capture_default_str();
  sim_cmd->add_option("--burn-in", sim_cfg.burn_in, "steps discarded before averaging")
      ->capture_default_str();
  sim_cmd->add_option("--init-scale", sim_cfg.init_scale,
                      "spread of the random initial layers (0 = start at consensus)")
      ->capture_default_str();
  sim_cmd->add_flag("--noise-free", noise_free,
                    "single noise-free run from a random initial history; emits the "
                    "per-step disagreement instead of an MSD estimate");
  sim_cmd->add_option("--noise-free-horizon", nf_horizon,
                      "steps for the noise-free run")
      ->capture_default_str();

  // ---- optimal-depth ----
  auto* depth_cmd = app.add_subcommand(
      "optimal-depth", "best memory depth in 1..theta-max for fixed (alpha, beta)");
  g_depth.add_flags(depth_cmd);
  b_depth.add_flags(depth_cmd);
  depth_out.add_flags(depth_cmd);
  std::string depth_method = "analytic";
  depth_cmd->add_option("--alpha", alpha, "memory factor in [0,1]")->capture_default_str();
  depth_cmd->add_option("--theta-max", theta_max, "maximum accessible depth")->capture_default_str();
  depth_cmd->add_option("--method", depth_method, "analytic|simulate")
      ->check(CLI::IsMember({"analytic", "simulate"}))
      ->capture_default_str();
  depth_cmd->add_option("--trials", sim_cfg.trials, "trials (simulate method)")->capture_default_str();
  depth_cmd->add_option("--horizon", sim_cfg.horizon, "steps per trial (simulate method)")
      ->capture_default_str();
  depth_cmd->add_option("--burn-in", sim_cfg.burn_in, "burn-in steps (simulate method)")
      ->capture_default_str();

  // ---- optimal-params ----
  auto* params_cmd = app.add_subcommand(
      "optimal-params", "grid + refinement search for the best (alpha, beta) at fixed depth");
  g_params.add_flags(params_cmd);
  params_out.add_flags(params_cmd);
  int p_alpha_steps = 60, p_beta_steps = 60, refine = 4;
  params_cmd->add_option("--theta", theta, "memory depth (steps)")->capture_default_str();
  params_cmd->add_option("--alpha-steps", p_alpha_steps, "coarse grid points in alpha")
      ->capture_default_str();
  params_cmd->add_option("--beta-steps", p_beta_steps, "coarse grid points in beta")
      ->capture_default_str();
  params_cmd->add_option("--refine", refine, "local refinement rounds (spacing halves each round)")
      ->capture_default_str();

  // ---- figure ----
  auto* fig_cmd = app.add_subcommand(
      "figure", "plot-ready tables: fig1 beta sweep, fig2 alpha sweep, fig3 depth sweep");
  g_fig.add_flags(fig_cmd);
  b_fig.add_flags(fig_cmd);
  fig_out.add_flags(fig_cmd);
  std::string fig_id;
  int fig_beta_steps = 60, fig_alpha_steps = 19;
  double fig_alpha = 0.5;
  fig_cmd->add_option("--id", fig_id, "fig1|fig2|fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  auto* fig_alpha_opt =
      fig_cmd->add_option("--alpha", fig_alpha, "memory factor (fig1/fig3; fig3 default 0.75)");
  fig_cmd->add_option("--theta-max", theta_max, "maximum accessible depth (default 10; fig3 20)");
  fig_cmd->add_option("--beta-steps", fig_beta_steps, "beta grid points (fig1)")->capture_default_str();
  fig_cmd->add_option("--alpha-steps", fig_alpha_steps, "alpha grid points (fig2)")->capture_default_str();

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (graph_cmd->parsed()) {
    const WeightedGraph g = g_graph.resolve();
    graph_out.write(render(
        graph_out.format == "json" ? "json" : "csv", [&] { return graph_json(g); },
        [&](std::ostream& out) { save_edge_list(g, out); }));
    return 0;
  }

  if (region_cmd->parsed()) {
    const WeightedGraph g = g_region.resolve();
    const Spectrum s = spectrum(g);
    const double cap = 2.0 / s.lambda_max();
    const ConsensusRegion region = consensus_region(
        s, theta, linspace(alpha_min, alpha_max, alpha_steps),
        linspace(beta_min_rel * cap, beta_max_rel * cap, beta_steps), threads);
    region_out.write(render(
        region_out.format, [&] { return to_json(region); },
        [&](std::ostream& out) { write_csv(region, out); }));
    return 0;
  }

  if (h2_cmd->parsed()) {
    const WeightedGraph g = g_h2.resolve();
    const Spectrum s = spectrum(g);
    const ProtocolParams params{alpha, b_h2.resolve(s), theta,
                                theta_max > 0 ? theta_max : theta};
    const H2Report report = run_h2_method(method, g, s, params, bf_horizon);
    h2_out.write(render(
        h2_out.format, [&] { return to_json(report); },
        [&](std::ostream& out) { write_csv(report, out); }));
    return 0;
  }

  if (sim_cmd->parsed()) {
    if (!g_sim.seed_given()) {
      throw ParameterError("simulate requires --seed (stochastic job)");
    }
    const WeightedGraph g = g_sim.resolve();
    const Spectrum s = spectrum(g);
    const ProtocolParams params{alpha, b_sim.resolve(s), theta, theta};
    sim_cfg.seed = g_sim.seed;
    if (noise_free) {
      const double scale = sim_cfg.init_scale > 0.0 ? sim_cfg.init_scale : 1.0;
      GaussianStream normal(SplitMix64::substream(sim_cfg.seed, 0));
      Eigen::MatrixXd history(params.theta + 1, g.size());
      for (int layer = 0; layer <= params.theta; ++layer) {
        for (int agent = 0; agent < g.size(); ++agent) {
          history(layer, agent) = scale * normal.next();
        }
      }
      const std::vector<double> traj = simulate_noise_free(g, params, history, nf_horizon);
      sim_out.write(render(
          sim_out.format,
          [&] { return nlohmann::json{{"disagreement", traj}}.dump(); },
          [&](std::ostream& out) { write_disagreement_csv(traj, out); }));
      return 0;
    }
    const SimResult result = estimate_msd(g, params, sim_cfg, threads);
    sim_out.write(render(
        sim_out.format, [&] { return to_json(result); },
        [&](std::ostream& out) {
          out << "msd_estimate,std_error,trials,horizon,burn_in,seed\n";
          out.precision(17);
          out << result.msd_estimate << ',' << result.std_error << ',' << result.trials
              << ',' << result.horizon << ',' << result.burn_in << ',' << result.seed
              << "\n";
        }));
    return 0;
  }

  if (depth_cmd->parsed()) {
    const WeightedGraph g = g_depth.resolve();
    const Spectrum s = spectrum(g);
    const double beta = b_depth.resolve(s);
    const int cap = theta_max > 0 ? theta_max : 10;
    DepthSearchResult result;
    if (depth_method == "simulate") {
      if (!g_depth.seed_given()) {
        throw ParameterError("optimal-depth --method simulate requires --seed");
      }
      sim_cfg.seed = g_depth.seed;
      result = optimal_depth(s, alpha, beta, cap, DepthMethod::simulate, &g, &sim_cfg);
    } else {
      result = optimal_depth(s, alpha, beta, cap, DepthMethod::analytic);
    }
    depth_out.write(render(
        depth_out.format, [&] { return to_json(result); },
        [&](std::ostream& out) { write_csv(result, out); }));
    return 0;
  }

  if (params_cmd->parsed()) {
    const WeightedGraph g = g_params.resolve();
    const Spectrum s = spectrum(g);
    const double cap = 2.0 / s.lambda_max();
    const ParamSearchResult result = optimal_params(
        s, theta, linspace(0.02, 0.98, p_alpha_steps),
        linspace(0.02 * cap, 0.98 * cap, p_beta_steps), refine, threads);
    params_out.write(render(
        params_out.format, [&] { return to_json(result); },
        [&](std::ostream& out) { write_csv(result, out); }));
    return 0;
  }

  if (fig_cmd->parsed()) {
    const WeightedGraph g = g_fig.resolve();
    const Spectrum s = spectrum(g);
    const double cap = 2.0 / s.lambda_max();
    if (fig_id == "fig1") {
      const int depth_cap = theta_max > 0 ? theta_max : 10;
      const BetaSweep sweep = sweep_beta(
          s, fig_alpha, depth_cap, linspace(0.01 * cap, 0.99 * cap, fig_beta_steps),
          threads);
      fig_out.write(render(
          fig_out.format, [&] { return to_json(sweep); },
          [&](std::ostream& out) { write_csv(sweep, out); }));
      return 0;
    }
    const double beta = b_fig.resolve(s);
    if (fig_id == "fig2") {
      const int depth_cap = theta_max > 0 ? theta_max : 10;
      const std::vector<double> alphas = linspace(0.05, 0.95, fig_alpha_steps);
      nlohmann::json rows = nlohmann::json::array();
      std::ostringstream csv;
      csv.precision(17);
      csv << "alpha,theta,h2\n";
      for (double a : alphas) {
        for (int t = 1; t <= depth_cap; ++t) {
          const ProtocolParams p{a, beta, t, depth_cap};
          double value = std::numeric_limits<double>::quiet_NaN();
          if (consensus_check(s, p)) value = h2_analytic(s, p).value;
          rows.push_back({{"alpha", a},
                          {"theta", t},
                          {"h2", std::isfinite(value) ? nlohmann::json(value)
                                                      : nlohmann::json(nullptr)}});
          csv << a << ',' << t << ',';
          if (std::isfinite(value)) csv << value;
          csv << "\n";
        }
      }
      fig_out.write(render(
          fig_out.format,
          [&] { return nlohmann::json{{"beta", beta}, {"rows", rows}}.dump(); },
          [&](std::ostream& out) { out << csv.str(); }));
      return 0;
    }
    // fig3: metric against depth at fixed (alpha, beta)
    const int depth_cap = theta_max > 0 ? theta_max : 20;
    const double a = fig_alpha_opt->count() > 0 ? fig_alpha : 0.75;
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "theta,h2\n";
    for (int t = 1; t <= depth_cap; ++t) {
      const ProtocolParams p{a, beta, t, depth_cap};
      double value = std::numeric_limits<double>::quiet_NaN();
      if (consensus_check(s, p)) {
        value = (a == 1.0)   ? h2_memoryless(s, beta).value
                : (a == 0.0) ? h2_pure_memory(s, beta, t).value
                             : h2_analytic(s, p).value;
      }
      rows.push_back({{"theta", t},
                      {"h2", std::isfinite(value) ? nlohmann::json(value)
                                                  : nlohmann::json(nullptr)}});
      csv << t << ',';
      if (std::isfinite(value)) csv << value;
      csv << "\n";
    }
    fig_out.write(render(
        fig_out.format,
        [&] {
          return nlohmann::json{{"alpha", a}, {"beta", beta}, {"rows", rows}}.dump();
        },
        [&](std::ostream& out) { out << csv.str(); }));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus-network H2 robustness toolkit"};
  try {
    return dispatch(app, argc, argv);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
