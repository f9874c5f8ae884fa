#include "memnet/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <json.hpp>

namespace memnet {

namespace {

using nlohmann::json;

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void set_precision(std::ostream& out) {
  out << std::setprecision(17);
}

}  // namespace

std::string to_json(const H2Report& report) {
  json per_mode = json::array();
  for (const auto& mode : report.per_mode) {
    per_mode.push_back({{"lambda", mode.lambda},
                        {"multiplicity", mode.multiplicity},
                        {"contribution", mode.contribution}});
  }
  const json doc = {{"method", to_string(report.method)},
                    {"value", report.value},
                    {"per_mode", per_mode},
                    {"params",
                     {{"alpha", report.alpha},
                      {"beta", report.beta},
                      {"theta", report.theta}}}};
  return doc.dump();
}

std::string to_json(const SimResult& result) {
  const json doc = {{"msd_estimate", result.msd_estimate},
                    {"std_error", result.std_error},
                    {"trials", result.trials},
                    {"horizon", result.horizon},
                    {"burn_in", result.burn_in},
                    {"seed", result.seed}};
  return doc.dump();
}

std::string to_json(const ConsensusRegion& region) {
  json stable = json::array();
  for (const auto& row : region.stable) {
    json line = json::array();
    for (auto cell : row) line.push_back(cell != 0);
    stable.push_back(line);
  }
  const json doc = {{"alpha", region.alpha_grid},
                    {"beta", region.beta_grid},
                    {"stable", stable}};
  return doc.dump();
}

std::string to_json(const DepthSearchResult& result) {
  json values = json::array();
  for (const auto& [theta, h2] : result.values) {
    values.push_back({{"theta", theta}, {"h2", h2}});
  }
  const json doc = {{"optimal_theta", result.optimal_theta},
                    {"beta_region", to_string(result.beta_region)},
                    {"truncated", result.truncated},
                    {"values", values}};
  return doc.dump();
}

std::string to_json(const ParamSearchResult& result) {
  json grid = json::array();
  for (const auto& row : result.grid_values) {
    json line = json::array();
    for (double v : row) line.push_back(number_or_null(v));
    grid.push_back(line);
  }
  const json doc = {{"alpha_opt", result.alpha_opt},
                    {"beta_opt", result.beta_opt},
                    {"value", result.value},
                    {"alpha_grid", result.alpha_grid},
                    {"beta_grid", result.beta_grid},
                    {"grid_values", grid}};
  return doc.dump();
}

std::string to_json(const BetaSweep& sweep) {
  json rows = json::array();
  for (const auto& row : sweep.rows) {
    rows.push_back({{"beta", row.beta},
                    {"optimal_theta", row.optimal_theta},
                    {"h2", number_or_null(row.h2)}});
  }
  const json doc = {{"rows", rows},
                    {"ref",
                     {{"inv_lambda2", sweep.inv_lambda2},
                      {"inv_lambda_n", sweep.inv_lambda_n},
                      {"two_inv_lambda_n", sweep.two_inv_lambda_n}}}};
  return doc.dump();
}

std::string graph_json(const WeightedGraph& g) {
  json edges = json::array();
  for (int i = 0; i < g.size(); ++i) {
    for (int j = i + 1; j < g.size(); ++j) {
      if (g.weight(i, j) > 0.0) {
        edges.push_back({{"i", i + 1}, {"j", j + 1}, {"w", g.weight(i, j)}});
      }
    }
  }
  const Spectrum s = spectrum(g);
  const json doc = {{"n", g.size()},
                    {"edges", edges},
                    {"eigenvalues", s.eigenvalues},
                    {"connected", is_connected(g)}};
  return doc.dump();
}

void write_csv(const H2Report& report, std::ostream& out) {
  set_precision(out);
  out << "# method=" << to_string(report.method) << "\n";
  out << "# value=" << report.value << "\n";
  out << "# alpha=" << report.alpha << " beta=" << report.beta
      << " theta=" << report.theta << "\n";
  out << "lambda,multiplicity,contribution\n";
  for (const auto& mode : report.per_mode) {
    out << mode.lambda << ',' << mode.multiplicity << ',' << mode.contribution << "\n";
  }
}

void write_csv(const ConsensusRegion& region, std::ostream& out) {
  set_precision(out);
  out << "alpha,beta,stable\n";
  for (std::size_t i = 0; i < region.alpha_grid.size(); ++i) {
    for (std::size_t j = 0; j < region.beta_grid.size(); ++j) {
      out << region.alpha_grid[i] << ',' << region.beta_grid[j] << ','
          << int(region.stable[i][j]) << "\n";
    }
  }
}

void write_csv(const DepthSearchResult& result, std::ostream& out) {
  set_precision(out);
  out << "# optimal_theta=" << result.optimal_theta << "\n";
  out << "# beta_region=" << to_string(result.beta_region) << "\n";
  out << "theta,h2\n";
  for (const auto& [theta, h2] : result.values) {
    out << theta << ',' << h2 << "\n";
  }
}

void write_csv(const ParamSearchResult& result, std::ostream& out) {
  set_precision(out);
  out << "# alpha_opt=" << result.alpha_opt << " beta_opt=" << result.beta_opt
      << " value=" << result.value << "\n";
  out << "alpha,beta,h2,stable\n";
  for (std::size_t i = 0; i < result.alpha_grid.size(); ++i) {
    for (std::size_t j = 0; j < result.beta_grid.size(); ++j) {
      const double v = result.grid_values[i][j];
      out << result.alpha_grid[i] << ',' << result.beta_grid[j] << ',';
      if (std::isfinite(v)) {
        out << v << ",1\n";
      } else {
        out << ",0\n";
      }
    }
  }
}

void write_csv(const BetaSweep& sweep, std::ostream& out) {
  set_precision(out);
  out << "# inv_lambda2=" << sweep.inv_lambda2 << "\n";
  out << "# inv_lambda_n=" << sweep.inv_lambda_n << "\n";
  out << "# two_inv_lambda_n=" << sweep.two_inv_lambda_n << "\n";
  out << "beta,optimal_theta,h2\n";
  for (const auto& row : sweep.rows) {
    out << row.beta << ',' << row.optimal_theta << ',';
    if (std::isfinite(row.h2)) out << row.h2;
    out << "\n";
  }
}

void write_disagreement_csv(const std::vector<double>& trajectory, std::ostream& out) {
  set_precision(out);
  out << "t,disagreement\n";
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    out << t << ',' << trajectory[t] << "\n";
  }
}

}  // namespace memnet
