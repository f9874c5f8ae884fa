#include "memnet/graph.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <utility>

#include "memnet/errors.hpp"
#include "memnet/rng.hpp"

namespace memnet {

std::string to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::complete: return "complete";
    case GraphFamily::star: return "star";
    case GraphFamily::chain: return "chain";
    case GraphFamily::ring_lattice: return "ring_lattice";
    case GraphFamily::barabasi_albert: return "barabasi_albert";
  }
  return "unknown";
}

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  const auto n = weights_.rows();
  if (n < 2 || weights_.cols() != n) {
    throw ParameterError("WeightedGraph: weight matrix must be square with n >= 2");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw ParameterError("WeightedGraph: diagonal must be zero");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (weights_(i, j) != weights_(j, i)) {
        throw ParameterError("WeightedGraph: weight matrix must be symmetric");
      }
      if (weights_(i, j) < 0.0 || !std::isfinite(weights_(i, j))) {
        throw ParameterError("WeightedGraph: weights must be finite and nonnegative");
      }
    }
  }
}

namespace {

WeightedGraph make_barabasi_albert(int n, int m, std::uint64_t seed) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  // m-vertex seed clique, then preferential attachment: each arriving vertex
  // draws m distinct targets with probability proportional to degree.
  std::vector<int> endpoint_pool;  // one entry per edge endpoint
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      w(i, j) = w(j, i) = 1.0;
      endpoint_pool.push_back(i);
      endpoint_pool.push_back(j);
    }
  }
  SplitMix64 rng(seed);
  for (int v = m; v < n; ++v) {
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < std::min(m, v)) {
      int target;
      if (endpoint_pool.empty()) {
        target = static_cast<int>(rng.next() % static_cast<std::uint64_t>(v));
      } else {
        target = endpoint_pool[rng.next() % endpoint_pool.size()];
      }
      if (w(v, target) != 0.0) continue;  // multi-edge: resample
      chosen.push_back(target);
      w(v, target) = w(target, v) = 1.0;
    }
    for (int target : chosen) {
      endpoint_pool.push_back(v);
      endpoint_pool.push_back(target);
    }
  }
  return WeightedGraph(std::move(w));
}

}  // namespace

WeightedGraph generate_graph(GraphFamily family, int n, std::optional<int> d,
                             std::optional<int> m, std::optional<std::uint64_t> seed) {
  if (n < 3) throw ParameterError("generate_graph: n must be >= 3");
  switch (family) {
    case GraphFamily::complete: {
      Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
      w.diagonal().setZero();
      return WeightedGraph(std::move(w));
    }
    case GraphFamily::star: {
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
      for (int i = 1; i < n; ++i) w(0, i) = w(i, 0) = 1.0;
      return WeightedGraph(std::move(w));
    }
    case GraphFamily::chain: {
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
      return WeightedGraph(std::move(w));
    }
    case GraphFamily::ring_lattice: {
      if (!d.has_value() || *d < 1) {
        throw ParameterError("generate_graph: ring_lattice requires d >= 1");
      }
      if (n < 2 * *d + 1) {
        throw ParameterError("generate_graph: ring_lattice requires n >= 2d+1");
      }
      Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int k = 1; k <= *d; ++k) {
          const int j = (i + k) % n;
          w(i, j) = w(j, i) = 1.0;
        }
      }
      return WeightedGraph(std::move(w));
    }
    case GraphFamily::barabasi_albert: {
      if (!m.has_value() || *m < 1 || *m >= n) {
        throw ParameterError("generate_graph: barabasi_albert requires 1 <= m < n");
      }
      if (!seed.has_value()) {
        throw ParameterError("generate_graph: barabasi_albert requires a seed");
      }
      return make_barabasi_albert(n, *m, *seed);
    }
  }
  throw ParameterError("generate_graph: unknown family");
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd lap = -g.weights();
  lap.diagonal() = g.weights().rowwise().sum();
  return lap;
}

Spectrum spectrum(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("spectrum: symmetric eigensolver failed");
  }
  Spectrum s;
  s.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + g.size());
  // Collapse the near-zero cluster to exactly 0 (keeps the list ascending when
  // a disconnected graph carries several numerically-zero eigenvalues).
  for (double& ev : s.eigenvalues) {
    if (std::abs(ev) <= kTolEig) ev = 0.0;
  }
  return s;
}

bool is_connected(const WeightedGraph& g) {
  const int n = g.size();
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && g.weight(u, v) > 0.0) {
        seen[v] = 1;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == n;
}

std::vector<Mode> nonzero_modes(const Spectrum& s) {
  std::vector<Mode> modes;
  const double tol = kTolEig * std::max(1.0, s.lambda_max());
  for (int i = 1; i < s.n(); ++i) {
    const double lam = s.eigenvalues[i];
    if (!modes.empty() && lam - modes.back().lambda <= tol) {
      ++modes.back().multiplicity;
    } else {
      modes.push_back({lam, 1});
    }
  }
  return modes;
}

WeightedGraph load_edge_list(std::istream& in) {
  std::string line;
  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_data_line(header)) throw ParameterError("edge list: missing header line");
  std::istringstream hs(header);
  long long n = 0, edge_count = 0;
  if (!(hs >> n >> edge_count) || n < 2 || edge_count < 0) {
    throw ParameterError("edge list: header must be 'n m' with n >= 2");
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (long long e = 0; e < edge_count; ++e) {
    std::string row;
    if (!next_data_line(row)) throw ParameterError("edge list: fewer edges than declared");
    std::istringstream rs(row);
    long long i = 0, j = 0;
    double weight = 0.0;
    if (!(rs >> i >> j >> weight)) throw ParameterError("edge list: malformed edge line");
    if (i < 1 || i > n || j < 1 || j > n || i == j) {
      throw ParameterError("edge list: vertex indices must be distinct and in 1..n");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw ParameterError("edge list: edge weight must be positive");
    }
    if (w(i - 1, j - 1) != 0.0) {
      throw ParameterError("edge list: duplicate edge");
    }
    w(i - 1, j - 1) = w(j - 1, i - 1) = weight;
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open graph file: " + path);
  return load_edge_list(in);
}

void save_edge_list(const WeightedGraph& g, std::ostream& out) {
  const int n = g.size();
  int edges = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.weight(i, j) > 0.0) ++edges;
  out << n << ' ' << edges << '\n';
  out.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.weight(i, j) > 0.0) {
        out << (i + 1) << ' ' << (j + 1) << ' ' << g.weight(i, j) << '\n';
      }
    }
  }
}

}  // namespace memnet
