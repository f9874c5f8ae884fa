#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace memnet {

/// Absolute tolerance for eigenvalue cleanup (lambda_1 is clamped to 0 below it).
inline constexpr double kTolEig = 1e-9;
/// Connectivity threshold on lambda_2.
inline constexpr double kTolConn = 1e-8;

enum class GraphFamily { complete, star, chain, ring_lattice, barabasi_albert };

std::string to_string(GraphFamily family);

/// Weighted undirected communication topology. The weight matrix is symmetric,
/// nonnegative, with a zero diagonal; these invariants are checked on
/// construction and a ParameterError is thrown on violation.
class WeightedGraph {
 public:
  explicit WeightedGraph(Eigen::MatrixXd weights);

  int size() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }

 private:
  Eigen::MatrixXd weights_;
};

/// Ascending Laplacian eigenvalues of a graph; eigenvalues[0] is exactly 0 for
/// any Laplacian spectrum produced by spectrum().
struct Spectrum {
  std::vector<double> eigenvalues;

  int n() const { return static_cast<int>(eigenvalues.size()); }
  double lambda2() const { return eigenvalues.at(1); }
  double lambda_max() const { return eigenvalues.back(); }
  bool connected(double tol = kTolConn) const { return n() >= 2 && lambda2() > tol; }
};

/// A distinct nonzero Laplacian eigenvalue with its multiplicity.
struct Mode {
  double lambda;
  int multiplicity;
};

/// Distinct eigenvalues of indices 2..n (the consensus eigenvalue 0 excluded),
/// merged when equal within kTolEig * max(1, lambda_n).
std::vector<Mode> nonzero_modes(const Spectrum& s);

/// Build one of the named unit-weight families, or a Barabasi-Albert graph
/// grown by preferential attachment from an m-vertex clique (m new edges per
/// arriving vertex, multi-edges resampled; deterministic for a fixed seed).
///   ring_lattice:     requires d >= 1 and n >= 2d+1
///   barabasi_albert:  requires 1 <= m < n and a seed
WeightedGraph generate_graph(GraphFamily family, int n,
                             std::optional<int> d = std::nullopt,
                             std::optional<int> m = std::nullopt,
                             std::optional<std::uint64_t> seed = std::nullopt);

/// L = D - A with D the weighted degree diagonal. Rows sum to zero.
Eigen::MatrixXd laplacian(const WeightedGraph& g);

/// Ascending eigenvalues of laplacian(g) via a dense symmetric eigensolver.
Spectrum spectrum(const WeightedGraph& g);

/// Breadth-first search over strictly positive edges.
bool is_connected(const WeightedGraph& g);

/// Edge-list format: first line "n m", then m lines "i j w" with 1-based
/// vertex indices and w > 0. Lines starting with '#' are ignored. Each
/// undirected edge is listed once.
WeightedGraph load_edge_list(std::istream& in);
WeightedGraph load_edge_list_file(const std::string& path);
void save_edge_list(const WeightedGraph& g, std::ostream& out);

}  // namespace memnet
