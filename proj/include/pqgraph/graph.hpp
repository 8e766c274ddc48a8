#ifndef PQGRAPH_GRAPH_HPP
#define PQGRAPH_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pqgraph {

/// Real-valued function on the vertex set, stored densely by vertex id.
/// Solutions, test functions and coefficient fields all use this role.
class GraphFunction {
 public:
  GraphFunction() = default;
  explicit GraphFunction(std::vector<double> values) : values_(std::move(values)) {}
  GraphFunction(std::initializer_list<double> values) : values_(values) {}
  GraphFunction(std::size_t n, double fill) : values_(n, fill) {}

  static GraphFunction constant(std::size_t n, double c) { return GraphFunction(n, c); }
  /// Indicator of a single vertex, the canonical test function e_{x0}.
  static GraphFunction indicator(std::size_t n, std::size_t x0);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  double min() const;
  double max_abs() const;
  bool all_positive() const { return min() > 0.0; }
  bool identically_zero() const;

  GraphFunction scaled(double c) const;

 private:
  std::vector<double> values_;
};

struct Neighbor {
  std::uint32_t to;
  double weight;
};

/// Finite symmetric weighted graph with a positive vertex measure.
/// Immutable after construction; safe to share across threads.
///
/// Vertex ids are dense 0..n-1. Adjacency is stored in CSR-like form with
/// both directions of every undirected edge, so iteration over the
/// neighbors of x visits each edge xy exactly once from the x side.
class WeightedGraph {
 public:
  struct EdgeInput {
    std::uint32_t u, v;
    double weight;
  };
  /// Half-edge input: one directed arc. Used to build intentionally broken
  /// adjacency (asymmetric weights, self-loops) for validation tests.
  struct HalfEdgeInput {
    std::uint32_t from, to;
    double weight;
  };

  /// Canonical constructor: stores every undirected edge symmetrically.
  static WeightedGraph from_edges(std::size_t vertex_count, std::vector<double> measure,
                                  const std::vector<EdgeInput>& edges);
  /// Raw constructor: stores exactly the arcs given. Invariants are not
  /// enforced here; validate() reports them.
  static WeightedGraph from_half_edges(std::size_t vertex_count, std::vector<double> measure,
                                       const std::vector<HalfEdgeInput>& arcs);

  std::size_t vertex_count() const { return measure_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  double measure(std::size_t x) const { return measure_[x]; }
  const std::vector<double>& measures() const { return measure_; }

  std::span<const Neighbor> neighbors(std::size_t x) const {
    return {neighbors_.data() + offsets_[x], neighbors_.data() + offsets_[x + 1]};
  }

  /// min over vertices of mu(x); cached at construction.
  double mu_min() const { return mu_min_; }
  /// max over vertices of sum_{y~x} w_xy; cached at construction.
  double weight_row_sum_max() const { return row_sum_max_; }
  bool connected() const { return connected_; }

  /// BFS hop distance between two vertices; -1 if unreachable.
  long distance(std::size_t x, std::size_t y) const;

 private:
  WeightedGraph() = default;
  void finalize_cache();

  std::vector<double> measure_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> neighbors_;
  double mu_min_ = 0.0;
  double row_sum_max_ = 0.0;
  bool connected_ = true;
};

/// Outcome of validating the standing graph hypotheses. Report-style:
/// never throws, lists every violated invariant.
struct ValidationReport {
  std::vector<std::string> violations;
  double mu_min = 0.0;
  double weight_row_sum_max = 0.0;
  bool connected = false;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_graph(const WeightedGraph& g);

/// Carre-du-champ form:
///   Gamma(psi1,psi2)(x) = (1/2mu(x)) sum_{y~x} w_xy (psi1(y)-psi1(x)) (psi2(y)-psi2(x)).
double gamma_form(const WeightedGraph& g, const GraphFunction& psi1, const GraphFunction& psi2,
                  std::size_t x);

/// Gradient length |grad psi|(x) = sqrt(Gamma(psi,psi)(x)). A per-vertex
/// scalar, not a Euclidean vector.
double grad_norm(const WeightedGraph& g, const GraphFunction& psi, std::size_t x);

/// Gradient length at every vertex in one O(E) pass.
GraphFunction grad_norm_all(const WeightedGraph& g, const GraphFunction& psi);

/// gn^(s-2) with the convention 0^negative = 0: when the gradient length
/// vanishes the whole edge term of the s-Laplacian is dropped. For s = 2
/// the factor is exactly 1 so the operator reduces to the linear Laplacian.
double grad_power(double gn, double s);

/// s-Laplacian:
///   (1/2mu(x)) sum_{y~x} (|grad psi|^{s-2}(y) + |grad psi|^{s-2}(x)) w_xy (psi(y)-psi(x)).
/// Requires s > 1.
double s_laplacian(const WeightedGraph& g, const GraphFunction& psi, double s, std::size_t x);

/// s-Laplacian at every vertex, sharing one gradient-length pass.
GraphFunction s_laplacian_all(const WeightedGraph& g, const GraphFunction& psi, double s);
/// Same, reusing a precomputed gradient-length vector.
GraphFunction s_laplacian_all(const WeightedGraph& g, const GraphFunction& psi, double s,
                              const GraphFunction& gnorm);

/// Integral over V: sum_x mu(x) psi(x), compensated summation.
double integrate(const WeightedGraph& g, const GraphFunction& psi);

/// Defect of the discrete integration-by-parts identity
///   int (Delta_s psi) phi dmu = - int |grad psi|^{s-2} Gamma(psi,phi) dmu,
/// i.e. the sum of the two sides. Must vanish (up to rounding) on any
/// finite graph.
double integration_by_parts_defect(const WeightedGraph& g, const GraphFunction& psi,
                                   const GraphFunction& phi, double s);

namespace detail {
void require_sized(const WeightedGraph& g, const GraphFunction& f, const char* what);
void require_vertex(const WeightedGraph& g, std::size_t x);
void require_s_exponent(double s);
}  // namespace detail

}  // namespace pqgraph

#endif
