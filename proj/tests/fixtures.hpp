#ifndef PQGRAPH_TESTS_FIXTURES_HPP
#define PQGRAPH_TESTS_FIXTURES_HPP

#include <random>
#include <set>
#include <utility>

#include "pqgraph/instance.hpp"

namespace fixtures {

using namespace pqgraph;

/// Deterministic uniform doubles built from raw mt19937_64 bits, so frozen
/// expectations survive standard-library changes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double x = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * x;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline WeightedGraph path_graph(std::size_t n, double mu = 1.0, double w = 1.0) {
  std::vector<WeightedGraph::EdgeInput> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1), w});
  return WeightedGraph::from_edges(n, std::vector<double>(n, mu), edges);
}

inline WeightedGraph cycle_graph(std::size_t n, double mu = 1.0, double w = 1.0) {
  std::vector<WeightedGraph::EdgeInput> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + 1) % n), w});
  return WeightedGraph::from_edges(n, std::vector<double>(n, mu), edges);
}

inline WeightedGraph grid_graph(std::size_t nx, std::size_t ny, double mu = 1.0, double w = 1.0) {
  const auto id = [nx](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(j * nx + i);
  };
  std::vector<WeightedGraph::EdgeInput> edges;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (i + 1 < nx) edges.push_back({id(i, j), id(i + 1, j), w});
      if (j + 1 < ny) edges.push_back({id(i, j), id(i, j + 1), w});
    }
  }
  return WeightedGraph::from_edges(nx * ny, std::vector<double>(nx * ny, mu), edges);
}

inline WeightedGraph star_graph(std::size_t n, double mu = 1.0, double w = 1.0) {
  std::vector<WeightedGraph::EdgeInput> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, static_cast<std::uint32_t>(i), w});
  return WeightedGraph::from_edges(n, std::vector<double>(n, mu), edges);
}

/// Random connected graph: random spanning tree plus extra random edges,
/// random measures and weights. Seeded and portable.
inline WeightedGraph random_connected_graph(std::size_t n, Rng& rng, double extra_factor = 1.0) {
  std::vector<double> mu(n);
  for (auto& m : mu) m = rng.uniform(0.2, 3.0);
  std::vector<WeightedGraph::EdgeInput> edges;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (std::size_t i = 1; i < n; ++i) {
    const auto parent = static_cast<std::uint32_t>(rng.index(i));
    edges.push_back({static_cast<std::uint32_t>(i), parent, rng.uniform(0.1, 2.0)});
    seen.insert({parent, static_cast<std::uint32_t>(i)});
  }
  const std::size_t extra = static_cast<std::size_t>(extra_factor * static_cast<double>(n));
  for (std::size_t k = 0; k < extra && n > 2; ++k) {
    const auto i = static_cast<std::uint32_t>(rng.index(n));
    const auto j = static_cast<std::uint32_t>(rng.index(n));
    if (i == j) continue;
    const auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second) continue;
    edges.push_back({i, j, rng.uniform(0.1, 2.0)});
  }
  return WeightedGraph::from_edges(n, std::move(mu), edges);
}

/// Near-regular random graph: a cycle plus random chords up to the target
/// degree. Connected by construction.
inline WeightedGraph random_regular_graph(std::size_t n, std::size_t degree, Rng& rng) {
  std::vector<double> mu(n);
  for (auto& m : mu) m = rng.uniform(0.5, 2.0);
  std::vector<WeightedGraph::EdgeInput> edges;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::uint32_t>(i);
    const auto b = static_cast<std::uint32_t>((i + 1) % n);
    const auto key = std::minmax(a, b);
    if (seen.insert({key.first, key.second}).second) edges.push_back({a, b, rng.uniform(0.2, 2.0)});
  }
  const std::size_t target = n * degree / 2;
  for (std::size_t attempts = 0; attempts < 20 * n && edges.size() < target; ++attempts) {
    const auto i = static_cast<std::uint32_t>(rng.index(n));
    const auto j = static_cast<std::uint32_t>(rng.index(n));
    if (i == j) continue;
    const auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second) continue;
    edges.push_back({i, j, rng.uniform(0.2, 2.0)});
  }
  return WeightedGraph::from_edges(n, std::move(mu), edges);
}

inline GraphFunction random_function(std::size_t n, Rng& rng, double lo, double hi) {
  GraphFunction f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) f[i] = rng.uniform(lo, hi);
  return f;
}

/// Uniform coefficient fields.
inline CoefficientFields uniform_fields(std::size_t n, double a = 1.0, double b = 1.0,
                                        double f = 0.1, double g = 1.0) {
  CoefficientFields cf;
  cf.a = GraphFunction(n, a);
  cf.b = GraphFunction(n, b);
  cf.f = GraphFunction(n, f);
  cf.g = GraphFunction(n, g);
  return cf;
}

inline CoefficientFields random_fields(std::size_t n, Rng& rng) {
  CoefficientFields cf;
  cf.a = random_function(n, rng, 0.3, 3.0);
  cf.b = random_function(n, rng, 0.3, 3.0);
  cf.f = random_function(n, rng, 0.05, 1.5);
  cf.g = random_function(n, rng, 0.0, 2.0);
  if (cf.g.max_abs() == 0.0) cf.g[0] = 1.0;
  return cf;
}

/// The standing desk-scale exponents.
inline Exponents standard_exponents() { return Exponents(3.0, 2.0, 0.5, 3.0); }

/// Random exponents with the ordering 0 < gamma < 1 < q <= p < alpha+1 and
/// alpha+1-p bounded away from zero so that power-function rounding stays
/// far below the 1e-12 identity tolerances.
inline Exponents random_exponents(Rng& rng) {
  const double gamma = rng.uniform(0.1, 0.9);
  const double q = rng.uniform(1.1, 3.0);
  const double p = q + rng.uniform(0.0, 1.5);
  const double alpha = p - 1.0 + rng.uniform(0.3, 3.0) + 1.0;
  return Exponents(p, q, gamma, alpha);
}

/// 10x10 grid, mu = w = a = b = 1, f = 0.1, g = 1, p=3 q=2 gamma=1/2 alpha=3.
inline ProblemInstance grid_fixture(double lambda) {
  auto g = std::make_shared<const WeightedGraph>(grid_graph(10, 10));
  return ProblemInstance(g, uniform_fields(g->vertex_count()), standard_exponents(), lambda);
}

/// One vertex, no edges, a=b=f=g=mu=1.
inline ProblemInstance single_vertex_fixture(const Exponents& e, double lambda) {
  auto g = std::make_shared<const WeightedGraph>(
      WeightedGraph::from_edges(1, {1.0}, {}));
  return ProblemInstance(g, uniform_fields(1, 1.0, 1.0, 1.0, 1.0), e, lambda);
}

inline ProblemInstance random_instance(std::size_t n, Rng& rng, double lambda) {
  auto g = std::make_shared<const WeightedGraph>(random_connected_graph(n, rng));
  return ProblemInstance(g, random_fields(n, rng), random_exponents(rng), lambda);
}

}  // namespace fixtures

#endif
