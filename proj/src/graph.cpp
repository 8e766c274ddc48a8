#include "pqgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <stdexcept>

#include "pqgraph/kahan.hpp"

namespace pqgraph {

GraphFunction GraphFunction::indicator(std::size_t n, std::size_t x0) {
  if (x0 >= n) throw std::out_of_range("indicator: vertex out of range");
  GraphFunction f(n, 0.0);
  f[x0] = 1.0;
  return f;
}

double GraphFunction::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

double GraphFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GraphFunction::identically_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GraphFunction GraphFunction::scaled(double c) const {
  GraphFunction out(*this);
  for (double& v : out.values_) v *= c;
  return out;
}

namespace detail {

void require_sized(const WeightedGraph& g, const GraphFunction& f, const char* what) {
  if (f.size() != g.vertex_count())
    throw std::invalid_argument(std::string(what) + ": function size does not match graph");
}

void require_vertex(const WeightedGraph& g, std::size_t x) {
  if (x >= g.vertex_count()) throw std::out_of_range("vertex id out of range");
}

void require_s_exponent(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("exponent s must be > 1");
}

}  // namespace detail

WeightedGraph WeightedGraph::from_edges(std::size_t vertex_count, std::vector<double> measure,
                                        const std::vector<EdgeInput>& edges) {
  std::vector<HalfEdgeInput> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& e : edges) {
    arcs.push_back({e.u, e.v, e.weight});
    arcs.push_back({e.v, e.u, e.weight});
  }
  return from_half_edges(vertex_count, std::move(measure), arcs);
}

WeightedGraph WeightedGraph::from_half_edges(std::size_t vertex_count, std::vector<double> measure,
                                             const std::vector<HalfEdgeInput>& arcs) {
  if (measure.size() != vertex_count)
    throw std::invalid_argument("measure vector size does not match vertex count");
  WeightedGraph g;
  g.measure_ = std::move(measure);

  std::vector<std::size_t> degree(vertex_count, 0);
  for (const auto& a : arcs) {
    if (a.from >= vertex_count || a.to >= vertex_count)
      throw std::out_of_range("edge endpoint out of range");
    ++degree[a.from];
  }
  g.offsets_.assign(vertex_count + 1, 0);
  for (std::size_t x = 0; x < vertex_count; ++x) g.offsets_[x + 1] = g.offsets_[x] + degree[x];
  g.neighbors_.resize(arcs.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& a : arcs) g.neighbors_[cursor[a.from]++] = {a.to, a.weight};
  // Deterministic neighbor order regardless of input order.
  for (std::size_t x = 0; x < vertex_count; ++x) {
    std::sort(g.neighbors_.begin() + g.offsets_[x], g.neighbors_.begin() + g.offsets_[x + 1],
              [](const Neighbor& l, const Neighbor& r) { return l.to < r.to; });
  }
  g.finalize_cache();
  return g;
}

void WeightedGraph::finalize_cache() {
  mu_min_ = std::numeric_limits<double>::infinity();
  for (double m : measure_) mu_min_ = std::min(mu_min_, m);
  if (measure_.empty()) mu_min_ = 0.0;

  row_sum_max_ = 0.0;
  for (std::size_t x = 0; x < vertex_count(); ++x) {
    double s = 0.0;
    for (const auto& nb : neighbors(x)) s += nb.weight;
    row_sum_max_ = std::max(row_sum_max_, s);
  }

  // BFS from vertex 0.
  connected_ = true;
  if (vertex_count() > 1) {
    std::vector<char> seen(vertex_count(), 0);
    std::deque<std::uint32_t> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::uint32_t x = queue.front();
      queue.pop_front();
      for (const auto& nb : neighbors(x)) {
        if (!seen[nb.to]) {
          seen[nb.to] = 1;
          ++reached;
          queue.push_back(nb.to);
        }
      }
    }
    connected_ = reached == vertex_count();
  }
}

long WeightedGraph::distance(std::size_t x, std::size_t y) const {
  detail::require_vertex(*this, x);
  detail::require_vertex(*this, y);
  if (x == y) return 0;
  std::vector<long> dist(vertex_count(), -1);
  std::deque<std::size_t> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const auto& nb : neighbors(v)) {
      if (dist[nb.to] < 0) {
        dist[nb.to] = dist[v] + 1;
        if (nb.to == y) return dist[nb.to];
        queue.push_back(nb.to);
      }
    }
  }
  return -1;
}

ValidationReport validate_graph(const WeightedGraph& g) {
  ValidationReport report;
  report.mu_min = g.mu_min();
  report.weight_row_sum_max = g.weight_row_sum_max();
  report.connected = g.connected();

  const std::size_t n = g.vertex_count();
  if (n == 0) report.violations.push_back("graph has no vertices");

  for (std::size_t x = 0; x < n; ++x) {
    if (!(g.measure(x) > 0.0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "measure mu(%zu) = %g is not positive", x, g.measure(x));
      report.violations.push_back(buf);
    }
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& nb : g.neighbors(x)) {
      if (nb.to == x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "self-loop at vertex %zu", x);
        report.violations.push_back(buf);
        continue;
      }
      if (!(nb.weight > 0.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "edge (%zu,%u) has nonpositive weight %g", x, nb.to,
                      nb.weight);
        report.violations.push_back(buf);
      }
      // Symmetry must be bit-exact: find the reverse arc.
      bool found = false;
      for (const auto& rb : g.neighbors(nb.to)) {
        if (rb.to == x) {
          found = true;
          if (rb.weight != nb.weight && x < nb.to) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "asymmetric weights on edge (%zu,%u): %.17g vs %.17g",
                          x, nb.to, nb.weight, rb.weight);
            report.violations.push_back(buf);
          }
          break;
        }
      }
      if (!found) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "arc (%zu,%u) has no reverse arc", x, nb.to);
        report.violations.push_back(buf);
      }
    }
  }

  if (!g.connected()) report.violations.push_back("graph is not connected");
  return report;
}

double gamma_form(const WeightedGraph& g, const GraphFunction& psi1, const GraphFunction& psi2,
                  std::size_t x) {
  detail::require_sized(g, psi1, "gamma_form(psi1)");
  detail::require_sized(g, psi2, "gamma_form(psi2)");
  detail::require_vertex(g, x);
  KahanAccumulator acc;
  for (const auto& nb : g.neighbors(x)) {
    acc.add(nb.weight * ((psi1[nb.to] - psi1[x]) * (psi2[nb.to] - psi2[x])));
  }
  return acc.value() / (2.0 * g.measure(x));
}

double grad_norm(const WeightedGraph& g, const GraphFunction& psi, std::size_t x) {
  const double gm = gamma_form(g, psi, psi, x);
  return gm > 0.0 ? std::sqrt(gm) : 0.0;
}

GraphFunction grad_norm_all(const WeightedGraph& g, const GraphFunction& psi) {
  detail::require_sized(g, psi, "grad_norm_all");
  GraphFunction out(g.vertex_count(), 0.0);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    KahanAccumulator acc;
    for (const auto& nb : g.neighbors(x)) {
      const double d = psi[nb.to] - psi[x];
      acc.add(nb.weight * (d * d));
    }
    const double gm = acc.value() / (2.0 * g.measure(x));
    out[x] = gm > 0.0 ? std::sqrt(gm) : 0.0;
  }
  return out;
}

double grad_power(double gn, double s) {
  if (gn == 0.0) return s == 2.0 ? 1.0 : 0.0;
  if (s == 2.0) return 1.0;
  return std::pow(gn, s - 2.0);
}

double s_laplacian(const WeightedGraph& g, const GraphFunction& psi, double s, std::size_t x) {
  detail::require_sized(g, psi, "s_laplacian");
  detail::require_vertex(g, x);
  detail::require_s_exponent(s);
  const double wx = grad_power(grad_norm(g, psi, x), s);
  KahanAccumulator acc;
  for (const auto& nb : g.neighbors(x)) {
    const double wy = grad_power(grad_norm(g, psi, nb.to), s);
    acc.add((wy + wx) * (nb.weight * (psi[nb.to] - psi[x])));
  }
  return acc.value() / (2.0 * g.measure(x));
}

GraphFunction s_laplacian_all(const WeightedGraph& g, const GraphFunction& psi, double s,
                              const GraphFunction& gnorm) {
  detail::require_sized(g, psi, "s_laplacian_all");
  detail::require_sized(g, gnorm, "s_laplacian_all(gnorm)");
  detail::require_s_exponent(s);
  GraphFunction w(g.vertex_count(), 0.0);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) w[x] = grad_power(gnorm[x], s);
  GraphFunction out(g.vertex_count(), 0.0);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    KahanAccumulator acc;
    for (const auto& nb : g.neighbors(x)) {
      acc.add((w[nb.to] + w[x]) * (nb.weight * (psi[nb.to] - psi[x])));
    }
    out[x] = acc.value() / (2.0 * g.measure(x));
  }
  return out;
}

GraphFunction s_laplacian_all(const WeightedGraph& g, const GraphFunction& psi, double s) {
  return s_laplacian_all(g, psi, s, grad_norm_all(g, psi));
}

double integrate(const WeightedGraph& g, const GraphFunction& psi) {
  detail::require_sized(g, psi, "integrate");
  KahanAccumulator acc;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) acc.add(g.measure(x) * psi[x]);
  return acc.value();
}

double integration_by_parts_defect(const WeightedGraph& g, const GraphFunction& psi,
                                   const GraphFunction& phi, double s) {
  detail::require_sized(g, psi, "integration_by_parts_defect(psi)");
  detail::require_sized(g, phi, "integration_by_parts_defect(phi)");
  detail::require_s_exponent(s);
  const GraphFunction gnorm = grad_norm_all(g, psi);
  const GraphFunction lap = s_laplacian_all(g, psi, s, gnorm);
  KahanAccumulator lhs;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) lhs.add(g.measure(x) * (lap[x] * phi[x]));
  KahanAccumulator rhs;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    rhs.add(g.measure(x) * (grad_power(gnorm[x], s) * gamma_form(g, psi, phi, x)));
  }
  return lhs.value() + rhs.value();
}

}  // namespace pqgraph
