#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pqgraph/kahan.hpp"
#include "pqgraph/spaces.hpp"

using namespace pqgraph;
using fixtures::Rng;

TEST_CASE("exponent ordering is enforced") {
  CHECK_NOTHROW(Exponents(3.0, 2.0, 0.5, 3.0));
  CHECK_NOTHROW(Exponents(2.0, 2.0, 0.5, 3.0));  // q = p allowed
  CHECK_THROWS_AS(Exponents(3.0, 2.0, 1.5, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponents(3.0, 0.9, 0.5, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponents(2.0, 3.0, 0.5, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponents(4.0, 2.0, 0.5, 3.0), std::invalid_argument);  // p = alpha+1
}

TEST_CASE("coefficient field invariants") {
  const auto g = fixtures::path_graph(3);
  auto cf = fixtures::uniform_fields(3);
  CHECK_NOTHROW(cf.validate(g));
  auto bad = cf;
  bad.f[1] = 0.0;
  CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
  bad = cf;
  bad.g = GraphFunction(3, 0.0);
  CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
  bad = cf;
  bad.a[0] = -1.0;
  CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
}

TEST_CASE("Lebesgue norms") {
  SUBCASE("hand values") {
    const auto g = WeightedGraph::from_edges(2, {1.0, 1.0}, {{0, 1, 1.0}});
    CHECK(lp_norm(g, GraphFunction(2, 0.0), 2.0) == 0.0);
    CHECK(lp_norm(g, GraphFunction({3.0, 4.0}), 2.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(linf_norm(GraphFunction({-7.0, 2.0})) == 7.0);
    CHECK(linf_norm(GraphFunction(2, 0.0)) == 0.0);
  }
  SUBCASE("theta = 1 coincides with the integral of |psi|") {
    Rng rng(5);
    const auto g = fixtures::random_connected_graph(17, rng);
    const auto psi = fixtures::random_function(17, rng, -2.0, 2.0);
    GraphFunction abs_psi(17, 0.0);
    for (int i = 0; i < 17; ++i) abs_psi[i] = std::abs(psi[i]);
    CHECK(lp_norm(g, psi, 1.0) == doctest::Approx(integrate(g, abs_psi)).epsilon(1e-14));
  }
  SUBCASE("sup norm is the large-theta limit") {
    const auto g = fixtures::path_graph(4);
    const GraphFunction psi({0.2, -1.3, 0.7, 1.1});
    CHECK(lp_norm(g, psi, 1e6) == doctest::Approx(linf_norm(psi)).epsilon(1e-5));
  }
  SUBCASE("absolute homogeneity") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = fixtures::random_connected_graph(2 + trial % 30, rng);
      const auto psi = fixtures::random_function(g.vertex_count(), rng, -2.0, 2.0);
      const double theta = rng.uniform(1.0, 6.0);
      const double c = rng.uniform(-4.0, 4.0);
      const double lhs = lp_norm(g, psi.scaled(c), theta);
      const double rhs = std::abs(c) * lp_norm(g, psi, theta);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
  }
  SUBCASE("theta below 1 throws") {
    const auto g = fixtures::path_graph(2);
    CHECK_THROWS_AS(lp_norm(g, GraphFunction(2, 1.0), 0.5), std::invalid_argument);
  }
}

TEST_CASE("Sobolev norms") {
  SUBCASE("single vertex, gradient term vanishes") {
    const auto g = WeightedGraph::from_edges(1, {1.0}, {});
    CHECK(sobolev_norm(g, GraphFunction({1.0}), GraphFunction({2.0}), 3.0) ==
          doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-15));
    CHECK(sobolev_norm(g, GraphFunction({0.0}), GraphFunction({2.0}), 3.0) == 0.0);
  }
  SUBCASE("two-vertex hand value") {
    const auto g = WeightedGraph::from_edges(2, {1.0, 1.0}, {{0, 1, 2.0}});
    const GraphFunction psi({0.0, 1.0});
    CHECK(sobolev_norm(g, psi, GraphFunction(2, 1.0), 2.0) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  }
  SUBCASE("w-norm is the sum of the two Sobolev norms") {
    const auto g = WeightedGraph::from_edges(1, {1.0}, {});
    const auto cf = fixtures::uniform_fields(1, 1.0, 1.0, 1.0, 1.0);
    const Exponents e(2.0, 2.0, 0.5, 3.0);
    CHECK(w_norm(g, GraphFunction({1.0}), cf, e) == 2.0);

    Rng rng(9);
    const auto gr = fixtures::random_connected_graph(12, rng);
    const auto fields = fixtures::random_fields(12, rng);
    const auto psi = fixtures::random_function(12, rng, -2.0, 2.0);
    const auto exps = fixtures::standard_exponents();
    CHECK(w_norm(gr, psi, fields, exps) ==
          sobolev_norm(gr, psi, fields.a, exps.p) + sobolev_norm(gr, psi, fields.b, exps.q));
  }
  SUBCASE("dominates the weighted Lebesgue part") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = fixtures::random_connected_graph(2 + trial % 25, rng);
      const auto cf = fixtures::random_fields(g.vertex_count(), rng);
      const auto psi = fixtures::random_function(g.vertex_count(), rng, -2.0, 2.0);
      const double p = rng.uniform(1.5, 4.0);
      KahanAccumulator acc;
      for (std::size_t x = 0; x < g.vertex_count(); ++x)
        acc.add(g.measure(x) * cf.a[x] * std::pow(std::abs(psi[x]), p));
      const double norm = sobolev_norm(g, psi, cf.a, p);
      CHECK(std::pow(norm, p) >= acc.value() * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("embedding inequalities") {
  SUBCASE("zero function holds with equality") {
    const auto g = fixtures::path_graph(5);
    const auto cf = fixtures::uniform_fields(5);
    const auto report =
        embedding_checks(g, GraphFunction(5, 0.0), cf, fixtures::standard_exponents(), 4.0);
    CHECK(report.all_ok());
    for (const auto& c : report.checks) {
      CHECK(c.lhs == 0.0);
      CHECK(c.rhs == 0.0);
    }
  }
  SUBCASE("single-vertex equality case for the sup bound") {
    const auto g = WeightedGraph::from_edges(1, {2.0}, {});
    const auto cf = fixtures::uniform_fields(1, 1.0, 1.0, 1.0, 1.0);
    const Exponents e(2.0, 2.0, 0.5, 3.0);
    const auto report = embedding_checks(g, GraphFunction({1.0}), cf, e, 2.0);
    CHECK(report.checks[0].name == "sup_vs_wa");
    CHECK(report.checks[0].lhs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(report.checks[0].rhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(report.all_ok());
  }
  SUBCASE("random draw on a path") {
    Rng rng(15);
    const auto g = fixtures::path_graph(20);
    const auto cf = fixtures::uniform_fields(20, 1.0, 1.0, 0.5, 1.0);
    const Exponents e(3.0, 2.0, 0.5, 3.0);
    const auto psi = fixtures::random_function(20, rng, -2.0, 2.0);
    const auto report = embedding_checks(g, psi, cf, e, 4.0);
    CHECK(report.all_ok());
  }
  SUBCASE("property over 1000 random draws") {
    Rng rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto g = fixtures::random_connected_graph(2 + trial % 40, rng);
      const auto cf = fixtures::random_fields(g.vertex_count(), rng);
      const auto e = fixtures::random_exponents(rng);
      const auto psi = fixtures::random_function(g.vertex_count(), rng, -3.0, 3.0);
      const double theta = e.p + rng.uniform(0.0, 3.0);
      const auto report = embedding_checks(g, psi, cf, e, theta);
      for (const auto& c : report.checks) {
        INFO(c.name, " lhs=", c.lhs, " rhs=", c.rhs);
        CHECK(c.ok);
      }
    }
  }
  SUBCASE("theta below p is refused") {
    const auto g = fixtures::path_graph(3);
    const auto cf = fixtures::uniform_fields(3);
    CHECK_THROWS_AS(
        embedding_checks(g, GraphFunction(3, 1.0), cf, fixtures::standard_exponents(), 2.5),
        std::invalid_argument);
  }
}

TEST_CASE("scalar two-power inequality") {
  // |x|^p + |y|^q >= (|x|+|y|)^{min(p,q)} / max(2^{q-1}, 2^{p-1}) - 1
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = rng.uniform(1.0 + 1e-9, 5.0);
    const double q = rng.uniform(1.0 + 1e-9, 5.0);
    const double x = rng.uniform(-20.0, 20.0);
    const double y = rng.uniform(-20.0, 20.0);
    const double lhs = std::pow(std::abs(x), p) + std::pow(std::abs(y), q);
    const double rhs = std::pow(std::abs(x) + std::abs(y), std::min(p, q)) /
                           std::max(std::pow(2.0, q - 1.0), std::pow(2.0, p - 1.0)) -
                       1.0;
    CHECK(lhs >= rhs - 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
}
