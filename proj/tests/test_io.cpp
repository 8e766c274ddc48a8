#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "pqgraph/io.hpp"

using namespace pqgraph;

namespace {

ParsedInstance parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in, "<test>");
}

}  // namespace

TEST_CASE("instance parsing, 2-column and 6-column forms") {
  SUBCASE("graph-only file") {
    const auto parsed = parse_text(
        "graph 2\n"
        "v x0 1\n"
        "v x1 1\n"
        "e x0 x1 2\n");
    CHECK(parsed.graph->vertex_count() == 2);
    CHECK(parsed.graph->edge_count() == 1);
    CHECK_FALSE(parsed.fields.has_value());
    CHECK(parsed.labels[0] == "x0");
    CHECK(parsed.graph->neighbors(0)[0].weight == 2.0);
  }
  SUBCASE("full instance file with comments and blank lines") {
    const auto parsed = parse_text(
        "# fixture\n"
        "graph 2\n"
        "\n"
        "v a 1 1 1 0.1 1\n"
        "v b 2 1 1 0.1 1\n"
        "e a b 1\n");
    REQUIRE(parsed.fields.has_value());
    CHECK(parsed.fields->f[1] == 0.1);
    CHECK(parsed.graph->measure(1) == 2.0);
  }
}

TEST_CASE("parse errors carry line numbers") {
  const auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("graph 1\nv a 1\nv b 1\n") == 3);
  CHECK(line_of("graph 2\nv a 1\nv a 1\n") == 3);
  CHECK(line_of("graph 2\nv a 1\nv b 1\ne a c 1\n") == 4);
  CHECK(line_of("graph 2\nv a 1\nv b 1\ne a a 1\n") == 4);
  CHECK(line_of("graph 2\nv a 1\nv b 1\ne a b -1\n") == 4);
  CHECK(line_of("graph 2\nv a 1\nv b 1\ne a b 1\ne b a 1\n") == 5);
  CHECK(line_of("graph 2\nv a 1\nv b 1 1 1 1 1\n") == 3);
  CHECK(line_of("graph 2\nv a zzz\n") == 2);
  CHECK(line_of("v a 1\n") == 1);
  CHECK_THROWS_AS(parse_text("graph 3\nv a 1\nv b 1\ne a b 1\n"), ParseError);
  CHECK_THROWS_AS(load_instance_file("/nonexistent/nope.graph"), ParseError);
}

TEST_CASE("format and reload round-trips every double bit-exactly") {
  fixtures::Rng rng(41);
  const auto g = fixtures::random_connected_graph(23, rng);
  auto fields = fixtures::random_fields(23, rng);
  std::vector<std::string> labels;
  for (int i = 0; i < 23; ++i) labels.push_back("n" + std::to_string(i));

  const std::string text = format_instance(g, labels, &fields);
  const auto parsed = parse_text(text);
  REQUIRE(parsed.graph->vertex_count() == g.vertex_count());
  REQUIRE(parsed.fields.has_value());
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    CHECK(parsed.graph->measure(x) == g.measure(x));
    CHECK(parsed.fields->a[x] == fields.a[x]);
    CHECK(parsed.fields->g[x] == fields.g[x]);
    REQUIRE(parsed.graph->neighbors(x).size() == g.neighbors(x).size());
    for (std::size_t k = 0; k < g.neighbors(x).size(); ++k) {
      CHECK(parsed.graph->neighbors(x)[k].to == g.neighbors(x)[k].to);
      CHECK(parsed.graph->neighbors(x)[k].weight == g.neighbors(x)[k].weight);
    }
  }

  // Cached instance scalars must agree to the last bit after a round-trip.
  const auto exps = fixtures::standard_exponents();
  const ProblemInstance before(std::make_shared<const WeightedGraph>(g), fields, exps, 0.5);
  const ProblemInstance after(parsed.graph, *parsed.fields, exps, 0.5);
  CHECK(before.a_min() == after.a_min());
  CHECK(before.b_min() == after.b_min());
  CHECK(before.mu_min() == after.mu_min());
  CHECK(before.g_sup() == after.g_sup());
  CHECK(before.f_norm_p() == after.f_norm_p());
  CHECK(before.f_norm_q() == after.f_norm_q());
}
