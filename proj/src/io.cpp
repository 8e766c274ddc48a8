#include "pqgraph/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pqgraph {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& origin, std::size_t line,
                    const char* what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || errno == ERANGE)
    throw ParseError(origin, line, std::string("invalid ") + what + " '" + tok + "'");
  return v;
}

std::size_t parse_count(const std::string& tok, const std::string& origin, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || errno == ERANGE || tok.empty() || tok[0] == '-')
    throw ParseError(origin, line, "invalid vertex count '" + tok + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

ParsedInstance parse_instance(std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;

  bool header_seen = false;
  std::size_t n = 0;
  std::unordered_map<std::string, std::uint32_t> index_of;
  std::vector<std::string> labels;
  std::vector<double> mu;
  std::vector<double> a, b, f, gcoef;
  int vertex_columns = 0;  // 2 or 6, fixed by the first vertex line
  std::vector<WeightedGraph::EdgeInput> edges;
  std::unordered_set<std::uint64_t> edge_keys;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = tokenize(line);
    if (toks.empty() || toks[0][0] == '#') continue;

    if (toks[0] == "graph") {
      if (header_seen) throw ParseError(origin, lineno, "duplicate header line");
      if (toks.size() != 2) throw ParseError(origin, lineno, "expected 'graph <n>'");
      n = parse_count(toks[1], origin, lineno);
      header_seen = true;
      continue;
    }
    if (!header_seen)
      throw ParseError(origin, lineno, "expected 'graph <n>' header before any other line");

    if (toks[0] == "v") {
      if (toks.size() != 3 && toks.size() != 7)
        throw ParseError(origin, lineno,
                         "expected 'v <id> <mu>' or 'v <id> <mu> <a> <b> <f> <g>'");
      const int cols = toks.size() == 3 ? 2 : 6;
      if (vertex_columns == 0)
        vertex_columns = cols;
      else if (vertex_columns != cols)
        throw ParseError(origin, lineno, "vertex lines mix 2-column and 6-column forms");
      const std::string& id = toks[1];
      if (index_of.count(id)) throw ParseError(origin, lineno, "duplicate vertex id '" + id + "'");
      if (labels.size() >= n)
        throw ParseError(origin, lineno, "more vertex lines than declared in header");
      index_of.emplace(id, static_cast<std::uint32_t>(labels.size()));
      labels.push_back(id);
      const double m = parse_double(toks[2], origin, lineno, "measure");
      if (!(m > 0.0)) throw ParseError(origin, lineno, "vertex measure must be positive");
      mu.push_back(m);
      if (cols == 6) {
        a.push_back(parse_double(toks[3], origin, lineno, "coefficient a"));
        b.push_back(parse_double(toks[4], origin, lineno, "coefficient b"));
        f.push_back(parse_double(toks[5], origin, lineno, "coefficient f"));
        gcoef.push_back(parse_double(toks[6], origin, lineno, "coefficient g"));
      }
      continue;
    }

    if (toks[0] == "e") {
      if (toks.size() != 4) throw ParseError(origin, lineno, "expected 'e <id1> <id2> <weight>'");
      const auto it1 = index_of.find(toks[1]);
      const auto it2 = index_of.find(toks[2]);
      if (it1 == index_of.end())
        throw ParseError(origin, lineno, "unknown vertex id '" + toks[1] + "'");
      if (it2 == index_of.end())
        throw ParseError(origin, lineno, "unknown vertex id '" + toks[2] + "'");
      if (it1->second == it2->second)
        throw ParseError(origin, lineno, "self-loop on vertex '" + toks[1] + "'");
      const double w = parse_double(toks[3], origin, lineno, "edge weight");
      if (!(w > 0.0)) throw ParseError(origin, lineno, "edge weight must be positive");
      const std::uint32_t lo = std::min(it1->second, it2->second);
      const std::uint32_t hi = std::max(it1->second, it2->second);
      const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
      if (!edge_keys.insert(key).second)
        throw ParseError(origin, lineno,
                         "duplicate edge between '" + toks[1] + "' and '" + toks[2] + "'");
      edges.push_back({it1->second, it2->second, w});
      continue;
    }

    throw ParseError(origin, lineno, "unrecognized line '" + toks[0] + "'");
  }

  if (!header_seen) throw ParseError(origin, lineno ? lineno : 1, "missing 'graph <n>' header");
  if (labels.size() != n)
    throw ParseError(origin, lineno,
                     "header declares " + std::to_string(n) + " vertices but " +
                         std::to_string(labels.size()) + " vertex lines were given");

  ParsedInstance out;
  out.graph = std::make_shared<const WeightedGraph>(
      WeightedGraph::from_edges(n, std::move(mu), edges));
  out.labels = std::move(labels);
  if (vertex_columns == 6) {
    CoefficientFields cf;
    cf.a = GraphFunction(std::move(a));
    cf.b = GraphFunction(std::move(b));
    cf.f = GraphFunction(std::move(f));
    cf.g = GraphFunction(std::move(gcoef));
    out.fields = std::move(cf);
  }
  return out;
}

ParsedInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_instance(in, path);
}

std::string format_instance(const WeightedGraph& graph, const std::vector<std::string>& labels,
                            const CoefficientFields* fields) {
  if (labels.size() != graph.vertex_count())
    throw std::invalid_argument("format_instance: label count does not match graph");
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "graph %zu\n", graph.vertex_count());
  out += buf;
  for (std::size_t x = 0; x < graph.vertex_count(); ++x) {
    if (fields) {
      std::snprintf(buf, sizeof buf, "v %s %.17g %.17g %.17g %.17g %.17g\n", labels[x].c_str(),
                    graph.measure(x), fields->a[x], fields->b[x], fields->f[x], fields->g[x]);
    } else {
      std::snprintf(buf, sizeof buf, "v %s %.17g\n", labels[x].c_str(), graph.measure(x));
    }
    out += buf;
  }
  for (std::size_t x = 0; x < graph.vertex_count(); ++x) {
    for (const auto& nb : graph.neighbors(x)) {
      if (nb.to > x) {
        std::snprintf(buf, sizeof buf, "e %s %s %.17g\n", labels[x].c_str(),
                      labels[nb.to].c_str(), nb.weight);
        out += buf;
      }
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("atomic rename to '" + path + "' failed: " + ec.message());
  }
}

}  // namespace pqgraph
