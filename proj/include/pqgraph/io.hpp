#ifndef PQGRAPH_IO_HPP
#define PQGRAPH_IO_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqgraph/spaces.hpp"

namespace pqgraph {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& origin, std::size_t line, const std::string& msg)
      : std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A parsed graph/instance file. Fields are present only when the vertex
/// lines carried the full 6-column form. External ids are kept, in dense
/// vertex order, for report output.
struct ParsedInstance {
  std::shared_ptr<const WeightedGraph> graph;
  std::optional<CoefficientFields> fields;
  std::vector<std::string> labels;
};

/// Line-oriented text format:
///   graph <n>
///   v <id> <mu>                  (graph only)    or
///   v <id> <mu> <a> <b> <f> <g>  (full instance)
///   e <id1> <id2> <weight>       (undirected, stored symmetrically)
/// Blank lines and lines starting with '#' are ignored. Vertex ids are
/// arbitrary whitespace-free strings, mapped to dense indices in order of
/// appearance. All diagnostics carry 1-based line numbers.
ParsedInstance parse_instance(std::istream& in, const std::string& origin);
ParsedInstance load_instance_file(const std::string& path);

/// Canonical text form (17-significant-digit floats); reloading reproduces
/// every stored double bit-exactly.
std::string format_instance(const WeightedGraph& graph, const std::vector<std::string>& labels,
                            const CoefficientFields* fields);

/// Atomic write: temp file in the destination directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pqgraph

#endif
