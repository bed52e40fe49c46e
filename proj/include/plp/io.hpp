#pragma once

#include "plp/parallel.hpp"
#include "plp/polyhedron.hpp"

#include <string>
#include <string_view>

namespace plp {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// `poly <nvars> <nrows>` followed by rows `a_1 … a_n b` (a·x ≤ b).
/// `#` starts a comment that runs to the end of the line.
Polyhedron parse_polyhedron(std::string_view text);
std::string format_polyhedron(const Polyhedron& P);

/// `plp <n> <m> <k>`, m rows of A, one row B, then C_0 … C_k.
ParametricLP parse_plp(std::string_view text);
std::string format_plp(const ParametricLP& plp);

/// Comma-separated rationals, e.g. "1,-1/2,3".
RatVec parse_point(std::string_view text);

/// Regions reordered by basis key, ids and parent edges renumbered.
Solution sorted_by_basis(const Solution& s);

std::string regions_json(const Solution& s);
/// parent → child edges labelled with the generating facet.
std::string spanning_tree_dot(const Solution& s);

}  // namespace plp
