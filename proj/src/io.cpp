#include "plp/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace plp {

namespace {

struct Token {
  std::string_view text;
  int line;
  int column;
};

using Line = std::vector<Token>;

// Non-empty lines after comment stripping, each split on whitespace.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      tokens.push_back({raw.substr(i, j - i), line_no, static_cast<int>(i) + 1});
      i = j;
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    pos = end + 1;
  }
  return lines;
}

Rat rational(const Token& t) {
  try {
    return Rat::parse(t.text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(t.line, t.column, e.what());
  }
}

int count(const Token& t, int minimum) {
  int value = 0;
  const auto* first = t.text.data();
  const auto* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError(t.line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
  if (value < minimum)
    throw ParseError(t.line, t.column, "expected an integer ≥ " + std::to_string(minimum) + ", got " + std::to_string(value));
  return value;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : lines_(tokenize(text)) {}

  // Header `<keyword> <int>…`; returns the integers.
  std::vector<int> header(std::string_view keyword, std::initializer_list<int> minimums) {
    if (lines_.empty()) throw ParseError(1, 1, "missing '" + std::string(keyword) + "' header");
    const Line& h = lines_[next_++];
    if (h[0].text != keyword)
      throw ParseError(h[0].line, h[0].column, "expected '" + std::string(keyword) + "', got '" + std::string(h[0].text) + "'");
    if (h.size() != minimums.size() + 1)
      throw ParseError(h[0].line, h[0].column,
                       "header takes " + std::to_string(minimums.size()) + " integers, got " + std::to_string(h.size() - 1));
    std::vector<int> out;
    auto m = minimums.begin();
    for (std::size_t i = 1; i < h.size(); ++i, ++m) out.push_back(count(h[i], *m));
    return out;
  }

  RatVec row(Eigen::Index width, std::string_view what) {
    if (next_ >= lines_.size()) throw DimensionMismatch("unexpected end of input while reading " + std::string(what));
    const Line& l = lines_[next_++];
    if (static_cast<Eigen::Index>(l.size()) != width)
      throw DimensionMismatch("line " + std::to_string(l[0].line) + ": " + std::string(what) + " has " +
                              std::to_string(l.size()) + " entries, expected " + std::to_string(width));
    RatVec v(width);
    for (Eigen::Index i = 0; i < width; ++i) v(i) = rational(l[static_cast<std::size_t>(i)]);
    return v;
  }

  void finish() const {
    if (next_ < lines_.size())
      throw DimensionMismatch("line " + std::to_string(lines_[next_][0].line) + ": more rows than the header declares");
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

void write_row(std::ostringstream& os, const RatVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i).str();
}

nlohmann::ordered_json rationals(const RatVec& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i).str());
  return out;
}

}  // namespace

Polyhedron parse_polyhedron(std::string_view text) {
  Reader in(text);
  const auto dims = in.header("poly", {1, 0});
  const int n = dims[0];
  const int m = dims[1];
  RatMat A(m, n);
  RatVec b(m);
  for (int i = 0; i < m; ++i) {
    const RatVec r = in.row(n + 1, "constraint row " + std::to_string(i + 1));
    A.row(i) = r.head(n).transpose();
    b(i) = r(n);
  }
  in.finish();
  return Polyhedron(std::move(A), std::move(b));
}

std::string format_polyhedron(const Polyhedron& P) {
  std::ostringstream os;
  os << "poly " << P.nvars() << " " << P.rows() << "\n";
  for (int i = 0; i < P.rows(); ++i) {
    RatVec r(P.nvars() + 1);
    r << P.A().row(i).transpose(), P.b()(i);
    write_row(os, r);
    os << "\n";
  }
  return os.str();
}

ParametricLP parse_plp(std::string_view text) {
  Reader in(text);
  const auto dims = in.header("plp", {1, 1, 1});
  const int n = dims[0];
  const int m = dims[1];
  const int k = dims[2];
  RatMat A(m, n);
  for (int i = 0; i < m; ++i) A.row(i) = in.row(n, "row " + std::to_string(i + 1) + " of A").transpose();
  RatVec B = in.row(m, "B");
  std::vector<RatVec> objectives;
  for (int i = 0; i <= k; ++i) objectives.push_back(in.row(n, "C_" + std::to_string(i)));
  in.finish();
  return ParametricLP(StandardLP(std::move(A), std::move(B)), std::move(objectives));
}

std::string format_plp(const ParametricLP& plp) {
  std::ostringstream os;
  os << "plp " << plp.lp.cols() << " " << plp.lp.rows() << " " << plp.params() << "\n";
  for (Eigen::Index i = 0; i < plp.lp.rows(); ++i) {
    write_row(os, plp.lp.A().row(i).transpose());
    os << "\n";
  }
  write_row(os, plp.lp.B());
  os << "\n";
  for (const RatVec& c : plp.objectives) {
    write_row(os, c);
    os << "\n";
  }
  return os.str();
}

RatVec parse_point(std::string_view text) {
  std::vector<Rat> values;
  std::size_t pos = 0;
  int column = 1;
  for (;;) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view field = text.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') {
      field.remove_prefix(1);
      ++column;
    }
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    values.push_back(rational(Token{field, 1, column}));
    if (comma == text.size()) break;
    column += static_cast<int>(comma - pos) + 1;
    pos = comma + 1;
  }
  RatVec v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

Solution sorted_by_basis(const Solution& s) {
  std::vector<std::size_t> order(s.regions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.regions[a].basis.columns < s.regions[b].basis.columns; });
  std::vector<int> new_id(s.regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);

  Solution out;
  out.params = s.params;
  out.stats = s.stats;
  out.warnings = s.warnings;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Region r = s.regions[order[i]];
    r.id = static_cast<int>(i);
    if (r.parent) r.parent->region = new_id[static_cast<std::size_t>(r.parent->region)];
    out.regions.push_back(std::move(r));
  }
  return out;
}

std::string regions_json(const Solution& s) {
  nlohmann::ordered_json doc;
  doc["params"] = s.params;
  auto& regions = doc["regions"] = nlohmann::ordered_json::array();
  for (const Region& r : s.regions) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["basis"] = r.basis.columns;
    j["optimum"] = rationals(r.optimum);
    auto& cons = j["constraints"] = nlohmann::ordered_json::array();
    for (const AffineForm& f : r.constraints)
      cons.push_back({{"coeffs", rationals(f.coeffs)}, {"constant", f.constant.str()}});
    j["seed"] = rationals(r.seed);
    if (r.parent)
      j["parent"] = {{"region", r.parent->region}, {"facet", r.parent->facet}};
    else
      j["parent"] = nullptr;
    j["degenerate"] = r.degenerate;
    regions.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string spanning_tree_dot(const Solution& s) {
  std::ostringstream os;
  os << "digraph regions {\n";
  for (const Region& r : s.regions) {
    os << "  r" << r.id << " [label=\"" << r.id << " {";
    for (std::size_t i = 0; i < r.basis.columns.size(); ++i) os << (i ? "," : "") << r.basis.columns[i];
    os << "}\"];\n";
  }
  for (const Region& r : s.regions) {
    if (!r.parent) continue;
    os << "  r" << r.parent->region << " -> r" << r.id << " [label=\"";
    if (r.parent->facet >= 0)
      os << r.parent->facet;
    else
      os << "probe";
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace plp
