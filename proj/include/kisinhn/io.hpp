#pragma once

// Plain-text formats.
//
// Laurent literal:
//   series  := term (('+' | '-') term)* with an optional term O(u^N) fixing the precision
//   term    := factor ('*' factor)*
//   factor  := integer | 'a' ['^' int] | 'u' ['^' ['-'] int] | '(' series ')'
// 'a' is the generator of F_q over F_p (the root of the least irreducible modulus).
// Parenthesized factors may contain u as well; whitespace is ignored.
//
// Module file (key = value, '#' starts a comment, values may span lines until brackets close):
//   p = 2
//   q = 4            (optional, defaults to p)
//   e = 1            (optional, defaults to 1)
//   n = 2
//   precision = exact | N   (optional; N truncates every entry to O(u^N))
//   A = [[1, u], [0, a*u^-1]]
//   g = [[...]]      (optional lattice basis; the standard lattice otherwise)
//
// Kempf file:
//   q = 2
//   m = 2
//   n = 2
//   S = [[1, 0, 0, 0]]   rows spanning S inside F_q^m (x) F_q^n, coordinate a * n + b
//
// Filtered space: one line per filtration step, "index: (row) (row) ...", listing a basis of that step.

#include "filtered.hpp"
#include "kisin.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kisinhn {

namespace detail {

class LiteralParser {
 public:
  LiteralParser(Field f, std::string text) : f_(f), s_(std::move(text)) {}

  LaurentSeries parse() {
    LaurentSeries r = series();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    if (prec_) r = r.truncated(*prec_);
    return r;
  }

 private:
  Field f_;
  std::string s_;
  size_t pos_ = 0;
  std::optional<int> prec_;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("Laurent literal '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    bool neg = eat('-');
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 9) fail("integer too large");
    long v = std::stol(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }

  LaurentSeries series() {
    LaurentSeries acc = LaurentSeries::zero(f_);
    bool neg = eat('-');
    for (;;) {
      auto t = term();
      if (t) acc = neg ? acc - *t : acc + *t;
      if (eat('+'))
        neg = false;
      else if (eat('-'))
        neg = true;
      else
        break;
    }
    return acc;
  }

  // nullopt for an O(u^N) term.
  std::optional<LaurentSeries> term() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == 'O') {
      ++pos_;
      if (!eat('(') || !eat('u') || !eat('^')) fail("expected O(u^N)");
      int n = static_cast<int>(integer());
      if (!eat(')')) fail("expected ')'");
      prec_ = prec_ ? std::min(*prec_, n) : n;
      return std::nullopt;
    }
    LaurentSeries acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  LaurentSeries factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentSeries inner = series();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'a') {
      ++pos_;
      if (f_->r() == 1) fail("generator a is only defined for q > p");
      long k = eat('^') ? integer() : 1;
      if (k < 0) fail("negative power of a");
      return LaurentSeries::constant(f_, f_->pow(f_->generator(), k));
    }
    if (c == 'u') {
      ++pos_;
      long k = eat('^') ? integer() : 1;
      if (k < -100000 || k > 100000) fail("exponent out of range");
      return LaurentSeries::monomial(f_, 1, static_cast<int>(k));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return LaurentSeries::constant(f_, f_->from_int(integer()));
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// Splits "[[x, y], [z, w]]" into rows of raw entry strings, respecting parentheses.
inline std::vector<std::vector<std::string>> split_matrix(const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ParseError("matrix must look like [[...], [...]]");
  std::vector<std::vector<std::string>> rows;
  int depth = 0, paren = 0;
  std::string cur;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    char c = t[i];
    if (c == '(') ++paren;
    if (c == ')') --paren;
    if (paren < 0) throw ParseError("unbalanced parentheses in matrix");
    if (c == '[' && paren == 0) {
      if (depth++ != 0) throw ParseError("matrix nesting deeper than two");
      rows.emplace_back();
      cur.clear();
      continue;
    }
    if (c == ']' && paren == 0) {
      if (--depth != 0) throw ParseError("unbalanced brackets in matrix");
      if (!trim(cur).empty() || !rows.back().empty()) rows.back().push_back(trim(cur));
      cur.clear();
      continue;
    }
    if (c == ',' && paren == 0) {
      if (depth == 1) {
        rows.back().push_back(trim(cur));
        cur.clear();
      } else if (!trim(cur).empty()) {
        throw ParseError("stray text between matrix rows");
      }
      continue;
    }
    if (depth == 0 && !std::isspace(static_cast<unsigned char>(c))) throw ParseError("stray text between matrix rows");
    cur += c;
  }
  if (depth != 0 || paren != 0) throw ParseError("unbalanced brackets in matrix");
  for (auto& r : rows)
    for (auto& e : r)
      if (e.empty()) throw ParseError("empty matrix entry");
  return rows;
}

// key = value pairs; values continue over lines while brackets are open.
inline std::vector<std::pair<std::string, std::string>> key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line, key, value;
  int open = 0, lineno = 0;
  auto balance = [](const std::string& s) {
    int b = 0;
    for (char c : s) b += (c == '[') - (c == ']');
    return b;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    if (open > 0) {
      value += " " + line;
      open += balance(line);
      if (open <= 0) out.emplace_back(key, trim(value));
      continue;
    }
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    key = trim(line.substr(0, eq));
    value = line.substr(eq + 1);
    open = balance(value);
    if (open <= 0) out.emplace_back(key, trim(value));
  }
  if (open > 0) throw ParseError("unterminated matrix for key '" + key + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw ParseError("");
    return x;
  } catch (...) {
    throw ParseError("key '" + key + "' needs an integer, got '" + v + "'");
  }
}

}  // namespace detail

inline LaurentSeries parse_laurent(Field f, const std::string& text) { return detail::LiteralParser(f, text).parse(); }

inline std::string format_laurent(const LaurentSeries& s) {
  if (s.prec() >= LaurentSeries::kExact) return s.to_string();
  std::string o = "O(u^" + std::to_string(s.prec()) + ")";
  return s.is_zero() ? o : s.to_string() + " + " + o;
}

inline SeriesMatrix parse_series_matrix(Field f, const std::string& text) {
  auto rows = detail::split_matrix(text);
  if (rows.empty()) throw ParseError("empty matrix");
  int cols = static_cast<int>(rows[0].size());
  std::vector<LaurentSeries> e;
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != cols) throw ParseError("ragged matrix rows");
    for (auto& x : r) e.push_back(parse_laurent(f, x));
  }
  return SeriesMatrix(f, static_cast<int>(rows.size()), cols, e);
}

inline std::string format_series_matrix(const SeriesMatrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    s += i ? ",\n     [" : "[";
    for (int j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + format_laurent(m(i, j));
    s += "]";
  }
  return s + "]";
}

inline FqMatrix parse_fq_matrix(Field f, const std::string& text) {
  auto rows = detail::split_matrix(text);
  if (rows.empty()) return FqMatrix(f, 0, 0);
  int cols = static_cast<int>(rows[0].size());
  FqMatrix m(f, static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != cols) throw ParseError("ragged matrix rows");
    for (int j = 0; j < cols; ++j) {
      auto s = parse_laurent(f, rows[i][j]);
      if (!s.is_zero() && (s.val() != 0 || s.end() > 1)) throw ParseError("entry '" + rows[i][j] + "' is not a constant");
      m(static_cast<int>(i), j) = s.is_zero() ? 0 : s.coeff(0);
    }
  }
  return m;
}

inline std::string format_fq_row(const FqMatrix& m, int r) {
  std::string s = "(";
  for (int c = 0; c < m.cols; ++c) s += (c ? "," : "") + m.ctx->format(m(r, c));
  return s + ")";
}

inline std::string format_fq_matrix(const FqMatrix& m) {
  std::string s = "[";
  for (int r = 0; r < m.rows; ++r) {
    s += r ? ", [" : "[";
    for (int c = 0; c < m.cols; ++c) s += (c ? ", " : "") + m.ctx->format(m(r, c));
    s += "]";
  }
  return s + "]";
}

// ---- Module files ----

struct ModuleFile {
  EtalePhiModule module;
  std::optional<SeriesMatrix> g;
  int precision = LaurentSeries::kExact;

  KisinLattice lattice() const {
    return KisinLattice(module, g ? *g : SeriesMatrix::identity(module.ctx(), module.n()));
  }
};

inline ModuleFile parse_module(const std::string& text) {
  auto kv = detail::key_values(text);
  std::map<std::string, std::string> m;
  for (auto& [k, v] : kv) {
    if (m.count(k)) throw ParseError("duplicate key '" + k + "'");
    m[k] = v;
  }
  for (auto& [k, v] : m)
    if (k != "p" && k != "q" && k != "e" && k != "n" && k != "precision" && k != "A" && k != "g")
      throw ParseError("unknown key '" + k + "'");
  for (const char* req : {"p", "n", "A"})
    if (!m.count(req)) throw ParseError(std::string("missing key '") + req + "'");
  int p = detail::parse_int("p", m["p"]);
  int q = m.count("q") ? detail::parse_int("q", m["q"]) : p;
  int e = m.count("e") ? detail::parse_int("e", m["e"]) : 1;
  int n = detail::parse_int("n", m["n"]);
  if (!is_prime(p)) throw ParseError("p = " + std::to_string(p) + " is not prime");
  Field f;
  try {
    f = field_of_order(q);
  } catch (const ScaleTooLarge&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(err.what());
  }
  if (f->p() != p) throw ParseError("q = " + std::to_string(q) + " is not a power of p = " + std::to_string(p));
  if (e < 1) throw ParseError("e must be positive");
  if (n < 1) throw ParseError("n must be positive");
  ModuleFile out;
  if (m.count("precision") && m["precision"] != "exact") {
    out.precision = detail::parse_int("precision", m["precision"]);
    if (out.precision < 1) throw ParseError("precision must be positive");
  }
  auto read = [&](const std::string& key) {
    SeriesMatrix x = parse_series_matrix(f, m[key]);
    if (x.rows() != n || x.cols() != n) throw ParseError("matrix " + key + " is not " + std::to_string(n) + "x" + std::to_string(n));
    return out.precision < LaurentSeries::kExact ? x.with_prec(out.precision) : x;
  };
  SeriesMatrix A = read("A");
  try {
    out.module = EtalePhiModule(A, e);
  } catch (const InsufficientPrecision& err) {
    throw ParseError(std::string("A is not invertible at the stored precision (val det not certified: ") + err.what() + ")");
  }
  if (m.count("g")) {
    out.g = read("g");
    try {
      val_det(*out.g);
    } catch (const InsufficientPrecision& err) {
      throw ParseError(std::string("g is not invertible at the stored precision (val det not certified: ") + err.what() + ")");
    }
  }
  return out;
}

inline std::string serialize_module(const ModuleFile& mf) {
  Field f = mf.module.ctx();
  std::ostringstream o;
  o << "p = " << f->p() << "\n";
  o << "q = " << f->q() << "\n";
  o << "e = " << mf.module.e << "\n";
  o << "n = " << mf.module.n() << "\n";
  o << "precision = " << (mf.precision >= LaurentSeries::kExact ? "exact" : std::to_string(mf.precision)) << "\n";
  o << "A = " << format_series_matrix(mf.module.A) << "\n";
  if (mf.g) o << "g = " << format_series_matrix(*mf.g) << "\n";
  return o.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// ---- Kempf files ----

struct KempfInput {
  Field field = nullptr;
  int m = 0, n = 0;
  FqMatrix S;
};

inline KempfInput parse_kempf_input(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (auto& [k, v] : detail::key_values(text)) {
    if (k != "q" && k != "m" && k != "n" && k != "S") throw ParseError("unknown key '" + k + "'");
    if (kv.count(k)) throw ParseError("duplicate key '" + k + "'");
    kv[k] = v;
  }
  for (const char* req : {"q", "m", "n", "S"})
    if (!kv.count(req)) throw ParseError(std::string("missing key '") + req + "'");
  KempfInput in;
  try {
    in.field = field_of_order(detail::parse_int("q", kv["q"]));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(err.what());
  }
  in.m = detail::parse_int("m", kv["m"]);
  in.n = detail::parse_int("n", kv["n"]);
  if (in.m < 1 || in.n < 1) throw ParseError("dimensions must be positive");
  std::string s = detail::trim(kv["S"]);
  in.S = s == "[]" ? FqMatrix(in.field, 0, in.m * in.n) : parse_fq_matrix(in.field, s);
  if (in.S.cols != in.m * in.n) throw ParseError("rows of S must have m * n entries");
  return in;
}

// ---- Filtered spaces ----

inline std::string format_filtered(const FilteredSpace& V) {
  std::string s;
  for (auto& [i, rows] : V.steps()) {
    s += to_string(i) + ":";
    for (int r = 0; r < rows.rows; ++r) s += " " + format_fq_row(rows, r);
    s += "\n";
  }
  return s;
}

inline Rational parse_rational(const std::string& text) {
  std::string t = detail::trim(text);
  auto slash = t.find('/');
  try {
    size_t used = 0;
    long a = std::stol(t.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? t.size() : slash)) throw 0;
    if (slash == std::string::npos) return Rational(a);
    std::string rest = t.substr(slash + 1);
    long b = std::stol(rest, &used);
    if (used != rest.size() || b == 0) throw 0;
    return Rational(a, b);
  } catch (...) {
    throw ParseError("bad rational '" + text + "'");
  }
}

inline FilteredSpace parse_filtered(Field f, int dim, const std::string& text) {
  std::vector<std::pair<Rational, FqMatrix>> steps;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("filtration line needs 'index:'");
    Rational idx = parse_rational(line.substr(0, colon));
    std::string rest = line.substr(colon + 1);
    FqMatrix rows(f, 0, dim);
    size_t pos = 0;
    while ((pos = rest.find('(', pos)) != std::string::npos) {
      size_t close = rest.find(')', pos);
      if (close == std::string::npos) throw ParseError("unclosed row");
      FqMatrix row = parse_fq_matrix(f, "[[" + rest.substr(pos + 1, close - pos - 1) + "]]");
      if (row.cols != dim) throw ParseError("row length differs from the dimension");
      rows = rows.stacked(row);
      pos = close + 1;
    }
    steps.emplace_back(idx, rows);
  }
  try {
    return FilteredSpace::from_steps(f, dim, steps);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(err.what());
  }
}

// ---- CSV ----

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + csv_field(cells[i]);
  return s + "\n";
}

}  // namespace kisinhn
