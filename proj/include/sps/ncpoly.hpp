#pragma once

// Noncommutative polynomials over C, the polynomial DSL, and ideal files.
//
// Letters are stored 0-based (letter k is the (k+1)-th declared variable).
// Words are vectorized lexicographically: the word (w_1..w_n) sits at index
// sum_k w_k d^(n-k), so the first letter is the most significant digit. This
// is the Kronecker convention used everywhere else in the library.

#include "sps/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace sps {

using Word = std::vector<int>;

class NCPoly {
 public:
  using TermMap = std::map<Word, Complex>;

  NCPoly() = default;
  explicit NCPoly(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {}

  static NCPoly monomial(std::size_t alphabet_size, Word word, Complex coeff = 1.0) {
    NCPoly p(alphabet_size);
    p.add_term(std::move(word), coeff);
    return p;
  }

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(Word word, Complex coeff) {
    for (int letter : word) {
      if (letter < 0 || static_cast<std::size_t>(letter) >= alphabet_size_) {
        throw Error(ErrorKind::OutOfRange, "letter index outside the alphabet");
      }
    }
    auto [it, inserted] = terms_.try_emplace(std::move(word), coeff);
    if (!inserted) it->second += coeff;
    if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
  }

  Complex coefficient(const Word& word) const {
    auto it = terms_.find(word);
    return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
  }

  /// Degree of a homogeneous polynomial, std::nullopt when mixed. Zero is homogeneous
  /// of every degree and reports std::nullopt as well; see is_homogeneous_of().
  std::optional<std::size_t> homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    std::size_t deg = terms_.begin()->first.size();
    for (const auto& [word, c] : terms_) {
      if (word.size() != deg) return std::nullopt;
    }
    return deg;
  }

  bool is_homogeneous() const { return terms_.empty() || homogeneous_degree().has_value(); }

  bool is_homogeneous_of(std::size_t degree) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return t.first.size() == degree; });
  }

  NCPoly& operator+=(const NCPoly& other) {
    check_alphabet(other);
    for (const auto& [w, c] : other.terms_) add_term(w, c);
    return *this;
  }
  NCPoly& operator*=(Complex s) {
    if (s == Complex(0.0, 0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, NCPoly b) { return a += (b *= -1.0); }
  friend NCPoly operator*(Complex s, NCPoly p) { return p *= s; }

  friend bool operator==(const NCPoly& a, const NCPoly& b) {
    return a.alphabet_size_ == b.alphabet_size_ && a.terms_ == b.terms_;
  }

 private:
  void check_alphabet(const NCPoly& other) const {
    if (other.alphabet_size_ != alphabet_size_) {
      throw Error(ErrorKind::DimensionMismatch, "polynomials over different alphabets");
    }
  }

  std::size_t alphabet_size_ = 0;
  TermMap terms_;
};

/// Finite list of homogeneous degree-2 generators over a shared alphabet.
class QuadraticIdeal {
 public:
  explicit QuadraticIdeal(std::size_t alphabet_size, std::vector<NCPoly> generators = {})
      : alphabet_size_(alphabet_size) {
    for (auto& g : generators) add(std::move(g));
  }

  void add(NCPoly generator) {
    if (generator.alphabet_size() != alphabet_size_) {
      throw Error(ErrorKind::DimensionMismatch, "generator alphabet differs from the ideal's");
    }
    if (generator.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "zero generator");
    if (generator.homogeneous_degree() != std::optional<std::size_t>(2)) {
      throw Error(ErrorKind::NotHomogeneous, "generator is not homogeneous of degree 2");
    }
    generators_.push_back(std::move(generator));
  }

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  const std::vector<NCPoly>& generators() const noexcept { return generators_; }

 private:
  std::size_t alphabet_size_;
  std::vector<NCPoly> generators_;
};

// ---------------------------------------------------------------------------
// Vector and matrix views

inline Index word_index(const Word& word, std::size_t d) {
  Index idx = 0;
  for (int letter : word) idx = idx * static_cast<Index>(d) + letter;
  return idx;
}

inline Word index_word(Index idx, std::size_t d, std::size_t degree) {
  Word w(degree);
  for (std::size_t k = degree; k-- > 0;) {
    w[k] = static_cast<int>(idx % static_cast<Index>(d));
    idx /= static_cast<Index>(d);
  }
  return w;
}

inline Vector poly_to_vector(const NCPoly& p, std::size_t degree) {
  if (!p.is_homogeneous_of(degree)) {
    throw Error(ErrorKind::NotHomogeneous, "polynomial is not homogeneous of degree " +
                                               std::to_string(degree));
  }
  const std::size_t d = p.alphabet_size();
  Vector v = Vector::Zero(ipow(static_cast<Index>(d), static_cast<int>(degree)));
  for (const auto& [word, c] : p.terms()) v(word_index(word, d)) = c;
  return v;
}

inline NCPoly vector_to_poly(const Vector& v, std::size_t d, std::size_t degree) {
  if (v.size() != ipow(static_cast<Index>(d), static_cast<int>(degree))) {
    throw Error(ErrorKind::DimensionMismatch, "vector length is not d^degree");
  }
  NCPoly p(d);
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != Complex(0.0, 0.0)) p.add_term(index_word(i, d, degree), v(i));
  }
  return p;
}

/// d x d coefficient matrix with A(i,j) = coefficient of X_i X_j.
struct CoeffMatrix {
  Matrix entries;

  Index size() const { return entries.rows(); }
  /// Row-major flattening, matching the lexicographic word order.
  Vector vec() const {
    const Index d = entries.rows();
    Vector v(d * d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) v(i * d + j) = entries(i, j);
    return v;
  }
  static CoeffMatrix from_vec(const Vector& v, Index d) {
    if (v.size() != d * d) throw Error(ErrorKind::DimensionMismatch, "vector length is not d^2");
    CoeffMatrix a{Matrix(d, d)};
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) a.entries(i, j) = v(i * d + j);
    return a;
  }
};

inline CoeffMatrix coeff_matrix(const NCPoly& p) {
  if (!p.is_homogeneous_of(2)) {
    throw Error(ErrorKind::NotHomogeneous, "coefficient matrix needs a degree-2 polynomial");
  }
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "zero polynomial has no relation");
  return CoeffMatrix::from_vec(poly_to_vector(p, 2), static_cast<Index>(p.alphabet_size()));
}

inline NCPoly poly_from_coeff_matrix(const CoeffMatrix& a) {
  return vector_to_poly(a.vec(), static_cast<std::size_t>(a.size()), 2);
}

// ---------------------------------------------------------------------------
// DSL
//
//   poly     := ['+'|'-'] term (('+'|'-') term)*
//   term     := scalar '*' monomial | monomial | scalar
//   monomial := var ('*' var)*
//   scalar   := '(' ['+'|'-'] float ('+'|'-') float 'i' ')' | float

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& alphabet, std::size_t line)
      : text_(text), line_(line), alphabet_size_(alphabet.size()) {
    for (std::size_t i = 0; i < alphabet.size(); ++i) names_.emplace(alphabet[i], static_cast<int>(i));
  }

  NCPoly parse() {
    NCPoly result(alphabet_size_);
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = take() == '-' ? -1.0 : 1.0;
    }
    parse_term(result, sign);
    for (skip_ws(); pos_ < text_.size(); skip_ws()) {
      char op = peek();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      take();
      parse_term(result, op == '-' ? -1.0 : 1.0);
    }
    return result;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, what, line_, pos_ + 1);
  }

  bool at_number() const {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }
  bool at_identifier() const {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  double parse_float() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  Complex parse_scalar() {
    skip_ws();
    if (peek() != '(') return {parse_float(), 0.0};
    take();
    skip_ws();
    double re_sign = 1.0;
    if (peek() == '+' || peek() == '-') re_sign = take() == '-' ? -1.0 : 1.0;
    if (!at_number_after_ws()) fail("expected a number");
    double re = re_sign * parse_float();
    skip_ws();
    if (peek() != '+' && peek() != '-') fail("expected '+' or '-' in complex literal");
    double im_sign = take() == '-' ? -1.0 : 1.0;
    if (!at_number_after_ws()) fail("expected a number");
    double im = im_sign * parse_float();
    skip_ws();
    if (peek() != 'i') fail("expected 'i'");
    take();
    skip_ws();
    if (peek() != ')') fail("expected ')'");
    take();
    return {re, im};
  }

  bool at_number_after_ws() {
    skip_ws();
    return at_number();
  }

  int parse_var() {
    skip_ws();
    if (!at_identifier()) fail("expected a variable");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    auto it = names_.find(name);
    if (it == names_.end()) {
      throw Error(ErrorKind::UnknownVariable, "unknown variable '" + name + "'", line_, start + 1);
    }
    return it->second;
  }

  Word parse_monomial() {
    Word word{parse_var()};
    for (skip_ws(); peek() == '*'; skip_ws()) {
      take();
      word.push_back(parse_var());
    }
    return word;
  }

  void parse_term(NCPoly& out, double sign) {
    skip_ws();
    if (at_identifier()) {
      out.add_term(parse_monomial(), sign);
      return;
    }
    if (!at_number() && peek() != '(') fail("expected a term");
    Complex scalar = sign * parse_scalar();
    skip_ws();
    if (peek() == '*') {
      take();
      out.add_term(parse_monomial(), scalar);
    } else {
      out.add_term({}, scalar);
    }
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  std::size_t alphabet_size_;
  std::unordered_map<std::string, int> names_;
};

inline void check_alphabet_names(const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) throw Error(ErrorKind::EmptyAlphabet, "alphabet is empty");
  std::vector<std::string> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate variable name");
  }
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace detail

inline NCPoly parse_poly(std::string_view text, const std::vector<std::string>& alphabet,
                         std::size_t line = 1) {
  detail::check_alphabet_names(alphabet);
  return detail::PolyParser(text, alphabet, line).parse();
}

/// Inverse of parse_poly: parse_poly(render(p, names), names) == p exactly.
inline std::string render(const NCPoly& p, const std::vector<std::string>& alphabet) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [word, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    out += "(" + detail::format_double(c.real()) + (std::signbit(c.imag()) ? "-" : "+") +
           detail::format_double(std::abs(c.imag())) + "i)";
    for (std::size_t k = 0; k < word.size(); ++k) {
      out += "*" + alphabet.at(static_cast<std::size_t>(word[k]));
    }
  }
  return out;
}

inline std::vector<std::string> default_alphabet(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

// ---------------------------------------------------------------------------
// Ideal files
//
//   # comment
//   vars: x1 x2          (names separated by spaces or commas)
//   relations:
//   x1*x2 - x2*x1        (one generator per line)

struct IdealFile {
  std::vector<std::string> variables;
  QuadraticIdeal ideal;
};

inline IdealFile parse_ideal_file(std::string_view text) {
  std::vector<std::string> vars;
  bool have_vars = false;
  bool in_relations = false;
  std::vector<std::pair<std::string, std::size_t>> relation_lines;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      if (end == text.size()) break;
      continue;
    }
    std::string trimmed = line.substr(first);

    if (trimmed.rfind("vars:", 0) == 0) {
      if (have_vars) throw Error(ErrorKind::SyntaxError, "duplicate 'vars:' line", line_no, 1);
      std::string rest = trimmed.substr(5);
      std::replace(rest.begin(), rest.end(), ',', ' ');
      std::istringstream is(rest);
      for (std::string name; is >> name;) vars.push_back(name);
      have_vars = true;
      in_relations = false;
    } else if (trimmed.rfind("relations:", 0) == 0) {
      if (!have_vars) {
        throw Error(ErrorKind::SyntaxError, "'relations:' before 'vars:'", line_no, 1);
      }
      in_relations = true;
      std::string rest = trimmed.substr(10);
      if (rest.find_first_not_of(" \t") != std::string::npos) {
        relation_lines.emplace_back(rest, line_no);
      }
    } else if (in_relations) {
      relation_lines.emplace_back(trimmed, line_no);
    } else {
      throw Error(ErrorKind::SyntaxError, "expected 'vars:' or 'relations:'", line_no, first + 1);
    }
    if (end == text.size()) break;
  }
  if (!have_vars) throw Error(ErrorKind::SyntaxError, "missing 'vars:' line", line_no, 1);
  detail::check_alphabet_names(vars);

  QuadraticIdeal ideal(vars.size());
  for (const auto& [src, ln] : relation_lines) {
    NCPoly p = parse_poly(src, vars, ln);
    if (p.is_zero()) continue;
    if (p.homogeneous_degree() != std::optional<std::size_t>(2)) {
      throw Error(ErrorKind::NotHomogeneous, "relation is not homogeneous of degree 2", ln, 1);
    }
    ideal.add(std::move(p));
  }
  return IdealFile{std::move(vars), std::move(ideal)};
}

}  // namespace sps
