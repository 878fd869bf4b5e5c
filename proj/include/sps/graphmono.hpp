#pragma once

// Monomial quadratic ideals given by 0/1 incidence matrices, transfer-matrix word
// counts, and graph joins.

#include "sps/freeprod.hpp"

#include <cctype>

namespace sps {

/// Square 0/1 matrix with no zero row or column; A(i,j) = 1 means the word "ij" is admissible.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(std::vector<std::vector<int>> rows) : rows_(std::move(rows)) {
    const std::size_t n = rows_.size();
    if (n == 0) throw Error(ErrorKind::EmptyAlphabet, "incidence matrix is empty");
    std::vector<bool> col_hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows_[i].size() != n) throw Error(ErrorKind::DimensionMismatch, "incidence matrix must be square");
      bool row_hit = false;
      for (std::size_t j = 0; j < n; ++j) {
        const int v = rows_[i][j];
        if (v != 0 && v != 1) throw Error(ErrorKind::InvalidArgument, "entries must be 0 or 1");
        if (v) {
          row_hit = true;
          col_hit[j] = true;
        }
      }
      if (!row_hit) throw Error(ErrorKind::ZeroRowOrColumn, "row " + std::to_string(i + 1) + " is zero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!col_hit[j]) throw Error(ErrorKind::ZeroRowOrColumn, "column " + std::to_string(j + 1) + " is zero");
    }
  }

  std::size_t size() const noexcept { return rows_.size(); }
  int operator()(std::size_t i, std::size_t j) const { return rows_.at(i).at(j); }
  const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i) s += ',';
      for (int v : rows_[i]) s += static_cast<char>('0' + v);
    }
    return s;
  }

 private:
  std::vector<std::vector<int>> rows_;
};

/// Rows of 0/1 digits separated by ',', ';' or whitespace, e.g. "01,11".
inline IncidenceMatrix parse_incidence(std::string_view text) {
  std::vector<std::vector<int>> rows;
  std::vector<int> current;
  auto flush = [&] {
    if (!current.empty()) rows.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '0' || c == '1') {
      current.push_back(c - '0');
    } else if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "' in matrix", 1, pos + 1);
    }
  }
  flush();
  return IncidenceMatrix(std::move(rows));
}

/// Generators X_i X_j for every zero entry A(i,j).
inline QuadraticIdeal monomial_ideal(const IncidenceMatrix& a) {
  QuadraticIdeal ideal(a.size(), {});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a(i, j) == 0) ideal.add(NCPoly::monomial(a.size(), {static_cast<int>(i), static_cast<int>(j)}));
    }
  return ideal;
}

/// δ_0 = 1 and δ_m = sum of the entries of A^{m-1} for m >= 1.
inline HilbertSeries transfer_counts(const IncidenceMatrix& a, int max_level) {
  const std::size_t n = a.size();
  HilbertSeries h;
  h.coefficients.push_back(1);
  std::vector<long long> ends(n, 1);  // words of length m ending in each letter
  for (int m = 1; m <= max_level; ++m) {
    if (m > 1) {
      std::vector<long long> next(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (a(i, j)) next[j] += ends[i];
        }
      ends = std::move(next);
    }
    h.coefficients.push_back(std::accumulate(ends.begin(), ends.end(), 0LL));
  }
  return h;
}

/// Quadratic system of the monomial ideal, cross-checked against transfer-matrix counts.
inline SubproductSystem monomial_system(const IncidenceMatrix& a, int max_level, const ToleranceConfig& tol = {}) {
  auto s = build_quadratic(monomial_ideal(a), max_level, tol);
  const auto dims = hilbert_series(s);
  const auto counts = transfer_counts(a, max_level);
  if (!(dims == counts)) {
    throw Error(ErrorKind::InvariantViolation,
                "fibre dimensions " + dims.to_string() + " differ from word counts " + counts.to_string());
  }
  return s;
}

/// Block matrix [[A, 1], [1, B]].
inline IncidenceMatrix graph_join(const IncidenceMatrix& a, const IncidenceMatrix& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> rows(n + m, std::vector<int>(n + m, 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rows[n + i][n + j] = b(i, j);
  return IncidenceMatrix(std::move(rows));
}

}  // namespace sps
