#pragma once

#include "tga/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace tga {

using IntMatrix = std::vector<std::vector<Int>>;

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, std::vector<Int>(cols, 0));
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t m = a.size(), k = a.empty() ? 0 : a[0].size(), n = b.empty() ? 0 : b[0].size();
  IntMatrix c = zero_matrix(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

inline std::vector<Int> mat_vec(const IntMatrix& a, const std::vector<Int>& v) {
  std::vector<Int> out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
  return out;
}

// Fraction-free determinant (Bareiss).  Exact for cpp_int.
inline Int bareiss_det(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_r, all d_i > 0.
struct SmithForm {
  IntMatrix U, D, V;
  std::vector<Int> diagonal;  // the nonzero d_i
  std::size_t rank = 0;
};

namespace detail {

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& input) {
  const std::size_t m = input.size();
  const std::size_t n = m == 0 ? 0 : input[0].size();
  SmithForm out;
  out.U = identity_matrix(m);
  out.V = identity_matrix(n);
  IntMatrix a = input;

  auto swap_rows = [&](std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    std::swap(a[r1], a[r2]);
    std::swap(out.U[r1], out.U[r2]);
  };
  auto swap_cols = [&](std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (auto& row : a) std::swap(row[c1], row[c2]);
    for (auto& row : out.V) std::swap(row[c1], row[c2]);
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const Int& factor) {
    for (std::size_t j = 0; j < n; ++j) a[dst][j] += factor * a[src][j];
    for (std::size_t j = 0; j < m; ++j) out.U[dst][j] += factor * out.U[src][j];
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const Int& factor) {
    for (std::size_t i = 0; i < m; ++i) a[i][dst] += factor * a[i][src];
    for (std::size_t i = 0; i < n; ++i) out.V[i][dst] += factor * out.V[i][src];
  };
  auto negate_row = [&](std::size_t r) {
    for (auto& x : a[r]) x = -x;
    for (auto& x : out.U[r]) x = -x;
  };

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Deterministic pivot: smallest |value|, ties by (row, col).
      std::size_t pi = t, pj = t;
      Int best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a[i][j] == 0) continue;
          const Int mag = detail::int_abs(a[i][j]);
          if (best == 0 || mag < best) {
            best = mag;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) { t = steps; break; }  // submatrix is zero; done
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool reduced = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        add_row(i, t, -Int(a[i][t] / a[t][t]));
        if (a[i][t] != 0) reduced = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        add_col(j, t, -Int(a[t][j] / a[t][t]));
        if (a[t][j] != 0) reduced = false;
      }
      if (!reduced) continue;  // remainders are strictly smaller; re-pick pivot

      // Enforce d_t | (everything below-right) before moving on.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (t == steps) break;
  }

  for (std::size_t t = 0; t < steps; ++t)
    if (a[t][t] < 0) negate_row(t);

  out.D = a;
  for (std::size_t t = 0; t < steps; ++t)
    if (a[t][t] != 0) out.diagonal.push_back(a[t][t]);
  out.rank = out.diagonal.size();
  return out;
}

// One integer solution of M x = b, if any.
inline std::optional<std::vector<Int>> solve_integer(const IntMatrix& m_in,
                                                     const std::vector<Int>& b) {
  const std::size_t m = m_in.size();
  const std::size_t n = m == 0 ? 0 : m_in[0].size();
  if (b.size() != m) throw PreconditionError("solve_integer: dimension mismatch");
  const SmithForm snf = smith_normal_form(m_in);
  const std::vector<Int> y = mat_vec(snf.U, b);
  std::vector<Int> z(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const Int d = i < std::min(m, n) ? snf.D[i][i] : Int(0);
    if (d == 0) {
      if (y[i] != 0) return std::nullopt;
    } else {
      if (y[i] % d != 0) return std::nullopt;
      if (i < n) z[i] = y[i] / d;
    }
  }
  return mat_vec(snf.V, z);
}

}  // namespace tga
