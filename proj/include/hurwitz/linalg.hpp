#pragma once

// Echelon forms with transforms, kernels, Smith form, determinants and exact
// signatures.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "hurwitz/matrix.hpp"

namespace hurwitz {

template <class T>
struct EchelonResult {
  Matrix<T> H;     // U * input
  Matrix<T> U;     // invertible row transform
  Matrix<T> Uinv;  // inverse of U (empty unless requested)
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

/// Row echelon form H = U * M by elementary row operations.
/// Over Z the nonzero rows of H are a basis of the row lattice and rows
/// rank.. of U are a basis of the (saturated) left kernel.
template <class T>
  requires EuclideanScalar<T>
EchelonResult<T> row_echelon(const Matrix<T>& M, bool want_inverse = true, bool want_transform = true) {
  using Tr = ring_traits<T>;
  const std::size_t n = M.rows(), m = M.cols();
  want_inverse = want_inverse && want_transform;
  EchelonResult<T> res{M, want_transform ? Matrix<T>::identity(n, M.zero()) : Matrix<T>(), Matrix<T>(), 0, {}};
  if (want_inverse) res.Uinv = Matrix<T>::identity(n, M.zero());
  Matrix<T>& A = res.H;
  Matrix<T>& U = res.U;
  Matrix<T>& Ui = res.Uinv;

  auto row_sub = [&](std::size_t i, std::size_t j, const T& q) {  // row_i -= q row_j
    if (q.is_zero()) return;
    for (std::size_t k = 0; k < m; ++k)
      if (!A(j, k).is_zero()) A(i, k) -= q * A(j, k);
    if (want_transform)
      for (std::size_t k = 0; k < n; ++k)
        if (!U(j, k).is_zero()) U(i, k) -= q * U(j, k);
    if (want_inverse)
      for (std::size_t r = 0; r < n; ++r)
        if (!Ui(r, i).is_zero()) Ui(r, j) += q * Ui(r, i);
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    A.swap_rows(i, j);
    if (want_transform) U.swap_rows(i, j);
    if (want_inverse)
      for (std::size_t r = 0; r < n; ++r) std::swap(Ui(r, i), Ui(r, j));
  };

  std::size_t piv = 0;
  for (std::size_t c = 0; c < m && piv < n; ++c) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t r = piv; r < n; ++r) {
        if (A(r, c).is_zero()) continue;
        if (!best || Tr::better_pivot(A(r, c), A(*best, c))) best = r;
        if constexpr (Tr::is_field) break;
      }
      if (!best) break;
      row_swap(piv, *best);
      bool clear = true;
      for (std::size_t r = piv + 1; r < n; ++r) {
        if (A(r, c).is_zero()) continue;
        row_sub(r, piv, Tr::quotient(A(r, c), A(piv, c)));
        if (!A(r, c).is_zero()) clear = false;
      }
      if (clear) break;
    }
    if (!A(piv, c).is_zero()) {
      res.pivot_cols.push_back(c);
      ++piv;
    }
  }
  res.rank = piv;
  return res;
}

template <class T>
  requires EuclideanScalar<T>
std::size_t rank_of(const Matrix<T>& M) {
  static_assert(ring_traits<T>::is_field || std::is_same_v<T, Integer>, "rank over a domain");
  return row_echelon(M, false, false).rank;
}

/// Gauss-Jordan elimination that only pivots on units, in any column.
/// Succeeds when every nonzero row eventually yields a unit pivot; the
/// pivot columns of the result are then unit vectors (up to sign).
template <class T>
struct UnitReduction {
  Matrix<T> A;
  std::vector<std::size_t> pivot_rows, pivot_cols;
};

template <class T>
  requires EuclideanScalar<T>
std::optional<UnitReduction<T>> unit_gauss_jordan(Matrix<T> A) {
  const std::size_t n = A.rows(), m = A.cols();
  UnitReduction<T> out;
  std::vector<bool> used(n, false);
  while (true) {
    std::optional<std::pair<std::size_t, std::size_t>> at;
    bool nonzero_left = false;
    for (std::size_t r = 0; r < n && !at; ++r) {
      if (used[r]) continue;
      for (std::size_t c = 0; c < m; ++c) {
        if (A(r, c).is_zero()) continue;
        nonzero_left = true;
        if (ring_traits<T>::is_unit(A(r, c))) {
          at = {r, c};
          break;
        }
      }
    }
    if (!at) {
      if (nonzero_left) return std::nullopt;
      break;
    }
    auto [pr, pc] = *at;
    used[pr] = true;
    const T inv = invert(A(pr, pc));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == pr || A(r, pc).is_zero()) continue;
      const T q = A(r, pc) * inv;
      for (std::size_t c = 0; c < m; ++c)
        if (!A(pr, c).is_zero()) A(r, c) -= q * A(pr, c);
    }
    out.pivot_rows.push_back(pr);
    out.pivot_cols.push_back(pc);
  }
  out.A = std::move(A);
  return out;
}

/// Kernel of v -> v M when M^T reduces with unit pivots. Each basis row is a
/// unit vector on the non-pivot coordinates (`free`), so the coordinates of a
/// kernel vector are its entries at `free`.
template <class T>
struct UnitPivotKernel {
  Matrix<T> basis;
  std::vector<std::size_t> free;
};

template <class T>
  requires EuclideanScalar<T>
std::optional<UnitPivotKernel<T>> unit_pivot_kernel(const Matrix<T>& M) {
  const std::size_t N = M.rows();
  auto red = unit_gauss_jordan(M.transpose());
  if (!red) return std::nullopt;
  UnitPivotKernel<T> out;
  std::vector<bool> is_pivot(N, false);
  for (auto c : red->pivot_cols) is_pivot[c] = true;
  for (std::size_t c = 0; c < N; ++c)
    if (!is_pivot[c]) out.free.push_back(c);
  out.basis = Matrix<T>(out.free.size(), N, M.zero());
  for (std::size_t b = 0; b < out.free.size(); ++b) {
    const std::size_t f = out.free[b];
    out.basis(b, f) = M.one();
    for (std::size_t k = 0; k < red->pivot_rows.size(); ++k) {
      const T& h = red->A(red->pivot_rows[k], f);
      if (!h.is_zero()) out.basis(b, red->pivot_cols[k]) = -h * invert(red->A(red->pivot_rows[k], red->pivot_cols[k]));
    }
  }
  return out;
}

template <class T>
struct SmithData {
  Matrix<T> left, right;     // left * input * right = diag
  std::vector<T> diagonal;   // min(rows, cols) entries, divisibility order
};

/// Smith normal form over Z or F_p[y]/(y^p).
template <class T>
  requires(std::is_same_v<T, Integer> || std::is_same_v<T, TruncPoly>)
SmithData<T> smith_normal_form(const Matrix<T>& M) {
  using Tr = ring_traits<T>;
  const std::size_t n = M.rows(), m = M.cols();
  Matrix<T> A = M;
  Matrix<T> L = Matrix<T>::identity(n, M.zero());
  Matrix<T> R = Matrix<T>::identity(m, M.zero());

  auto row_sub = [&](std::size_t i, std::size_t j, const T& q) {
    if (q.is_zero()) return;
    for (std::size_t k = 0; k < m; ++k)
      if (!A(j, k).is_zero()) A(i, k) -= q * A(j, k);
    for (std::size_t k = 0; k < n; ++k)
      if (!L(j, k).is_zero()) L(i, k) -= q * L(j, k);
  };
  auto col_sub = [&](std::size_t i, std::size_t j, const T& q) {  // col_i -= q col_j
    if (q.is_zero()) return;
    for (std::size_t k = 0; k < n; ++k)
      if (!A(k, j).is_zero()) A(k, i) -= q * A(k, j);
    for (std::size_t k = 0; k < m; ++k)
      if (!R(k, j).is_zero()) R(k, i) -= q * R(k, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < n; ++k) std::swap(A(k, i), A(k, j));
    for (std::size_t k = 0; k < m; ++k) std::swap(R(k, i), R(k, j));
  };
  auto row_add = [&](std::size_t i, std::size_t j) {  // row_i += row_j
    for (std::size_t k = 0; k < m; ++k) A(i, k) += A(j, k);
    for (std::size_t k = 0; k < n; ++k) L(i, k) += L(j, k);
  };

  const std::size_t steps = std::min(n, m);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < m; ++j) {
          if (A(i, j).is_zero()) continue;
          if (!best || Tr::better_pivot(A(i, j), A(best->first, best->second))) best = {{i, j}};
        }
      if (!best) break;
      A.swap_rows(t, best->first);
      L.swap_rows(t, best->first);
      col_swap(t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (A(i, t).is_zero()) continue;
        row_sub(i, t, Tr::quotient(A(i, t), A(t, t)));
        if (!A(i, t).is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < m; ++j) {
        if (A(t, j).is_zero()) continue;
        col_sub(j, t, Tr::quotient(A(t, j), A(t, t)));
        if (!A(t, j).is_zero()) clean = false;
      }
      if (!clean) continue;
      // Divisibility: pivot must divide the remaining block.
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < n && !bad; ++i)
        for (std::size_t j = t + 1; j < m; ++j) {
          if (A(i, j).is_zero()) continue;
          bool divides;
          if constexpr (std::is_same_v<T, Integer>)
            divides = mpz_divisible_p(A(i, j).value().get_mpz_t(), A(t, t).value().get_mpz_t()) != 0;
          else
            divides = A(i, j).valuation() >= A(t, t).valuation();
          if (!divides) {
            bad = i;
            break;
          }
        }
      if (!bad) break;
      row_add(t, *bad);
    }
    // Normalize the pivot.
    if (!A(t, t).is_zero()) {
      T unit = A(t, t).from_long(1);
      if constexpr (std::is_same_v<T, Integer>) {
        if (A(t, t).sign() < 0) unit = Integer(-1);
      } else {
        std::size_t v = A(t, t).valuation();
        T scaled = A(t, t).divide(TruncPoly::y_power(v, A(t, t).prime()));
        unit = scaled.inverse();
      }
      if (!unit.is_one()) {
        for (std::size_t k = 0; k < m; ++k) A(t, k) = unit * A(t, k);
        for (std::size_t k = 0; k < n; ++k) L(t, k) = unit * L(t, k);
      }
    }
  }
  SmithData<T> out{L, R, {}};
  for (std::size_t t = 0; t < steps; ++t) out.diagonal.push_back(A(t, t));
  return out;
}

/// Generating set of the left kernel {v : v M = 0} over F_p[y]/(y^p), with
/// the y-adic annihilator exponent of each generator.
struct LocalKernel {
  Matrix<TruncPoly> generators;
  std::vector<std::size_t> annihilator_exponent;
};

inline LocalKernel local_kernel(const Matrix<TruncPoly>& M) {
  const std::size_t p = M.zero().prime();
  auto sd = smith_normal_form(M);
  LocalKernel out{Matrix<TruncPoly>(0, M.rows(), M.zero()), {}};
  for (std::size_t i = 0; i < M.rows(); ++i) {
    std::size_t a = i < sd.diagonal.size() ? sd.diagonal[i].valuation() : p;
    if (a == 0) continue;
    std::vector<TruncPoly> row = sd.left.row(i);
    if (a < p) {
      TruncPoly f = TruncPoly::y_power(p - a, p);
      for (auto& v : row) v = f * v;
    }
    // Generator y^{p-a} L_i is killed by y^a.
    out.generators.append_row(row);
    out.annihilator_exponent.push_back(a);
  }
  if (out.generators.rows() == 0) out.generators = Matrix<TruncPoly>(0, M.rows(), M.zero());
  return out;
}

/// Rows spanning the left kernel {v : v M = 0}. Over Z the rows form a basis
/// of the saturated kernel lattice; over a field a basis; over F_p[y]/(y^p)
/// a generating set.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& M) {
  if constexpr (std::is_same_v<T, TruncPoly>) {
    return local_kernel(M).generators;
  } else if constexpr (std::is_same_v<T, Integer> || ring_traits<T>::is_field) {
    if (M.cols() == 0) return Matrix<T>::identity(M.rows(), M.zero());
    if (auto fast = unit_pivot_kernel(M)) return std::move(fast->basis);
    auto e = row_echelon(M, false);
    if (e.rank == M.rows()) return Matrix<T>(0, M.rows(), M.zero());
    return e.U.rows_range(e.rank, M.rows());
  } else {
    throw RingError("kernel computation unsupported over " + M.zero().descriptor().name());
  }
}

// ---------------------------------------------------------------------------
// Determinants and inverses

/// Characteristic polynomial coefficients of det(x I - A), leading first
/// (c[0] = 1). Division free, valid over any commutative ring.
template <class T>
std::vector<T> charpoly_berkowitz(const Matrix<T>& A) {
  const std::size_t n = A.rows();
  if (!A.square()) throw std::invalid_argument("charpoly of non-square matrix");
  const T zero = A.zero(), one = A.one();
  std::vector<T> c{one};
  if (n == 0) return c;
  c.push_back(-A(0, 0));
  for (std::size_t r = 1; r < n; ++r) {
    // Toeplitz column of the leading (r+1) block: 1, -a, -R C, -R A C, ...
    std::vector<T> R(r, zero);
    for (std::size_t i = 0; i < r; ++i) R[i] = A(r, i);
    std::vector<T> Ccol(r, zero);
    for (std::size_t i = 0; i < r; ++i) Ccol[i] = A(i, r);
    std::vector<T> t{one, -A(r, r)};
    std::vector<T> v = Ccol;
    for (std::size_t k = 0; k < r; ++k) {
      T s = zero;
      for (std::size_t i = 0; i < r; ++i) s += R[i] * v[i];
      t.push_back(-s);
      std::vector<T> nv(r, zero);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          if (!v[j].is_zero() && !A(i, j).is_zero()) nv[i] += A(i, j) * v[j];
      v = std::move(nv);
    }
    std::vector<T> nc(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= i && j < t.size(); ++j)
        if (i - j < c.size()) nc[i] += t[j] * c[i - j];
    c = std::move(nc);
  }
  return c;
}

template <class T>
T determinant_berkowitz(const Matrix<T>& A) {
  auto c = charpoly_berkowitz(A);
  T d = c.back();
  return A.rows() % 2 == 1 ? -d : d;
}

namespace detail {

template <class T>
T exact_div(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, Integer> || std::is_same_v<T, Cyclotomic16>)
    return a.divide_exact(b);
  else
    return a * b.inverse();
}

}  // namespace detail

/// Fraction-free Bareiss elimination over an integral domain.
template <class T>
  requires(!std::is_same_v<T, TruncPoly>)
T determinant_bareiss(Matrix<T> A) {
  const std::size_t n = A.rows();
  if (!A.square()) throw std::invalid_argument("determinant of non-square matrix");
  T one = A.one();
  if (n == 0) return one;
  T prev = one;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k).is_zero()) {
      std::size_t r = k + 1;
      while (r < n && A(r, k).is_zero()) ++r;
      if (r == n) return A.zero();
      A.swap_rows(k, r);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        A(i, j) = detail::exact_div(A(i, j) * A(k, k) - A(i, k) * A(k, j), prev);
    prev = A(k, k);
  }
  T d = A(n - 1, n - 1);
  return negate ? -d : d;
}

template <class T>
T determinant(const Matrix<T>& A) {
  if constexpr (std::is_same_v<T, TruncPoly>)
    return determinant_berkowitz(A);
  else
    return determinant_bareiss(A);
}

/// Exact inverse via Cayley-Hamilton; throws NonUnitError when det is not a unit.
template <class T>
Matrix<T> inverse(const Matrix<T>& A) {
  const std::size_t n = A.rows();
  auto c = charpoly_berkowitz(A);
  // A^{-1} = -(A^{n-1} + c1 A^{n-2} + ... + c_{n-1}) / c_n
  T cn_inv = invert(c[n]);
  Matrix<T> acc = Matrix<T>::identity(n, A.zero());
  for (std::size_t k = 1; k < n; ++k) {
    acc = acc * A;
    acc += c[k] * Matrix<T>::identity(n, A.zero());
  }
  return (-cn_inv) * acc;
}

// ---------------------------------------------------------------------------
// Signature

struct Inertia {
  std::size_t positive = 0, negative = 0, zero = 0;
  long signature() const { return static_cast<long>(positive) - static_cast<long>(negative); }
  bool operator==(const Inertia&) const = default;
};

/// Sylvester inertia by symmetric congruence diagonalization over Q.
inline Inertia inertia(const Matrix<Rational>& W) {
  if (!W.is_symmetric()) throw std::invalid_argument("signature requires a symmetric matrix");
  const std::size_t n = W.rows();
  std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = W(i, j).value();
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  Inertia out;
  while (!active.empty()) {
    std::optional<std::size_t> k;
    for (std::size_t a : active)
      if (sgn(A[a][a]) != 0) {
        k = a;
        break;
      }
    if (!k) {
      std::optional<std::pair<std::size_t, std::size_t>> pr;
      for (std::size_t a : active) {
        for (std::size_t b : active)
          if (sgn(A[a][b]) != 0) {
            pr = {{a, b}};
            break;
          }
        if (pr) break;
      }
      if (!pr) break;
      // Replace basis vector a by a + b, making the diagonal 2 A[a][b] nonzero.
      auto [a, b] = *pr;
      for (std::size_t t : active) A[a][t] += A[b][t];
      for (std::size_t t : active) A[t][a] += A[t][b];
      k = a;
    }
    const mpq_class piv = A[*k][*k];
    if (sgn(piv) > 0)
      ++out.positive;
    else
      ++out.negative;
    active.erase(std::find(active.begin(), active.end(), *k));
    for (std::size_t a : active) {
      if (sgn(A[a][*k]) == 0) continue;
      mpq_class f = A[a][*k] / piv;
      for (std::size_t b : active)
        if (sgn(A[*k][b]) != 0) A[a][b] -= f * A[*k][b];
    }
  }
  out.zero = n - out.positive - out.negative;
  return out;
}

/// Over Z, Jacobi's rule on the leading principal minors from fraction-free
/// elimination; the rational route handles a vanishing minor.
inline Inertia inertia(const Matrix<Integer>& W) {
  if (!W.is_symmetric()) throw std::invalid_argument("signature requires a symmetric matrix");
  const std::size_t n = W.rows();
  std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = W(i, j).value();
  Inertia out;
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const int s = sgn(A[k][k]);
    if (s == 0) return inertia(to_rational(W));
    if (s != sgn(prev)) ++out.negative;
    else ++out.positive;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        A[i][j] = A[k][k] * A[i][j] - A[i][k] * A[k][j];
        mpz_divexact(A[i][j].get_mpz_t(), A[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = A[k][k];
  }
  return out;
}

}  // namespace hurwitz
