#include <gtest/gtest.h>

#include <random>

#include "hurwitz/linalg.hpp"

using namespace hurwitz;

namespace {

std::mt19937_64 rng(77);

long small(long b) { return std::uniform_int_distribution<long>(-b, b)(rng); }

Matrix<Integer> rand_int_matrix(std::size_t r, std::size_t c, long b = 4) {
  Matrix<Integer> m(r, c, Integer{});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Integer(small(b));
  return m;
}

// Product of random elementary matrices; determinant +-1.
Matrix<Integer> rand_unimodular(std::size_t n) {
  auto S = Matrix<Integer>::identity(n, Integer{});
  for (int t = 0; t < 3 * static_cast<int>(n); ++t) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    Integer q(small(2));
    for (std::size_t k = 0; k < n; ++k) S(i, k) += q * S(j, k);
  }
  if (rng() % 2) S.swap_rows(0, n - 1);
  return S;
}

// Plain Gaussian rank over Q (independent of row_echelon).
std::size_t rational_rank(const Matrix<Integer>& M) {
  std::vector<std::vector<mpq_class>> A(M.rows(), std::vector<mpq_class>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) A[i][j] = M(i, j).value();
  std::size_t rk = 0;
  for (std::size_t c = 0; c < M.cols() && rk < M.rows(); ++c) {
    std::size_t p = rk;
    while (p < M.rows() && A[p][c] == 0) ++p;
    if (p == M.rows()) continue;
    std::swap(A[rk], A[p]);
    for (std::size_t r = rk + 1; r < M.rows(); ++r) {
      if (A[r][c] == 0) continue;
      mpq_class f = A[r][c] / A[rk][c];
      for (std::size_t k = c; k < M.cols(); ++k) A[r][k] -= f * A[rk][k];
    }
    ++rk;
  }
  return rk;
}

// Laplace expansion determinant.
mpz_class cofactor_det(const std::vector<std::vector<mpz_class>>& A) {
  std::size_t n = A.size();
  if (n == 0) return 1;
  if (n == 1) return A[0][0];
  mpz_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (A[0][j] == 0) continue;
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(A[i][k]);
      minor.push_back(row);
    }
    mpz_class t = A[0][j] * cofactor_det(minor);
    d += (j % 2 == 0) ? t : mpz_class(-t);
  }
  return d;
}

mpz_class cofactor_det(const Matrix<Integer>& M) {
  std::vector<std::vector<mpz_class>> A(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) A[i].push_back(M(i, j).value());
  return cofactor_det(A);
}

// Sign changes of the characteristic polynomial count positive roots
// (Descartes' rule is exact for real-rooted polynomials).
Inertia charpoly_inertia(const Matrix<Integer>& W) {
  auto c = charpoly_berkowitz(to_rational(W));
  std::size_t n = W.rows();
  std::size_t zero = 0;
  while (zero < n && c[n - zero].is_zero()) ++zero;
  auto changes = [&](bool negate) {
    std::size_t count = 0;
    int last = 0;
    for (std::size_t k = 0; k + zero <= n; ++k) {
      int s = c[k].sign();
      if (negate && (n - k) % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  return {changes(false), changes(true), zero};
}

Matrix<Integer> e8_negative() {
  // Negative of the E8 Cartan matrix (Bourbaki labelling).
  std::vector<std::vector<long>> C(8, std::vector<long>(8, 0));
  for (int i = 0; i < 8; ++i) C[i][i] = -2;
  auto link = [&](int a, int b) { C[a][b] = C[b][a] = 1; };
  link(0, 2);
  link(1, 3);
  link(2, 3);
  link(3, 4);
  link(4, 5);
  link(5, 6);
  link(6, 7);
  return Matrix<Integer>::from_longs(C, Integer{});
}

}  // namespace

TEST(Matrix, ShapeAndProduct) {
  auto A = Matrix<Integer>::from_longs({{1, 2}, {3, 4}}, Integer{});
  auto B = Matrix<Integer>::from_longs({{0, 1}, {1, 0}}, Integer{});
  EXPECT_EQ(A * B, Matrix<Integer>::from_longs({{2, 1}, {4, 3}}, Integer{}));
  std::vector<Integer> v{Integer(1), Integer(1)};
  EXPECT_EQ(A.left_apply(v), (std::vector<Integer>{Integer(4), Integer(6)}));
  EXPECT_THROW(A * Matrix<Integer>(3, 1, Integer{}), std::invalid_argument);
  Matrix<ModP> x(1, 1, ModP(0, 5)), y(1, 1, ModP(0, 7));
  EXPECT_THROW(x * y, RingError);
}

TEST(Kernel, TrivialCases) {
  EXPECT_EQ(kernel_basis(Matrix<Integer>::identity(4, Integer{})).rows(), 0u);
  EXPECT_EQ(kernel_basis(Matrix<ModP>::identity(4, ModP(0, 3))).rows(), 0u);
  EXPECT_EQ(kernel_basis(Matrix<Rational>(3, 2, Rational{})).rows(), 3u);
  EXPECT_EQ(kernel_basis(Matrix<TruncPoly>::identity(3, TruncPoly(0, 2))).rows(), 0u);
}

TEST(Kernel, IntegerRankNullity) {
  for (int t = 0; t < 20; ++t) {
    auto M = rand_int_matrix(6, 10);
    if (t % 3 == 0) {  // force rank deficiency
      for (std::size_t j = 0; j < 10; ++j) M(5, j) = M(0, j) + M(1, j) * Integer(2);
    }
    auto B = kernel_basis(M);
    EXPECT_TRUE((B * M).is_zero());
    EXPECT_EQ(B.rows(), 6 - rational_rank(M));
    EXPECT_EQ(rational_rank(B), B.rows());
  }
  for (int t = 0; t < 20; ++t) {
    auto M = rand_int_matrix(10, 4, 3);
    auto B = kernel_basis(M);
    EXPECT_TRUE((B * M).is_zero());
    EXPECT_EQ(B.rows(), 10 - rational_rank(M));
  }
}

TEST(Kernel, IntegerSaturated) {
  // x * [[2],[4]] = 0 has kernel spanned by (2,-1), not (4,-2).
  auto M = Matrix<Integer>::from_longs({{2}, {4}}, Integer{});
  auto B = kernel_basis(M);
  ASSERT_EQ(B.rows(), 1u);
  auto sd = smith_normal_form(B);
  EXPECT_TRUE(sd.diagonal[0].is_one());
  for (int t = 0; t < 15; ++t) {
    auto N = rand_int_matrix(8, 3, 6);
    auto K = kernel_basis(N);
    auto s = smith_normal_form(K);
    for (auto& d : s.diagonal) EXPECT_TRUE(d.is_one());
  }
}

TEST(Kernel, UnitPivotRoute) {
  for (int t = 0; t < 15; ++t) {
    // An identity block guarantees unit pivots.
    auto M = rand_int_matrix(9, 3, 6);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) M(2 * a + 1, b) = Integer(a == b ? 1 : 0);
    auto k = unit_pivot_kernel(M);
    ASSERT_TRUE(k.has_value());
    EXPECT_TRUE((k->basis * M).is_zero());
    EXPECT_EQ(k->basis.rows(), 9 - rational_rank(M));
    for (std::size_t b = 0; b < k->free.size(); ++b)
      for (std::size_t c = 0; c < k->free.size(); ++c) EXPECT_EQ(k->basis(b, k->free[c]), Integer(b == c ? 1 : 0));
  }
  // x * [[2],[3]] = 0: saturated kernel (3,-2), but no unit entry to pivot on.
  auto M = Matrix<Integer>::from_longs({{2}, {3}}, Integer{});
  EXPECT_FALSE(unit_pivot_kernel(M).has_value());
  auto B = kernel_basis(M);
  ASSERT_EQ(B.rows(), 1u);
  EXPECT_EQ(abs(B(0, 0).value()), 3);
}

TEST(Kernel, TruncPolyGenerators) {
  const std::uint64_t p = 2;
  TruncPoly y = TruncPoly::y_power(1, p), one(1, p), zero(0, p);
  // x * [[y]] = 0 has kernel (y).
  auto M = Matrix<TruncPoly>::from_rows({{y}}, zero);
  auto K = local_kernel(M);
  ASSERT_EQ(K.generators.rows(), 1u);
  EXPECT_EQ(K.generators(0, 0), y);
  EXPECT_EQ(K.annihilator_exponent[0], 1u);
  std::mt19937_64 r(3);
  for (int t = 0; t < 30; ++t) {
    Matrix<TruncPoly> A(5, 3, zero);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        A(i, j) = TruncPoly::from_coefficients({long(r() % 2), long(r() % 2)}, p);
    auto G = kernel_basis(A);
    EXPECT_TRUE((G * A).is_zero());
    // Every kernel vector (enumerated) is an F_2-combination of G and yG.
    std::size_t N = 5;
    std::vector<std::vector<int>> span;
    auto flat = [&](const std::vector<TruncPoly>& v) {
      std::vector<int> f;
      for (auto& e : v)
        for (auto c : e.coefficients()) f.push_back(int(c));
      return f;
    };
    std::vector<std::vector<int>> gens;
    for (std::size_t i = 0; i < G.rows(); ++i) {
      auto row = G.row(i);
      gens.push_back(flat(row));
      for (auto& e : row) e = y * e;
      gens.push_back(flat(row));
    }
    auto rank2 = [](std::vector<std::vector<int>> rows) {
      std::size_t rk = 0, n = rows.empty() ? 0 : rows[0].size();
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t pv = rk;
        while (pv < rows.size() && rows[pv][c] == 0) ++pv;
        if (pv == rows.size()) continue;
        std::swap(rows[rk], rows[pv]);
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (i != rk && rows[i][c])
            for (std::size_t k = 0; k < n; ++k) rows[i][k] ^= rows[rk][k];
        ++rk;
      }
      return rk;
    };
    std::size_t base = rank2(gens);
    for (std::uint64_t mask = 0; mask < (1u << (2 * N)); ++mask) {
      std::vector<TruncPoly> v;
      for (std::size_t i = 0; i < N; ++i)
        v.push_back(TruncPoly::from_coefficients({long((mask >> (2 * i)) & 1), long((mask >> (2 * i + 1)) & 1)}, p));
      Matrix<TruncPoly> row(1, N, zero);
      row.set_row(0, v);
      if (!(row * A).is_zero()) continue;
      auto g2 = gens;
      g2.push_back(flat(v));
      ASSERT_EQ(rank2(g2), base);
    }
  }
}

TEST(Smith, Examples) {
  auto sd = smith_normal_form(Matrix<Integer>::from_longs({{2, 0}, {0, 3}}, Integer{}));
  EXPECT_EQ(sd.diagonal[0], Integer(1));
  EXPECT_EQ(sd.diagonal[1], Integer(6));
  auto z = smith_normal_form(Matrix<Integer>(3, 2, Integer{}));
  for (auto& d : z.diagonal) EXPECT_TRUE(d.is_zero());
}

TEST(Smith, RandomAgainstCofactor) {
  for (int t = 0; t < 25; ++t) {
    auto M = rand_int_matrix(5, 5, 5);
    auto sd = smith_normal_form(M);
    // left * M * right is diagonal.
    auto D = sd.left * M * sd.right;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        if (i != j) {
          EXPECT_TRUE(D(i, j).is_zero());
        }
      }
    for (std::size_t i = 0; i + 1 < 5; ++i) {
      if (sd.diagonal[i + 1].is_zero()) continue;
      EXPECT_TRUE(mpz_divisible_p(sd.diagonal[i + 1].value().get_mpz_t(), sd.diagonal[i].value().get_mpz_t()));
    }
    mpz_class prod = 1;
    for (auto& d : sd.diagonal) prod *= d.value();
    mpz_class det = cofactor_det(M);
    EXPECT_EQ(abs(prod), abs(det));
    EXPECT_EQ(abs(cofactor_det(sd.left)), 1);
    EXPECT_EQ(abs(cofactor_det(sd.right)), 1);
  }
}

TEST(Determinant, BareissBerkowitzCofactor) {
  for (int t = 0; t < 25; ++t) {
    std::size_t n = 1 + t % 6;
    auto M = rand_int_matrix(n, n, 6);
    mpz_class d = cofactor_det(M);
    EXPECT_EQ(determinant(M).value(), d);
    EXPECT_EQ(determinant_berkowitz(M).value(), d);
  }
}

TEST(Determinant, TruncPolyAndInverse) {
  std::uint64_t p = 3;
  TruncPoly zero(0, p);
  std::mt19937_64 r(9);
  for (int t = 0; t < 20; ++t) {
    Matrix<TruncPoly> A(3, 3, zero);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        A(i, j) = TruncPoly::from_coefficients({long(r() % 3), long(r() % 3), long(r() % 3)}, p);
    TruncPoly d = determinant(A);
    if (d.is_unit()) {
      auto Ai = inverse(A);
      EXPECT_TRUE((A * Ai).is_identity());
    } else {
      EXPECT_THROW(inverse(A), NonUnitError);
    }
  }
  auto U = rand_unimodular(5);
  EXPECT_TRUE((U * inverse(U)).is_identity());
}

TEST(Signature, Examples) {
  EXPECT_EQ(inertia(Matrix<Integer>(4, 4, Integer{})), (Inertia{0, 0, 4}));
  auto E = e8_negative();
  EXPECT_EQ(inertia(E), (Inertia{0, 8, 0}));
  EXPECT_EQ(inertia(E).signature(), -8);
  EXPECT_EQ(determinant(E), Integer(1));
  auto H = Matrix<Integer>::from_longs({{0, 1}, {1, 0}}, Integer{});
  EXPECT_EQ(inertia(H), (Inertia{1, 1, 0}));
  EXPECT_THROW(inertia(Matrix<Integer>::from_longs({{0, 1}, {2, 0}}, Integer{})), std::invalid_argument);
}

TEST(Signature, LargeEntriesBothRoutes) {
  // Congruent copies of a diagonal form with big entries; the zero diagonal
  // case sends the integer route to the rational one.
  for (int t = 0; t < 10; ++t) {
    std::vector<long> d = {1, -1, 2, -3, t % 3 == 0 ? 0 : 5, 1};
    Matrix<Integer> D(6, 6, Integer{});
    for (std::size_t i = 0; i < 6; ++i) D(i, i) = Integer(d[i]);
    auto P = rand_unimodular(6);
    for (int k = 0; k < 4; ++k) P = P * rand_unimodular(6);
    auto W = P * D * P.transpose();
    if (t % 2) W(0, 0) = Integer(0);
    EXPECT_EQ(inertia(W), inertia(to_rational(W))) << t;
    EXPECT_EQ(inertia(W), charpoly_inertia(W)) << t;
  }
}

TEST(Signature, CongruenceAndOracle) {
  for (int t = 0; t < 25; ++t) {
    std::size_t n = 2 + t % 7;
    auto A = rand_int_matrix(n, n, 3);
    auto W = A + A.transpose();
    if (t % 4 == 0)
      for (std::size_t j = 0; j < n; ++j) W(0, j) = W(j, 0) = Integer(0);  // nontrivial radical
    Inertia in = inertia(W);
    EXPECT_EQ(in, charpoly_inertia(W));
    auto S = rand_unimodular(n);
    EXPECT_EQ(inertia(S * W * S.transpose()), in);
  }
}

TEST(Signature, DirectSumAdds) {
  for (int t = 0; t < 10; ++t) {
    auto A = rand_int_matrix(4, 4, 3), B = rand_int_matrix(3, 3, 3);
    auto W1 = A + A.transpose(), W2 = B + B.transpose();
    Inertia a = inertia(W1), b = inertia(W2), s = inertia(Matrix<Integer>::block_diagonal(W1, W2));
    EXPECT_EQ(s, (Inertia{a.positive + b.positive, a.negative + b.negative, a.zero + b.zero}));
  }
}
