#pragma once

// The bilinear-form invariant of a Hurwitz tuple.
//
// For a tuple z = (z_1..z_m) acting on M = A^d through matrices E_i, vectors
// of M^m are row vectors of length d*m, block i holding x_{i+1}. Gamma_{z,k}
// is the dm x d matrix of
//   x -> (x_{k-1} - x_k) + sum_{j=k}^{m+k-2} (x_j - x_{j+1}) E_{j+1}...E_{m+k-1}
// (indices mod m), and Q_{psi,l}(x, y) = sum_{k=1}^{m-1} psi(u_k, w_k) with
//   u_1 = x_l - x_{l+1},  u_k = u_{k-1} E_{k+l-1} + (x_{k+l-1} - x_{k+l}),
//   w_k = y_{k+l} (1 - E_{k+l}^{-1}).

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hurwitz/forms.hpp"
#include "hurwitz/representation.hpp"

namespace hurwitz {

class ProductError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluated entries of a tuple together with their inverses.
template <class T>
struct EvaluatedTuple {
  std::vector<Matrix<T>> E, Einv;
  std::vector<std::optional<bool>> separating;  // per entry, from the base letter
  std::size_t d = 0;
  T zero{};
  std::size_t m() const { return E.size(); }
  const Matrix<T>& e(long j) const { return E[wrap(j)]; }        // e_{z_j}, 1-based mod m
  const Matrix<T>& einv(long j) const { return Einv[wrap(j)]; }  // e_{z_j}^{-1}
  std::size_t wrap(long j) const {
    long mm = static_cast<long>(E.size());
    return static_cast<std::size_t>((((j - 1) % mm) + mm) % mm);
  }
};

template <class T>
EvaluatedTuple<T> evaluate_tuple(const HurwitzTuple& t, const Representation<T>& rep) {
  if (t.size() == 0) throw std::invalid_argument("empty tuple");
  Evaluator<T> ev(rep);
  EvaluatedTuple<T> out;
  out.d = rep.dim;
  out.zero = rep.zero;
  for (const auto& e : t.entries) {
    out.E.push_back(ev.twist(e));
    out.Einv.push_back(ev.twist_inverse(e));
    out.separating.push_back(rep.generator(e.base).separating);
  }
  return out;
}

/// The dm x d matrix of Gamma_{z,k}, 1 <= k <= m.
template <class T>
Matrix<T> gamma_k(const EvaluatedTuple<T>& ez, long k) {
  const long m = static_cast<long>(ez.m());
  if (k < 1 || k > m) throw std::out_of_range("gamma_k: k outside 1..m");
  const std::size_t d = ez.d;
  Matrix<T> G(d * ez.m(), d, ez.zero);
  auto I = Matrix<T>::identity(d, ez.zero);
  auto block = [&](long j) { return ez.wrap(j) * d; };  // row offset of x_j
  G.add_block(block(k - 1), 0, I);
  G.add_block(block(k), 0, I, true);
  Matrix<T> P = ez.e(m + k - 1);
  for (long j = m + k - 2; j >= k; --j) {
    if (j < m + k - 2) P = ez.e(j + 1) * P;
    G.add_block(block(j), 0, P);
    G.add_block(block(j + 1), 0, P, true);
  }
  return G;
}

template <class T>
Matrix<T> gamma_k(const HurwitzTuple& t, const Representation<T>& rep, long k) {
  return gamma_k(evaluate_tuple(t, rep), k);
}

/// Classification of the ordered product e_{z_1}...e_{z_m}.
template <class T>
struct ProductDiagnosis {
  enum Kind { Identity, Scalar, NonScalar } kind = Identity;
  std::optional<T> scalar;
  Matrix<T> product;
  std::string describe() const {
    if (kind == Identity) return "identity";
    if (kind == Scalar) return "scalar " + scalar->str() + " times identity";
    return "non-scalar";
  }
};

template <class T>
ProductDiagnosis<T> diagnose_product(const EvaluatedTuple<T>& ez) {
  ProductDiagnosis<T> pd;
  pd.product = ordered_product(ez.E, ez.zero, ez.d);
  const T c = pd.product(0, 0);
  if ((c.from_long(1) == c) && pd.product.is_identity()) return pd;
  if (pd.product == c * Matrix<T>::identity(ez.d, ez.zero)) {
    pd.kind = ProductDiagnosis<T>::Scalar;
    pd.scalar = c;
  } else {
    pd.kind = ProductDiagnosis<T>::NonScalar;
  }
  return pd;
}

// ---------------------------------------------------------------------------
// Kernel

template <class T>
struct KernelData {
  Matrix<T> basis;      // rows span Ker Gamma_z (a basis except over F_p[y]/(y^p))
  Matrix<T> coord_map;  // N x rank: coordinates of kernel vectors in `basis`
  ProductDiagnosis<T> product;
  std::string method;   // "gamma_1", "diagonal", "intersection"
  bool lemma_hypothesis = true;
  std::size_t rank() const { return basis.rows(); }
};

namespace detail {

template <class T>
Matrix<T> diagonal_rows(std::size_t d, std::size_t m, const T& zero) {
  Matrix<T> D(d, d * m, zero);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < m; ++i) D(a, i * d + a) = zero.from_long(1);
  return D;
}

template <class T>
KernelData<T> kernel_from_echelon(const Matrix<T>& G) {
  KernelData<T> kd;
  const std::size_t N = G.rows();
  if constexpr (std::is_same_v<T, TruncPoly>) {
    kd.basis = local_kernel(G).generators;
  } else if constexpr (requires { row_echelon(G, true); }) {
    if (auto fast = unit_pivot_kernel(G)) {
      kd.basis = std::move(fast->basis);
      kd.coord_map = Matrix<T>(N, fast->free.size(), G.zero());
      for (std::size_t b = 0; b < fast->free.size(); ++b) kd.coord_map(fast->free[b], b) = G.one();
      return kd;
    }
    auto e = row_echelon(G, true);
    kd.basis = e.rank < N ? e.U.rows_range(e.rank, N) : Matrix<T>(0, N, G.zero());
    kd.coord_map = e.Uinv.block(0, e.rank, N, N - e.rank);
  } else {
    throw RingError("kernel computation unsupported over " + G.zero().descriptor().name() +
                    "; reduce the representation first");
  }
  return kd;
}

}  // namespace detail

/// Ker Gamma_z. With identity product only Gamma_{z,1} is needed; with a
/// scalar product c and 1 - c invertible the kernel is the diagonal;
/// otherwise the kernels of all Gamma_{z,k} are intersected.
template <class T>
KernelData<T> kernel(const EvaluatedTuple<T>& ez) {
  auto pd = diagnose_product(ez);
  const std::size_t d = ez.d, m = ez.m(), N = d * m;
  KernelData<T> kd;
  if (pd.kind == ProductDiagnosis<T>::Identity) {
    kd = detail::kernel_from_echelon(gamma_k(ez, 1));
    kd.method = "gamma_1";
  } else {
    bool one_minus_c_unit = false;
    if (pd.kind == ProductDiagnosis<T>::Scalar) {
      T omc = pd.scalar->from_long(1) - *pd.scalar;
      try {
        (void)invert(omc);
        one_minus_c_unit = true;
      } catch (const RingError&) {
      }
      if constexpr (std::is_same_v<T, Integer>) one_minus_c_unit = !omc.is_zero();  // injective suffices
    }
    if (one_minus_c_unit) {
      kd.basis = detail::diagonal_rows(d, m, ez.zero);
      kd.coord_map = Matrix<T>(N, d, ez.zero);
      for (std::size_t a = 0; a < d; ++a) kd.coord_map(a, a) = ez.zero.from_long(1);
      kd.method = "diagonal";
    } else {
      Matrix<T> G(N, d * m, ez.zero);
      for (std::size_t k = 1; k <= m; ++k) G.add_block(0, (k - 1) * d, gamma_k(ez, static_cast<long>(k)));
      kd = detail::kernel_from_echelon(G);
      kd.method = "intersection";
    }
    kd.lemma_hypothesis = false;
  }
  kd.product = pd;
  return kd;
}

/// True when every row r has Gamma_{z,k}(r) = 0 for all k.
template <class T>
bool in_kernel(const Matrix<T>& rows, const EvaluatedTuple<T>& ez, bool all_k = true) {
  std::size_t kmax = all_k ? ez.m() : 1;
  for (std::size_t k = 1; k <= kmax; ++k)
    if (!(rows * gamma_k(ez, static_cast<long>(k))).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Degenerate vectors

/// Rows spanning Diag(M) + sum_i Ker(1 - e_{z_i}) (component i).
template <class T>
Matrix<T> degenerate_submodule(const EvaluatedTuple<T>& ez) {
  const std::size_t d = ez.d, m = ez.m(), N = d * m;
  Matrix<T> D = detail::diagonal_rows(d, m, ez.zero);
  auto I = Matrix<T>::identity(d, ez.zero);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix<T> F = kernel_basis(I - ez.E[i]);
    for (std::size_t r = 0; r < F.rows(); ++r) {
      std::vector<T> v(N, ez.zero);
      for (std::size_t a = 0; a < d; ++a) v[i * d + a] = F(r, a);
      D.append_row(v);
    }
  }
  return D;
}

// ---------------------------------------------------------------------------
// The pairing

namespace detail {

// Row of length d(m-1): conj(u_k) Psi for k = 1..m-1.
template <class T>
std::vector<T> first_slots(const std::vector<T>& x, const EvaluatedTuple<T>& ez, const Matrix<T>& psi, long l) {
  const std::size_t d = ez.d, m = ez.m();
  auto X = [&](long j) {
    std::size_t off = ez.wrap(j) * d;
    return std::vector<T>(x.begin() + off, x.begin() + off + d);
  };
  std::vector<T> out;
  out.reserve(d * (m - 1));
  std::vector<T> u;
  for (long k = 1; k < static_cast<long>(m); ++k) {
    auto diff = vec_sub(X(k + l - 1), X(k + l));
    u = k == 1 ? diff : vec_add(ez.e(k + l - 1).left_apply(u), diff);
    std::vector<T> cu(d, ez.zero);
    for (std::size_t a = 0; a < d; ++a) cu[a] = involute(u[a]);
    auto row = psi.left_apply(cu);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

// Row of length d(m-1): w_k = y_{k+l} (1 - e_{k+l}^{-1}).
template <class T>
std::vector<T> second_slots(const std::vector<T>& y, const EvaluatedTuple<T>& ez, long l) {
  const std::size_t d = ez.d, m = ez.m();
  auto I = Matrix<T>::identity(d, ez.zero);
  std::vector<T> out;
  out.reserve(d * (m - 1));
  for (long k = 1; k < static_cast<long>(m); ++k) {
    std::size_t off = ez.wrap(k + l) * d;
    std::vector<T> yk(y.begin() + off, y.begin() + off + d);
    auto w = (I - ez.einv(k + l)).left_apply(yk);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace detail

/// Gram matrix W_{ij} = Q_{psi,l}(X_i, Y_j).
template <class T>
Matrix<T> pairing_matrix(const Matrix<T>& X, const Matrix<T>& Y, const EvaluatedTuple<T>& ez, const Matrix<T>& psi,
                         long l = 1) {
  const std::size_t m = ez.m(), d = ez.d;
  if (m < 2) return Matrix<T>(X.rows(), Y.rows(), ez.zero);
  Matrix<T> A(X.rows(), d * (m - 1), ez.zero), B(Y.rows(), d * (m - 1), ez.zero);
  for (std::size_t i = 0; i < X.rows(); ++i) A.set_row(i, detail::first_slots(X.row(i), ez, psi, l));
  for (std::size_t j = 0; j < Y.rows(); ++j) B.set_row(j, detail::second_slots(Y.row(j), ez, l));
  return A * B.transpose();
}

/// Q_{psi,l}(x, y) by the literal double sum; both vectors must lie in the kernel.
template <class T>
T q_pairing(const std::vector<T>& x, const std::vector<T>& y, const EvaluatedTuple<T>& ez, const Matrix<T>& psi,
            long l = 1) {
  const long m = static_cast<long>(ez.m());
  if (l < 1 || l > m) throw std::out_of_range("q_pairing: offset outside 1..m");
  Matrix<T> xy(0, x.size(), ez.zero);
  xy.append_row(x);
  xy.append_row(y);
  if (!in_kernel(xy, ez)) throw std::invalid_argument("q_pairing: vector not in Ker Gamma_z");
  const std::size_t d = ez.d;
  auto X = [&](long j) {
    std::size_t off = ez.wrap(j) * d;
    return std::vector<T>(x.begin() + off, x.begin() + off + d);
  };
  auto Y = [&](long j) {
    std::size_t off = ez.wrap(j) * d;
    return std::vector<T>(y.begin() + off, y.begin() + off + d);
  };
  auto I = Matrix<T>::identity(d, ez.zero);
  T total = ez.zero;
  for (long k = 1; k <= m - 1; ++k) {
    // First slot: x_{k+l-1} - x_{k+l} + sum_{j<k} (x_{j+l-1} - x_{j+l}) e_{j+l}...e_{k+l-1}.
    std::vector<T> u = vec_sub(X(k + l - 1), X(k + l));
    for (long j = 1; j <= k - 1; ++j) {
      Matrix<T> P = I;
      for (long s = j + l; s <= k + l - 1; ++s) P = P * ez.e(s);
      u = vec_add(u, P.left_apply(vec_sub(X(j + l - 1), X(j + l))));
    }
    std::vector<T> w = (I - ez.einv(k + l)).left_apply(Y(k + l));
    std::vector<T> cu(d, ez.zero);
    for (std::size_t a = 0; a < d; ++a) cu[a] = involute(u[a]);
    auto pu = psi.left_apply(cu);
    for (std::size_t a = 0; a < d; ++a) total += pu[a] * w[a];
  }
  return total;
}

// ---------------------------------------------------------------------------
// F_p[y]/(y^p): minimal generators through F_p-expansions

namespace detail {

class FpSpan {
 public:
  FpSpan(std::uint64_t p, std::size_t len) : p_(p), len_(len) {}

  bool contains(std::vector<std::uint64_t> v) const { return is_zero(reduce(std::move(v))); }
  bool add(std::vector<std::uint64_t> v) {
    v = reduce(std::move(v));
    std::size_t piv = 0;
    while (piv < len_ && v[piv] == 0) ++piv;
    if (piv == len_) return false;
    std::uint64_t inv = ModP(static_cast<long>(v[piv]), p_).inverse().residue();
    for (auto& x : v) x = (x * inv) % p_;
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }
  std::size_t dim() const { return rows_.size(); }

 private:
  std::vector<std::uint64_t> reduce(std::vector<std::uint64_t> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::uint64_t c = v[pivots_[r]];
      if (!c) continue;
      for (std::size_t k = 0; k < len_; ++k) v[k] = (v[k] + (p_ - c) * rows_[r][k]) % p_;
    }
    return v;
  }
  static bool is_zero(const std::vector<std::uint64_t>& v) {
    for (auto x : v)
      if (x) return false;
    return true;
  }
  std::uint64_t p_;
  std::size_t len_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::vector<std::uint64_t> expand_fp(const std::vector<TruncPoly>& v) {
  std::vector<std::uint64_t> out;
  for (const auto& e : v)
    for (auto c : e.coefficients()) out.push_back(c);
  return out;
}

inline std::vector<TruncPoly> times_y(std::vector<TruncPoly> v, std::size_t k) {
  if (v.empty()) return v;
  TruncPoly f = TruncPoly::y_power(k, v[0].prime());
  for (auto& e : v) e = f * e;
  return v;
}

// Greedy lift of an F_p-basis of span(G) / (span of `base` + y span(G)).
inline std::vector<std::size_t> minimal_generators(const Matrix<TruncPoly>& G, const Matrix<TruncPoly>& base) {
  const std::size_t p = G.zero().prime(), N = G.cols();
  FpSpan S(p, p * N);
  for (std::size_t r = 0; r < base.rows(); ++r)
    for (std::size_t k = 0; k < p; ++k) S.add(expand_fp(times_y(base.row(r), k)));
  for (std::size_t r = 0; r < G.rows(); ++r)
    for (std::size_t k = 1; k < p; ++k) S.add(expand_fp(times_y(G.row(r), k)));
  std::vector<std::size_t> chosen;
  for (std::size_t r = 0; r < G.rows(); ++r)
    if (S.add(expand_fp(G.row(r)))) chosen.push_back(r);
  return chosen;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The invariant

struct InvariantOptions {
  long ell = 1;
  bool compute_b1 = true;
  bool kernel_basis = true;  // also return a basis of Ker Gamma (costly for large entries)
};

template <class T>
struct InvariantResult {
  std::size_t m = 0, dim = 0;
  std::size_t kernel_rank = 0;  // over F_p[y]/(y^p): minimal number of generators
  std::size_t mz_rank = 0;
  Matrix<T> kernel_basis;       // rows
  Matrix<T> mz_basis;           // rows in M^m spanning a complement of the degenerate part
  Matrix<T> degenerate;         // generating rows of the degenerate submodule
  Matrix<T> W;
  FormClass form_class;
  T determinant{};
  std::vector<std::string> quotient_torsion;  // non-unit elementary divisors of Ker / Deg
  std::optional<std::size_t> b1;
  std::optional<std::pair<std::size_t, std::size_t>> type;  // (m_ns, m - m_ns)
  std::optional<long> predicted_mz, predicted_kernel;        // symplectic case
  std::string product;
  std::string kernel_method;
  bool lemma_hypothesis = true;

  bool rank_formulas_hold() const {
    return predicted_mz && predicted_kernel && *predicted_mz == static_cast<long>(mz_rank) &&
           *predicted_kernel == static_cast<long>(kernel_rank);
  }
};

namespace detail {

// Ker Gamma / Deg through the components. Gamma_{z,1} sends x to
// sum_i x_i (1 - E_i) P_i, so it factors through M^m / sum_i Ker(1 - E_i),
// which is the sum of the lattices Im(1 - E_i). In coordinates c_i of
// Im(1 - E_i) the map is a small (sum r_i) x d matrix, and Deg becomes the
// image of the diagonal.
template <class T>
struct ComponentQuotient {
  std::size_t kernel_rank = 0;
  Matrix<T> lifts;   // rows of M^m lifting a complement of Deg in Ker Gamma
  Matrix<T> deg_coords;
  bool saturated = true;
};

template <class T>
ComponentQuotient<T> component_quotient(const EvaluatedTuple<T>& ez) {
  const std::size_t d = ez.d, m = ez.m(), N = d * m;
  const Matrix<T> G = gamma_k(ez, 1);
  const auto I = Matrix<T>::identity(d, ez.zero);
  std::vector<Matrix<T>> lift(m);  // L_i with L_i (1 - E_i) = B_i, a basis of Im(1 - E_i)
  std::vector<std::size_t> off(m + 1, 0);
  Matrix<T> Gbar(0, d, ez.zero), Dbar(d, 0, ez.zero);
  ComponentQuotient<T> out;
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix<T> A = I - ez.E[i];
    const Matrix<T> Gi = G.block(i * d, 0, d, d);
    auto e = row_echelon(A, true);
    const std::size_t r = e.rank;
    if (!(kernel_basis(A) * Gi).is_zero())
      throw std::logic_error("Gamma does not vanish on Ker(1 - e) at entry " + std::to_string(i + 1));
    lift[i] = e.U.rows_range(0, r);
    off[i + 1] = off[i] + r;
    out.kernel_rank += d - r;
    Matrix<T> rows = lift[i] * Gi;
    for (std::size_t k = 0; k < r; ++k) Gbar.append_row(rows.row(k));
    Matrix<T> grown(d, off[i + 1], ez.zero);
    grown.add_block(0, 0, Dbar);
    grown.add_block(0, off[i], e.Uinv.block(0, 0, d, r));
    Dbar = std::move(grown);
  }
  auto kb = kernel_from_echelon(Gbar);
  out.kernel_rank += kb.rank();
  out.deg_coords = Dbar * kb.coord_map;
  auto C = complement_rows(out.deg_coords, kb.rank(), ez.zero, &out.saturated);
  Matrix<T> coords = C.rows() ? C * kb.basis : Matrix<T>(0, off[m], ez.zero);
  out.lifts = Matrix<T>(coords.rows(), N, ez.zero);
  for (std::size_t row = 0; row < coords.rows(); ++row)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
        const T& c = coords(row, k);
        if (c.is_zero()) continue;
        for (std::size_t a = 0; a < d; ++a) out.lifts(row, i * d + a) += c * lift[i](k - off[i], a);
      }
  return out;
}

}  // namespace detail

/// The invariant of an evaluated tuple; `rep` supplies genus and curve data.
template <class T>
InvariantResult<T> compute_invariant(const EvaluatedTuple<T>& ez, const Representation<T>& rep, const Matrix<T>& psi,
                                     const InvariantOptions& opt = {}) {
  if (psi.rows() != rep.dim || psi.cols() != rep.dim)
    throw std::invalid_argument("psi must be " + std::to_string(rep.dim) + "x" + std::to_string(rep.dim));
  if (ez.m() == 0) throw std::invalid_argument("empty tuple");
  auto pd = diagnose_product(ez);
  if (pd.kind != ProductDiagnosis<T>::Identity)
    throw ProductError("ordered product of the tuple is not the identity (" + pd.describe() + ")");
  InvariantResult<T> res;
  res.m = ez.m();
  res.dim = ez.d;
  const std::size_t N = ez.d * ez.m();
  res.product = pd.describe();
  res.kernel_method = "gamma_1";
  res.degenerate = degenerate_submodule(ez);

  if constexpr (std::is_same_v<T, TruncPoly>) {
    auto kd = kernel(ez);
    res.kernel_basis = kd.basis;
    Matrix<TruncPoly> none(0, N, ez.zero);
    res.kernel_rank = detail::minimal_generators(kd.basis, none).size();
    auto chosen = detail::minimal_generators(kd.basis, res.degenerate);
    res.mz_basis = Matrix<T>(0, N, ez.zero);
    for (auto r : chosen) res.mz_basis.append_row(kd.basis.row(r));
    res.mz_rank = chosen.size();
  } else if constexpr (std::is_same_v<T, Integer> || ring_traits<T>::is_field) {
    if (opt.kernel_basis) res.kernel_basis = kernel(ez).basis;
    auto cq = detail::component_quotient(ez);
    res.kernel_rank = cq.kernel_rank;
    res.mz_basis = cq.lifts;
    res.mz_rank = cq.lifts.rows();
    if constexpr (std::is_same_v<T, Integer>) {
      const auto& Dc = cq.deg_coords;
      if (!cq.saturated && Dc.rows() && Dc.cols()) {
        auto sd = smith_normal_form(Dc);
        for (const auto& dv : sd.diagonal)
          if (!dv.is_zero() && !dv.is_one()) res.quotient_torsion.push_back(dv.str());
      }
    }
  } else {
    throw RingError("invariant computation unsupported over " + rep.ring().name() +
                    "; reduce the representation first");
  }

  res.W = pairing_matrix(res.mz_basis, res.mz_basis, ez, psi, opt.ell);
  res.determinant = determinant(res.W);
  res.form_class = classify_form(res.W, res.kernel_rank - res.mz_rank);

  if (ez.separating.size() == ez.m() &&
      std::all_of(ez.separating.begin(), ez.separating.end(), [](const auto& f) { return f.has_value(); })) {
    std::size_t ns = std::count(ez.separating.begin(), ez.separating.end(), std::optional<bool>(false));
    res.type = std::make_pair(ns, ez.m() - ns);
  }
  if constexpr (std::is_same_v<T, Integer> || ring_traits<T>::is_field) {
    if (opt.compute_b1) res.b1 = coinvariants_rank(ez.E, ez.zero, ez.d);
  }
  bool symplectic = rep.genus && rep.psi_symmetry == PsiSymmetry::Skew &&
                    std::all_of(rep.generators.begin(), rep.generators.end(),
                                [](const auto& kv) { return kv.second.homology.has_value(); });
  if (symplectic && res.b1 && res.type) {
    long g = *rep.genus, b1 = static_cast<long>(*res.b1), m = static_cast<long>(res.m);
    res.predicted_mz = static_cast<long>(res.type->first) - 4 * g + 2 * b1;
    res.predicted_kernel = 2 * g * m - 2 * g + b1;
  }
  return res;
}

template <class T>
InvariantResult<T> compute_invariant(const HurwitzTuple& t, const Representation<T>& rep, const Matrix<T>& psi,
                                     const InvariantOptions& opt = {}) {
  return compute_invariant(evaluate_tuple(t, rep), rep, psi, opt);
}

template <class T>
InvariantResult<T> compute_invariant(const HurwitzTuple& t, const Representation<T>& rep,
                                     const InvariantOptions& opt = {}) {
  if (!rep.has_psi()) throw std::invalid_argument("representation carries no psi; supply one");
  return compute_invariant(t, rep, rep.psi, opt);
}

// ---------------------------------------------------------------------------
// Base change along a single move

struct MoveSpec {
  enum Kind { Elementary, Global } kind = Elementary;
  std::size_t index = 1;  // 1-based, elementary moves
  MoveDirection direction = MoveDirection::Forward;
  Word conjugator;        // global conjugation
};

inline HurwitzTuple apply_move(const HurwitzTuple& t, const MoveSpec& s) {
  return s.kind == MoveSpec::Global ? global_conjugate(t, s.conjugator) : hurwitz_move(t, s.index, s.direction);
}

/// N x N matrix B with x -> x B carrying Ker Gamma_z onto Ker Gamma_{z'},
/// z' the moved tuple, and Q' (Bx, By) = Q(x, y).
template <class T>
Matrix<T> base_change_map(const EvaluatedTuple<T>& ez, const Representation<T>& rep, const MoveSpec& s) {
  const std::size_t d = ez.d, m = ez.m(), N = d * m;
  auto I = Matrix<T>::identity(d, ez.zero);
  if (s.kind == MoveSpec::Global) {
    Matrix<T> Wm = rep.evaluate(s.conjugator);
    Matrix<T> B(N, N, ez.zero);
    for (std::size_t i = 0; i < m; ++i) B.add_block(i * d, i * d, Wm);
    return B;
  }
  const std::size_t i = s.index;
  if (i < 1 || i >= m) throw std::out_of_range("base_change_map: move index outside 1..m-1");
  Matrix<T> B = Matrix<T>::identity(N, ez.zero);
  const std::size_t p = (i - 1) * d, q = i * d;  // blocks of x_i and x_{i+1}
  for (std::size_t a = 0; a < d; ++a) B(p + a, p + a) = ez.zero, B(q + a, q + a) = ez.zero;
  if (s.direction == MoveDirection::Forward) {
    // (.., x_i, x_{i+1}, ..) -> (.., x_{i+1}, x_{i+1} + (x_i - x_{i+1}) e_{i+1}, ..)
    const Matrix<T>& e = ez.E[i];
    B.add_block(q, p, I);
    B.add_block(p, q, e);
    B.add_block(q, q, I - e);
  } else {
    // (.., x_i, x_{i+1}, ..) -> (.., x_i + (x_{i+1} - x_i) e_i^{-1}, x_i, ..)
    const Matrix<T>& ei = ez.Einv[i - 1];
    B.add_block(p, p, I - ei);
    B.add_block(q, p, ei);
    B.add_block(p, q, I);
  }
  return B;
}

template <class T>
Matrix<T> base_change_map(const HurwitzTuple& t, const Representation<T>& rep, const MoveSpec& s) {
  return base_change_map(evaluate_tuple(t, rep), rep, s);
}

/// The move applied to evaluated entries; long random walks stay cheap here
/// because conjugator words never have to be expanded.
template <class T>
EvaluatedTuple<T> apply_move(const EvaluatedTuple<T>& ez, const Representation<T>& rep, const MoveSpec& s) {
  EvaluatedTuple<T> r = ez;
  if (s.kind == MoveSpec::Global) {
    Matrix<T> W = rep.evaluate(s.conjugator), Wi = rep.evaluate(inverse(s.conjugator));
    for (std::size_t j = 0; j < r.m(); ++j) {
      r.E[j] = Wi * ez.E[j] * W;
      r.Einv[j] = Wi * ez.Einv[j] * W;
    }
    return r;
  }
  const std::size_t i = s.index;
  if (i < 1 || i >= ez.m()) throw std::out_of_range("apply_move: move index outside 1..m-1");
  const std::size_t a = i - 1, b = i;
  auto swap_flags = [&] {
    if (r.separating.size() == r.m()) std::swap(r.separating[a], r.separating[b]);
  };
  if (s.direction == MoveDirection::Forward) {
    r.E[a] = ez.E[b];
    r.Einv[a] = ez.Einv[b];
    r.E[b] = ez.Einv[b] * ez.E[a] * ez.E[b];
    r.Einv[b] = ez.Einv[b] * ez.Einv[a] * ez.E[b];
  } else {
    r.E[a] = ez.E[a] * ez.E[b] * ez.Einv[a];
    r.Einv[a] = ez.E[a] * ez.Einv[b] * ez.Einv[a];
    r.E[b] = ez.E[a];
    r.Einv[b] = ez.Einv[a];
  }
  swap_flags();
  return r;
}

// ---------------------------------------------------------------------------
// Unimodularity

struct UnimodularityReport {
  std::vector<std::pair<std::string, std::vector<std::string>>> smith;  // per entry: diagonal of 1 - e_z
  bool torsion_free = true;
  std::string det_w;
  bool det_unit = false;
  bool certified() const { return torsion_free && det_unit; }
};

/// Cokernels of 1 - e_{z_i} over Z (torsion free implies W unimodular for
/// unimodular psi), together with a direct check of det W.
inline UnimodularityReport unimodularity_certificate(const HurwitzTuple& t, const Representation<Integer>& rep,
                                                     const Matrix<Integer>& W) {
  UnimodularityReport r;
  auto ez = evaluate_tuple(t, rep);
  auto I = rep.identity();
  for (std::size_t i = 0; i < ez.m(); ++i) {
    auto sd = smith_normal_form(I - ez.E[i]);
    std::vector<std::string> diag;
    for (const auto& v : sd.diagonal) {
      diag.push_back(v.str());
      if (!v.is_zero() && !v.is_one()) r.torsion_free = false;
    }
    r.smith.emplace_back(to_string(t.entries[i]), diag);
  }
  Integer det = determinant(W);
  r.det_w = det.str();
  r.det_unit = det.value() == 1 || det.value() == -1;
  return r;
}

}  // namespace hurwitz
