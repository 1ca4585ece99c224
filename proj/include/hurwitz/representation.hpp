#pragma once

// Matrix representations of twist alphabets: the symplectic action on
// H_1 of a genus g surface, the genus-1 SU(2) level-2 quantum matrices over
// Z[zeta_16], and their reduction to F_2[y]/(y^2).

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hurwitz/linalg.hpp"
#include "hurwitz/tuple.hpp"

namespace hurwitz {

template <class T>
struct Generator {
  Matrix<T> matrix;
  Matrix<T> inverse;
  std::optional<bool> separating;
  std::optional<std::vector<long>> homology;  // symplectic basis a1,b1,...,ag,bg
};

enum class PsiSymmetry { None, Symmetric, Skew, Hermitian, SkewHermitian };

inline std::string to_string(PsiSymmetry s) {
  switch (s) {
    case PsiSymmetry::None: return "none";
    case PsiSymmetry::Symmetric: return "symmetric";
    case PsiSymmetry::Skew: return "skew";
    case PsiSymmetry::Hermitian: return "hermitian";
    case PsiSymmetry::SkewHermitian: return "skew-hermitian";
  }
  return "?";
}

inline PsiSymmetry parse_psi_symmetry(const std::string& s) {
  if (s == "symmetric") return PsiSymmetry::Symmetric;
  if (s == "skew") return PsiSymmetry::Skew;
  if (s == "hermitian") return PsiSymmetry::Hermitian;
  if (s == "skew-hermitian") return PsiSymmetry::SkewHermitian;
  if (s == "none" || s.empty()) return PsiSymmetry::None;
  throw std::invalid_argument("unknown psi_symmetry '" + s + "'");
}

/// psi(x, y) = conj(x) * Psi * y^T.
template <class T>
bool has_symmetry(const Matrix<T>& psi, PsiSymmetry s) {
  switch (s) {
    case PsiSymmetry::None: return true;
    case PsiSymmetry::Symmetric: return psi == psi.transpose();
    case PsiSymmetry::Skew: return psi == -psi.transpose();
    case PsiSymmetry::Hermitian: return psi == psi.transpose().conj();
    case PsiSymmetry::SkewHermitian: return psi == -psi.transpose().conj();
  }
  return false;
}

template <class T>
struct Representation {
  std::size_t dim = 0;
  T zero{};
  std::map<std::string, Generator<T>> generators;
  Matrix<T> psi;  // 0x0 when absent
  PsiSymmetry psi_symmetry = PsiSymmetry::None;
  std::optional<int> genus;
  std::string note;

  RingDescriptor ring() const { return zero.descriptor(); }
  bool has_psi() const { return psi.rows() == dim && dim > 0; }

  const Generator<T>& generator(const std::string& name) const {
    auto it = generators.find(name);
    if (it == generators.end()) throw std::invalid_argument("letter '" + name + "' not in representation");
    return it->second;
  }
  const Matrix<T>& letter(const SignedLetter& l) const {
    const auto& g = generator(l.name);
    return l.exp > 0 ? g.matrix : g.inverse;
  }
  Matrix<T> evaluate(const Word& w) const {
    Matrix<T> acc = Matrix<T>::identity(dim, zero);
    for (const auto& l : w) acc = acc * letter(l);
    return acc;
  }
  Matrix<T> identity() const { return Matrix<T>::identity(dim, zero); }

  /// The first generator violating conj(E) Psi E^T = Psi, if any.
  std::optional<std::string> psi_violation() const {
    if (!has_psi()) return std::nullopt;
    for (const auto& [name, g] : generators)
      if (!(g.matrix.conj() * psi * g.matrix.transpose() == psi)) return name;
    return std::nullopt;
  }
};

/// Evaluates twist words with a cache keyed by the conjugator.
template <class T>
class Evaluator {
 public:
  explicit Evaluator(const Representation<T>& rep) : rep_(rep) {}

  const Representation<T>& rep() const { return rep_; }

  const Matrix<T>& word(const Word& w) {
    std::string key = to_string(w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Matrix<T> m = rep_.identity();
    // Reuse the longest cached prefix (walks extend conjugators on the right).
    std::size_t start = 0;
    for (std::size_t len = w.size(); len-- > 1;) {
      Word prefix(w.begin(), w.begin() + static_cast<long>(len));
      auto p = cache_.find(to_string(prefix));
      if (p != cache_.end()) {
        m = p->second;
        start = len;
        break;
      }
      if (w.size() - len > 8) break;
    }
    for (std::size_t k = start; k < w.size(); ++k) m = m * rep_.letter(w[k]);
    return cache_.emplace(key, std::move(m)).first->second;
  }
  Matrix<T> twist(const TwistWord& t) {
    const Matrix<T>& c = word(t.conj);
    const Matrix<T>& ci = word(inverse(t.conj));
    return ci * rep_.generator(t.base).matrix * c;
  }
  Matrix<T> twist_inverse(const TwistWord& t) {
    const Matrix<T>& c = word(t.conj);
    const Matrix<T>& ci = word(inverse(t.conj));
    return ci * rep_.generator(t.base).inverse * c;
  }
  std::vector<Matrix<T>> entries(const HurwitzTuple& t) {
    std::vector<Matrix<T>> out;
    for (const auto& e : t.entries) out.push_back(twist(e));
    return out;
  }

 private:
  const Representation<T>& rep_;
  std::unordered_map<std::string, Matrix<T>> cache_;
};

template <class T>
Matrix<T> ordered_product(const std::vector<Matrix<T>>& mats, const T& zero, std::size_t dim) {
  Matrix<T> acc = Matrix<T>::identity(dim, zero);
  for (const auto& m : mats) acc = acc * m;
  return acc;
}

template <class T>
Matrix<T> tuple_product(const HurwitzTuple& t, const Representation<T>& rep) {
  Evaluator<T> ev(rep);
  return ordered_product(ev.entries(t), rep.zero, rep.dim);
}

/// (m_ns, m - m_ns).
template <class T>
std::pair<std::size_t, std::size_t> type_count(const HurwitzTuple& t, const Representation<T>& rep) {
  std::size_t ns = 0;
  for (const auto& e : t.entries) {
    const auto& g = rep.generator(e.base);
    if (!g.separating) throw std::invalid_argument("letter '" + e.base + "' has no separating flag");
    if (!*g.separating) ++ns;
  }
  return {ns, t.size() - ns};
}

// ---------------------------------------------------------------------------
// Symplectic representation

inline long omega(const std::vector<long>& x, const std::vector<long>& y) {
  long s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); i += 2) s += x[i] * y[i + 1] - x[i + 1] * y[i];
  return s;
}

template <class T>
Matrix<T> omega_matrix(int g, const T& like) {
  Matrix<T> W(2 * g, 2 * g, like);
  for (int i = 0; i < g; ++i) {
    W(2 * i, 2 * i + 1) = like.from_long(1);
    W(2 * i + 1, 2 * i) = like.from_long(-1);
  }
  return W;
}

/// x -> x + sign * omega(x, v) v on row vectors.
template <class T>
Matrix<T> transvection(const std::vector<long>& v, const T& like, long sign = 1) {
  const std::size_t d = v.size();
  Matrix<T> M = Matrix<T>::identity(d, like);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<long> e(d, 0);
    e[i] = 1;
    long c = sign * omega(e, v);
    if (c == 0) continue;
    for (std::size_t j = 0; j < d; ++j) M(i, j) += like.from_long(c * v[j]);
  }
  return M;
}

/// Homology classes of the chain curves and of d:
/// c1 = b1, c_{2i} = a_i, c_{2i+1} = b_{i+1} - b_i, c_{2g+1} = -b_g, d = b2.
inline std::map<std::string, std::vector<long>> chain_classes(int g) {
  const std::size_t d = 2 * static_cast<std::size_t>(g);
  auto a = [&](int i) {
    std::vector<long> v(d, 0);
    v[2 * (i - 1)] = 1;
    return v;
  };
  auto b = [&](int i) {
    std::vector<long> v(d, 0);
    v[2 * (i - 1) + 1] = 1;
    return v;
  };
  std::map<std::string, std::vector<long>> C;
  C["c1"] = b(1);
  for (int i = 1; i <= g; ++i) C[chain_letter(2 * i)] = a(i);
  for (int i = 1; i < g; ++i) {
    auto v = b(i + 1);
    auto w = b(i);
    for (std::size_t k = 0; k < d; ++k) v[k] -= w[k];
    C[chain_letter(2 * i + 1)] = v;
  }
  auto last = b(g);
  for (auto& x : last) x = -x;
  C[chain_letter(2 * g + 1)] = last;
  if (g >= 2) C["d"] = b(2);
  return C;
}

template <class T>
  requires(std::is_same_v<T, Integer> || std::is_same_v<T, Rational> || std::is_same_v<T, ModP>)
Representation<T> symplectic_rep(int g, const T& like) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  Representation<T> rep;
  rep.dim = 2 * static_cast<std::size_t>(g);
  rep.zero = like.zero_like();
  rep.genus = g;
  rep.psi = omega_matrix(g, rep.zero);
  rep.psi_symmetry = PsiSymmetry::Skew;
  for (const auto& [name, v] : chain_classes(g)) {
    bool sep = std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
    rep.generators[name] = {transvection(v, rep.zero, 1), transvection(v, rep.zero, -1), sep, v};
  }
  return rep;
}

inline Representation<Integer> symplectic_rep_z(int g) { return symplectic_rep(g, Integer{}); }

// ---------------------------------------------------------------------------
// Genus-1 quantum representation

/// rho(c1) = [[1,0,(z+z^8)/(1+z)],[0,-z^3,0],[0,0,-1]],
/// rho(c2) = [[0,z^2,0],[-z^6,0,0],[z^4 t, z^3 t, -z^3]], t = (1-z^7)/(1-z).
inline Representation<Cyclotomic16> quantum_su2_level2_g1() {
  using C = Cyclotomic16;
  auto z = [](long k) { return C::zeta_power(k); };
  const C one(1), zero;
  C e13 = (z(1) + z(8)).divide_exact(one + z(1));
  C t = (one - z(7)).divide_exact(one - z(1));
  Representation<C> rep;
  rep.dim = 3;
  rep.zero = zero;
  rep.genus = 1;
  auto c1 = Matrix<C>::from_rows({{one, zero, e13}, {zero, -z(3), zero}, {zero, zero, -one}}, zero);
  auto c2 = Matrix<C>::from_rows({{zero, z(2), zero}, {-z(6), zero, zero}, {z(4) * t, z(3) * t, -z(3)}}, zero);
  rep.generators["c1"] = {c1, inverse(c1), false, std::nullopt};
  rep.generators["c2"] = {c2, inverse(c2), false, std::nullopt};
  rep.note =
      "projective: the chain relation holds only up to a central scalar, (c1 c2)^6 = -z^4 I and "
      "(c1 c2)^3 = z^6 I; no invariant psi is supplied";
  return rep;
}

/// Entrywise zeta -> 1 + y into F_2[y]/(y^2). A supplied psi is reduced and
/// re-checked.
inline Representation<TruncPoly> reduce_representation(const Representation<Cyclotomic16>& rep,
                                                       std::uint64_t p = 2) {
  auto red = [&](const Matrix<Cyclotomic16>& M) {
    Matrix<TruncPoly> R(M.rows(), M.cols(), TruncPoly(0, p));
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j) R(i, j) = base_change_eq5(M(i, j), p);
    return R;
  };
  Representation<TruncPoly> out;
  out.dim = rep.dim;
  out.zero = TruncPoly(0, p);
  out.genus = rep.genus;
  out.note = rep.note;
  for (const auto& [name, g] : rep.generators)
    out.generators[name] = {red(g.matrix), red(g.inverse), g.separating, g.homology};
  if (rep.has_psi()) {
    out.psi = red(rep.psi);
    out.psi_symmetry = rep.psi_symmetry;
    if (auto bad = out.psi_violation()) throw std::invalid_argument("reduced psi not invariant under " + *bad);
  }
  return out;
}

/// Checks a representation: square invertible generators, flags present,
/// psi invariant with the declared symmetry. Fills in inverses.
template <class T>
void validate_representation(Representation<T>& rep) {
  if (rep.generators.empty()) throw std::invalid_argument("representation has no generators");
  for (auto& [name, g] : rep.generators) {
    if (g.matrix.rows() != rep.dim || g.matrix.cols() != rep.dim)
      throw std::invalid_argument("generator '" + name + "' is not " + std::to_string(rep.dim) + "x" + std::to_string(rep.dim));
    if (!g.separating) throw std::invalid_argument("generator '" + name + "' lacks a separating flag");
    try {
      g.inverse = inverse(g.matrix);
    } catch (const NonUnitError&) {
      throw std::invalid_argument("generator '" + name + "' is not invertible over " + rep.ring().name());
    }
  }
  if (rep.psi.rows() != 0) {
    if (rep.psi.rows() != rep.dim || rep.psi.cols() != rep.dim) throw std::invalid_argument("psi has the wrong shape");
    if (!has_symmetry(rep.psi, rep.psi_symmetry))
      throw std::invalid_argument("psi is not " + to_string(rep.psi_symmetry));
    if (auto bad = rep.psi_violation()) throw std::invalid_argument("psi is not invariant under generator '" + *bad + "'");
  }
}

// ---------------------------------------------------------------------------
// Coinvariants

/// Free rank of M / span{x (1 - e_z)}: the first Betti number of the total
/// space of the fibration whose monodromy entries are `entries`.
template <class T>
std::size_t coinvariants_rank(const std::vector<Matrix<T>>& entries, const T& zero, std::size_t dim) {
  const auto I = Matrix<T>::identity(dim, zero);
  Matrix<T> S(0, dim, zero);
  for (const auto& e : entries) S = Matrix<T>::stack(S, I - e);
  if constexpr (std::is_same_v<T, Integer>) {
    return dim - rank_of(to_rational(S));
  } else if constexpr (ring_traits<T>::is_field) {
    return dim - rank_of(S);
  } else {
    throw RingError("coinvariants_rank unsupported over " + zero.descriptor().name());
  }
}

template <class T>
std::size_t coinvariants_rank(const HurwitzTuple& t, const Representation<T>& rep) {
  Evaluator<T> ev(rep);
  return coinvariants_rank(ev.entries(t), rep.zero, rep.dim);
}

}  // namespace hurwitz
