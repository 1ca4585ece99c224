#pragma once

// Meyer's signature cocycle on Sp(2g, Z) and the signature of a Lefschetz
// fibration from its monodromy.
//
// V_{A,B} = {(x, y) : x (A^{-1} - 1) + y (B - 1) = 0} in Q^{2g} x Q^{2g} with
// <(x1, y1), (x2, y2)> = omega(x1 + y1, y2 (1 - B)); c(A, B) is its signature.

#include <algorithm>
#include <numeric>
#include <random>

#include "hurwitz/invariant.hpp"

namespace hurwitz {

struct MeyerFormData {
  Matrix<Rational> v_basis;  // rows in Q^{4g}
  Matrix<Rational> form;
};

inline Matrix<Rational> omega_q(std::size_t d) { return omega_matrix(static_cast<int>(d / 2), Rational{}); }

inline bool is_symplectic(const Matrix<Integer>& A) {
  if (!A.square() || A.rows() % 2) return false;
  auto W = omega_matrix(static_cast<int>(A.rows() / 2), Integer{});
  return A * W * A.transpose() == W;
}

inline MeyerFormData meyer_form(const Matrix<Integer>& A, const Matrix<Integer>& B) {
  if (!is_symplectic(A) || !is_symplectic(B)) throw std::invalid_argument("meyer_form: input is not symplectic");
  const std::size_t d = A.rows();
  auto Aq = to_rational(A), Bq = to_rational(B);
  auto I = Matrix<Rational>::identity(d, Rational{});
  Matrix<Rational> S = Matrix<Rational>::stack(inverse(Aq) - I, Bq - I);
  MeyerFormData md;
  md.v_basis = kernel_basis(S);
  const std::size_t n = md.v_basis.rows();
  auto Om = omega_q(d);
  auto IB = I - Bq;
  // Left factors x1 + y1 and right factors y2 (1 - B).
  Matrix<Rational> L(n, d, Rational{}), R(n, d, Rational{});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < d; ++a) {
      L(r, a) = md.v_basis(r, a) + md.v_basis(r, d + a);
      R(r, a) = md.v_basis(r, d + a);
    }
  md.form = L * Om * (R * IB).transpose();
  if (!md.form.is_symmetric()) throw std::logic_error("Meyer form is not symmetric");
  return md;
}

inline long meyer_cocycle(const Matrix<Integer>& A, const Matrix<Integer>& B) {
  return inertia(meyer_form(A, B).form).signature();
}

struct FibrationSignature {
  long sigma_meyer = 0;
  long sigma_form = 0;
  bool agree = false;
  std::vector<long> per_term;  // c(z_1...z_{i-1}, z_i), i = 2..m
  std::size_t m = 0, m_ns = 0;
};

/// sigma = sum_{i>=2} c(z_1...z_{i-1}, z_i) + m - m_ns, and independently
/// sigma = signature(W) + m - m_ns from the invariant.
inline FibrationSignature fibration_signature(const EvaluatedTuple<Integer>& ez, const Representation<Integer>& rep,
                                              const InvariantResult<Integer>* known = nullptr) {
  if (!diagnose_product(ez).product.is_identity())
    throw ProductError("fibration_signature: ordered product is not the identity");
  if (ez.separating.size() != ez.m() ||
      std::any_of(ez.separating.begin(), ez.separating.end(), [](const auto& f) { return !f.has_value(); }))
    throw std::invalid_argument("fibration_signature: every entry needs a separating flag");
  FibrationSignature fs;
  fs.m = ez.m();
  fs.m_ns = static_cast<std::size_t>(std::count(ez.separating.begin(), ez.separating.end(), std::optional<bool>(false)));
  Matrix<Integer> P = ez.E[0];
  long total = 0;
  for (std::size_t i = 1; i < ez.m(); ++i) {
    long c = meyer_cocycle(P, ez.E[i]);
    fs.per_term.push_back(c);
    total += c;
    P = P * ez.E[i];
  }
  long shift = static_cast<long>(fs.m) - static_cast<long>(fs.m_ns);
  fs.sigma_meyer = total + shift;
  std::optional<InvariantResult<Integer>> own;
  if (!known) {
    InvariantOptions opt;
    opt.compute_b1 = false;
    own = compute_invariant(ez, rep, rep.psi, opt);
    known = &*own;
  }
  fs.sigma_form = known->form_class.signature() + shift;
  fs.agree = fs.sigma_meyer == fs.sigma_form;
  return fs;
}

inline FibrationSignature fibration_signature(const HurwitzTuple& t, const Representation<Integer>& rep,
                                              const InvariantResult<Integer>* known = nullptr) {
  return fibration_signature(evaluate_tuple(t, rep), rep, known);
}

// ---------------------------------------------------------------------------
// The 3-tuple (A, B, (AB)^{-1}) against V_{A,B}

struct TripleMapReport {
  std::size_t kernel_rank = 0, v_dim = 0;
  bool image_in_v = false;
  bool onto_v = false;
  bool kernel_is_diagonal = false;
  bool forms_match = false;
  long signature_q = 0, cocycle = 0;
  bool ok() const { return image_in_v && onto_v && kernel_is_diagonal && forms_match && signature_q == cocycle; }
};

/// Checks that (a, b, c) -> ((c - a) A, (b - c) B^{-1}) maps (Ker Gamma_z, Q_omega)
/// onto (V_{A,B}, <,>) with kernel the diagonal, an isometry.
inline TripleMapReport triple_map_check(const Matrix<Integer>& A, const Matrix<Integer>& B) {
  const std::size_t d = A.rows();
  EvaluatedTuple<Integer> ez;
  ez.d = d;
  ez.zero = Integer{};
  Matrix<Integer> Ainv = inverse(A), Binv = inverse(B);
  Matrix<Integer> C = Binv * Ainv;
  ez.E = {A, B, C};
  ez.Einv = {Ainv, Binv, A * B};
  TripleMapReport rep;
  auto kd = kernel(ez);
  rep.kernel_rank = kd.rank();
  auto Om = omega_matrix(static_cast<int>(d / 2), Integer{});
  Matrix<Integer> Q = pairing_matrix(kd.basis, kd.basis, ez, Om);
  // phi as a 3d x 2d matrix.
  auto I = Matrix<Integer>::identity(d, Integer{});
  Matrix<Integer> phi(3 * d, 2 * d, Integer{});
  phi.add_block(0, 0, A, true);     // a -> -a A
  phi.add_block(2 * d, 0, A);       // c -> c A
  phi.add_block(d, d, Binv);        // b -> b B^{-1}
  phi.add_block(2 * d, d, Binv, true);
  Matrix<Integer> img = kd.basis * phi;
  auto md = meyer_form(A, B);
  rep.v_dim = md.v_basis.rows();
  auto imgq = to_rational(img);
  auto S = Matrix<Rational>::stack(inverse(to_rational(A)) - to_rational(I), to_rational(B) - to_rational(I));
  rep.image_in_v = (imgq * S).is_zero();
  rep.onto_v = rank_of(imgq) == rep.v_dim;
  rep.kernel_is_diagonal = rep.kernel_rank == rep.v_dim + d;
  // <phi x, phi y> on the image rows.
  auto IB = to_rational(I - B);
  Matrix<Rational> L(img.rows(), d, Rational{}), R(img.rows(), d, Rational{});
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t a = 0; a < d; ++a) {
      L(r, a) = imgq(r, a) + imgq(r, d + a);
      R(r, a) = imgq(r, d + a);
    }
  Matrix<Rational> F = L * omega_q(d) * (R * IB).transpose();
  rep.forms_match = F == to_rational(Q);
  rep.signature_q = inertia(Q).signature();
  rep.cocycle = inertia(md.form).signature();
  return rep;
}

// ---------------------------------------------------------------------------
// Random symplectic matrices

/// Product of 1..12 transvections (either sign) along random primitive vectors.
inline Matrix<Integer> random_symplectic(int g, std::mt19937_64& rng) {
  const std::size_t d = 2 * static_cast<std::size_t>(g);
  std::uniform_int_distribution<long> coord(-2, 2);
  std::uniform_int_distribution<int> len(1, 12);
  auto M = Matrix<Integer>::identity(d, Integer{});
  int L = len(rng);
  for (int k = 0; k < L; ++k) {
    std::vector<long> v(d);
    long gcd = 0;
    while (gcd != 1) {
      gcd = 0;
      for (auto& x : v) {
        x = coord(rng);
        gcd = std::gcd(gcd, x);
      }
    }
    M = M * transvection(v, Integer{}, (rng() & 1) ? 1 : -1);
  }
  return M;
}

}  // namespace hurwitz
