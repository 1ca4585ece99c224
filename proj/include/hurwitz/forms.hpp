#pragma once

// Classification of bilinear forms and the textual class notation
// ("H_1^4 (E8)^3 0^124", "1^6 (-1)^38 0^286", "H_y^2 0^3").

#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "hurwitz/linalg.hpp"

namespace hurwitz {

enum class Parity { Even, Odd, NotApplicable };

inline std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::NotApplicable: return "n/a";
  }
  return "?";
}

struct FormClass {
  std::size_t rank = 0;  // rank of the non-degenerate part
  std::size_t positive = 0, negative = 0, zero = 0;
  bool has_signature = false;
  Parity parity = Parity::NotApplicable;
  std::string determinant;  // of the non-degenerate part
  bool unimodular = false;
  bool symmetric = true;
  bool alternating = false;
  // Definite even of rank >= 16: rank, signature and parity do not fix the
  // isometry class (E8+E8 versus D16+).
  bool genus_disclaimer = false;
  std::string class_string;

  long signature() const { return static_cast<long>(positive) - static_cast<long>(negative); }
};

/// Coarse invariants read back from a class string.
struct ParsedClass {
  std::size_t rank = 0;
  long signature = 0;
  Parity parity = Parity::NotApplicable;
  std::size_t zero = 0;
  bool unimodular = true;
  bool alternating = false;
  bool operator==(const ParsedClass&) const = default;
};

namespace detail {

inline std::string power_token(const std::string& base, std::size_t e) {
  return base + "^" + std::to_string(e);
}

inline std::string join_tokens(const std::vector<std::string>& t) {
  std::string out;
  for (const auto& s : t) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out.empty() ? "0^0" : out;
}

/// Rows of a basis complement to the saturated row span of K (over Z or a
/// field). `unit_pivots` reports whether every echelon pivot is a unit, which
/// certifies that the row span of K is already saturated.
///
/// With Y a basis of the right kernel of K, any C with C Y^T invertible is a
/// complement. Taking C from the echelon transform of Y^T avoids inverting the
/// transform of K^T, whose entries swell badly over Z.
template <class T>
Matrix<T> complement_rows(const Matrix<T>& K, std::size_t n, const T& zero, bool* unit_pivots = nullptr) {
  if (unit_pivots) *unit_pivots = true;
  if (K.rows() == 0) return Matrix<T>::identity(n, zero);
  // With unit pivots, the unit vectors off the pivot columns complete the
  // row span of K to a basis.
  if (auto red = unit_gauss_jordan(K)) {
    std::vector<bool> pivot(n, false);
    for (auto c : red->pivot_cols) pivot[c] = true;
    Matrix<T> C(0, n, zero);
    for (std::size_t c = 0; c < n; ++c)
      if (!pivot[c]) {
        std::vector<T> v(n, zero);
        v[c] = zero.from_long(1);
        C.append_row(v);
      }
    return C;
  }
  auto e = row_echelon(K.transpose(), false);
  if (unit_pivots)
    for (std::size_t r = 0; r < e.rank; ++r)
      if (!ring_traits<T>::is_unit(e.H(r, e.pivot_cols[r]))) *unit_pivots = false;
  if (e.rank == n) return Matrix<T>(0, n, zero);
  Matrix<T> Y = e.U.rows_range(e.rank, n);
  auto f = row_echelon(Y.transpose(), false);
  return f.U.rows_range(0, f.rank);
}

inline std::string integer_class_string(std::size_t rank, long sig, Parity parity, bool unimodular,
                                        const std::string& det, std::size_t zero) {
  std::vector<std::string> t;
  if (!unimodular) {
    t.push_back("nonunimodular(det=" + det + ")");
  } else if (parity == Parity::Odd) {
    std::size_t p = (rank + sig) / 2, q = (rank - sig) / 2;
    if (p) t.push_back(power_token("1", p));
    if (q) t.push_back(power_token("(-1)", q));
  } else if (rank > 0) {
    std::size_t b = static_cast<std::size_t>(sig < 0 ? -sig : sig) / 8;
    std::size_t a = (rank - 8 * b) / 2;
    if (a) t.push_back(power_token("H_1", a));
    if (b) t.push_back(power_token(sig < 0 ? "(E8)" : "(-E8)", b));
  }
  if (zero) t.push_back(power_token("0", zero));
  return join_tokens(t);
}

}  // namespace detail

/// Classifies a bilinear form. `extra_zero` adds to the radical count, for
/// forms presented on a quotient of a larger module.
template <class T>
FormClass classify_form(const Matrix<T>& W, std::size_t extra_zero = 0) {
  if (!W.square()) throw std::invalid_argument("classify_form: non-square matrix");
  const std::size_t n = W.rows();
  FormClass fc;
  fc.symmetric = W.is_symmetric();
  bool skew = W.is_skew();

  if constexpr (std::is_same_v<T, Integer> || std::is_same_v<T, Rational> || std::is_same_v<T, ModP>) {
    if (!fc.symmetric && !skew) throw std::invalid_argument("classify_form: form is neither symmetric nor skew");
    // A nonsingular W needs no radical; its echelon form over Z is costly
    // when entries are large.
    T det = determinant(W);
    Matrix<T> K(0, n, W.zero());
    Matrix<T> Wn = W;
    if (det.is_zero()) {
      K = kernel_basis(W);
      auto C = detail::complement_rows(K, n, W.zero());
      Wn = C * W * C.transpose();
      det = determinant(Wn);
    }
    fc.rank = Wn.rows();
    fc.zero = K.rows() + extra_zero;
    fc.determinant = det.str();
    if constexpr (std::is_same_v<T, Integer>) {
      fc.unimodular = det.value() == 1 || det.value() == -1;
    } else {
      fc.unimodular = !det.is_zero();
    }
    if (!fc.symmetric) {
      fc.alternating = true;
      std::vector<std::string> t;
      if (!fc.unimodular)
        t.push_back("nonunimodular(det=" + fc.determinant + ")");
      else if (fc.rank)
        t.push_back(detail::power_token("Sp", fc.rank / 2));
      if (fc.zero) t.push_back(detail::power_token("0", fc.zero));
      fc.class_string = detail::join_tokens(t);
      return fc;
    }
    bool even = true;
    for (std::size_t i = 0; i < Wn.rows(); ++i) {
      if constexpr (std::is_same_v<T, Integer>)
        even = even && mpz_even_p(Wn(i, i).value().get_mpz_t());
      else
        even = even && Wn(i, i).is_zero();
    }
    if constexpr (std::is_same_v<T, Integer> || std::is_same_v<T, Rational>) {
      Inertia in = inertia(Wn);
      fc.positive = in.positive;
      fc.negative = in.negative;
      fc.has_signature = true;
    }
    if constexpr (std::is_same_v<T, Integer>) {
      fc.parity = fc.rank == 0 ? Parity::Even : (even ? Parity::Even : Parity::Odd);
      fc.genus_disclaimer = fc.unimodular && fc.parity == Parity::Even && fc.rank >= 16 &&
                            (fc.positive == 0 || fc.negative == 0);
      fc.class_string = detail::integer_class_string(fc.rank, fc.signature(), fc.parity, fc.unimodular,
                                                     fc.determinant, fc.zero);
    } else if constexpr (std::is_same_v<T, Rational>) {
      std::vector<std::string> t;
      if (fc.positive) t.push_back(detail::power_token("<1>", fc.positive));
      if (fc.negative) t.push_back(detail::power_token("<-1>", fc.negative));
      if (fc.zero) t.push_back(detail::power_token("0", fc.zero));
      fc.class_string = detail::join_tokens(t);
    } else {
      // Over Z/P: rank, alternating flag (P = 2) or discriminant class.
      std::vector<std::string> t;
      fc.alternating = even;
      if (W.zero().modulus() == 2 && even) {
        if (fc.rank) t.push_back(detail::power_token("H", fc.rank / 2));
      } else if (fc.rank) {
        bool square = W.zero().modulus() == 2 || det.legendre() >= 0;
        if (square)
          t.push_back(detail::power_token("<1>", fc.rank));
        else {
          if (fc.rank > 1) t.push_back(detail::power_token("<1>", fc.rank - 1));
          t.push_back("<n>^1");
        }
      }
      if (fc.zero) t.push_back(detail::power_token("0", fc.zero));
      fc.class_string = detail::join_tokens(t);
    }
    return fc;
  } else if constexpr (std::is_same_v<T, TruncPoly>) {
    // Entries must lie in (y^{p-1}); classify the reduced form over F_p.
    const std::uint64_t p = W.zero().prime();
    Matrix<ModP> bar(n, n, ModP(0, p));
    bool in_ideal = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto& e = W(i, j);
        if (e.valuation() < p - 1) in_ideal = false;
        bar(i, j) = ModP(e.coefficients()[p - 1], p);
      }
    fc.determinant = determinant(W).str();
    if (!in_ideal) {
      fc.rank = n;
      fc.zero = extra_zero;
      fc.class_string = "unclassified(n=" + std::to_string(n) + ")";
      return fc;
    }
    auto K = kernel_basis(bar);
    auto C = detail::complement_rows(K, n, bar.zero());
    Matrix<ModP> Bn = C * bar * C.transpose();
    fc.rank = Bn.rows();
    fc.zero = K.rows() + extra_zero;
    fc.unimodular = fc.rank == n;
    bool alt = true;
    for (std::size_t i = 0; i < Bn.rows(); ++i) alt = alt && Bn(i, i).is_zero();
    fc.alternating = alt && bar.is_skew();
    std::vector<std::string> t;
    std::string yk = p == 2 ? "y" : "y^" + std::to_string(p - 1);
    if (fc.rank) {
      if (fc.alternating)
        t.push_back(detail::power_token("H_" + yk, fc.rank / 2));
      else if (p == 2 || determinant(Bn).legendre() >= 0)
        t.push_back(detail::power_token("<" + yk + ">", fc.rank));
      else {
        if (fc.rank > 1) t.push_back(detail::power_token("<" + yk + ">", fc.rank - 1));
        t.push_back("<n" + yk + ">^1");
      }
    }
    if (fc.zero) t.push_back(detail::power_token("0", fc.zero));
    fc.class_string = detail::join_tokens(t);
    return fc;
  } else {
    fc.rank = n;
    fc.zero = extra_zero;
    fc.determinant = determinant(W).str();
    fc.class_string = "unclassified(n=" + std::to_string(n) + ")";
    return fc;
  }
}

/// Rewrites typeset notation ("\mathcal{H}_1^4 (E_8)^{3} 0^{124}", "$(-1)^{12}$")
/// into the plain token form.
inline std::string normalize_class_notation(std::string s) {
  auto sub = [&](const char* re, const char* to) { s = std::regex_replace(s, std::regex(re), to); };
  sub(R"(\$)", "");
  sub(R"(\\mathcal\s*\{?\s*H\s*\}?)", "H");
  sub(R"(\{\s*\\tt\s+([^}]*)\})", "$1");
  sub(R"(\\,|~)", " ");
  // A braced exponent ends its token: "(E_8)^{4}0^{286}".
  sub(R"(\^\s*\{\s*([^}]*?)\s*\})", "^$1 ");
  sub(R"(_\s*\{\s*([^}]*?)\s*\})", "_$1");
  sub(R"(E_8)", "E8");
  sub(R"(E8(?=[0-9(]))", "E8 ");
  sub(R"([{}])", "");
  sub(R"(\^\s+)", "^");
  sub(R"(\s+)", " ");
  sub(R"(^ | $)", "");
  return s;
}

/// Parses a class string into (rank, signature, parity, zero) data.
inline ParsedClass parse_class_string(const std::string& text) {
  std::istringstream in(normalize_class_notation(text));
  ParsedClass pc;
  bool odd = false, any = false, y_tokens = false;
  std::string tok;
  while (in >> tok) {
    std::string base = tok;
    std::size_t e = 1;
    auto caret = tok.rfind('^');
    if (caret != std::string::npos) {
      std::string ex = tok.substr(caret + 1);
      if (!ex.empty() && std::all_of(ex.begin(), ex.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        base = tok.substr(0, caret);
        e = std::stoul(ex);
      }
    }
    if (base == "0") {
      pc.zero += e;
    } else if (base == "1" || base == "(1)") {
      pc.rank += e;
      pc.signature += static_cast<long>(e);
      odd = any = true;
    } else if (base == "(-1)" || base == "-1") {
      pc.rank += e;
      pc.signature -= static_cast<long>(e);
      odd = any = true;
    } else if (base == "H_1" || base == "H") {
      pc.rank += 2 * e;
      any = true;
    } else if (base == "(E8)" || base == "E8") {
      pc.rank += 8 * e;
      pc.signature -= 8 * static_cast<long>(e);
      any = true;
    } else if (base == "(-E8)" || base == "-E8") {
      pc.rank += 8 * e;
      pc.signature += 8 * static_cast<long>(e);
      any = true;
    } else if (base.rfind("H_y", 0) == 0) {
      pc.rank += 2 * e;
      pc.alternating = true;
      y_tokens = any = true;
    } else if (base.rfind("<", 0) == 0) {
      pc.rank += e;
      y_tokens = any = true;
    } else if (base == "Sp") {
      pc.rank += 2 * e;
      pc.alternating = true;
      y_tokens = any = true;
    } else if (base.rfind("nonunimodular", 0) == 0 || base.rfind("unclassified", 0) == 0) {
      pc.unimodular = false;
    } else {
      throw std::invalid_argument("unrecognized class token '" + tok + "'");
    }
  }
  if (y_tokens)
    pc.parity = Parity::NotApplicable;
  else if (any)
    pc.parity = odd ? Parity::Odd : Parity::Even;
  else
    pc.parity = Parity::Even;
  return pc;
}

/// Coarse invariants of a computed class, comparable with parse_class_string.
inline ParsedClass coarse(const FormClass& fc) { return parse_class_string(fc.class_string); }

}  // namespace hurwitz
