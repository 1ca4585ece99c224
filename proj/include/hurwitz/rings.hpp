#pragma once

// Exact coefficient rings with involution.
//
// Every scalar type carries the parameters of its ring (the prime for Z/P and
// F_p[y]/(y^p)), so a value alone determines its RingDescriptor and mixing
// two different rings is reported at run time. Payloads are kept canonical so
// that equality is payload equality.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hurwitz {

class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonUnitError : public RingError {
 public:
  using RingError::RingError;
};

enum class RingKind { Integer, Rational, IntegerModP, TruncatedPoly, Cyclotomic16 };

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct RingDescriptor {
  RingKind kind = RingKind::Integer;
  std::uint64_t prime = 0;

  static RingDescriptor integers() { return {RingKind::Integer, 0}; }
  static RingDescriptor rationals() { return {RingKind::Rational, 0}; }
  static RingDescriptor cyclotomic16() { return {RingKind::Cyclotomic16, 0}; }
  static RingDescriptor mod(std::uint64_t P) {
    if (!is_prime(P)) throw RingError("Z/P requires a prime P, got " + std::to_string(P));
    if (P >= (std::uint64_t{1} << 62)) throw RingError("modulus too large");
    return {RingKind::IntegerModP, P};
  }
  static RingDescriptor truncated(std::uint64_t p) {
    if (!is_prime(p)) throw RingError("F_p[y]/(y^p) requires a prime p, got " + std::to_string(p));
    if (p > 97) throw RingError("F_p[y]/(y^p) supported for p <= 97");
    return {RingKind::TruncatedPoly, p};
  }

  /// Accepts "Z", "Q", "Zmod:P", "Fpy:p", "Zzeta16".
  static RingDescriptor parse(std::string_view text);

  std::string name() const {
    switch (kind) {
      case RingKind::Integer: return "Z";
      case RingKind::Rational: return "Q";
      case RingKind::IntegerModP: return "Zmod:" + std::to_string(prime);
      case RingKind::TruncatedPoly: return "Fpy:" + std::to_string(prime);
      case RingKind::Cyclotomic16: return "Zzeta16";
    }
    return "?";
  }

  bool operator==(const RingDescriptor&) const = default;
};

inline RingDescriptor RingDescriptor::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '\t') t.push_back(c);
  auto number_after = [&](std::size_t pos) -> std::uint64_t {
    if (pos >= t.size()) throw RingError("missing parameter in ring name '" + t + "'");
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(t.substr(pos), &used);
    } catch (const std::exception&) {
      throw RingError("bad ring parameter in '" + t + "'");
    }
    if (pos + used != t.size()) throw RingError("bad ring parameter in '" + t + "'");
    return v;
  };
  if (t == "Z") return integers();
  if (t == "Q") return rationals();
  if (t == "Zzeta16") return cyclotomic16();
  if (t.rfind("Zmod:", 0) == 0) return mod(number_after(5));
  if (t.rfind("Fpy:", 0) == 0) return truncated(number_after(4));
  throw RingError("unknown ring '" + t + "'");
}

namespace detail {

inline void require_same(const RingDescriptor& a, const RingDescriptor& b) {
  if (!(a == b)) throw RingError("ring mismatch: " + a.name() + " vs " + b.name());
}

// Arithmetic operators from compound assignment.
template <class Derived>
struct RingOps {
  friend Derived operator+(Derived a, const Derived& b) { return a += b; }
  friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
  friend Derived operator*(const Derived& a, const Derived& b) {
    Derived r = a;
    r *= b;
    return r;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Z

class Integer : public detail::RingOps<Integer> {
 public:
  Integer() = default;
  Integer(long v) : v_(v) {}  // NOLINT: integers convert implicitly
  explicit Integer(mpz_class v) : v_(std::move(v)) {}

  const mpz_class& value() const { return v_; }
  RingDescriptor descriptor() const { return RingDescriptor::integers(); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  Integer zero_like() const { return Integer{}; }
  Integer from_long(long n) const { return Integer(n); }
  int sign() const { return sgn(v_); }

  Integer& operator+=(const Integer& o) { v_ += o.v_; return *this; }
  Integer& operator-=(const Integer& o) { v_ -= o.v_; return *this; }
  Integer& operator*=(const Integer& o) { v_ *= o.v_; return *this; }
  Integer operator-() const { return Integer(mpz_class(-v_)); }
  bool operator==(const Integer& o) const { return v_ == o.v_; }

  /// Exact division; throws when b does not divide *this.
  Integer divide_exact(const Integer& b) const {
    if (b.is_zero()) throw RingError("division by zero");
    if (!mpz_divisible_p(v_.get_mpz_t(), b.v_.get_mpz_t()))
      throw RingError("non-integral quotient " + v_.get_str() + "/" + b.v_.get_str());
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), v_.get_mpz_t(), b.v_.get_mpz_t());
    return Integer(std::move(q));
  }

  std::string str() const { return v_.get_str(); }

 private:
  mpz_class v_;
};

// ---------------------------------------------------------------------------
// Q

class Rational : public detail::RingOps<Rational> {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  Rational(const Integer& n) : v_(n.value()) {}  // NOLINT

  const mpq_class& value() const { return v_; }
  RingDescriptor descriptor() const { return RingDescriptor::rationals(); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  Rational zero_like() const { return Rational{}; }
  Rational from_long(long n) const { return Rational(n); }
  int sign() const { return sgn(v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  bool operator==(const Rational& o) const { return v_ == o.v_; }

  Rational inverse() const {
    if (is_zero()) throw NonUnitError("0 has no inverse in Q");
    return Rational(mpq_class(1 / v_));
  }
  bool is_integral() const { return v_.get_den() == 1; }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

 private:
  mpq_class v_;
};

// ---------------------------------------------------------------------------
// Z/P

class ModP : public detail::RingOps<ModP> {
 public:
  ModP() = default;
  ModP(long v, std::uint64_t P) : P_(P) {
    long long r = static_cast<long long>(v % static_cast<long long>(P));
    if (r < 0) r += static_cast<long long>(P);
    r_ = static_cast<std::uint64_t>(r);
  }
  static ModP from_mpz(const mpz_class& v, std::uint64_t P) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), P);
    ModP out;
    out.P_ = P;
    out.r_ = r.get_ui();
    return out;
  }

  std::uint64_t residue() const { return r_; }
  std::uint64_t modulus() const { return P_; }
  RingDescriptor descriptor() const { return {RingKind::IntegerModP, P_}; }
  bool is_zero() const { return r_ == 0; }
  bool is_one() const { return r_ == 1; }
  ModP zero_like() const { return ModP(0, P_); }
  ModP from_long(long n) const { return ModP(n, P_); }

  ModP& operator+=(const ModP& o) {
    check(o);
    r_ = (r_ + o.r_) % P_;
    return *this;
  }
  ModP& operator-=(const ModP& o) {
    check(o);
    r_ = (r_ + P_ - o.r_) % P_;
    return *this;
  }
  ModP& operator*=(const ModP& o) {
    check(o);
    r_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r_) * o.r_) % P_);
    return *this;
  }
  ModP operator-() const {
    ModP out = *this;
    out.r_ = (P_ - r_) % P_;
    return out;
  }
  bool operator==(const ModP& o) const { return P_ == o.P_ && r_ == o.r_; }

  ModP pow(std::uint64_t e) const {
    ModP base = *this, acc(1, P_);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
  ModP inverse() const {
    if (is_zero()) throw NonUnitError("0 has no inverse in Z/" + std::to_string(P_));
    return pow(P_ - 2);
  }
  /// Legendre symbol for odd P: +1 square, -1 non-square, 0 zero.
  int legendre() const {
    if (is_zero()) return 0;
    if (P_ == 2) return 1;
    return pow((P_ - 1) / 2).is_one() ? 1 : -1;
  }

  std::string str() const { return std::to_string(r_); }

 private:
  void check(const ModP& o) const {
    if (P_ != o.P_) detail::require_same(descriptor(), o.descriptor());
  }
  std::uint64_t P_ = 2;
  std::uint64_t r_ = 0;
};

// ---------------------------------------------------------------------------
// F_p[y]/(y^p)

class TruncPoly : public detail::RingOps<TruncPoly> {
 public:
  TruncPoly() : TruncPoly(0, 2) {}
  TruncPoly(long c0, std::uint64_t p) : p_(static_cast<std::uint32_t>(p)), c_(p, 0) {
    c_[0] = reduce(c0);
  }
  static TruncPoly from_coefficients(const std::vector<long>& coeffs, std::uint64_t p) {
    TruncPoly t(0, p);
    for (std::size_t k = 0; k < coeffs.size() && k < p; ++k) t.c_[k] = t.reduce(coeffs[k]);
    return t;
  }
  /// y^k (zero when k >= p).
  static TruncPoly y_power(std::size_t k, std::uint64_t p) {
    TruncPoly t(0, p);
    if (k < p) t.c_[k] = 1;
    return t;
  }

  std::uint64_t prime() const { return p_; }
  const std::vector<std::uint32_t>& coefficients() const { return c_; }
  RingDescriptor descriptor() const { return {RingKind::TruncatedPoly, p_}; }
  bool is_zero() const {
    for (auto v : c_)
      if (v) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (c_[k]) return false;
    return true;
  }
  TruncPoly zero_like() const { return TruncPoly(0, p_); }
  TruncPoly from_long(long n) const { return TruncPoly(n, p_); }

  /// y-adic valuation; p for zero.
  std::size_t valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k]) return k;
    return p_;
  }
  bool is_unit() const { return c_[0] != 0; }

  TruncPoly& operator+=(const TruncPoly& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = (c_[k] + o.c_[k]) % p_;
    return *this;
  }
  TruncPoly& operator-=(const TruncPoly& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = (c_[k] + p_ - o.c_[k]) % p_;
    return *this;
  }
  TruncPoly& operator*=(const TruncPoly& o) {
    check(o);
    std::vector<std::uint32_t> r(p_, 0);
    for (std::size_t i = 0; i < p_; ++i) {
      if (!c_[i]) continue;
      for (std::size_t j = 0; i + j < p_; ++j)
        r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{c_[i]} * o.c_[j]) % p_);
    }
    c_ = std::move(r);
    return *this;
  }
  TruncPoly operator-() const {
    TruncPoly out = *this;
    for (auto& v : out.c_) v = (p_ - v) % p_;
    return out;
  }
  bool operator==(const TruncPoly& o) const { return p_ == o.p_ && c_ == o.c_; }

  /// Multiplicative inverse of a unit u = c0(1 + n), n nilpotent.
  TruncPoly inverse() const {
    if (!is_unit()) throw NonUnitError("non-unit " + str() + " in " + descriptor().name());
    ModP c0inv = ModP(c_[0], p_).inverse();
    TruncPoly scaled = *this * TruncPoly(static_cast<long>(c0inv.residue()), p_);
    TruncPoly n = scaled - TruncPoly(1, p_);
    TruncPoly term(1, p_), acc(1, p_);
    for (std::size_t k = 1; k < p_; ++k) {
      term = term * (-n);
      acc += term;
    }
    return acc * TruncPoly(static_cast<long>(c0inv.residue()), p_);
  }
  /// Quotient a/b for b | a (valuation(b) <= valuation(a)); one choice of quotient.
  TruncPoly divide(const TruncPoly& b) const {
    check(b);
    std::size_t va = valuation(), vb = b.valuation();
    if (vb == p_) throw RingError("division by zero in " + descriptor().name());
    if (va == p_) return zero_like();
    if (vb > va) throw RingError("non-divisible quotient in " + descriptor().name());
    TruncPoly ua = shift_down(va), ub = b.shift_down(vb);
    return y_power(va - vb, p_) * ua * ub.inverse();
  }

  std::string str() const;

 private:
  std::uint32_t reduce(long v) const {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
  }
  TruncPoly shift_down(std::size_t v) const {
    TruncPoly t(0, p_);
    for (std::size_t k = v; k < p_; ++k) t.c_[k - v] = c_[k];
    return t;
  }
  void check(const TruncPoly& o) const {
    if (p_ != o.p_) detail::require_same(descriptor(), o.descriptor());
  }
  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

// ---------------------------------------------------------------------------
// Z[zeta_16] = Z[x]/(x^8 + 1)

class Cyclotomic16 : public detail::RingOps<Cyclotomic16> {
 public:
  static constexpr std::size_t kDegree = 8;

  Cyclotomic16() = default;
  Cyclotomic16(long c0) { c_[0] = c0; }  // NOLINT
  explicit Cyclotomic16(const std::array<mpz_class, kDegree>& c) : c_(c) {}
  /// zeta^k for any integer k, reduced with zeta^8 = -1.
  static Cyclotomic16 zeta_power(long k) {
    long r = ((k % 16) + 16) % 16;
    Cyclotomic16 z;
    if (r < 8)
      z.c_[r] = 1;
    else
      z.c_[r - 8] = -1;
    return z;
  }

  const std::array<mpz_class, kDegree>& coefficients() const { return c_; }
  RingDescriptor descriptor() const { return RingDescriptor::cyclotomic16(); }
  bool is_zero() const {
    for (const auto& v : c_)
      if (sgn(v) != 0) return false;
    return true;
  }
  bool is_one() const { return *this == Cyclotomic16(1); }
  Cyclotomic16 zero_like() const { return Cyclotomic16{}; }
  Cyclotomic16 from_long(long n) const { return Cyclotomic16(n); }

  Cyclotomic16& operator+=(const Cyclotomic16& o) {
    for (std::size_t k = 0; k < kDegree; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Cyclotomic16& operator-=(const Cyclotomic16& o) {
    for (std::size_t k = 0; k < kDegree; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Cyclotomic16& operator*=(const Cyclotomic16& o) {
    std::array<mpz_class, kDegree> r;
    for (std::size_t i = 0; i < kDegree; ++i) {
      if (sgn(c_[i]) == 0) continue;
      for (std::size_t j = 0; j < kDegree; ++j) {
        if (sgn(o.c_[j]) == 0) continue;
        std::size_t k = i + j;
        if (k >= kDegree)
          r[k - kDegree] -= c_[i] * o.c_[j];
        else
          r[k] += c_[i] * o.c_[j];
      }
    }
    c_ = std::move(r);
    return *this;
  }
  Cyclotomic16 operator-() const {
    Cyclotomic16 out;
    for (std::size_t k = 0; k < kDegree; ++k) out.c_[k] = -c_[k];
    return out;
  }
  bool operator==(const Cyclotomic16& o) const { return c_ == o.c_; }

  /// zeta^k -> zeta^{-k}.
  Cyclotomic16 conjugate() const {
    Cyclotomic16 out;
    out.c_[0] = c_[0];
    for (std::size_t k = 1; k < kDegree; ++k) out.c_[kDegree - k] = -c_[k];
    return out;
  }

  /// Inverse in Q(zeta) by extended Euclid over Q[x] modulo x^8+1.
  std::array<mpq_class, kDegree> rational_inverse() const;
  /// Inverse in Z[zeta]; NonUnitError when the Q(zeta) inverse is not integral.
  Cyclotomic16 inverse() const;
  /// a / b, required to be integral.
  Cyclotomic16 divide_exact(const Cyclotomic16& b) const;

  std::string str() const;

 private:
  std::array<mpz_class, kDegree> c_{};
};

namespace detail {

using QPoly = std::vector<mpq_class>;  // low degree first, trimmed

inline void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// Returns {q, r} with a = q*b + r, deg r < deg b.
inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b) {
  QPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, mpq_class(0));
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    mpq_class f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

}  // namespace detail

inline std::array<mpq_class, Cyclotomic16::kDegree> Cyclotomic16::rational_inverse() const {
  using detail::QPoly;
  QPoly a;
  for (const auto& v : c_) a.emplace_back(v);
  detail::trim(a);
  if (a.empty()) throw NonUnitError("0 has no inverse in Z[zeta16]");
  QPoly modulus(kDegree + 1, mpq_class(0));
  modulus[0] = 1;
  modulus[kDegree] = 1;
  // Invariant: s_i * a == r_i (mod x^8+1).
  QPoly r0 = modulus, r1 = a, s0 = {}, s1 = {mpq_class(1)};
  while (!r1.empty()) {
    auto [q, r] = detail::poly_divmod(r0, r1);
    QPoly s = detail::poly_sub(s0, detail::poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) throw NonUnitError("element shares a factor with x^8+1");  // unreachable: x^8+1 irreducible
  mpq_class lead = r0[0];
  auto [unused, inv] = detail::poly_divmod(s0, modulus);
  std::array<mpq_class, kDegree> out;
  for (std::size_t k = 0; k < kDegree; ++k) out[k] = k < inv.size() ? mpq_class(inv[k] / lead) : mpq_class(0);
  return out;
}

inline Cyclotomic16 Cyclotomic16::inverse() const {
  auto q = rational_inverse();
  Cyclotomic16 out;
  for (std::size_t k = 0; k < kDegree; ++k) {
    if (q[k].get_den() != 1) throw NonUnitError("non-unit " + str() + " in Z[zeta16]");
    out.c_[k] = q[k].get_num();
  }
  return out;
}

inline Cyclotomic16 Cyclotomic16::divide_exact(const Cyclotomic16& b) const {
  auto q = b.rational_inverse();
  // Multiply in Q[x]/(x^8+1), then demand integrality.
  std::array<mpq_class, kDegree> r;
  for (std::size_t i = 0; i < kDegree; ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < kDegree; ++j) {
      std::size_t k = i + j;
      mpq_class t = c_[i] * q[j];
      if (k >= kDegree)
        r[k - kDegree] -= t;
      else
        r[k] += t;
    }
  }
  Cyclotomic16 out;
  for (std::size_t k = 0; k < kDegree; ++k) {
    r[k].canonicalize();
    if (r[k].get_den() != 1)
      throw RingError("quotient " + str() + " / " + b.str() + " is not in Z[zeta16]");
    out.c_[k] = r[k].get_num();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniform operations

inline Integer involute(const Integer& a) { return a; }
inline Rational involute(const Rational& a) { return a; }
inline ModP involute(const ModP& a) { return a; }
inline TruncPoly involute(const TruncPoly& a) { return a; }
inline Cyclotomic16 involute(const Cyclotomic16& a) { return a.conjugate(); }

inline Integer invert(const Integer& a) {
  if (a.value() == 1 || a.value() == -1) return a;
  throw NonUnitError("non-unit " + a.str() + " in Z");
}
inline Rational invert(const Rational& a) { return a.inverse(); }
inline ModP invert(const ModP& a) { return a.inverse(); }
inline TruncPoly invert(const TruncPoly& a) { return a.inverse(); }
inline Cyclotomic16 invert(const Cyclotomic16& a) { return a.inverse(); }

/// Image of a under zeta_16 -> 1 + y into F_2[y]/(y^2).
inline TruncPoly base_change_eq5(const Cyclotomic16& a, std::uint64_t p) {
  if (p != 2) throw RingError("zeta_16 base change is defined only for p = 2 (16 = 2^4)");
  TruncPoly one_plus_y = TruncPoly::from_coefficients({1, 1}, p);
  TruncPoly acc(0, p), power(1, p);
  for (std::size_t k = 0; k < Cyclotomic16::kDegree; ++k) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.coefficients()[k].get_mpz_t(), p);
    acc += TruncPoly(static_cast<long>(r.get_ui()), p) * power;
    power *= one_plus_y;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

inline std::string poly_string(const std::vector<std::string>& coeffs, char var) {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    std::string c = coeffs[k];
    if (c == "0") continue;
    bool neg = c[0] == '-';
    std::string mag = neg ? c.substr(1) : c;
    std::string term;
    if (k == 0)
      term = mag;
    else {
      term = (mag == "1") ? std::string() : mag + "*";
      term += var;
      if (k > 1) term += "^" + std::to_string(k);
    }
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? "-" : "+") + term;
  }
  return out.empty() ? "0" : out;
}

struct PolyTerm {
  mpz_class coeff;
  long degree;
};

// Parses sums like "3 - 2*z^3 + z" in variable `var`.
inline std::vector<PolyTerm> parse_poly(std::string_view text, char var) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw RingError("empty ring element");
  std::vector<PolyTerm> terms;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!terms.empty()) {
      throw RingError("malformed polynomial '" + s + "'");
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    mpz_class coeff = 1;
    bool have_coeff = i > start;
    if (have_coeff) coeff = mpz_class(s.substr(start, i - start));
    long degree = 0;
    if (i < s.size() && s[i] == '*') {
      if (!have_coeff) throw RingError("malformed polynomial '" + s + "'");
      ++i;
      if (i >= s.size() || s[i] != var) throw RingError("malformed polynomial '" + s + "'");
    }
    if (i < s.size() && s[i] == var) {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t ds = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == ds) throw RingError("malformed exponent in '" + s + "'");
        degree = std::stol(s.substr(ds, i - ds));
      }
    } else if (!have_coeff) {
      throw RingError("malformed polynomial '" + s + "'");
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw RingError("malformed polynomial '" + s + "'");
    terms.push_back({sign * coeff, degree});
  }
  return terms;
}

}  // namespace detail

inline std::string TruncPoly::str() const {
  std::vector<std::string> cs;
  for (auto v : c_) cs.push_back(std::to_string(v));
  return detail::poly_string(cs, 'y');
}

inline std::string Cyclotomic16::str() const {
  std::vector<std::string> cs;
  for (const auto& v : c_) cs.push_back(v.get_str());
  return detail::poly_string(cs, 'z');
}

inline std::string to_string(const Integer& a) { return a.str(); }
inline std::string to_string(const Rational& a) { return a.str(); }
inline std::string to_string(const ModP& a) { return a.str(); }
inline std::string to_string(const TruncPoly& a) { return a.str(); }
inline std::string to_string(const Cyclotomic16& a) { return a.str(); }

// ---------------------------------------------------------------------------
// Type-erased element for I/O and descriptor-driven code paths.

using RingElement = std::variant<Integer, Rational, ModP, TruncPoly, Cyclotomic16>;

inline RingDescriptor descriptor_of(const RingElement& e) {
  return std::visit([](const auto& v) { return v.descriptor(); }, e);
}

inline std::string to_string(const RingElement& e) {
  return std::visit([](const auto& v) { return v.str(); }, e);
}

/// The zero of a ring, as the matching scalar type.
inline RingElement zero_of(const RingDescriptor& d) {
  switch (d.kind) {
    case RingKind::Integer: return Integer{};
    case RingKind::Rational: return Rational{};
    case RingKind::IntegerModP: return ModP(0, d.prime);
    case RingKind::TruncatedPoly: return TruncPoly(0, d.prime);
    case RingKind::Cyclotomic16: return Cyclotomic16{};
  }
  throw RingError("unknown ring");
}

inline RingElement parse_element(const RingDescriptor& d, std::string_view text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw RingError("empty ring element");
  switch (d.kind) {
    case RingKind::Integer: {
      mpz_class v;
      if (v.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) throw RingError("bad integer '" + t + "'");
      return Integer(v);
    }
    case RingKind::Rational: {
      mpq_class v;
      if (v.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) throw RingError("bad rational '" + t + "'");
      if (v.get_den() == 0) throw RingError("zero denominator in '" + t + "'");
      v.canonicalize();
      return Rational(v);
    }
    case RingKind::IntegerModP: {
      mpz_class v;
      if (v.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) throw RingError("bad residue '" + t + "'");
      return ModP::from_mpz(v, d.prime);
    }
    case RingKind::TruncatedPoly: {
      TruncPoly acc(0, d.prime);
      for (const auto& term : detail::parse_poly(t, 'y')) {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), term.coeff.get_mpz_t(), d.prime);
        acc += TruncPoly(static_cast<long>(r.get_ui()), d.prime) *
               TruncPoly::y_power(static_cast<std::size_t>(term.degree), d.prime);
      }
      return acc;
    }
    case RingKind::Cyclotomic16: {
      Cyclotomic16 acc;
      for (const auto& term : detail::parse_poly(t, 'z')) {
        std::array<mpz_class, Cyclotomic16::kDegree> c{};
        c[0] = term.coeff;
        acc += Cyclotomic16(c) * Cyclotomic16::zeta_power(term.degree);
      }
      return acc;
    }
  }
  throw RingError("unknown ring");
}

/// Binary ring operation on type-erased elements; mixing rings is an error.
enum class ArithOp { Add, Sub, Mul };

inline RingElement arith(const RingElement& a, const RingElement& b, ArithOp op) {
  detail::require_same(descriptor_of(a), descriptor_of(b));
  return std::visit(
      [&](const auto& x) -> RingElement {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        switch (op) {
          case ArithOp::Add: return x + y;
          case ArithOp::Sub: return x - y;
          case ArithOp::Mul: return x * y;
        }
        return x;
      },
      a);
}

inline RingElement involute(const RingElement& a) {
  return std::visit([](const auto& x) -> RingElement { return involute(x); }, a);
}

inline RingElement invert(const RingElement& a) {
  return std::visit([](const auto& x) -> RingElement { return invert(x); }, a);
}

/// Typed parse; throws if the text does not denote an element of `like`'s ring.
template <class T>
T parse_as(const T& like, std::string_view text) {
  return std::get<T>(parse_element(like.descriptor(), text));
}

// ---------------------------------------------------------------------------
// Traits used by the elimination routines.

template <class T>
struct ring_traits;

template <>
struct ring_traits<Integer> {
  static constexpr bool is_field = false;
  static constexpr bool euclidean = true;
  static constexpr bool local = false;
  // Preferred pivot: smaller absolute value.
  static bool better_pivot(const Integer& a, const Integer& b) {
    return mpz_cmpabs(a.value().get_mpz_t(), b.value().get_mpz_t()) < 0;
  }
  // Quotient rounding to nearest, so |a - q b| <= |b|/2.
  static Integer quotient(const Integer& a, const Integer& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.value().get_mpz_t(), b.value().get_mpz_t());
    mpz_class twice = 2 * r;
    if (mpz_cmpabs(twice.get_mpz_t(), b.value().get_mpz_t()) > 0) q += 1;
    return Integer(q);
  }
  static bool is_unit(const Integer& a) { return a.value() == 1 || a.value() == -1; }
};

template <class F>
struct field_traits {
  static constexpr bool is_field = true;
  static constexpr bool euclidean = true;
  static constexpr bool local = false;
  static bool better_pivot(const F&, const F&) { return false; }
  static F quotient(const F& a, const F& b) { return a * b.inverse(); }
  static bool is_unit(const F& a) { return !a.is_zero(); }
};

template <>
struct ring_traits<Rational> : field_traits<Rational> {};
template <>
struct ring_traits<ModP> : field_traits<ModP> {};

template <>
struct ring_traits<TruncPoly> {
  static constexpr bool is_field = false;
  static constexpr bool euclidean = true;  // valuation acts as a Euclidean norm
  static constexpr bool local = true;
  static bool better_pivot(const TruncPoly& a, const TruncPoly& b) { return a.valuation() < b.valuation(); }
  static TruncPoly quotient(const TruncPoly& a, const TruncPoly& b) {
    if (a.valuation() < b.valuation()) return a.zero_like();
    return a.divide(b);
  }
  static bool is_unit(const TruncPoly& a) { return a.is_unit(); }
};

template <>
struct ring_traits<Cyclotomic16> {
  static constexpr bool is_field = false;
  static constexpr bool euclidean = false;
  static constexpr bool local = false;
};

template <class T>
concept RingScalar = requires(const T& a, const T& b) {
  { a + b } -> std::same_as<T>;
  { a - b } -> std::same_as<T>;
  { a * b } -> std::same_as<T>;
  { -a } -> std::same_as<T>;
  { a == b } -> std::convertible_to<bool>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.zero_like() } -> std::same_as<T>;
  { a.from_long(1L) } -> std::same_as<T>;
  { a.descriptor() } -> std::same_as<RingDescriptor>;
  { a.str() } -> std::convertible_to<std::string>;
  { involute(a) } -> std::same_as<T>;
};

template <class T>
concept EuclideanScalar = RingScalar<T> && ring_traits<T>::euclidean;

}  // namespace hurwitz
