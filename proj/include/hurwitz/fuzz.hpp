#pragma once

// Randomized Hurwitz-invariance checks: invariant fingerprints along a seeded
// random walk, product preservation at every step, and exact base-change
// verification Q'(Bx, By) = Q(x, y) on random kernel vectors.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hurwitz/invariant.hpp"

namespace hurwitz {

/// Invariant data that must survive every move.
struct Fingerprint {
  std::size_t kernel_rank = 0, mz_rank = 0;
  ParsedClass coarse;
  std::string class_string;
  std::string det_key;
  bool operator==(const Fingerprint& o) const {
    return kernel_rank == o.kernel_rank && mz_rank == o.mz_rank && coarse == o.coarse && det_key == o.det_key;
  }
};

template <class T>
std::string determinant_key(const T& det) {
  if constexpr (std::is_same_v<T, Integer>) {
    return mpz_class(abs(det.value())).get_str();
  } else if constexpr (std::is_same_v<T, TruncPoly>) {
    return "val=" + std::to_string(det.valuation());
  } else if constexpr (std::is_same_v<T, ModP>) {
    return det.is_zero() ? "0" : (det.legendre() > 0 ? "square" : "nonsquare");
  } else if constexpr (std::is_same_v<T, Rational>) {
    return det.is_zero() ? "0" : (det.sign() > 0 ? "+" : "-");
  } else {
    return det.is_zero() ? "0" : "nonzero";
  }
}

template <class T>
Fingerprint fingerprint(const InvariantResult<T>& r) {
  return {r.kernel_rank, r.mz_rank, coarse(r.form_class), r.form_class.class_string, determinant_key(r.determinant)};
}

template <class T>
using MoveFunction = std::function<EvaluatedTuple<T>(const EvaluatedTuple<T>&, const Representation<T>&, const MoveSpec&)>;

template <class T>
struct FuzzConfig {
  std::size_t steps = 500;
  std::uint64_t seed = 1;
  std::size_t check_every = 50;  // invariant recomputation interval
  std::size_t base_change_moves = 20;
  std::size_t pairs_per_move = 10;
  std::vector<std::string> letters;  // conjugation alphabet; default: all generator letters
  MoveFunction<T> move = [](const EvaluatedTuple<T>& ez, const Representation<T>& rep, const MoveSpec& s) {
    return apply_move(ez, rep, s);
  };
};

struct FuzzReport {
  std::size_t steps = 0;
  std::size_t invariant_checks = 0, product_checks = 0, base_change_checks = 0;
  std::vector<std::string> failures;
  std::string baseline_class;
  bool passed() const { return failures.empty(); }
  std::size_t total_checks() const { return invariant_checks + product_checks + base_change_checks; }
};

namespace detail {

template <class T>
T random_scalar(const T& like, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c(-3, 3);
  if constexpr (std::is_same_v<T, TruncPoly>) {
    std::vector<long> coeffs;
    for (std::size_t k = 0; k < like.prime(); ++k) coeffs.push_back(c(rng));
    return TruncPoly::from_coefficients(coeffs, like.prime());
  } else {
    return like.from_long(c(rng));
  }
}

template <class T>
std::vector<T> random_combination(const Matrix<T>& rows, std::mt19937_64& rng) {
  std::vector<T> v(rows.cols(), rows.zero());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    T c = random_scalar(rows.zero(), rng);
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < rows.cols(); ++j)
      if (!rows(r, j).is_zero()) v[j] += c * rows(r, j);
  }
  return v;
}

inline MoveSpec to_move_spec(const RandomWalkStep& s) {
  MoveSpec m;
  m.kind = s.global ? MoveSpec::Global : MoveSpec::Elementary;
  m.index = s.index;
  m.direction = s.direction;
  m.conjugator = s.conjugator;
  return m;
}

}  // namespace detail

template <class T>
FuzzReport run_fuzz(const EvaluatedTuple<T>& start, const Representation<T>& rep, const Matrix<T>& psi,
                    const FuzzConfig<T>& cfg) {
  FuzzReport out;
  std::vector<std::string> letters = cfg.letters;
  if (letters.empty())
    for (const auto& kv : rep.generators) letters.push_back(kv.first);
  InvariantOptions opt;
  opt.compute_b1 = false;
  opt.kernel_basis = false;
  const Fingerprint base_fp = fingerprint(compute_invariant(start, rep, psi, opt));
  out.baseline_class = base_fp.class_string;

  // Random walk with a product check at every step.
  MoveSampler sampler(cfg.seed, letters);
  EvaluatedTuple<T> cur = start;
  for (std::size_t s = 1; s <= cfg.steps; ++s) {
    cur = cfg.move(cur, rep, detail::to_move_spec(sampler.next(cur.m())));
    ++out.steps;
    ++out.product_checks;
    if (!ordered_product(cur.E, cur.zero, cur.d).is_identity()) {
      out.failures.push_back("step " + std::to_string(s) + ": product no longer the identity");
      break;
    }
    if (s % cfg.check_every == 0 || s == cfg.steps) {
      ++out.invariant_checks;
      try {
        auto fp = fingerprint(compute_invariant(cur, rep, psi, opt));
        if (!(fp == base_fp))
          out.failures.push_back("step " + std::to_string(s) + ": invariant changed from '" + base_fp.class_string +
                                 "' to '" + fp.class_string + "'");
      } catch (const std::exception& e) {
        out.failures.push_back("step " + std::to_string(s) + ": invariant computation failed: " + e.what());
      }
    }
  }

  // Base change along single moves.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  MoveSampler move_sampler(cfg.seed + 1, letters);
  cur = start;
  for (std::size_t k = 0; k < cfg.base_change_moves && out.failures.empty(); ++k) {
    auto step = move_sampler.next(cur.m());
    auto spec = detail::to_move_spec(step);
    auto B = base_change_map(cur, rep, spec);
    auto next = cfg.move(cur, rep, spec);
    auto K = kernel(cur).basis;
    std::string where = "base change at move " + std::to_string(k + 1) + " (" +
                        (step.global ? "conjugation by " + to_string(step.conjugator)
                                     : std::string(step.direction == MoveDirection::Forward ? "forward" : "backward") +
                                           " at " + std::to_string(step.index)) +
                        ")";
    for (std::size_t pr = 0; pr < cfg.pairs_per_move; ++pr) {
      ++out.base_change_checks;
      Matrix<T> X(0, K.cols(), rep.zero);
      X.append_row(detail::random_combination(K, rng));
      X.append_row(detail::random_combination(K, rng));
      Matrix<T> BX = X * B;
      if (!in_kernel(BX, next)) {
        out.failures.push_back(where + ": image leaves the kernel");
        break;
      }
      if (!(pairing_matrix(X, X, cur, psi) == pairing_matrix(BX, BX, next, psi))) {
        out.failures.push_back(where + ": Q changed");
        break;
      }
    }
    cur = next;
  }
  return out;
}

/// The walk runs on evaluated entries: symbolic conjugators grow exponentially
/// under random moves, matrices do not need them.
template <class T>
FuzzReport run_fuzz(const HurwitzTuple& t, const Representation<T>& rep, const Matrix<T>& psi,
                    const FuzzConfig<T>& cfg) {
  return run_fuzz(evaluate_tuple(t, rep), rep, psi, cfg);
}

}  // namespace hurwitz
