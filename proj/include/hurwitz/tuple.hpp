#pragma once

// Symbolic Hurwitz tuples: entries are conjugates w^{-1} b w of named
// generators, kept as words so that moves are exact rewrites.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hurwitz {

struct SignedLetter {
  std::string name;
  int exp = 1;  // +1 or -1
  bool operator==(const SignedLetter&) const = default;
};

using Word = std::vector<SignedLetter>;

/// Appends a letter, cancelling against an adjacent inverse.
inline void push_reduced(Word& w, const SignedLetter& l) {
  if (!w.empty() && w.back().name == l.name && w.back().exp == -l.exp)
    w.pop_back();
  else
    w.push_back(l);
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  for (const auto& l : b) push_reduced(r, l);
  return r;
}

inline Word inverse(const Word& w) {
  Word r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->name, -it->exp});
  return r;
}

inline Word free_reduce(const Word& w) { return concat({}, w); }

inline std::string to_string(const SignedLetter& l) { return l.exp == 1 ? l.name : l.name + "^-1"; }

inline std::string to_string(const Word& w) {
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += ' ';
    s += to_string(l);
  }
  return s;
}

/// Parses "c1 c2 c5^2 c4^-1 | ^3": letters with optional integer powers;
/// a trailing "| ^n" repeats the whole word n times.
inline Word parse_word(const std::string& text) {
  std::string body = text;
  long repeat = 1;
  auto bar = text.find('|');
  if (bar != std::string::npos) {
    body = text.substr(0, bar);
    std::string tail;
    for (char c : text.substr(bar + 1))
      if (!std::isspace(static_cast<unsigned char>(c))) tail += c;
    if (tail.size() < 2 || tail[0] != '^') throw std::invalid_argument("expected '| ^n' in word '" + text + "'");
    try {
      std::size_t used = 0;
      repeat = std::stol(tail.substr(1), &used);
      if (used + 1 != tail.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad repeat count in word '" + text + "'");
    }
    if (repeat < 0) throw std::invalid_argument("negative repeat count in word '" + text + "'");
  }
  // Glue "x ^ 2" into "x^2".
  std::string glued;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) ++j;
      bool next_caret = j < body.size() && body[j] == '^';
      bool prev_caret = !glued.empty() && glued.back() == '^';
      if (!next_caret && !prev_caret) glued += ' ';
      i = j - 1;
    } else {
      glued += c;
    }
  }
  Word once;
  std::istringstream in(glued);
  std::string tok;
  while (in >> tok) {
    std::string name = tok;
    long power = 1;
    auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        std::size_t used = 0;
        power = std::stol(tok.substr(caret + 1), &used);
        if (used + caret + 1 != tok.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in '" + tok + "'");
      }
    }
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
      throw std::invalid_argument("bad letter '" + tok + "'");
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') throw std::invalid_argument("bad letter '" + tok + "'");
    int e = power < 0 ? -1 : 1;
    for (long k = 0; k < (power < 0 ? -power : power); ++k) once.push_back({name, e});
  }
  Word out;
  for (long r = 0; r < repeat; ++r) out.insert(out.end(), once.begin(), once.end());
  return out;
}

/// The conjugate conj^{-1} * base * conj.
struct TwistWord {
  std::string base;
  Word conj;
  bool operator==(const TwistWord&) const = default;

  /// As a plain word: conj^{-1} base conj.
  Word expand() const {
    Word w = inverse(conj);
    push_reduced(w, {base, 1});
    return concat(w, conj);
  }
  Word expand_inverse() const { return inverse(expand()); }
};

inline std::string to_string(const TwistWord& t) {
  if (t.conj.empty()) return t.base;
  return t.base + "{" + to_string(t.conj) + "}";
}

struct HurwitzTuple {
  std::vector<TwistWord> entries;
  std::optional<int> genus;
  std::string alphabet = "builtin-chain";

  std::size_t size() const { return entries.size(); }
  bool operator==(const HurwitzTuple&) const = default;
};

enum class MoveDirection { Forward, Backward };

/// Elementary move at 1-based position i on (z_i, z_{i+1}).
/// Forward: (z_{i+1}, z_{i+1}^{-1} z_i z_{i+1}); backward: (z_i z_{i+1} z_i^{-1}, z_i).
inline HurwitzTuple hurwitz_move(const HurwitzTuple& t, std::size_t i, MoveDirection dir) {
  if (i < 1 || i >= t.size())
    throw std::out_of_range("move index " + std::to_string(i) + " outside 1.." + std::to_string(t.size() - 1));
  HurwitzTuple r = t;
  const TwistWord& a = t.entries[i - 1];
  const TwistWord& b = t.entries[i];
  if (dir == MoveDirection::Forward) {
    r.entries[i - 1] = b;
    r.entries[i] = {a.base, concat(a.conj, b.expand())};
  } else {
    r.entries[i - 1] = {b.base, concat(b.conj, a.expand_inverse())};
    r.entries[i] = a;
  }
  return r;
}

/// Conjugates every entry: z -> w^{-1} z w.
inline HurwitzTuple global_conjugate(const HurwitzTuple& t, const Word& w) {
  HurwitzTuple r = t;
  for (auto& e : r.entries) e.conj = concat(e.conj, w);
  return r;
}

/// (z_1..z_m, h^{-1} z'_1 h, ..., h^{-1} z'_{m'} h).
inline HurwitzTuple fiber_sum(const HurwitzTuple& t1, const HurwitzTuple& t2, const Word& h) {
  if (t1.alphabet != t2.alphabet) throw std::invalid_argument("fiber sum of tuples over different alphabets");
  if (t1.genus && t2.genus && *t1.genus != *t2.genus) throw std::invalid_argument("fiber sum of tuples of different genus");
  HurwitzTuple r = t1;
  if (!r.genus) r.genus = t2.genus;
  for (const auto& e : global_conjugate(t2, h).entries) r.entries.push_back(e);
  return r;
}

/// Tuple whose entries are the letters of a positive word.
inline HurwitzTuple tuple_from_word(const Word& w, std::optional<int> genus = std::nullopt) {
  HurwitzTuple t;
  t.genus = genus;
  for (const auto& l : w) {
    if (l.exp != 1) throw std::invalid_argument("tuple entries must be positive letters, got " + to_string(l));
    t.entries.push_back({l.name, {}});
  }
  return t;
}

inline std::string chain_letter(int i) { return "c" + std::to_string(i); }

/// Letters c1..c_{2g+1} and d of the built-in chain alphabet.
inline std::vector<std::string> chain_alphabet(int g) {
  std::vector<std::string> out;
  for (int i = 1; i <= 2 * g + 1; ++i) out.push_back(chain_letter(i));
  if (g >= 2) out.push_back("d");
  return out;
}

/// xi1 = (c1..c_{2g} c_{2g+1}^2 c_{2g}..c1)^2, xi2 = (c1..c_{2g+1})^{2g+2},
/// xi3 = (c1..c_{2g})^{4g+2}.
inline HurwitzTuple builtin_tuple(int g, const std::string& name) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  Word w;
  if (name == "xi1") {
    Word half;
    for (int i = 1; i <= 2 * g; ++i) half.push_back({chain_letter(i), 1});
    half.push_back({chain_letter(2 * g + 1), 1});
    half.push_back({chain_letter(2 * g + 1), 1});
    for (int i = 2 * g; i >= 1; --i) half.push_back({chain_letter(i), 1});
    w = half;
    w.insert(w.end(), half.begin(), half.end());
  } else if (name == "xi2") {
    for (int r = 0; r < 2 * g + 2; ++r)
      for (int i = 1; i <= 2 * g + 1; ++i) w.push_back({chain_letter(i), 1});
  } else if (name == "xi3") {
    for (int r = 0; r < 4 * g + 2; ++r)
      for (int i = 1; i <= 2 * g; ++i) w.push_back({chain_letter(i), 1});
  } else {
    throw std::invalid_argument("unknown built-in tuple '" + name + "' (expected xi1, xi2, xi3)");
  }
  return tuple_from_word(w, g);
}

/// Seeded random sequence of moves: 90% elementary moves (uniform position and
/// direction), 10% global conjugation by a random word of length 1..4.
struct RandomWalkStep {
  bool global = false;
  std::size_t index = 0;
  MoveDirection direction = MoveDirection::Forward;
  Word conjugator;
};

class MoveSampler {
 public:
  MoveSampler(std::uint64_t seed, std::vector<std::string> letters) : rng_(seed), letters_(std::move(letters)) {}

  RandomWalkStep next(std::size_t m) {
    RandomWalkStep s;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (m < 2 || coin(rng_) < 0.1) {
      s.global = true;
      std::uniform_int_distribution<int> len(1, 4);
      std::uniform_int_distribution<std::size_t> pick(0, letters_.size() - 1);
      int L = len(rng_);
      for (int k = 0; k < L; ++k) s.conjugator.push_back({letters_[pick(rng_)], coin(rng_) < 0.5 ? 1 : -1});
      s.conjugator = free_reduce(s.conjugator);
    } else {
      std::uniform_int_distribution<std::size_t> pos(1, m - 1);
      s.index = pos(rng_);
      s.direction = coin(rng_) < 0.5 ? MoveDirection::Forward : MoveDirection::Backward;
    }
    return s;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> letters_;
};

inline HurwitzTuple apply_step(const HurwitzTuple& t, const RandomWalkStep& s) {
  return s.global ? global_conjugate(t, s.conjugator) : hurwitz_move(t, s.index, s.direction);
}

/// Letters appearing in the tuple, in first-appearance order.
inline std::vector<std::string> letters_of(const HurwitzTuple& t) {
  std::vector<std::string> out;
  auto add = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& e : t.entries) {
    add(e.base);
    for (const auto& l : e.conj) add(l.name);
  }
  return out;
}

inline HurwitzTuple random_walk(const HurwitzTuple& t, std::size_t steps, std::uint64_t seed,
                                std::vector<std::string> letters = {}) {
  if (letters.empty()) letters = t.genus ? chain_alphabet(*t.genus) : letters_of(t);
  MoveSampler sampler(seed, letters);
  HurwitzTuple cur = t;
  for (std::size_t k = 0; k < steps; ++k) cur = apply_step(cur, sampler.next(cur.size()));
  return cur;
}

}  // namespace hurwitz
