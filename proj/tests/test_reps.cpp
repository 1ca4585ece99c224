#include <gtest/gtest.h>

#include <random>

#include "hurwitz/io.hpp"
#include "oracle.hpp"

using namespace hurwitz;

namespace {

template <class T>
Matrix<T> word_matrix(const Representation<T>& rep, const std::string& w) {
  return rep.evaluate(parse_word(w));
}

template <class T>
void expect_chain_relations(const Representation<T>& rep, int g) {
  const int n = 2 * g + 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto a = chain_letter(i), b = chain_letter(j);
      if (j == i + 1)
        EXPECT_EQ(word_matrix(rep, a + " " + b + " " + a), word_matrix(rep, b + " " + a + " " + b)) << a << b;
      else
        EXPECT_EQ(word_matrix(rep, a + " " + b), word_matrix(rep, b + " " + a)) << a << b;
    }
}

json rep_json(const std::string& text) { return json::parse(text); }

}  // namespace

TEST(Symplectic, TransvectionFixesItsVector) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> c(-4, 4);
  for (int k = 0; k < 30; ++k) {
    std::vector<long> v(6);
    for (auto& x : v) x = c(rng);
    auto T = transvection(v, Integer{});
    std::vector<Integer> vz;
    for (long x : v) vz.emplace_back(x);
    EXPECT_EQ(T.left_apply(vz), vz);
    EXPECT_TRUE((T * transvection(v, Integer{}, -1)).is_identity());
    auto W = omega_matrix(3, Integer{});
    EXPECT_EQ(T * W * T.transpose(), W);
  }
}

TEST(Symplectic, TransvectionFormula) {
  // tau_v(x) = x + omega(x, v) v with omega(a1, b1) = 1.
  auto T = transvection({0, 1}, Integer{});  // v = b1
  EXPECT_EQ(T, (Matrix<Integer>::from_longs({{1, 1}, {0, 1}}, Integer{})));
  EXPECT_EQ(omega({1, 0}, {0, 1}), 1);
}

TEST(Symplectic, ChainRelationsOverZAndZmodP) {
  for (int g : {1, 2, 3}) {
    expect_chain_relations(symplectic_rep_z(g), g);
    expect_chain_relations(symplectic_rep(g, ModP(0, 5)), g);
  }
}

TEST(Symplectic, ChainClassesAdjacency) {
  for (int g : {2, 3}) {
    auto C = chain_classes(g);
    for (int i = 1; i <= 2 * g + 1; ++i)
      for (int j = i + 1; j <= 2 * g + 1; ++j) {
        long w = omega(C[chain_letter(i)], C[chain_letter(j)]);
        EXPECT_EQ(std::abs(w), j == i + 1 ? 1 : 0) << i << " " << j;
      }
    // d meets c4 once and nothing else in the chain.
    for (int i = 1; i <= 2 * g + 1; ++i)
      EXPECT_EQ(std::abs(omega(C["d"], C[chain_letter(i)])), i == 4 ? 1 : 0) << i;
  }
}

TEST(Symplectic, ChainNeighbourhoodRelations) {
  // Two-chain: (c1 c2)^6 is a separating boundary twist; three-chain: (c1 c2 c3)^4 = c5^2 at g = 2.
  auto rep = symplectic_rep_z(2);
  EXPECT_TRUE(word_matrix(rep, "c1 c2 | ^6").is_identity());
  EXPECT_EQ(word_matrix(rep, "c1 c2 c3 | ^4"), word_matrix(rep, "c5 c5"));
}

TEST(Symplectic, MissingLetterThrows) {
  auto rep = symplectic_rep_z(1);
  EXPECT_THROW(rep.generator("d"), std::invalid_argument);
  EXPECT_THROW(word_matrix(rep, "c1 c9"), std::invalid_argument);
}

TEST(Coinvariants, Ranks) {
  auto rep = symplectic_rep_z(2);
  EXPECT_EQ(coinvariants_rank(builtin_tuple(2, "xi1"), rep), 0u);
  EXPECT_EQ(coinvariants_rank(tuple_from_word(parse_word("c1"), 2), rep), 3u);
  EXPECT_EQ(coinvariants_rank(tuple_from_word(parse_word("c1 c3 c5"), 2), rep), 2u);
  // Oracle: d minus the rank of the stacked 1 - e.
  auto t = tuple_from_word(parse_word("c1 c2 d c4"), 2);
  Matrix<Integer> S(0, 4, Integer{});
  for (const auto& e : t.entries) S = Matrix<Integer>::stack(S, rep.identity() - rep.evaluate({{e.base, 1}}));
  EXPECT_EQ(coinvariants_rank(t, rep), 4 - oracle::rank(S));
}

TEST(Quantum, PrintedEntries) {
  auto rep = quantum_su2_level2_g1();
  using C = Cyclotomic16;
  const auto& c1 = rep.generator("c1").matrix;
  EXPECT_EQ(c1(1, 1), -C::zeta_power(3));
  EXPECT_EQ(c1(2, 2), C(-1));
  EXPECT_EQ(c1(0, 2) * (C(1) + C::zeta_power(1)), C::zeta_power(1) + C::zeta_power(8));
  EXPECT_EQ(C::zeta_power(8), C(-1));
}

TEST(Quantum, BraidRelationAndUnitDeterminants) {
  auto rep = quantum_su2_level2_g1();
  EXPECT_EQ(word_matrix(rep, "c1 c2 c1"), word_matrix(rep, "c2 c1 c2"));
  for (const auto& [name, g] : rep.generators) {
    // det is a root of unity: +-zeta^k.
    auto det = determinant(g.matrix);
    bool root = false;
    for (long k = 0; k < 16; ++k) root = root || det == Cyclotomic16::zeta_power(k);
    EXPECT_TRUE(root) << name << ": " << det.str();
    EXPECT_TRUE((g.matrix * g.inverse).is_identity()) << name;
  }
  // Projective chain relation.
  using C = Cyclotomic16;
  auto I = Matrix<C>::identity(3, C{});
  EXPECT_EQ(word_matrix(rep, "c1 c2 | ^6"), -C::zeta_power(4) * I);
  EXPECT_EQ(word_matrix(rep, "c1 c2 | ^3"), C::zeta_power(6) * I);
}

TEST(Quantum, ReductionIsARingHomomorphism) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> c(-6, 6);
  auto rnd = [&] {
    std::array<mpz_class, 8> a;
    for (auto& v : a) v = c(rng);
    return Cyclotomic16(a);
  };
  for (int k = 0; k < 200; ++k) {
    auto a = rnd(), b = rnd();
    EXPECT_EQ(base_change_eq5(a + b, 2), base_change_eq5(a, 2) + base_change_eq5(b, 2));
    EXPECT_EQ(base_change_eq5(a * b, 2), base_change_eq5(a, 2) * base_change_eq5(b, 2));
  }
  EXPECT_EQ(base_change_eq5(Cyclotomic16(1), 2), TruncPoly(1, 2));
  EXPECT_EQ(base_change_eq5(Cyclotomic16::zeta_power(1), 2), TruncPoly::from_coefficients({1, 1}, 2));
  // zeta^8 = -1 must map to (1 + y)^8 = 1 = -1 in characteristic 2.
  EXPECT_EQ(base_change_eq5(Cyclotomic16::zeta_power(8), 2), TruncPoly(1, 2));
}

TEST(Quantum, ReducedTwistsSquareToIdentity) {
  auto red = reduce_representation(quantum_su2_level2_g1());
  for (const auto& [name, g] : red.generators) EXPECT_TRUE((g.matrix * g.matrix).is_identity()) << name;
  EXPECT_EQ(word_matrix(red, "c1 c2 c1"), word_matrix(red, "c2 c1 c2"));
}

TEST(Loader, BundledFilesAgreeWithBuiltins) {
  auto q = std::get<Representation<Cyclotomic16>>(load_representation(HURWITZ_DATA_DIR "/su2_level2_g1.json"));
  auto ref = quantum_su2_level2_g1();
  for (const auto& [name, g] : ref.generators) EXPECT_EQ(q.generator(name).matrix, g.matrix) << name;
  EXPECT_FALSE(q.has_psi());

  auto r = std::get<Representation<TruncPoly>>(load_representation(HURWITZ_DATA_DIR "/su2_level2_g1_reduced.json"));
  auto red = reduce_representation(ref);
  for (const auto& [name, g] : red.generators) EXPECT_EQ(r.generator(name).matrix, g.matrix) << name;
  ASSERT_TRUE(r.has_psi());
  EXPECT_EQ(r.psi_symmetry, PsiSymmetry::Symmetric);
  EXPECT_FALSE(r.psi_violation());
  EXPECT_TRUE(determinant(r.psi).is_unit());
}

TEST(Loader, RejectsBadInput) {
  auto load = [](const std::string& s) { return representation_from_json(rep_json(s)); };
  const std::string ok_gen = R"("a": {"matrix": [["1","1"],["0","1"]], "separating": false})";
  EXPECT_NO_THROW(load(R"({"ring":"Z","dim":2,"generators":{)" + ok_gen + "}}"));
  // Unknown ring.
  EXPECT_THROW(load(R"({"ring":"Qi","dim":2,"generators":{)" + ok_gen + "}}"), SchemaError);
  // Missing separating flag.
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"generators":{"a":{"matrix":[["1","1"],["0","1"]]}}})"),
               std::invalid_argument);
  // Singular over Z.
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"generators":{"a":{"matrix":[["2","0"],["0","1"]],"separating":false}}})"),
               std::invalid_argument);
  // Invertible over Q.
  EXPECT_NO_THROW(load(R"({"ring":"Q","dim":2,"generators":{"a":{"matrix":[["2","0"],["0","1"]],"separating":false}}})"));
  // Wrong shape.
  EXPECT_THROW(load(R"({"ring":"Z","dim":3,"generators":{)" + ok_gen + "}}"), std::invalid_argument);
  // psi without a symmetry, psi with the wrong symmetry, psi not invariant.
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"psi":[["0","1"],["-1","0"]],"generators":{)" + ok_gen + "}}"),
               SchemaError);
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"psi":[["0","1"],["-1","0"]],"psi_symmetry":"symmetric","generators":{)" +
                    ok_gen + "}}"),
               std::invalid_argument);
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"psi":[["1","0"],["0","1"]],"psi_symmetry":"symmetric","generators":{)" +
                    ok_gen + "}}"),
               std::invalid_argument);
  EXPECT_NO_THROW(load(R"({"ring":"Z","dim":2,"psi":[["0","1"],["-1","0"]],"psi_symmetry":"skew","generators":{)" +
                       ok_gen + "}}"));
  // Element from the wrong ring.
  EXPECT_THROW(load(R"({"ring":"Z","dim":2,"generators":{"a":{"matrix":[["1/2","0"],["0","1"]],"separating":false}}})"),
               std::invalid_argument);
}
