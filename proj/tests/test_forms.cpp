#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "hurwitz/io.hpp"
#include "oracle.hpp"

using namespace hurwitz;

namespace {

using MZ = Matrix<Integer>;

MZ diag(const std::vector<long>& d) {
  MZ M(d.size(), d.size(), Integer{});
  for (std::size_t i = 0; i < d.size(); ++i) M(i, i) = Integer(d[i]);
  return M;
}

MZ e8_cartan() {
  // Dynkin: 0-1-2-3-4-5-6 chain with 7 attached to 4.
  MZ M = diag(std::vector<long>(8, 2));
  auto link = [&](std::size_t a, std::size_t b) { M(a, b) = M(b, a) = Integer(-1); };
  for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
  link(4, 7);
  return M;
}

MZ hyperbolic() { return MZ::from_longs({{0, 1}, {1, 0}}, Integer{}); }

MZ random_unimodular(std::size_t n, std::mt19937_64& rng) {
  MZ P = MZ::identity(n, Integer{});
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<long> c(-2, 2);
  for (int k = 0; k < 4 * static_cast<int>(n); ++k) {
    std::size_t a = idx(rng), b = idx(rng);
    if (a == b) continue;
    Integer f(c(rng));
    for (std::size_t j = 0; j < n; ++j) P(a, j) += f * P(b, j);
  }
  return P;
}

}  // namespace

TEST(Classify, BasicLattices) {
  EXPECT_EQ(classify_form(diag({1, -1, -1})).class_string, "1^1 (-1)^2");
  EXPECT_EQ(classify_form(hyperbolic()).class_string, "H_1^1");
  EXPECT_EQ(classify_form(-e8_cartan()).class_string, "(E8)^1");
  EXPECT_EQ(classify_form(e8_cartan()).class_string, "(-E8)^1");
  EXPECT_EQ(classify_form(diag({2, 1})).class_string, "nonunimodular(det=2)");
  EXPECT_EQ(classify_form(diag({1, 0, 0}), 3).class_string, "1^1 0^5");
  EXPECT_EQ(classify_form(MZ(0, 0, Integer{})).class_string, "0^0");
  auto om = omega_matrix(2, Integer{});
  auto fc = classify_form(om);
  EXPECT_TRUE(fc.alternating);
  EXPECT_EQ(fc.class_string, "Sp^2");
  EXPECT_THROW(classify_form(MZ::from_longs({{0, 1}, {2, 0}}, Integer{})), std::invalid_argument);
}

TEST(Classify, EvenDefiniteDisclaimer) {
  auto ee = MZ::block_diagonal(-e8_cartan(), -e8_cartan());
  auto fc = classify_form(ee);
  EXPECT_EQ(fc.class_string, "(E8)^2");
  EXPECT_TRUE(fc.genus_disclaimer);
  EXPECT_FALSE(classify_form(MZ::block_diagonal(ee, hyperbolic())).genus_disclaimer);
  EXPECT_EQ(classify_form(MZ::block_diagonal(ee, hyperbolic())).class_string, "H_1^1 (E8)^2");
}

TEST(Classify, CongruenceInvariance) {
  std::mt19937_64 rng(17);
  std::vector<MZ> forms = {MZ::block_diagonal(-e8_cartan(), hyperbolic()), diag({1, 1, -1, 0}),
                           MZ::block_diagonal(hyperbolic(), diag({-1, 0, 0}))};
  for (const auto& W : forms) {
    auto ref = classify_form(W);
    for (int k = 0; k < 10; ++k) {
      auto P = random_unimodular(W.rows(), rng);
      auto fc = classify_form(P * W * P.transpose());
      EXPECT_EQ(fc.class_string, ref.class_string);
      auto in = oracle::inertia(P * W * P.transpose());
      EXPECT_EQ(in.positive, fc.positive);
      EXPECT_EQ(in.negative, fc.negative);
      EXPECT_EQ(in.zero, fc.zero);
    }
  }
}

TEST(Classify, RandomSymmetricAgainstOracle) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> c(-3, 3);
  for (int k = 0; k < 40; ++k) {
    std::size_t n = 1 + k % 7;
    MZ W(n, n, Integer{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) W(i, j) = W(j, i) = Integer(c(rng));
    auto fc = classify_form(W);
    auto in = oracle::inertia(W);
    EXPECT_EQ(fc.positive, in.positive);
    EXPECT_EQ(fc.negative, in.negative);
    EXPECT_EQ(fc.zero, in.zero);
  }
}

TEST(Classify, FiniteRings) {
  auto H = [](std::uint64_t P) { return Matrix<ModP>::from_longs({{0, 1}, {1, 0}}, ModP(0, P)); };
  EXPECT_EQ(classify_form(H(7)).class_string, "<1>^1 <n>^1");  // -1 is a non-square mod 7
  EXPECT_EQ(classify_form(H(5)).class_string, "<1>^2");
  EXPECT_EQ(classify_form(Matrix<ModP>::from_longs({{1, 0}, {0, 1}}, ModP(0, 5))).class_string, "<1>^2");
  EXPECT_EQ(classify_form(Matrix<ModP>::from_longs({{0, 1}, {1, 0}}, ModP(0, 2))).class_string, "H^1");
  TruncPoly z(0, 2);
  auto y = TruncPoly::y_power(1, 2);
  Matrix<TruncPoly> Wy(2, 2, z);
  Wy(0, 1) = Wy(1, 0) = y;
  EXPECT_EQ(classify_form(Wy).class_string, "H_y^1");
  Wy(0, 0) = y;
  EXPECT_EQ(classify_form(Wy).class_string, "<y>^2");
  Wy(0, 0) = TruncPoly(1, 2);
  EXPECT_EQ(classify_form(Wy).class_string, "unclassified(n=2)");
}

TEST(Classify, ComplementCompletesABasis) {
  std::mt19937_64 rng(12);
  // Rows of a unimodular matrix span a saturated sublattice; one instance
  // has unit entries, the other forces the general route.
  for (int t = 0; t < 10; ++t) {
    auto P = random_unimodular(6, rng);
    MZ K = P.rows_range(0, 3);
    if (t % 2) K = MZ::stack(K, MZ::from_longs({{0, 0, 0, 0, 0, 0}}, Integer{}));
    auto C = detail::complement_rows(K, 6, Integer{});
    ASSERT_EQ(C.rows(), 3u);
    EXPECT_EQ(abs(oracle::determinant(MZ::stack(P.rows_range(0, 3), C))), 1);
  }
  MZ K = MZ::from_longs({{2, 3, 0}}, Integer{});
  bool unit = true;
  auto C = detail::complement_rows(K, 3, Integer{}, &unit);
  ASSERT_EQ(C.rows(), 2u);
  EXPECT_EQ(abs(oracle::determinant(MZ::stack(K, C))), 1);
}

TEST(Notation, Normalize) {
  EXPECT_EQ(normalize_class_notation("$ \\mathcal{H}_{ {\\tt y}}^{28} 0^{ 87}$"), "H_y^28 0^87");
  EXPECT_EQ(normalize_class_notation("$ \\mathcal{H}_{\\tt y}^{546}0^{1436} $"), "H_y^546 0^1436");
  EXPECT_EQ(normalize_class_notation("$\\mathcal{H}_1^4 (E_8)^{3} 0^{124}$"), "H_1^4 (E8)^3 0^124");
  EXPECT_EQ(normalize_class_notation("$(-1)^{12} 0^{64}$"), "(-1)^12 0^64");
  EXPECT_EQ(normalize_class_notation("E_8 0^{84}"), "E8 0^84");
}

TEST(Notation, ParseCoarse) {
  auto a = parse_class_string("(-1)^20 1^2 0^94");
  EXPECT_EQ(a.rank, 22u);
  EXPECT_EQ(a.signature, -18);
  EXPECT_EQ(a.parity, Parity::Odd);
  EXPECT_EQ(a.zero, 94u);
  EXPECT_EQ(a, parse_class_string("1^2 (-1)^20 0^94"));
  auto b = parse_class_string("H_1^4 (E8)^3 0^124");
  EXPECT_EQ(b.rank, 32u);
  EXPECT_EQ(b.signature, -24);
  EXPECT_EQ(b.parity, Parity::Even);
  EXPECT_EQ(parse_class_string("E8 0^84").rank, 8u);
  EXPECT_THROW(parse_class_string("Q^3"), std::invalid_argument);
  EXPECT_FALSE(parse_class_string("nonunimodular(det=3)").unimodular);
}

TEST(Notation, TableCellsNormalizeToTheirPlainForms) {
  auto data = read_json_file(HURWITZ_DATA_DIR "/invariant_table.json");
  for (const auto& r : data.at("rows")) {
    auto printed = parse_class_string(r.at("q_omega_printed").get<std::string>());
    EXPECT_EQ(printed, parse_class_string(r.at("q_omega").get<std::string>())) << r.at("name");
    // Every printed spin cell parses to an H_y block plus a radical.
    for (const char* col : {"q_spin_odd_printed", "q_spin_even_printed"}) {
      auto pc = parse_class_string(r.at(col).get<std::string>());
      EXPECT_TRUE(pc.alternating) << r.at("name") << " " << col;
      EXPECT_GT(pc.zero, 0u);
    }
  }
  auto first = data.at("rows").at(0);
  EXPECT_EQ(normalize_class_notation(first.at("q_spin_odd_printed").get<std::string>()), "H_y^28 0^87");
}
