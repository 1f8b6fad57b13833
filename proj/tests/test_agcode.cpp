#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "ntcubic/agcode.hpp"
#include "ntcubic/census.hpp"
#include "ntcubic/error.hpp"
#include "reference.hpp"

using namespace ntcubic;

namespace {

// Weight by schoolbook evaluation over a brute-force point set.
struct Oracle {
  reftest::RefTower ref;
  std::vector<std::pair<Code, Code>> points;

  explicit Oracle(const FieldTower& t) : ref{t.p(), t.modulus1(), t.modulus2()} {
    const Code n = t.cubic_size(), q = t.q();
    std::vector<Code> N(n), T(n);
    for (Code x = 0; x < n; ++x) {
      const Code xq = ref.pow(x, q), xq2 = ref.pow(xq, q);
      N[x] = ref.mul(ref.mul(x, xq), xq2);
      T[x] = ref.add(ref.add(x, xq), xq2);
    }
    for (Code x = 0; x < n; ++x)
      for (Code y = 0; y < n; ++y)
        if (N[x] == T[y]) points.push_back({x, y});
  }

  std::uint64_t weight(const Combo& k) const {
    std::uint64_t w = 0;
    for (auto [x, y] : points) {
      const Code terms[7] = {ref.mul(y, y), ref.mul(x, y), y, ref.pow(x, 3), ref.mul(x, x), x, 1};
      Code v = 0;
      for (int s = 0; s < 7; ++s) v = ref.add(v, ref.mul(k[s], terms[s]));
      w += v != 0;
    }
    return w;
  }
};

std::set<std::uint64_t> poles(const MonomialBasis& b) {
  std::set<std::uint64_t> s;
  for (auto m : b.monomials) s.insert(m.pole);
  return s;
}

std::set<std::uint64_t> weights_of_case(const WeightTable& t, const std::string& label) {
  std::set<std::uint64_t> s;
  for (const auto& r : t.rows)
    if (r.case_label == label) s.insert(r.weight);
  return s;
}

}  // namespace

TEST_CASE("Riemann-Roch bases") {
  auto t2 = FieldTower::build(2, 1), t3 = FieldTower::build(3, 1);

  auto b3 = basis_for(*t3, 27);
  CHECK(b3.monomials.size() == 7);
  CHECK(poles(b3) == std::set<std::uint64_t>{0, 9, 13, 18, 22, 26, 27});
  CHECK(std::is_sorted(b3.monomials.begin(), b3.monomials.end(),
                       [](auto a, auto b) { return a.pole < b.pole; }));

  // y^2 has pole order 14 > 12 when q = 2.
  auto b2 = basis_for(*t2, 12);
  CHECK(poles(b2) == std::set<std::uint64_t>{0, 4, 7, 8, 11, 12});
  CHECK(std::none_of(b2.monomials.begin(), b2.monomials.end(), [](auto m) { return m.j == 2; }));

  auto b0 = basis_for(*t2, 0);
  REQUIRE(b0.monomials.size() == 1);
  CHECK(b0.monomials[0] == BasisMonomial{0, 0, 0});

  // y-degree stays below q^2 however large k is; the count is then k + 1 - g.
  auto big = basis_for(*t2, 40);
  for (auto m : big.monomials) CHECK(m.j < 4);
  CHECK(big.monomials.size() == 40 + 1 - 9);
}

TEST_CASE("codes: rank and designed distance") {
  auto t2 = FieldTower::build(2, 1), t3 = FieldTower::build(3, 1);
  auto c2 = build_code(t2, 12);
  CHECK(c2.length() == 32);
  CHECK(c2.rank == 6);
  CHECK(designed_distance(c2) == 20);

  auto c3 = build_code(t3, 27);
  CHECK(c3.length() == 243);
  CHECK(c3.rank == 7);
  CHECK(designed_distance(c3) == 216);

  CHECK_THROWS_AS(designed_distance(build_code(t2, 32)), Error);

  const Field& F = t2->Fq3();
  CHECK(matrix_rank(F, {{1, 2, 3}, {5, F.mul(5, 2), F.mul(5, 3)}}) == 1);
  CHECK(matrix_rank(F, {{1, 0}, {0, 1}, {1, 1}}) == 2);
}

TEST_CASE("weight_of against schoolbook evaluation") {
  for (unsigned p : {2u, 3u}) {
    auto t = FieldTower::build(p, 1);
    auto code = build_code(t, 3 * p * p);
    Oracle oracle(*t);
    REQUIRE(oracle.points.size() == code.length());
    std::mt19937 rng(5 + p);
    const Code s = t->cubic_size();
    for (int it = 0; it < 40; ++it) {
      Combo k{};
      for (auto& c : k) c = rng() % 4 == 0 ? 0 : rng() % s;
      if (p == 2) k[0] = 0;
      CHECK(weight_of(code, k) == oracle.weight(k));
    }
    CHECK(weight_of(code, Combo{}) == 0);
    CHECK(weight_of(code, Combo{0, 0, 0, 0, 0, 0, 1}) == code.length());
  }

  auto t2 = FieldTower::build(2, 1);
  auto code = build_code(t2, 12);
  CHECK_THROWS_AS(weight_of(code, Combo{1, 0, 0, 0, 0, 0, 0}), DimensionMismatch);
  CHECK_THROWS_AS(encode(code, {1, 2}), DimensionMismatch);
}

TEST_CASE("zeros of c y + d x^3 + ... match the intersection count") {
  auto t = FieldTower::build(3, 1);
  const Field& F = t->Fq3();
  auto code = build_code(t, 27);
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    const Code c = 1 + rng() % 26, d = rng() % 27, e = rng() % 27, f = rng() % 27, g = rng() % 27;
    const Code m = F.neg(F.inv(c));
    const auto zeros = intersect_count(*t, F.mul(d, m), F.mul(e, m), F.mul(f, m), F.mul(g, m));
    CHECK(weight_of(code, Combo{0, 0, c, d, e, f, g}) == code.length() - zeros);
  }
}

TEST_CASE("full weight spectrum at q=2") {
  auto t = FieldTower::build(2, 1);
  auto code = build_code(t, 12);
  auto spectrum = weight_spectrum(code);
  std::uint64_t total = 0;
  for (auto [w, c] : spectrum) total += c;
  CHECK(total == 262144);
  CHECK(spectrum.begin()->first == 0);
  CHECK(spectrum.begin()->second == 1);
  // Regression constant: minimum distance 20, reached by 392 codewords.
  CHECK(std::next(spectrum.begin())->first == 20);
  CHECK(std::next(spectrum.begin())->second == 392);
  CHECK(spectrum.rbegin()->first <= 32);

  auto table = weight_table(t, WeightFamily::Full, 0, 1);
  CHECK(table.functions == 262144);
  CHECK(table.min_nonzero_weight == 20);
  std::map<std::uint64_t, std::uint64_t> from_table;
  for (const auto& r : table.rows) from_table[r.weight] += r.functions;
  CHECK(from_table == spectrum);

  CHECK_THROWS_AS(weight_spectrum(build_code(FieldTower::build(3, 1), 27)), TooLarge);
}

TEST_CASE("weight table at q=2") {
  auto t = FieldTower::build(2, 1);
  Oracle oracle(*t);
  for (auto fam : {WeightFamily::A0B0D0, WeightFamily::A0B0DNonzero, WeightFamily::Full}) {
    auto table = weight_table(t, fam, 0, 1);
    CHECK(table.fiber_mismatches == 0);
    CHECK(table.goppa_violations == 0);
    CHECK(table.designed_distance == 20);
    for (const auto& r : table.rows) CHECK(oracle.weight(r.example) == r.weight);
  }
  auto a = weight_table(t, WeightFamily::A0B0D0, 0, 1);
  CHECK(a.functions == 4096);
  // Characteristic 2: two, one or no roots of e x^2 + f x + g.
  CHECK(weights_of_case(a, "d=0&c=0&otherwise") == std::set<std::uint64_t>{24, 28, 32});
  CHECK_FALSE(a.case_ok("d=0&c=0&otherwise"));
  CHECK(weights_of_case(a, "d=0&c!=0&e=f=0&g!=0") == std::set<std::uint64_t>{25, 31});
  CHECK_FALSE(a.case_ok("d=0&c!=0&e=f=0&g!=0"));
  CHECK(a.case_ok("d=0&c!=0&otherwise"));

  auto d = weight_table(t, WeightFamily::A0B0DNonzero, 0, 1);
  CHECK(d.functions == 7 * 4096);
  CHECK(d.all_ok());
  CHECK(d.min_nonzero_weight == 20);
}

TEST_CASE("weight table for d = 0 at q=3") {
  auto t = FieldTower::build(3, 1);
  auto table = weight_table(t, WeightFamily::A0B0D0, 0, 1);
  CHECK(table.functions == 531441);
  CHECK(table.fiber_mismatches == 0);
  CHECK(table.goppa_violations == 0);
  CHECK(table.min_nonzero_weight == 225);

  CHECK(weights_of_case(table, "d=0&c=0&e=f=g=0") == std::set<std::uint64_t>{0});
  CHECK(weights_of_case(table, "d=0&c=0&e=0&f!=0") == std::set<std::uint64_t>{234});
  CHECK(weights_of_case(table, "d=0&c=0&f!=0&f^2-4eg=0") == std::set<std::uint64_t>{234});
  CHECK(weights_of_case(table, "d=0&c!=0&e=f=g=0") == std::set<std::uint64_t>{242});
  CHECK(table.case_ok("d=0&c!=0&e=0&f!=0"));
  CHECK(table.case_ok("d=0&c!=0&otherwise"));

  // e != 0 with e x^2 + g having a double root at 0 (f = g = 0) gives one fiber.
  CHECK(weights_of_case(table, "d=0&c=0&otherwise") == std::set<std::uint64_t>{225, 234, 243});

  // c y + g vanishes where N(x) = T(-g/c): q^2 + q + 1 points, or only x = 0.
  reftest::RefTower ref{t->p(), t->modulus1(), t->modulus2()};
  auto code = build_code(t, 27);
  const Field& F = t->Fq3();
  for (Code c = 1; c < 27; c += 5)
    for (Code g = 1; g < 27; ++g) {
      const Code y = F.neg(F.div(g, c));
      const Code tr = ref.add(ref.add(y, ref.pow(y, 3)), ref.pow(y, 9));
      CHECK(weight_of(code, Combo{0, 0, c, 0, 0, 0, g}) == (tr == 0 ? 242u : 230u));
    }
  CHECK(weights_of_case(table, "d=0&c!=0&e=f=0&g!=0") == std::set<std::uint64_t>{230, 242});
}

TEST_CASE("weight table size guards") {
  CHECK_THROWS_AS(weight_table(FieldTower::build(3, 1), WeightFamily::Full), TooLarge);
  CHECK_THROWS_AS(weight_table(FieldTower::build(2, 2), WeightFamily::A0B0D0), TooLarge);
  CHECK(weight_family_from_string("a0b0_dnonzero") == WeightFamily::A0B0DNonzero);
  CHECK_FALSE(weight_family_from_string("bogus"));
}

TEST_CASE("linearity of weight_of and sampled Goppa bound at q=3") {
  auto t = FieldTower::build(3, 1);
  const Field& F = t->Fq3();
  auto code = build_code(t, 27);
  const auto dd = designed_distance(code);
  std::mt19937 rng(23);
  for (int it = 0; it < 1000; ++it) {
    Combo k;
    for (auto& c : k) c = rng() % 27;
    // Direct pointwise evaluation with the library field.
    std::uint64_t w = 0;
    for (auto P : code.curve.points) {
      const Code terms[7] = {F.mul(P.y, P.y), F.mul(P.x, P.y), P.y, F.pow(P.x, 3), F.mul(P.x, P.x), P.x, 1};
      Code v = 0;
      for (int s = 0; s < 7; ++s) v = F.add(v, F.mul(k[s], terms[s]));
      w += v != 0;
    }
    CHECK(weight_of(code, k) == w);
    if (k != Combo{}) CHECK(w >= dd);
  }
  CHECK_THROWS_AS(weight_table(t, WeightFamily::A0B0D0, 26), DimensionMismatch);
}
