#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ntcubic/curve.hpp"

namespace ntcubic {

/// x^i y^j with pole order i q^2 + j (q^2 + q + 1) at the point at infinity.
struct BasisMonomial {
  unsigned i = 0, j = 0;
  std::uint64_t pole = 0;
  friend bool operator==(const BasisMonomial&, const BasisMonomial&) = default;
};

struct MonomialBasis {
  std::uint64_t k = 0;
  std::vector<BasisMonomial> monomials;  // sorted by pole order
};

/// Riemann-Roch basis of L(k P_inf): j <= q^2 - 1 and pole order <= k.
MonomialBasis basis_for(const FieldTower& tower, std::uint64_t k);

/// Evaluation code C_L(D, k P_inf) over all q^5 affine points.
struct EvalCode {
  TowerPtr tower;
  CurveTable curve;
  MonomialBasis basis;
  std::vector<std::vector<Code>> rows;  // one per basis monomial
  std::size_t rank = 0;

  std::size_t length() const { return curve.points.size(); }
  std::size_t dimension() const { return basis.monomials.size(); }
};

EvalCode build_code(const TowerPtr& tower, std::uint64_t k);

/// Rank over F_{q^3} by Gaussian elimination.
std::size_t matrix_rank(const Field& F, std::vector<std::vector<Code>> rows);

/// Codeword of sum_m message[m] * row[m]; throws DimensionMismatch.
std::vector<Code> encode(const EvalCode& code, const std::vector<Code>& message);
std::uint64_t hamming_weight(const std::vector<Code>& word);

/// Coefficients (a, b, c, d, e, f, g) of a y^2 + b xy + c y + d x^3 + e x^2 + f x + g.
using Combo = std::array<Code, 7>;

/// q^5 minus the number of curve points where the combo vanishes. Throws
/// DimensionMismatch if a nonzero coefficient sits on a monomial outside the basis.
std::uint64_t weight_of(const EvalCode& code, const Combo& combo);

/// n - k; throws Error unless k < n.
std::uint64_t designed_distance(const EvalCode& code);

/// Weight -> number of codewords, over all (q^3)^dim messages. Throws
/// TooLarge beyond 2^22 codewords.
std::map<std::uint64_t, std::uint64_t> weight_spectrum(const EvalCode& code);

enum class WeightFamily { A0B0D0, A0B0DNonzero, Full };
std::string to_string(WeightFamily f);
std::optional<WeightFamily> weight_family_from_string(const std::string& s);

/// One observed weight within one case of the weight analysis.
struct WeightRow {
  std::string case_label;
  std::uint64_t weight = 0;
  std::uint64_t functions = 0;
  Combo example{};
  std::string claim;  // "=225", ">=212", "none"
  bool ok = true;
};

struct WeightTable {
  TowerPtr tower;
  WeightFamily family = WeightFamily::A0B0D0;
  std::uint64_t k = 0;
  MonomialBasis basis;
  std::uint64_t designed_distance = 0;
  std::uint64_t functions = 0;
  std::uint64_t min_nonzero_weight = 0;
  std::uint64_t goppa_violations = 0;   // nonzero functions below n - k
  std::uint64_t fiber_mismatches = 0;   // direct zero count != fiber shortcut
  std::vector<WeightRow> rows;          // sorted by case, then weight

  bool case_ok(const std::string& label) const;
  bool all_ok() const;
};

/// Exact weights of every function in the family, checked against the case
/// analysis; the Goppa check uses n - k. Zeros are counted over the point
/// table; the x-fiber count (q^2 per root for c = 0, intersect_count for
/// c != 0) is an independent cross-check. k = 0 means 3q^2; smaller k throws
/// DimensionMismatch. a0b0* families need q <= 3, Full needs q = 2.
WeightTable weight_table(const TowerPtr& tower, WeightFamily family, std::uint64_t k = 0, unsigned workers = 0);

/// "1;x;y;x^2;xy;x^3", in pole order.
std::string basis_string(const MonomialBasis& basis);

/// "a;b;c;d;e;f;g".
std::string combo_string(const Combo& combo);

/// Metadata comment line, then case,coeffs,weight,paper_bound,ok.
void write_weight_table_csv(std::ostream& out, const WeightTable& table, std::uint64_t seed);
void write_weight_table_json(std::ostream& out, const WeightTable& table, std::uint64_t seed);

}  // namespace ntcubic
