#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ntcubic/surface.hpp"

namespace ntcubic {

/// |{x in F_{q^3} : N(x) = T(Ax^3 + Bx^2 + Cx + D)}|, the x-count of the
/// intersection of the norm-trace curve with y = Ax^3 + Bx^2 + Cx + D.
std::uint64_t intersect_count(const FieldTower& tower, Code A, Code B, Code C, Code D);

/// (count - q^2 - 1)/q as an integer string, or as a reduced fraction.
std::string eta_string(std::int64_t count, std::uint32_t q);

struct BoundCheck {
  std::string name;
  bool ok = true;
};

/// The per-class bounds that apply to a surface with this classification.
/// Names: weil, 1singular, 2singular, 3singular, 4singular, cone_singular,
/// cone_smooth, reducible, nonisolated. Weil is checked on the projective
/// count, everything else on the affine count.
std::vector<BoundCheck> class_bounds(const SurfaceClass& cls, std::uint32_t q, std::uint64_t count,
                                     std::uint64_t count_projective);

/// Classes covered by the q^2 + 7q + 1 bound (for A != 0).
bool goal_class(Verdict v);
std::uint64_t goal_bound(std::uint32_t q);

enum class Family { All, ANonzero, B0C0, AZero };
std::string to_string(Family f);
std::optional<Family> family_from_string(const std::string& s);

/// Classification and counts of one S_1 surface, shared by the q^2 tuples
/// (A, B, C, D) with the same E = T(D).
struct SurfaceReport {
  Code A = 0, B = 0, C = 0, E = 0;
  SurfaceClass cls;
  std::uint64_t count = 0;             // affine, = count_points(S_1)
  std::uint64_t count_projective = 0;
  std::vector<BoundCheck> bounds;
  bool goal_applies = false;
  bool goal_ok = true;

  bool bounds_ok() const;
  std::string bound_names() const;  // "goal;1singular", "weil", ...
};

struct CensusRecord {
  Code A = 0, B = 0, C = 0, D = 0;
  std::uint64_t intersection_count = 0;
  std::uint32_t surface = 0;  // index into CensusResult::surfaces
};

struct VerdictStats {
  std::uint64_t tuples = 0;
  std::uint64_t max_count = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // count -> tuples
};

struct BoundTally {
  std::uint64_t checked = 0, violated = 0;
};

struct CensusSummary {
  std::uint64_t tuples = 0;
  std::uint64_t surfaces = 0;
  std::map<std::string, VerdictStats> per_class;  // keyed by SurfaceClass::label()
  std::map<std::string, BoundTally> bounds;        // includes "goal"
  std::vector<CensusRecord> counterexamples;       // goal-class tuples above q^2 + 7q + 1
  std::uint64_t crosscheck_failures = 0;           // intersect_count != count_points
};

struct CensusOptions {
  unsigned workers = 0;                 // 0: hardware concurrency
  std::optional<std::uint64_t> sample;  // random tuples instead of a full sweep
  std::uint64_t seed = 1;
  bool keep_records = true;
};

struct CensusResult {
  TowerPtr tower;
  Family family = Family::All;
  std::vector<SurfaceReport> surfaces;
  std::vector<CensusRecord> records;  // canonical tuple order
  CensusSummary summary;

  const SurfaceReport& report(const CensusRecord& r) const { return surfaces[r.surface]; }
};

/// Number of tuples in a family.
std::uint64_t family_size(const FieldTower& tower, Family family);

/// Throws TooLarge for exhaustive sweeps beyond q = 3 (q = 4 for B0C0).
CensusResult full_census(const TowerPtr& tower, Family family, const CensusOptions& opt = {});

struct SpecialCaseReport {
  Code A = 0, D = 0, E = 0;
  std::uint32_t characteristic = 0;
  Code norm_A = 0;
  bool degenerate_expected = false;  // N(A) = 1 in char 2, 27 N(A) = 1 otherwise
  std::string expectation;           // human-readable prediction
  std::string prediction;            // axes3, none, nonisolated or origin
  SingularLocus locus;  // of S_2 in char 3 with E != 0, of S_1 otherwise
  bool matches = false;  // affine singular points and non-isolation as predicted
  /// Singular points on w = 0. Predicted absent; they do occur when the
  /// degeneracy condition holds with E != 0.
  std::size_t infinity_points = 0;
};

/// Singular locus of S_2 with B = C = 0 against the prediction for char(F_q):
/// no affine singular point unless E = 0; for E = 0 only the origin, or a
/// non-isolated locus when N(A) = 1 (char 2) / 27 N(A) = 1 (char != 2, 3);
/// in char 3 with E != 0 exactly one point on each coordinate axis.
SpecialCaseReport special_case_B0C0(const TowerPtr& tower, Code A, Code D);

/// Metadata header fields shared by every emitted file.
std::map<std::string, std::string> run_metadata(const FieldTower& tower, std::uint64_t seed);

void write_census_csv(std::ostream& out, const CensusResult& result, std::uint64_t seed);
void write_census_json(std::ostream& out, const CensusResult& result, std::uint64_t seed);

}  // namespace ntcubic
