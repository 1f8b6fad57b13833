#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ntcubic/gf.hpp"

namespace ntcubic {

/// Affine point of the norm-trace curve N(x) = T(y) over F_{q^3}.
struct CurvePoint {
  Code x = 0, y = 0;
  friend auto operator<=>(const CurvePoint&, const CurvePoint&) = default;
};

/// All q^5 affine points, sorted by (x, y) code.
struct CurveTable {
  TowerPtr tower;
  std::vector<CurvePoint> points;
};

CurveTable enumerate_points(const TowerPtr& tower);

/// Throws WrongLevel unless both coordinates are F_{q^3} elements.
bool is_on_curve(const FieldTower& tower, Element x, Element y);

/// Generators (q^2, q^2 + q + 1) of the Weierstrass semigroup at infinity.
std::pair<std::uint64_t, std::uint64_t> semigroup_generators(const FieldTower& tower);

struct AutomorphismCheck {
  std::uint64_t count_checked = 0;
  bool all_preserve = false;
};

/// Checks every map (x, y) -> (b x, N(b) y + a) with T(a) = 0, b != 0 against
/// the full point set: each must send the set onto itself.
AutomorphismCheck verify_automorphisms(const CurveTable& table);

/// (x, y) -> (b x, N(b) y + a).
CurvePoint apply_automorphism(const FieldTower& tower, Code a, Code b, CurvePoint P);

}  // namespace ntcubic
