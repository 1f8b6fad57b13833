#include "ntcubic/curve.hpp"

#include <algorithm>

#include "ntcubic/error.hpp"

namespace ntcubic {

CurveTable enumerate_points(const TowerPtr& tower) {
  const Code n = tower->cubic_size();
  // Trace fibers, each listed in increasing order of y.
  std::vector<std::vector<Code>> fiber(tower->q());
  for (Code y = 0; y < n; ++y) fiber[tower->trace_code(y)].push_back(y);

  CurveTable t{tower, {}};
  t.points.reserve(std::size_t(n) * fiber[0].size());
  for (Code x = 0; x < n; ++x)
    for (Code y : fiber[tower->norm_code(x)]) t.points.push_back({x, y});
  return t;
}

bool is_on_curve(const FieldTower& tower, Element x, Element y) {
  if (x.level != Level::Cubic || y.level != Level::Cubic)
    throw WrongLevel("curve coordinates must lie in F_{q^3}");
  return tower.norm_code(x.code) == tower.trace_code(y.code);
}

std::pair<std::uint64_t, std::uint64_t> semigroup_generators(const FieldTower& tower) {
  const std::uint64_t q = tower.q();
  return {q * q, q * q + q + 1};
}

CurvePoint apply_automorphism(const FieldTower& tower, Code a, Code b, CurvePoint P) {
  const Field& F = tower.Fq3();
  return {F.mul(b, P.x), F.add(F.mul(tower.norm_code(b), P.y), a)};
}

AutomorphismCheck verify_automorphisms(const CurveTable& table) {
  const FieldTower& t = *table.tower;
  const Code n = t.cubic_size();
  AutomorphismCheck r{0, true};
  std::vector<CurvePoint> image(table.points.size());
  for (Code a = 0; a < n; ++a) {
    if (t.trace_code(a) != 0) continue;
    for (Code b = 1; b < n; ++b) {
      ++r.count_checked;
      for (std::size_t i = 0; i < image.size(); ++i) image[i] = apply_automorphism(t, a, b, table.points[i]);
      std::sort(image.begin(), image.end());
      if (image != table.points) r.all_preserve = false;
    }
  }
  return r;
}

}  // namespace ntcubic
