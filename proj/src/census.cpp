#include "ntcubic/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ntcubic/error.hpp"
#include "ntcubic/version.hpp"
#include "parallel.hpp"

namespace ntcubic {

std::uint64_t intersect_count(const FieldTower& t, Code A, Code B, Code C, Code D) {
  const Field& F = t.Fq3();
  std::uint64_t n = 0;
  for (Code x = 0; x < F.size(); ++x) {
    const Code x2 = F.mul(x, x);
    const Code v = F.add(F.add(F.mul(A, F.mul(x2, x)), F.mul(B, x2)), F.add(F.mul(C, x), D));
    if (t.norm_code(x) == t.trace_code(v)) ++n;
  }
  return n;
}

std::string eta_string(std::int64_t count, std::uint32_t q) {
  const std::int64_t num = count - std::int64_t(q) * q - 1;
  if (num % std::int64_t(q) == 0) return std::to_string(num / std::int64_t(q));
  const std::int64_t g = std::gcd(num < 0 ? -num : num, std::int64_t(q));
  return std::to_string(num / g) + "/" + std::to_string(std::int64_t(q) / g);
}

bool goal_class(Verdict v) {
  return v == Verdict::Smooth || v == Verdict::Isolated || v == Verdict::NonIsolatedNotCone ||
         v == Verdict::ConeOverSingularCubic;
}

std::uint64_t goal_bound(std::uint32_t q) {
  return std::uint64_t(q) * q + 7ull * q + 1;
}

std::vector<BoundCheck> class_bounds(const SurfaceClass& cls, std::uint32_t q, std::uint64_t count,
                                     std::uint64_t count_projective) {
  const std::int64_t Q = q, n = std::int64_t(count);
  std::vector<BoundCheck> out;
  switch (cls.verdict) {
    case Verdict::Smooth: {
      const std::int64_t num = std::int64_t(count_projective) - Q * Q - 1;
      bool ok = num % Q == 0;
      if (ok) {
        const std::int64_t eta = num / Q;
        ok = eta >= -2 && eta <= 7 && eta != 6;
      }
      out.push_back({"weil", ok});
      break;
    }
    case Verdict::Isolated: {
      const auto& p = cls.pattern;
      const auto twos = std::count(p.begin(), p.end(), 2u);
      if (std::count(p.begin(), p.end(), 1u) > 0) out.push_back({"1singular", n <= Q * Q + 6 * Q - 6});
      if (twos >= 2) {
        bool ok = n <= Q * Q - Q;
        // The lower bound is only meaningful from q = 17 on.
        if (q >= 17) ok = ok && n >= Q * Q - 14 * Q + 39;
        out.push_back({"2singular", ok});
      }
      if (p == std::vector<unsigned>{3, 3, 3}) {
        const std::int64_t num = n - Q * Q - 1;
        out.push_back({"3singular", num % Q == 0 && num / Q >= 0 && num / Q <= 2});
      }
      if (p == std::vector<unsigned>{4, 4, 4, 4}) out.push_back({"4singular", n <= Q * Q});
      break;
    }
    case Verdict::ConeOverSingularCubic:
      out.push_back({"cone_singular", n <= Q * Q + 2 * Q + 1});
      break;
    case Verdict::ConeOverSmoothCubic: {
      // n <= q^2 + 2 q sqrt(q) + 1, in integers.
      const std::int64_t d = n - Q * Q - 1;
      out.push_back({"cone_smooth", d <= 0 || d * d <= 4 * Q * Q * Q});
      break;
    }
    case Verdict::Reducible:
      out.push_back({"reducible", n <= 3 * Q * Q});
      break;
    case Verdict::NonIsolatedNotCone:
      out.push_back({"nonisolated", n <= 3 * Q * Q && n <= Q * Q + 7 * Q + 1});
      break;
  }
  return out;
}

bool SurfaceReport::bounds_ok() const {
  if (goal_applies && !goal_ok) return false;
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.ok; });
}

std::string SurfaceReport::bound_names() const {
  std::string s = goal_applies ? "goal" : "";
  for (const auto& b : bounds) s += (s.empty() ? "" : ";") + b.name;
  return s.empty() ? "none" : s;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::All:
      return "all";
    case Family::ANonzero:
      return "A_nonzero";
    case Family::B0C0:
      return "B0C0";
    case Family::AZero:
      return "a0_paper";
  }
  return "?";
}

std::optional<Family> family_from_string(const std::string& s) {
  for (auto f : {Family::All, Family::ANonzero, Family::B0C0, Family::AZero})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

std::uint64_t family_size(const FieldTower& t, Family family) {
  const std::uint64_t n = t.cubic_size();
  switch (family) {
    case Family::All:
      return n * n * n * n;
    case Family::ANonzero:
      return (n - 1) * n * n * n;
    case Family::B0C0:
      return (n - 1) * n;
    case Family::AZero:
      return n * n * n;
  }
  return 0;
}

namespace {

struct Tuple {
  Code A, B, C, D;
};

// Canonical order of a family: A, then B, C, D, each by code.
Tuple tuple_at(const FieldTower& t, Family family, std::uint64_t i) {
  const std::uint64_t n = t.cubic_size();
  switch (family) {
    case Family::All:
      return {Code(i / (n * n * n)), Code(i / (n * n) % n), Code(i / n % n), Code(i % n)};
    case Family::ANonzero:
      return {Code(1 + i / (n * n * n)), Code(i / (n * n) % n), Code(i / n % n), Code(i % n)};
    case Family::B0C0:
      return {Code(1 + i / n), 0, 0, Code(i % n)};
    case Family::AZero:
      return {0, Code(i / (n * n)), Code(i / n % n), Code(i % n)};
  }
  return {};
}

}  // namespace

CensusResult full_census(const TowerPtr& tower, Family family, const CensusOptions& opt) {
  const FieldTower& t = *tower;
  const std::uint32_t q = t.q();
  const std::uint64_t n = t.cubic_size();
  if (!opt.sample) {
    const std::uint32_t max_q = family == Family::B0C0 ? 4 : 3;
    if (q > max_q) throw TooLarge("exhaustive census beyond q = " + std::to_string(max_q) + "; use sampling");
  }

  std::vector<std::uint64_t> indices;
  const std::uint64_t size = family_size(t, family);
  if (opt.sample && *opt.sample < size) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
    std::vector<std::uint64_t> v;
    v.reserve(*opt.sample);
    while (v.size() < *opt.sample) v.push_back(pick(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    indices = std::move(v);
  } else {
    indices.resize(size);
    std::iota(indices.begin(), indices.end(), 0);
  }

  // One surface per (A, B, C, E).
  auto key_of = [&](Code A, Code B, Code C, Code E) { return ((std::uint64_t(A) * n + B) * n + C) * q + E; };
  std::vector<std::int32_t> slot(n * n * n * q, -1);
  CensusResult res;
  res.tower = tower;
  res.family = family;
  std::vector<Tuple> tuples;
  tuples.reserve(indices.size());
  for (auto i : indices) {
    const Tuple tp = tuple_at(t, family, i);
    tuples.push_back(tp);
    const Code E = t.trace_code(tp.D);
    auto& s = slot[key_of(tp.A, tp.B, tp.C, E)];
    if (s < 0) {
      s = std::int32_t(res.surfaces.size());
      SurfaceReport r;
      r.A = tp.A;
      r.B = tp.B;
      r.C = tp.C;
      r.E = E;
      res.surfaces.push_back(r);
    }
  }

  const S1Builder builder(tower);
  detail::parallel_for(res.surfaces.size(), opt.workers, [&](std::size_t i) {
    SurfaceReport& r = res.surfaces[i];
    const CubicForm f = builder.form(r.A, r.B, r.C, r.E);
    r.cls = classify(f);
    r.count = count_points(f);
    r.count_projective = count_points_projective(f);
    r.bounds = class_bounds(r.cls, q, r.count, r.count_projective);
    r.goal_applies = r.A != 0 && goal_class(r.cls.verdict);
    r.goal_ok = r.count <= goal_bound(q);
  });

  std::vector<CensusRecord> records(tuples.size());
  detail::parallel_for(tuples.size(), opt.workers, [&](std::size_t i) {
    const Tuple& tp = tuples[i];
    records[i] = {tp.A, tp.B, tp.C, tp.D, intersect_count(t, tp.A, tp.B, tp.C, tp.D),
                  std::uint32_t(slot[key_of(tp.A, tp.B, tp.C, t.trace_code(tp.D))])};
  });

  CensusSummary& sum = res.summary;
  sum.tuples = records.size();
  sum.surfaces = res.surfaces.size();
  for (const auto& rec : records) {
    const SurfaceReport& r = res.surfaces[rec.surface];
    if (rec.intersection_count != r.count) ++sum.crosscheck_failures;
    auto& st = sum.per_class[r.cls.label()];
    ++st.tuples;
    st.max_count = std::max(st.max_count, rec.intersection_count);
    ++st.histogram[rec.intersection_count];
    for (const auto& b : r.bounds) {
      auto& tally = sum.bounds[b.name];
      ++tally.checked;
      if (!b.ok) ++tally.violated;
    }
    if (r.goal_applies) {
      auto& tally = sum.bounds["goal"];
      ++tally.checked;
      if (rec.intersection_count > goal_bound(q)) {
        ++tally.violated;
        sum.counterexamples.push_back(rec);
      }
    }
  }
  if (opt.keep_records) res.records = std::move(records);
  return res;
}

SpecialCaseReport special_case_B0C0(const TowerPtr& tower, Code A, Code D) {
  const FieldTower& t = *tower;
  if (A == 0) throw Error("special case requires A != 0");
  const Field& F = t.Fq3();
  SpecialCaseReport r;
  r.A = A;
  r.D = D;
  r.E = t.trace_code(D);
  r.characteristic = t.p();
  r.norm_A = t.norm_code(A);
  const Field& Fq = t.Fq();
  if (t.p() == 2) {
    r.degenerate_expected = r.norm_A == 1;
  } else if (t.p() != 3) {
    r.degenerate_expected = Fq.mul(Fq.from_int(27), r.norm_A) == 1;
  }
  const Element zero{Level::Cubic, 0};
  if (t.p() == 3 && r.E != 0) {
    r.locus = singular_locus(build_s2(tower, {Level::Cubic, A}, zero, zero, {Level::Cubic, D}));
  } else {
    // psi is linear and fixes the origin and the plane w = 0, so emptiness,
    // "origin only" and non-isolation read the same on S_1, whose points
    // need no field larger than F_{q^4}.
    r.locus = singular_locus(build_s1(tower, {Level::Cubic, A}, zero, zero, {Level::Cubic, D}));
  }
  std::vector<const SingularPoint*> affine;
  for (const auto& P : r.locus.points) {
    if (P.at_infinity())
      ++r.infinity_points;
    else
      affine.push_back(&P);
  }

  if (t.p() == 3 && r.E != 0) {
    r.expectation = "three points on the coordinate axes with A^(q^i) c^3 = -E";
    r.prediction = "axes3";
    const Code Ai[3] = {A, F.frobenius(A, 1), F.frobenius(A, 2)};
    bool ok = !r.locus.exceeded && affine.size() == 3;
    std::array<bool, 3> axes{};
    for (const auto* P : affine) {
      if (!ok) break;
      const Field& K = *P->field;
      int axis = -1, nonzero = 0;
      for (int i = 0; i < 3; ++i)
        if (P->X[i] != 0) ++nonzero, axis = i;
      ok = nonzero == 1 && !axes[axis] && K.mul(Ai[axis], K.pow(P->X[axis], 3)) == K.neg(r.E);
      if (ok) axes[axis] = true;
    }
    r.matches = ok;
  } else if (r.E != 0) {
    // A singular point of the affine system forces E = 0.
    r.expectation = "no affine singular points";
    r.prediction = "none";
    r.matches = !r.locus.exceeded && affine.empty();
  } else if (r.degenerate_expected) {
    r.expectation = t.p() == 2 ? "N(A) = 1, E = 0: non-isolated singular locus"
                               : "27 N(A) = 1, E = 0: non-isolated singular locus";
    r.prediction = "nonisolated";
    r.matches = r.locus.exceeded;
  } else {
    r.expectation = "only (0,0,0)";
    r.prediction = "origin";
    r.matches = !r.locus.exceeded && affine.size() == 1 && affine[0]->X == std::array<Code, 4>{0, 0, 0, 1};
  }
  return r;
}

std::map<std::string, std::string> run_metadata(const FieldTower& t, std::uint64_t seed) {
  auto poly = [](const std::vector<Code>& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ";" : "") + std::to_string(m[i]);
    return "[" + s + "]";
  };
  return {{"tool", "ntcubic"},
          {"version", kVersion},
          {"p", std::to_string(t.p())},
          {"h", std::to_string(t.h())},
          {"q", std::to_string(t.q())},
          {"modulus1", poly(t.modulus1())},
          {"modulus2", poly(t.modulus2())},
          {"alpha", std::to_string(t.alpha())},
          {"seed", std::to_string(seed)}};
}

namespace {

// "3;3;3", empty for no singular points; keeps the CSV free of quoting.
std::string pattern_string(const std::vector<unsigned>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + std::to_string(p[i]);
  return s;
}

}  // namespace

void write_census_csv(std::ostream& out, const CensusResult& res, std::uint64_t seed) {
  out << "#";
  for (const auto& [k, v] : run_metadata(*res.tower, seed)) out << ' ' << k << '=' << v;
  out << " family=" << to_string(res.family) << '\n';
  out << "A,B,C,D,count,verdict,delta,pattern,eta,bound,bound_ok\n";
  const std::uint32_t q = res.tower->q();
  for (const auto& rec : res.records) {
    const SurfaceReport& r = res.report(rec);
    out << rec.A << ',' << rec.B << ',' << rec.C << ',' << rec.D << ',' << rec.intersection_count << ','
        << to_string(r.cls.verdict) << ',' << r.cls.delta << ',' << pattern_string(r.cls.pattern) << ','
        << eta_string(std::int64_t(rec.intersection_count), q) << ',' << r.bound_names() << ','
        << (r.bounds_ok() && rec.intersection_count == r.count ? "true" : "false") << '\n';
  }
}

void write_census_json(std::ostream& out, const CensusResult& res, std::uint64_t seed) {
  using nlohmann::json;
  json j;
  j["metadata"] = run_metadata(*res.tower, seed);
  j["family"] = to_string(res.family);
  const auto& s = res.summary;
  json sum{{"tuples", s.tuples},
           {"surfaces", s.surfaces},
           {"crosscheck_failures", s.crosscheck_failures},
           {"goal_bound", goal_bound(res.tower->q())}};
  for (const auto& [label, st] : s.per_class) {
    json h = json::object();
    for (auto [c, k] : st.histogram) h[std::to_string(c)] = k;
    sum["per_class"][label] = {{"tuples", st.tuples}, {"max_count", st.max_count}, {"histogram", h}};
  }
  for (const auto& [name, b] : s.bounds) sum["bounds"][name] = {{"checked", b.checked}, {"violated", b.violated}};
  sum["counterexamples"] = json::array();
  for (const auto& c : s.counterexamples)
    sum["counterexamples"].push_back({{"A", c.A}, {"B", c.B}, {"C", c.C}, {"D", c.D}, {"count", c.intersection_count},
                                      {"class", res.report(c).cls.label()}});
  j["summary"] = sum;
  json recs = json::array();
  for (const auto& rec : res.records) {
    const SurfaceReport& r = res.report(rec);
    recs.push_back({{"A", rec.A},
                    {"B", rec.B},
                    {"C", rec.C},
                    {"D", rec.D},
                    {"count", rec.intersection_count},
                    {"verdict", to_string(r.cls.verdict)},
                    {"delta", r.cls.delta},
                    {"pattern", r.cls.pattern},
                    {"eta", eta_string(std::int64_t(rec.intersection_count), res.tower->q())},
                    {"bound", r.bound_names()},
                    {"bound_ok", r.bounds_ok() && rec.intersection_count == r.count}});
  }
  j["records"] = std::move(recs);
  out << j.dump(1) << '\n';
}

}  // namespace ntcubic
