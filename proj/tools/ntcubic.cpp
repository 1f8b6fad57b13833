#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ntcubic/agcode.hpp"
#include "ntcubic/census.hpp"
#include "ntcubic/curve.hpp"
#include "ntcubic/error.hpp"
#include "ntcubic/surface.hpp"
#include "ntcubic/version.hpp"

using namespace ntcubic;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kCounterexample = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TowerPtr tower_for(std::uint64_t q) {
  if (q < 2) throw UsageError("--q: " + std::to_string(q) + " is not a prime power");
  std::uint64_t p = 2;
  while (q % p) ++p;
  std::uint32_t h = 0;
  for (std::uint64_t r = q; r > 1; r /= p, ++h)
    if (r % p) throw UsageError("--q: " + std::to_string(q) + " is not a prime power");
  try {
    return FieldTower::build(std::uint32_t(p), h);
  } catch (const Error& e) {
    throw UsageError("--q: " + std::string(e.what()));
  }
}

std::vector<Code> parse_coeffs(const std::string& text, std::size_t count, const FieldTower& t) {
  std::vector<Code> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(item, &pos);
      if (pos != item.size() || v >= t.cubic_size()) throw std::out_of_range("");
      out.push_back(Code(v));
    } catch (const std::logic_error&) {
      throw UsageError("--coeffs: '" + item + "' is not an element code below " + std::to_string(t.cubic_size()));
    }
  }
  if (out.size() != count)
    throw UsageError("--coeffs: expected " + std::to_string(count) + " comma-separated codes, got " +
                     std::to_string(out.size()));
  return out;
}

// sum c_i t^i over the immediate base; base coefficients print as codes.
std::string pretty(const Field& F, Code x) {
  const auto d = F.digits(x);
  std::string s;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (d[i] == 0) continue;
    std::string c = std::to_string(d[i]);
    if (F.base_size() > 10 && i > 0) c = "(" + c + ")";
    std::string term = i == 0 ? c : (d[i] == 1 ? "" : c) + (i == 1 ? "t" : "t^" + std::to_string(i));
    s += (s.empty() ? "" : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

std::string poly_string(const std::vector<Code>& m, const char* var) {
  std::string s;
  for (std::size_t i = m.size(); i-- > 0;) {
    if (m[i] == 0) continue;
    std::string term = i == 0 ? std::to_string(m[i])
                              : (m[i] == 1 ? "" : std::to_string(m[i])) + var + (i == 1 ? "" : "^" + std::to_string(i));
    s += (s.empty() ? "" : " + ") + term;
  }
  return s;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("--out: cannot open " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  std::uint64_t q = 0;
  std::string out;
  std::string emit = "csv";
  unsigned workers = 0;
  std::uint64_t seed = 1;
  bool pretty = false;
};

int field_info(const Common& c) {
  auto t = tower_for(c.q);
  json j;
  j["metadata"] = run_metadata(*t, c.seed);
  j["tower"] = {{"p", t->p()}, {"h", t->h()}, {"modulus1", t->modulus1()}, {"modulus2", t->modulus2()}};
  j["q"] = t->q();
  j["cubic_size"] = t->cubic_size();
  j["alpha"] = t->alpha();
  j["conjugates"] = t->conjugates();
  j["psi_matrix"] = t->psi_matrix();
  j["norm_alpha"] = t->norm_code(t->alpha());
  j["trace_alpha"] = t->trace_code(t->alpha());
  if (c.pretty) {
    j["pretty"] = {{"modulus1", poly_string(t->modulus1(), "g")},
                   {"modulus2", poly_string(t->modulus2(), "t")},
                   {"alpha", pretty(t->Fq3(), t->alpha())}};
  }
  Output out(c.out);
  out.stream() << j.dump(1) << '\n';
  return kOk;
}

int curve_points(const Common& c) {
  auto t = tower_for(c.q);
  auto table = enumerate_points(t);
  Output out(c.out);
  auto& os = out.stream();
  os << "#";
  for (const auto& [k, v] : run_metadata(*t, c.seed)) os << ' ' << k << '=' << v;
  os << " points=" << table.points.size() << '\n';
  os << "x,y\n";
  for (auto P : table.points) {
    if (c.pretty)
      os << pretty(t->Fq3(), P.x) << ',' << pretty(t->Fq3(), P.y) << '\n';
    else
      os << P.x << ',' << P.y << '\n';
  }
  return kOk;
}

int intersect(const Common& c, const std::string& coeffs) {
  auto t = tower_for(c.q);
  const auto v = parse_coeffs(coeffs, 4, *t);
  Output out(c.out);
  out.stream() << intersect_count(*t, v[0], v[1], v[2], v[3]) << '\n';
  return kOk;
}

int classify_cmd(const Common& c, const std::string& coeffs) {
  auto t = tower_for(c.q);
  const auto v = parse_coeffs(coeffs, 4, *t);
  const Code E = t->trace_code(v[3]);
  const CubicForm form = S1Builder(t).form(v[0], v[1], v[2], E);
  const SurfaceClass cls = classify(form);
  const std::uint64_t count = count_points(form), proj = count_points_projective(form);
  json j;
  j["metadata"] = run_metadata(*t, c.seed);
  j["coeffs"] = v;
  j["E"] = E;
  j["verdict"] = to_string(cls.verdict);
  j["delta"] = cls.delta;
  j["pattern"] = cls.pattern;
  j["label"] = cls.label();
  j["count_d1"] = count;
  j["count_projective"] = proj;
  j["eta"] = eta_string(std::int64_t(count), t->q());
  json bounds = json::object();
  for (const auto& b : class_bounds(cls, t->q(), count, proj)) bounds[b.name] = b.ok;
  const bool goal = v[0] != 0 && goal_class(cls.verdict);
  if (goal) bounds["goal"] = count <= goal_bound(t->q());
  j["bounds"] = bounds;
  if (c.pretty) j["form"] = form.to_string();
  Output out(c.out);
  out.stream() << j.dump(1) << '\n';
  return goal && count > goal_bound(t->q()) ? kCounterexample : kOk;
}

int census_cmd(const Common& c, const std::string& family_name, std::optional<std::uint64_t> sample) {
  auto t = tower_for(c.q);
  const auto family = family_from_string(family_name);
  if (!family) throw UsageError("--family: unknown family '" + family_name + "' (all, A_nonzero, B0C0, a0_paper)");
  if (c.emit != "csv" && c.emit != "json") throw UsageError("--emit: expected csv or json");
  CensusOptions opt;
  opt.workers = c.workers;
  opt.seed = c.seed;
  opt.sample = sample;
  CensusResult res;
  try {
    res = full_census(t, *family, opt);
  } catch (const TooLarge& e) {
    throw UsageError(std::string("--q: ") + e.what());
  }
  Output out(c.out);
  if (c.emit == "csv")
    write_census_csv(out.stream(), res, c.seed);
  else
    write_census_json(out.stream(), res, c.seed);

  const auto& s = res.summary;
  std::cerr << "census q=" << t->q() << " family=" << to_string(*family) << ": " << s.tuples << " records, "
            << s.surfaces << " surfaces, " << s.counterexamples.size() << " counterexamples to count <= "
            << goal_bound(t->q()) << ", " << s.crosscheck_failures << " cross-check failures\n";
  for (const auto& [name, b] : s.bounds)
    if (b.violated) std::cerr << "  bound " << name << ": " << b.violated << " of " << b.checked << " violated\n";
  return s.counterexamples.empty() && s.crosscheck_failures == 0 ? kOk : kCounterexample;
}

int special_cmd(const Common& c, const std::string& coeffs) {
  auto t = tower_for(c.q);
  std::vector<std::pair<Code, Code>> cases;
  if (!coeffs.empty()) {
    const auto v = parse_coeffs(coeffs, 2, *t);
    if (v[0] == 0) throw UsageError("--coeffs: A must be nonzero");
    cases.push_back({v[0], v[1]});
  } else {
    // The surface depends on D only through E = T(D): one D per trace value.
    std::vector<std::optional<Code>> rep(t->q());
    for (Code D = 0; D < t->cubic_size(); ++D)
      if (!rep[t->trace_code(D)]) rep[t->trace_code(D)] = D;
    for (Code A = 1; A < t->cubic_size(); ++A)
      for (const auto& D : rep) cases.push_back({A, *D});
  }
  Output out(c.out);
  auto& os = out.stream();
  os << "#";
  for (const auto& [k, v] : run_metadata(*t, c.seed)) os << ' ' << k << '=' << v;
  os << '\n' << "A,D,E,norm_A,degenerate,prediction,locus,pattern,infinity_points,matches\n";
  std::uint64_t mismatches = 0;
  for (auto [A, D] : cases) {
    SpecialCaseReport r;
    try {
      r = special_case_B0C0(t, A, D);
    } catch (const TooLarge& e) {
      throw UsageError(std::string("--q: ") + e.what());
    }
    mismatches += !r.matches;
    std::string pattern;
    for (auto d : r.locus.pattern()) pattern += (pattern.empty() ? "" : ";") + std::to_string(d);
    os << A << ',' << D << ',' << r.E << ',' << r.norm_A << ',' << (r.degenerate_expected ? "true" : "false") << ','
       << r.prediction << ',' << (r.locus.exceeded ? "exceeded" : std::to_string(r.locus.points.size())) << ','
       << pattern << ',' << r.infinity_points << ',' << (r.matches ? "true" : "false") << '\n';
  }
  std::cerr << "special-b0c0 q=" << t->q() << ": " << cases.size() << " cases, " << mismatches << " mismatches\n";
  return mismatches ? kCounterexample : kOk;
}

int code_weights(const Common& c, std::uint64_t k, const std::string& family_name) {
  auto t = tower_for(c.q);
  const auto family = weight_family_from_string(family_name);
  if (!family) throw UsageError("--family: unknown family '" + family_name + "' (a0b0d0, a0b0_dnonzero, full)");
  if (c.emit != "csv" && c.emit != "json") throw UsageError("--emit: expected csv or json");
  WeightTable table;
  try {
    table = weight_table(t, *family, k, c.workers);
  } catch (const TooLarge& e) {
    throw UsageError(std::string("--q: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw UsageError(std::string("--k: ") + e.what());
  }
  Output out(c.out);
  if (c.emit == "csv")
    write_weight_table_csv(out.stream(), table, c.seed);
  else
    write_weight_table_json(out.stream(), table, c.seed);

  if (std::none_of(table.basis.monomials.begin(), table.basis.monomials.end(),
                   [](const BasisMonomial& m) { return m.j == 2; }))
    std::cerr << "note: y^2 is not in L(" << table.k << " P_inf) at q=" << t->q() << "; basis is "
              << basis_string(table.basis) << '\n';
  std::uint64_t failed = 0;
  for (const auto& r : table.rows) failed += !r.ok;
  std::cerr << "code-weights q=" << t->q() << " k=" << table.k << " family=" << to_string(*family) << ": "
            << table.functions << " functions, " << table.rows.size() << " rows, " << failed
            << " rows contradict the stated weight, min nonzero weight " << table.min_nonzero_weight
            << " (designed " << table.designed_distance << "), " << table.fiber_mismatches << " fiber mismatches\n";
  return failed || table.goppa_violations || table.fiber_mismatches ? kCounterexample : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic surfaces and the norm-trace curve over F_{q^3}"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common c;
  std::string coeffs, family;
  std::uint64_t k = 0;
  std::optional<std::uint64_t> sample;

  auto add_common = [&](CLI::App* sub, bool emit) {
    sub->add_option("--q", c.q, "Field size q = p^h")->required();
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--seed", c.seed, "Seed, recorded in every header and used for sampling");
    sub->add_option("--workers", c.workers, "Worker threads (0: all cores)");
    sub->add_flag("--pretty", c.pretty, "Print elements as polynomials where applicable");
    if (emit) sub->add_option("--emit", c.emit, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* fi = app.add_subcommand("field-info", "Tower moduli, normal element and conjugate matrix (JSON)");
  add_common(fi, false);
  auto* cp = app.add_subcommand("curve-points", "All q^5 affine points of N(x) = T(y) (CSV x,y)");
  add_common(cp, false);
  auto* in = app.add_subcommand("intersect", "x-count of the curve on y = Ax^3 + Bx^2 + Cx + D");
  add_common(in, false);
  in->add_option("--coeffs", coeffs, "A,B,C,D as element codes")->required();
  auto* cl = app.add_subcommand("classify", "Classify the S_1 surface of A,B,C,D (JSON)");
  add_common(cl, false);
  cl->add_option("--coeffs", coeffs, "A,B,C,D as element codes")->required();
  auto* ce = app.add_subcommand("census", "Classify and count a family of tuples");
  add_common(ce, true);
  ce->add_option("--family", family, "all, A_nonzero, B0C0 or a0_paper")->required();
  ce->add_option("--sample", sample, "Random tuples instead of an exhaustive sweep");
  auto* sp = app.add_subcommand("special-b0c0", "Singular loci for B = C = 0 against the predictions");
  add_common(sp, false);
  sp->add_option("--coeffs", coeffs, "A,D (default: every A != 0 and every trace of D)");
  auto* cw = app.add_subcommand("code-weights", "Weight table of the one-point code by case");
  add_common(cw, true);
  cw->add_option("--k", k, "Divisor degree (default 3q^2)");
  cw->add_option("--family", family, "a0b0d0, a0b0_dnonzero or full")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fi) return field_info(c);
    if (*cp) return curve_points(c);
    if (*in) return intersect(c, coeffs);
    if (*cl) return classify_cmd(c, coeffs);
    if (*ce) return census_cmd(c, family, sample);
    if (*sp) return special_cmd(c, coeffs);
    if (*cw) return code_weights(c, k, family);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
