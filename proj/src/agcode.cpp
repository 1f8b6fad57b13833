#include "ntcubic/agcode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "ntcubic/census.hpp"
#include "ntcubic/error.hpp"
#include "ntcubic/surface.hpp"
#include "parallel.hpp"

namespace ntcubic {

MonomialBasis basis_for(const FieldTower& tower, std::uint64_t k) {
  const std::uint64_t q2 = std::uint64_t(tower.q()) * tower.q(), r = q2 + tower.q() + 1;
  MonomialBasis b;
  b.k = k;
  for (std::uint64_t j = 0; j < q2 && j * r <= k; ++j)
    for (std::uint64_t i = 0; i * q2 + j * r <= k; ++i) b.monomials.push_back({unsigned(i), unsigned(j), i * q2 + j * r});
  std::sort(b.monomials.begin(), b.monomials.end(), [](const auto& a, const auto& c) { return a.pole < c.pole; });
  return b;
}

std::size_t matrix_rank(const Field& F, std::vector<std::vector<Code>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const Code inv = F.inv(rows[rank][c]);
    for (auto& v : rows[rank]) v = F.mul(v, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const Code m = rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] = F.sub(rows[r][k], F.mul(m, rows[rank][k]));
    }
    ++rank;
  }
  return rank;
}

EvalCode build_code(const TowerPtr& tower, std::uint64_t k) {
  const Field& F = tower->Fq3();
  EvalCode code;
  code.tower = tower;
  code.curve = enumerate_points(tower);
  code.basis = basis_for(*tower, k);
  for (const auto& m : code.basis.monomials) {
    std::vector<Code> row;
    row.reserve(code.curve.points.size());
    for (auto P : code.curve.points) row.push_back(F.mul(F.pow(P.x, m.i), F.pow(P.y, m.j)));
    code.rows.push_back(std::move(row));
  }
  code.rank = matrix_rank(F, code.rows);
  return code;
}

std::vector<Code> encode(const EvalCode& code, const std::vector<Code>& message) {
  if (message.size() != code.dimension())
    throw DimensionMismatch("message has " + std::to_string(message.size()) + " coefficients, code dimension is " +
                            std::to_string(code.dimension()));
  const Field& F = code.tower->Fq3();
  std::vector<Code> word(code.length(), 0);
  for (std::size_t m = 0; m < message.size(); ++m) {
    if (message[m] == 0) continue;
    for (std::size_t i = 0; i < word.size(); ++i) word[i] = F.add(word[i], F.mul(message[m], code.rows[m][i]));
  }
  return word;
}

std::uint64_t hamming_weight(const std::vector<Code>& word) {
  return std::uint64_t(std::count_if(word.begin(), word.end(), [](Code c) { return c != 0; }));
}

namespace {

// (i, j) exponents of the combo slots a..g.
constexpr std::array<std::pair<unsigned, unsigned>, 7> kComboMonomials{
    {{0, 2}, {1, 1}, {0, 1}, {3, 0}, {2, 0}, {1, 0}, {0, 0}}};

}  // namespace

std::uint64_t weight_of(const EvalCode& code, const Combo& combo) {
  std::vector<Code> message(code.dimension(), 0);
  for (std::size_t s = 0; s < combo.size(); ++s) {
    const auto [i, j] = kComboMonomials[s];
    auto it = std::find_if(code.basis.monomials.begin(), code.basis.monomials.end(),
                           [&](const BasisMonomial& m) { return m.i == i && m.j == j; });
    if (it == code.basis.monomials.end()) {
      if (combo[s] != 0)
        throw DimensionMismatch("x^" + std::to_string(i) + " y^" + std::to_string(j) + " is not in L(" +
                                std::to_string(code.basis.k) + " P_inf)");
      continue;
    }
    message[std::size_t(it - code.basis.monomials.begin())] = combo[s];
  }
  return hamming_weight(encode(code, message));
}

std::uint64_t designed_distance(const EvalCode& code) {
  if (code.basis.k >= code.length())
    throw Error("designed distance needs k < n (k = " + std::to_string(code.basis.k) + ")");
  return code.length() - code.basis.k;
}

std::map<std::uint64_t, std::uint64_t> weight_spectrum(const EvalCode& code) {
  const Field& F = code.tower->Fq3();
  const std::uint64_t s = F.size(), dim = code.dimension();
  double total = std::pow(double(s), double(dim));
  if (total > double(1u << 22)) throw TooLarge("weight spectrum over more than 2^22 codewords");
  // The constant monomial has pole order 0 and comes first; its coefficient is
  // resolved for all values at once from the value histogram of the rest.
  std::map<std::uint64_t, std::uint64_t> spectrum;
  std::vector<Code> msg(dim, 0), word(code.length());
  std::vector<std::uint64_t> hist(s);
  for (;;) {
    std::fill(word.begin(), word.end(), 0);
    for (std::size_t m = 1; m < dim; ++m)
      if (msg[m])
        for (std::size_t i = 0; i < word.size(); ++i) word[i] = F.add(word[i], F.mul(msg[m], code.rows[m][i]));
    std::fill(hist.begin(), hist.end(), 0);
    for (Code v : word) ++hist[v];
    for (Code g = 0; g < s; ++g) ++spectrum[code.length() - hist[F.neg(g)]];
    std::size_t m = 1;
    while (m < dim && ++msg[m] == s) msg[m++] = 0;
    if (m == dim) break;
  }
  return spectrum;
}

std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::A0B0D0:
      return "a0b0d0";
    case WeightFamily::A0B0DNonzero:
      return "a0b0_dnonzero";
    case WeightFamily::Full:
      return "full";
  }
  return "?";
}

std::optional<WeightFamily> weight_family_from_string(const std::string& s) {
  for (auto f : {WeightFamily::A0B0D0, WeightFamily::A0B0DNonzero, WeightFamily::Full})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

bool WeightTable::case_ok(const std::string& label) const {
  return std::all_of(rows.begin(), rows.end(), [&](const WeightRow& r) { return r.case_label != label || r.ok; });
}

bool WeightTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const WeightRow& r) { return r.ok; });
}

namespace {

enum class ClaimKind { Exact, AtLeast, None };

struct Case {
  const char* label;
  ClaimKind kind;
};

// Order fixes the row order of the table.
constexpr std::array<Case, 16> kCases{{
    {"d=0&c=0&e=f=g=0", ClaimKind::Exact},
    {"d=0&c=0&e=f=0&g!=0", ClaimKind::Exact},
    {"d=0&c=0&e=0&f!=0", ClaimKind::Exact},
    {"d=0&c=0&f!=0&f^2-4eg=0", ClaimKind::Exact},
    {"d=0&c=0&otherwise", ClaimKind::Exact},
    {"d=0&c!=0&e=f=g=0", ClaimKind::Exact},
    {"d=0&c!=0&e=f=0&g!=0", ClaimKind::Exact},
    {"d=0&c!=0&e=0&f!=0", ClaimKind::AtLeast},
    {"d=0&c!=0&otherwise", ClaimKind::AtLeast},
    {"d!=0&c=0&e=f=g=0", ClaimKind::Exact},
    {"d!=0&c=0&e=f=0&g!=0", ClaimKind::Exact},
    {"d!=0&c=0&otherwise", ClaimKind::AtLeast},
    {"d!=0&c!=0&irreducible-not-smooth-cone", ClaimKind::AtLeast},
    {"d!=0&c!=0&smooth-cone", ClaimKind::AtLeast},
    {"d!=0&c!=0&reducible", ClaimKind::AtLeast},
    {"a!=0|b!=0", ClaimKind::None},
}};

std::uint64_t isqrt(std::uint64_t v) {
  auto r = std::uint64_t(std::sqrt(double(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// The weight the case analysis asserts for each case (exact or lower bound).
std::array<std::uint64_t, kCases.size()> claimed_values(std::uint64_t q) {
  const std::uint64_t n = q * q * q * q * q, q2 = q * q;
  return {0,
          n,
          n - q2,
          n - q2,
          n - 2 * q2,
          n - 1,
          n - q2,
          n - (q2 + q + 1),
          n - (q2 + 7 * q + 1),
          n - q2,
          n - q2,
          n - 3 * q2,
          n - (q2 + 7 * q + 1),
          n - (q2 + 1 + isqrt(4 * q * q2)),
          n - 3 * q2,
          0};
}

struct Dispatcher {
  const Field& F;
  const std::vector<std::uint8_t>& verdicts;  // by (A, B, C, E) for A != 0
  const FieldTower& t;

  std::size_t operator()(const Combo& k) const {
    const auto [a, b, c, d, e, f, g] = k;
    if (a != 0 || b != 0) return 15;
    if (d == 0) {
      if (c == 0) {
        if (e == 0 && f == 0) return g == 0 ? 0 : 1;
        if (e == 0) return 2;
        const Code disc = F.sub(F.mul(f, f), F.mul(F.from_int(4), F.mul(e, g)));
        if (f != 0 && disc == 0) return 3;
        return 4;
      }
      if (e == 0 && f == 0) return g == 0 ? 5 : 6;
      if (e == 0) return 7;
      return 8;
    }
    if (c == 0) {
      if (e == 0 && f == 0) return g == 0 ? 9 : 10;
      return 11;
    }
    // Zeros of cy + dx^3 + ex^2 + fx + g are the curve points on
    // y = A x^3 + B x^2 + C x + D, whose x-count is that of the S_1 surface.
    const Code ic = F.neg(F.inv(c));
    const std::uint64_t s = F.size(), q = t.q();
    const std::uint64_t key = ((std::uint64_t(F.mul(d, ic)) * s + F.mul(e, ic)) * s + F.mul(f, ic)) * q +
                              t.trace_code(F.mul(g, ic));
    const auto v = Verdict(verdicts[key]);
    if (v == Verdict::Reducible) return 14;
    if (v == Verdict::ConeOverSmoothCubic) return 13;
    return 12;
  }
};

struct Cell {
  std::uint64_t functions = 0;
  Combo example{};
};

struct Partial {
  std::map<std::pair<std::size_t, std::uint64_t>, Cell> cells;
  std::uint64_t functions = 0, min_nonzero = ~0ull, goppa = 0, mismatches = 0;
};

}  // namespace

WeightTable weight_table(const TowerPtr& tower, WeightFamily family, std::uint64_t k, unsigned workers) {
  const FieldTower& t = *tower;
  const Field& F = t.Fq3();
  const std::uint64_t q = t.q(), s = F.size();
  if (family == WeightFamily::Full ? q != 2 : q > 3)
    throw TooLarge("weight table for " + to_string(family) + " at q = " + std::to_string(q));

  WeightTable table;
  if (k == 0) k = 3 * q * q;
  if (k < 3 * q * q) throw DimensionMismatch("weight table needs x^3 in L(k P_inf), i.e. k >= " + std::to_string(3 * q * q));
  const EvalCode code = build_code(tower, k);
  table.basis = code.basis;
  const std::uint64_t n = code.length(), dd = designed_distance(code);
  const auto claims = claimed_values(q);

  // Verdicts of every S_1 surface with A != 0, for the d != 0, c != 0 cases.
  std::vector<std::uint8_t> verdicts;
  if (family != WeightFamily::A0B0D0) {
    verdicts.assign(s * s * s * q, 0);
    const S1Builder builder(tower);
    detail::parallel_for((s - 1) * s * s * q, workers, [&](std::size_t i) {
      const std::uint64_t key = i + s * s * q;
      const Code E = Code(key % q), C = Code(key / q % s), B = Code(key / q / s % s), A = Code(key / q / s / s);
      verdicts[key] = std::uint8_t(classify(builder.form(A, B, C, E)).verdict);
    });
  }
  const Dispatcher dispatch{F, verdicts, t};

  std::vector<Code> N(s), Tr(s);
  for (Code x = 0; x < s; ++x) {
    N[x] = t.norm_code(x);
    Tr[x] = t.trace_code(x);
  }

  // Outer items fix (b, c, d); (e, f) loop inside; g is resolved by histogram.
  const Code b_max = family == WeightFamily::Full ? Code(s) : 1;
  const Code d_lo = family == WeightFamily::A0B0DNonzero ? 1 : 0;
  const Code d_hi = family == WeightFamily::A0B0D0 ? 1 : Code(s);
  const std::uint64_t d_count = d_hi - d_lo;
  std::vector<Partial> parts(b_max * s * d_count);

  detail::parallel_for(parts.size(), workers, [&](std::size_t item) {
    Partial& part = parts[item];
    const Code b = Code(item / (s * d_count)), c = Code(item / d_count % s), d = Code(d_lo + item % d_count);
    std::vector<Code> base(n), px(s);
    std::vector<std::uint64_t> hist(s);
    for (std::size_t i = 0; i < n; ++i) {
      const auto P = code.curve.points[i];
      base[i] = F.add(F.mul(F.add(F.mul(b, P.x), c), P.y), F.mul(d, F.pow(P.x, 3)));
    }
    for (Code e = 0; e < s; ++e)
      for (Code f = 0; f < s; ++f) {
        std::fill(hist.begin(), hist.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
          const Code x = code.curve.points[i].x;
          ++hist[F.add(base[i], F.mul(x, F.add(F.mul(e, x), f)))];
        }
        for (Code x = 0; x < s; ++x) px[x] = F.add(F.mul(d, F.pow(x, 3)), F.mul(x, F.add(F.mul(e, x), f)));
        for (Code g = 0; g < s; ++g) {
          const Combo combo{0, b, c, d, e, f, g};
          const std::uint64_t zeros = hist[F.neg(g)], weight = n - zeros;

          // Fiber count: over each x the function is L y + r with L = bx + c.
          std::uint64_t fiber = 0;
          for (Code x = 0; x < s; ++x) {
            const Code L = F.add(F.mul(b, x), c), r = F.add(px[x], g);
            if (L == 0)
              fiber += r == 0 ? q * q : 0;
            else
              fiber += N[x] == Tr[F.neg(F.div(r, L))];
          }
          part.mismatches += fiber != zeros;

          const bool nonzero = b | c | d | e | f | g;
          ++part.functions;
          if (nonzero) {
            part.min_nonzero = std::min(part.min_nonzero, weight);
            part.goppa += weight < dd;
          }
          Cell& cell = part.cells[{dispatch(combo), weight}];
          if (cell.functions++ == 0) cell.example = combo;
        }
      }
  });

  table.tower = tower;
  table.family = family;
  table.k = code.basis.k;
  table.designed_distance = dd;
  table.min_nonzero_weight = ~0ull;
  std::map<std::pair<std::size_t, std::uint64_t>, Cell> cells;
  for (const auto& part : parts) {
    table.functions += part.functions;
    table.goppa_violations += part.goppa;
    table.fiber_mismatches += part.mismatches;
    table.min_nonzero_weight = std::min(table.min_nonzero_weight, part.min_nonzero);
    for (const auto& [key, cell] : part.cells) {
      Cell& acc = cells[key];
      if (acc.functions == 0) acc.example = cell.example;
      acc.functions += cell.functions;
    }
  }
  for (const auto& [key, cell] : cells) {
    const auto [ci, weight] = key;
    WeightRow row;
    row.case_label = kCases[ci].label;
    row.weight = weight;
    row.functions = cell.functions;
    row.example = cell.example;
    switch (kCases[ci].kind) {
      case ClaimKind::Exact:
        row.claim = "=" + std::to_string(claims[ci]);
        row.ok = weight == claims[ci];
        break;
      case ClaimKind::AtLeast:
        row.claim = ">=" + std::to_string(claims[ci]);
        row.ok = weight >= claims[ci];
        break;
      case ClaimKind::None:
        row.claim = "none";
        row.ok = weight >= dd;
        break;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string basis_string(const MonomialBasis& basis) {
  std::string s;
  for (const auto& m : basis.monomials) {
    std::string term;
    if (m.i) term += m.i == 1 ? "x" : "x^" + std::to_string(m.i);
    if (m.j) term += m.j == 1 ? "y" : "y^" + std::to_string(m.j);
    s += (s.empty() ? "" : ";") + (term.empty() ? std::string("1") : term);
  }
  return s;
}

std::string combo_string(const Combo& combo) {
  std::string s;
  for (std::size_t i = 0; i < combo.size(); ++i) s += (i ? ";" : "") + std::to_string(combo[i]);
  return s;
}

namespace {

std::map<std::string, std::string> table_metadata(const WeightTable& t, std::uint64_t seed) {
  auto meta = run_metadata(*t.tower, seed);
  meta["family"] = to_string(t.family);
  meta["k"] = std::to_string(t.k);
  meta["n"] = std::to_string(t.designed_distance + t.k);
  meta["basis"] = basis_string(t.basis);
  meta["designed_distance"] = std::to_string(t.designed_distance);
  meta["functions"] = std::to_string(t.functions);
  meta["min_nonzero_weight"] = std::to_string(t.min_nonzero_weight);
  meta["goppa_violations"] = std::to_string(t.goppa_violations);
  meta["fiber_mismatches"] = std::to_string(t.fiber_mismatches);
  return meta;
}

}  // namespace

void write_weight_table_csv(std::ostream& out, const WeightTable& t, std::uint64_t seed) {
  out << "#";
  for (const auto& [k, v] : table_metadata(t, seed)) out << ' ' << k << '=' << v;
  out << "\ncase,coeffs,weight,paper_bound,ok\n";
  for (const auto& r : t.rows)
    out << r.case_label << ',' << combo_string(r.example) << ',' << r.weight << ',' << r.claim << ','
        << (r.ok ? "true" : "false") << '\n';
}

void write_weight_table_json(std::ostream& out, const WeightTable& t, std::uint64_t seed) {
  using nlohmann::json;
  json j;
  j["metadata"] = table_metadata(t, seed);
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"case", r.case_label},
                    {"coeffs", r.example},
                    {"weight", r.weight},
                    {"functions", r.functions},
                    {"paper_bound", r.claim},
                    {"ok", r.ok}});
  j["rows"] = std::move(rows);
  j["all_ok"] = t.all_ok();
  out << j.dump(1) << '\n';
}

}  // namespace ntcubic
