#include "ntcubic/surface.hpp"

#include <algorithm>
#include <sstream>

#include "ntcubic/error.hpp"

namespace ntcubic {

namespace {

struct MonomialTables {
  std::array<Monomial, kNumMonomials> list{};
  int index[4][4][4];

  MonomialTables() {
    for (auto& a : index)
      for (auto& b : a)
        for (auto& c : b) c = -1;
    int n = 0;
    for (int d = 0; d <= 3; ++d)
      for (int i = d; i >= 0; --i)
        for (int j = d - i; j >= 0; --j) {
          list[n] = {i, j, d - i - j};
          index[i][j][d - i - j] = n;
          ++n;
        }
  }
};

const MonomialTables& tables() {
  static const MonomialTables t;
  return t;
}

constexpr std::uint64_t kMaxPairs = 1ull << 28;

// Univariate polynomial of degree <= 3; deg = -1 is the zero polynomial.
struct U {
  std::array<Code, 4> c{};
  int deg = -1;
  void fix() {
    deg = 3;
    while (deg >= 0 && c[deg] == 0) --deg;
  }
};

void umod(const Field& K, U& a, const U& b) {
  const Code li = K.inv(b.c[b.deg]);
  while (a.deg >= b.deg) {
    const Code f = K.mul(a.c[a.deg], li);
    const int s = a.deg - b.deg;
    for (int i = 0; i <= b.deg; ++i) a.c[s + i] = K.sub(a.c[s + i], K.mul(f, b.c[i]));
    a.fix();
  }
}

U ugcd(const Field& K, U a, U b) {
  while (b.deg >= 0) {
    umod(K, a, b);
    std::swap(a, b);
  }
  return a;
}

Code ueval(const Field& K, const U& u, Code t) {
  Code r = 0;
  for (int i = u.deg; i >= 0; --i) r = K.add(K.mul(r, t), u.c[i]);
  return r;
}

struct Term {
  int i, j, k;
  Code c;
};

// Nonzero terms of a Poly3; the polynomials of a system are kept in this form
// so the inner search loops skip empty monomials.
std::vector<Term> terms_of(const Poly3& p) {
  std::vector<Term> out;
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n)
    if (p[n] != 0) out.push_back({m[n].i, m[n].j, m[n].k, p[n]});
  return out;
}

// p(v0, v1, t) as a polynomial in t, given the powers of v0 and v1.
U specialize(const Field& K, const std::vector<Term>& p, const Code* pv0, const Code* pv1) {
  U u;
  for (const Term& t : p) u.c[t.k] = K.add(u.c[t.k], K.mul(t.c, K.mul(pv0[t.i], pv1[t.j])));
  u.fix();
  return u;
}

void powers(const Field& K, Code v, Code* out) {
  out[0] = 1;
  out[1] = v;
  out[2] = K.mul(v, v);
  out[3] = K.mul(out[2], v);
}

// Common roots in K of the specialized system. Returns false when every
// polynomial vanishes identically (a whole line of solutions).
bool common_roots(const Field& K, const std::vector<std::vector<Term>>& sys, const Code* pv0,
                  const Code* pv1, std::vector<Code>& roots) {
  roots.clear();
  U g;
  for (const auto& p : sys) {
    g = ugcd(K, g, specialize(K, p, pv0, pv1));
    if (g.deg == 0) return true;
  }
  if (g.deg < 0) return false;
  if (g.deg == 1) {
    roots.push_back(K.neg(K.div(g.c[0], g.c[1])));
  } else {
    for (Code t = 0; t < K.size(); ++t)
      if (ueval(K, g, t) == 0) roots.push_back(t);
  }
  return true;
}

// Walks the projective plane [1:a:t], [0:1:t], [0:0:1] and reports common
// zeros of a homogeneous system. Stops early when `emit` returns false.
// Returns false if the system vanishes on a whole line.
template <class Emit>
bool plane_search(const Field& K, const std::vector<std::vector<Term>>& sys, Emit emit) {
  std::vector<Code> roots;
  Code p1[4], pa[4], p0[4] = {1, 0, 0, 0};
  powers(K, 1, p1);
  for (Code a = 0; a < K.size(); ++a) {
    powers(K, a, pa);
    if (!common_roots(K, sys, p1, pa, roots)) return false;
    for (Code t : roots)
      if (!emit(std::array<Code, 3>{1, a, t})) return true;
  }
  if (!common_roots(K, sys, p0, p1, roots)) return false;
  for (Code t : roots)
    if (!emit(std::array<Code, 3>{0, 1, t})) return true;
  bool all_zero = true;
  for (const auto& p : sys) {
    Code s = 0;
    for (const Term& t : p)
      if (t.i == 0 && t.j == 0) s = K.add(s, t.c);  // evaluate at (0,0,1)
    if (s != 0) all_zero = false;
  }
  if (all_zero) emit(std::array<Code, 3>{0, 0, 1});
  return true;
}

unsigned point_degree(const Field& K, unsigned ext_degree, std::span<const Code> X) {
  if (ext_degree == 1) return 1;
  for (unsigned e = 1; e < ext_degree; ++e) {
    if (ext_degree % e) continue;
    bool fixed = true;
    for (Code c : X)
      if (K.frobenius(c, e) != c) {
        fixed = false;
        break;
      }
    if (fixed) return e;
  }
  return ext_degree;
}

Poly3 homogeneous_part(const Poly3& p, int d) {
  Poly3 out{};
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n)
    if (m[n].degree() == d) out[n] = p[n];
  return out;
}

std::array<int, 4> full_exponent(const Monomial& m) { return {m.i, m.j, m.k, 3 - m.degree()}; }

Code power(const Field& K, Code x, int e) {
  Code r = 1;
  for (int i = 0; i < e; ++i) r = K.mul(r, x);
  return r;
}

// d/dX_var of the homogenized cubic at X.
Code eval_h_partial(const Field& K, const Poly3& f, const std::array<Code, 4>& X, int var) {
  Code s = 0;
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (f[n] == 0) continue;
    auto e = full_exponent(m[n]);
    if (e[var] == 0) continue;
    Code t = K.mul(f[n], K.from_int(e[var]));
    e[var] -= 1;
    for (int v = 0; v < 4; ++v) t = K.mul(t, power(K, X[v], e[v]));
    s = K.add(s, t);
  }
  return s;
}

// Dense homogeneous polynomials in four variables, exponents packed base 4.
using Dense4 = std::array<Code, 256>;

int pack(const std::array<int, 4>& e) { return e[0] + 4 * e[1] + 16 * e[2] + 64 * e[3]; }

Dense4 mul_linear(const Field& K, const Dense4& a, const std::array<Code, 4>& lin) {
  Dense4 out{};
  for (int idx = 0; idx < 256; ++idx) {
    if (a[idx] == 0) continue;
    std::array<int, 4> e = {idx % 4, (idx / 4) % 4, (idx / 16) % 4, idx / 64};
    for (int v = 0; v < 4; ++v) {
      if (lin[v] == 0) continue;
      if (e[v] == 3) throw Error("degree overflow in composition");
      auto f = e;
      f[v] += 1;
      const int j = pack(f);
      out[j] = K.add(out[j], K.mul(a[idx], lin[v]));
    }
  }
  return out;
}

}  // namespace

const std::array<Monomial, kNumMonomials>& monomials() { return tables().list; }

int monomial_index(int i, int j, int k) {
  if (i < 0 || j < 0 || k < 0 || i + j + k > 3) throw Error("monomial degree out of range");
  return tables().index[i][j][k];
}

CubicForm::CubicForm(TowerPtr tower, Level level, const Poly3& coeffs)
    : tower_(std::move(tower)), level_(level), c_(coeffs) {
  if (level_ == Level::Prime) {
    if (tower_->h() != 1) throw WrongLevel("forms live over F_q or F_{q^3}");
    level_ = Level::Base;
  }
  const Field& F = field();
  bool cubic = false;
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (c_[n] >= F.size()) throw InvalidForm("coefficient outside the coefficient field");
    if (m[n].degree() == 3 && c_[n] != 0) cubic = true;
  }
  if (!cubic) throw InvalidForm("form has no degree-3 term");
}

const Field& CubicForm::field() const {
  return level_ == Level::Cubic ? tower_->Fq3() : tower_->Fq();
}

FieldPtr CubicForm::extension(unsigned d) const {
  return level_ == Level::Cubic ? tower_->cubic_extension(d) : tower_->base_extension(d);
}

Code eval_poly3(const Field& K, const Poly3& p, Code x0, Code x1, Code x2) {
  Code p0[4], p1[4], p2[4];
  powers(K, x0, p0);
  powers(K, x1, p1);
  powers(K, x2, p2);
  Code s = 0;
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (p[n] == 0) continue;
    s = K.add(s, K.mul(p[n], K.mul(p0[m[n].i], K.mul(p1[m[n].j], p2[m[n].k]))));
  }
  return s;
}

Code CubicForm::eval_in(const Field& K, Code x0, Code x1, Code x2) const {
  return eval_poly3(K, c_, x0, x1, x2);
}

Code CubicForm::eval_h(const Field& K, const std::array<Code, 4>& X) const {
  Code pw[4][4];
  for (int v = 0; v < 4; ++v) powers(K, X[v], pw[v]);
  Code s = 0;
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (c_[n] == 0) continue;
    const int w = 3 - m[n].degree();
    Code t = K.mul(K.mul(pw[0][m[n].i], pw[1][m[n].j]), K.mul(pw[2][m[n].k], pw[3][w]));
    s = K.add(s, K.mul(c_[n], t));
  }
  return s;
}

std::string CubicForm::to_string() const {
  std::ostringstream os;
  const auto& m = monomials();
  bool first = true;
  for (int n = 0; n < kNumMonomials; ++n) {
    if (c_[n] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[n];
    const int e[3] = {m[n].i, m[n].j, m[n].k};
    for (int v = 0; v < 3; ++v) {
      if (e[v] == 0) continue;
      os << "*x" << v;
      if (e[v] > 1) os << '^' << e[v];
    }
  }
  if (first) os << '0';
  return os.str();
}

Poly3 derivative(const Field& f, const Poly3& p, int var) {
  Poly3 out{};
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (p[n] == 0) continue;
    int e[3] = {m[n].i, m[n].j, m[n].k};
    if (e[var] == 0) continue;
    const Code c = f.mul(p[n], f.from_int(e[var]));
    e[var] -= 1;
    const int j = monomial_index(e[0], e[1], e[2]);
    out[j] = f.add(out[j], c);
  }
  return out;
}

namespace {

Poly3 mul_poly3(const Field& K, const Poly3& a, const Poly3& b) {
  Poly3 out{};
  const auto& m = monomials();
  for (int x = 0; x < kNumMonomials; ++x) {
    if (a[x] == 0) continue;
    for (int y = 0; y < kNumMonomials; ++y) {
      if (b[y] == 0) continue;
      const int j = monomial_index(m[x].i + m[y].i, m[x].j + m[y].j, m[x].k + m[y].k);
      out[j] = K.add(out[j], K.mul(a[x], b[y]));
    }
  }
  return out;
}

Poly3 linear(Code c0, Code c1, Code c2) {
  Poly3 p{};
  p[monomial_index(1, 0, 0)] = c0;
  p[monomial_index(0, 1, 0)] = c1;
  p[monomial_index(0, 0, 1)] = c2;
  return p;
}

void require_cubic(const Element& x) {
  if (x.level != Level::Cubic) throw WrongLevel("coefficients must be elements of F_{q^3}");
}

}  // namespace

S1Builder::S1Builder(TowerPtr tower) : tower_(std::move(tower)) {
  const Field& F = tower_->Fq3();
  const auto& a = tower_->conjugates();
  l1_ = linear(a[0], a[1], a[2]);
  l2_ = mul_poly3(F, l1_, l1_);
  l3_ = mul_poly3(F, l2_, l1_);
  // x^q = x0 a^q + x1 a^{q^2} + x2 a for F_q-rational coordinates.
  const Poly3 c1 = linear(a[1], a[2], a[0]);
  const Poly3 c2 = linear(a[2], a[0], a[1]);
  norm_ = mul_poly3(F, mul_poly3(F, l1_, c1), c2);
  for (Code c : norm_)
    if (c >= tower_->q()) throw Error("norm form has a coefficient outside F_q");
}

Poly3 S1Builder::coeffs(Code A, Code B, Code C, Code E) const {
  const Field& F = tower_->Fq3();
  const FieldTower& t = *tower_;
  Poly3 out{};
  for (int n = 0; n < kNumMonomials; ++n) {
    Code s = F.neg(norm_[n]);
    if (l3_[n]) s = F.add(s, t.trace_code(F.mul(A, l3_[n])));
    if (l2_[n]) s = F.add(s, t.trace_code(F.mul(B, l2_[n])));
    if (l1_[n]) s = F.add(s, t.trace_code(F.mul(C, l1_[n])));
    out[n] = s;
  }
  out[monomial_index(0, 0, 0)] = F.add(out[monomial_index(0, 0, 0)], E);
  return out;
}

CubicForm S1Builder::form(Code A, Code B, Code C, Code E) const {
  return CubicForm(tower_, Level::Base, coeffs(A, B, C, E));
}

CubicForm build_s1(const TowerPtr& tower, Element A, Element B, Element C, Element D) {
  for (const Element& x : {A, B, C, D}) require_cubic(x);
  S1Builder b(tower);
  return b.form(A.code, B.code, C.code, tower->trace_code(D.code));
}

CubicForm build_s2(const TowerPtr& tower, Element A, Element B, Element C, Element D) {
  for (const Element& x : {A, B, C, D}) require_cubic(x);
  const Field& F = tower->Fq3();
  Poly3 c{};
  const Code coef[3] = {A.code, B.code, C.code};
  for (int v = 0; v < 3; ++v) {
    for (int deg = 1; deg <= 3; ++deg) {
      int e[3] = {0, 0, 0};
      e[v] = deg;
      c[monomial_index(e[0], e[1], e[2])] = F.frobenius(coef[3 - deg], v);
    }
  }
  c[monomial_index(1, 1, 1)] = F.neg(1);
  c[monomial_index(0, 0, 0)] = tower->trace_code(D.code);
  return CubicForm(tower, Level::Cubic, c);
}

std::array<Code, 3> apply_psi(const FieldTower& tower, const std::array<Code, 3>& v) {
  return apply(tower.Fq3(), tower.psi_matrix(), v);
}

Poly3 compose_h(const Field& K, const Poly3& f, const std::array<std::array<Code, 4>, 4>& L) {
  Dense4 total{};
  const auto& m = monomials();
  for (int n = 0; n < kNumMonomials; ++n) {
    if (f[n] == 0) continue;
    const auto e = full_exponent(m[n]);
    Dense4 acc{};
    acc[0] = f[n];
    for (int v = 0; v < 4; ++v)
      for (int r = 0; r < e[v]; ++r) acc = mul_linear(K, acc, L[v]);
    for (int idx = 0; idx < 256; ++idx) total[idx] = K.add(total[idx], acc[idx]);
  }
  Poly3 out{};
  for (int idx = 0; idx < 256; ++idx) {
    if (total[idx] == 0) continue;
    const int a = idx % 4, b = (idx / 4) % 4, c = (idx / 16) % 4;
    out[monomial_index(a, b, c)] = total[idx];
  }
  return out;
}

Poly3 compose_linear(const Field& K, const Poly3& f, const Mat3& M) {
  std::array<std::array<Code, 4>, 4> L{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) L[i][j] = M[i][j];
  L[3][3] = 1;
  return compose_h(K, f, L);
}

std::uint64_t count_points(const CubicForm& form, unsigned d) {
  FieldPtr Kp = form.extension(d);
  const Field& K = *Kp;
  const std::uint64_t n = K.size();
  if (n * n * n > kMaxPairs) throw TooLarge("point count search exceeds 2^28 points");
  const auto terms = terms_of(form.coeffs());
  std::uint64_t count = 0;
  Code p0[4], p1[4];
  for (Code x0 = 0; x0 < n; ++x0) {
    powers(K, x0, p0);
    for (Code x1 = 0; x1 < n; ++x1) {
      powers(K, x1, p1);
      const U u = specialize(K, terms, p0, p1);
      if (u.deg < 0) {
        count += n;
        continue;
      }
      for (Code x2 = 0; x2 < n; ++x2)
        if (ueval(K, u, x2) == 0) ++count;
    }
  }
  return count;
}

std::uint64_t count_points_projective(const CubicForm& form, unsigned d) {
  std::uint64_t count = count_points(form, d);
  FieldPtr Kp = form.extension(d);
  const Field& K = *Kp;
  const auto top = terms_of(homogeneous_part(form.coeffs(), 3));
  Code p1[4], pa[4], p0[4] = {1, 0, 0, 0};
  powers(K, 1, p1);
  auto count_line = [&](const Code* pv0, const Code* pv1) {
    const U u = specialize(K, top, pv0, pv1);
    if (u.deg < 0) return std::uint64_t(K.size());
    std::uint64_t c = 0;
    for (Code t = 0; t < K.size(); ++t)
      if (ueval(K, u, t) == 0) ++c;
    return c;
  };
  for (Code a = 0; a < K.size(); ++a) {
    powers(K, a, pa);
    count += count_line(p1, pa);
  }
  count += count_line(p0, p1);
  if (form.coeff(0, 0, 3) == 0) ++count;
  return count;
}

std::vector<unsigned> SingularLocus::pattern() const {
  std::vector<unsigned> out;
  for (const auto& p : points) out.push_back(p.degree);
  std::sort(out.begin(), out.end());
  return out;
}

bool SingularLocus::has_rational_point() const {
  for (const auto& p : points)
    if (p.degree == 1) return true;
  return false;
}

namespace {

struct Systems {
  std::vector<std::vector<Term>> affine;    // f and its gradient
  std::vector<std::vector<Term>> infinity;  // gradient of the closure on w = 0
};

Systems singular_systems(const CubicForm& form) {
  const Field& F = form.field();
  const Poly3& f = form.coeffs();
  const Poly3 top = homogeneous_part(f, 3);
  Systems s;
  // Derivatives first: they are of lower degree and usually end the gcd early.
  s.affine = {terms_of(derivative(F, f, 2)), terms_of(derivative(F, f, 0)),
              terms_of(derivative(F, f, 1)), terms_of(f)};
  s.infinity = {terms_of(derivative(F, top, 2)), terms_of(derivative(F, top, 0)),
                terms_of(derivative(F, top, 1)), terms_of(homogeneous_part(f, 2)),
                terms_of(top)};
  return s;
}

// One search field: collect singular points whose degree passes `keep`.
// Returns false once the locus is exceeded.
template <class Keep>
bool search_field(const CubicForm& form, const Systems& sys, unsigned ext, Keep keep,
                  bool affine, std::size_t limit, SingularLocus& out) {
  FieldPtr Kp = form.extension(ext);
  const Field& K = *Kp;
  auto add = [&](const std::array<Code, 4>& X) {
    const unsigned deg = point_degree(K, ext, std::span<const Code>(X.data(), 4));
    if (!keep(deg)) return true;
    out.points.push_back({X, Kp, deg});
    if (out.points.size() > limit) {
      out.exceeded = true;
      return false;
    }
    return true;
  };
  if (affine) {
    std::vector<Code> roots;
    Code p0[4], p1[4];
    for (Code x0 = 0; x0 < K.size(); ++x0) {
      powers(K, x0, p0);
      for (Code x1 = 0; x1 < K.size(); ++x1) {
        powers(K, x1, p1);
        if (!common_roots(K, sys.affine, p0, p1, roots)) {
          out.exceeded = true;
          return false;
        }
        for (Code t : roots)
          if (!add({x0, x1, t, 1})) return false;
      }
    }
  }
  bool stop = false;
  const bool finite = plane_search(K, sys.infinity, [&](const std::array<Code, 3>& P) {
    if (!add({P[0], P[1], P[2], 0})) {
      stop = true;
      return false;
    }
    return true;
  });
  if (!finite) {
    out.exceeded = true;
    return false;
  }
  return !stop;
}

void check_search_size(const CubicForm& form, unsigned ext) {
  FieldPtr K = form.extension(ext);
  const std::uint64_t n = K->size();
  if (n * n > kMaxPairs) throw TooLarge("singular search over a field with more than 2^14 elements");
}

}  // namespace

namespace {

// F_{q^4} (as searched) -> F_{q^12}, sending the generator of F_{q^4} to the
// smallest root of its modulus.
struct Embedding {
  FieldPtr source, target;
  Code root = 0;

  Code operator()(Code x) const {
    const auto dig = source->digits(x);
    Code r = 0;
    for (std::size_t i = dig.size(); i-- > 0;) r = target->add(target->mul(r, root), dig[i]);
    return r;
  }
};

Embedding quartic_into_cubic(const FieldTower& t) {
  Embedding e;
  e.source = t.base_extension(4);
  e.target = t.cubic_extension(4);
  const auto& mod = e.source->modulus();
  const Field& T = *e.target;
  for (Code r = 0; r < T.size(); ++r) {
    Code v = 0;
    for (std::size_t i = mod.size(); i-- > 0;) v = T.add(T.mul(v, r), mod[i]);
    if (v == 0) {
      e.root = r;
      return e;
    }
  }
  throw Error("F_{q^4} does not embed into F_{q^12}");
}

// For an F_{q^3} form that is the image of an F_q form under psi, the
// singular points are the psi-images of those of the F_q form.
std::optional<CubicForm> descend(const CubicForm& form) {
  if (form.level() != Level::Cubic) return std::nullopt;
  const FieldTower& t = *form.tower();
  const Poly3 g = compose_linear(t.Fq3(), form.coeffs(), t.psi_matrix());
  for (Code c : g)
    if (c >= t.q()) return std::nullopt;
  return CubicForm(form.tower(), Level::Base, g);
}

std::optional<SingularLocus> locus_by_descent(const CubicForm& form, std::size_t limit) {
  const auto down = descend(form);
  if (!down) return std::nullopt;
  const FieldTower& t = *form.tower();
  const SingularLocus base = singular_locus(*down, limit);
  SingularLocus out;
  out.exceeded = base.exceeded;
  std::optional<Embedding> emb;
  const Mat3& M = t.psi_matrix();
  for (const auto& P : base.points) {
    // Degree 1 and 3 points already live in F_{q^3} with the same codes.
    FieldPtr target = t.cubic_field();
    std::array<Code, 3> x = {P.X[0], P.X[1], P.X[2]};
    unsigned ext = 1;
    if (P.degree == 2 || P.degree == 4) {
      if (!emb) emb = quartic_into_cubic(t);
      target = emb->target;
      for (auto& c : x) c = (*emb)(c);
      ext = 4;
    }
    const Field& T = *target;
    std::array<Code, 4> X{};
    for (int i = 0; i < 3; ++i) {
      Code s = 0;
      for (int j = 0; j < 3; ++j) s = T.add(s, T.mul(M[i][j], x[j]));
      X[i] = s;
    }
    X[3] = P.X[3];
    if (X[3] == 0) {
      int lead = 0;
      while (X[lead] == 0) ++lead;
      const Code li = T.inv(X[lead]);
      for (auto& c : X) c = T.mul(c, li);
    }
    out.points.push_back({X, target, point_degree(T, ext, std::span<const Code>(X.data(), 4))});
  }
  return out;
}

}  // namespace

SingularLocus singular_locus(const CubicForm& form, std::size_t limit) {
  // Searching over F_q is far cheaper than over F_{q^3}, and exact.
  if (auto l = locus_by_descent(form, limit)) return *l;
  check_search_size(form, 4);
  check_search_size(form, 3);
  const Systems sys = singular_systems(form);
  SingularLocus out;
  // Degree 4 catches points of degree 1, 2 and 4; the cubic extension adds degree 3.
  if (!search_field(form, sys, 4, [](unsigned) { return true; }, true, limit, out)) return out;
  search_field(form, sys, 3, [](unsigned d) { return d == 3; }, true, limit, out);
  return out;
}

bool singular_at_infinity(const CubicForm& form) {
  // psi fixes the plane w = 0.
  if (auto down = descend(form)) return singular_at_infinity(*down);
  check_search_size(form, 4);
  check_search_size(form, 3);
  const Systems sys = singular_systems(form);
  SingularLocus out;
  search_field(form, sys, 4, [](unsigned) { return true; }, false, 0, out);
  if (!out.points.empty() || out.exceeded) return true;
  search_field(form, sys, 3, [](unsigned d) { return d == 3; }, false, 0, out);
  return !out.points.empty() || out.exceeded;
}

std::optional<Plane> linear_factor(const CubicForm& form) {
  for (unsigned d = 1; d <= 3; ++d) {
    FieldPtr Kp = form.extension(d);
    const Field& K = *Kp;
    const std::uint64_t n = K.size();
    if (n * n * n > kMaxPairs) throw TooLarge("plane search exceeds 2^28 planes");
    const Code g = K.size() > 2 ? K.generator() : 1;
    // Points of the plane are parametrized by the three non-pivot coordinates.
    const std::array<std::array<Code, 3>, 10> probes = {{{1, 0, 0},
                                                         {0, 1, 0},
                                                         {0, 0, 1},
                                                         {1, 1, 0},
                                                         {1, 0, 1},
                                                         {0, 1, 1},
                                                         {1, 1, 1},
                                                         {1, g, 0},
                                                         {0, 1, g},
                                                         {g, 0, 1}}};
    for (int pivot = 0; pivot < 4; ++pivot) {
      const int nfree = 3 - pivot;
      std::uint64_t total = 1;
      for (int i = 0; i < nfree; ++i) total *= n;
      std::array<int, 3> others{};
      for (int v = 0, r = 0; v < 4; ++v)
        if (v != pivot) others[r++] = v;
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::array<Code, 4> a{};
        a[pivot] = 1;
        std::uint64_t t = idx;
        for (int v = pivot + 1; v < 4; ++v) {
          a[v] = static_cast<Code>(t % n);
          t /= n;
        }
        auto point_on = [&](const std::array<Code, 3>& u) {
          std::array<Code, 4> X{};
          Code s = 0;
          for (int r = 0; r < 3; ++r) {
            X[others[r]] = u[r];
            s = K.add(s, K.mul(a[others[r]], u[r]));
          }
          X[pivot] = K.neg(s);
          return X;
        };
        bool candidate = true;
        for (const auto& u : probes)
          if (form.eval_h(K, point_on(u)) != 0) {
            candidate = false;
            break;
          }
        if (!candidate) continue;
        std::array<std::array<Code, 4>, 4> L{};
        for (int r = 0; r < 3; ++r) {
          L[others[r]][r] = 1;
          L[pivot][r] = K.neg(a[others[r]]);
        }
        const Poly3 restricted = compose_h(K, form.coeffs(), L);
        if (std::all_of(restricted.begin(), restricted.end(), [](Code c) { return c == 0; })) {
          const unsigned deg = point_degree(K, d, std::span<const Code>(a.data(), 4));
          return Plane{a, Kp, deg};
        }
      }
    }
  }
  return std::nullopt;
}

bool plane_cubic_smooth(const CubicForm& form, const Poly3& G) {
  const Field& F = form.field();
  const Poly3 g = homogeneous_part(G, 3);
  const std::vector<std::vector<Term>> sys = {terms_of(derivative(F, g, 0)),
                                              terms_of(derivative(F, g, 1)),
                                              terms_of(derivative(F, g, 2)), terms_of(g)};
  for (unsigned d = 1; d <= 3; ++d) {
    FieldPtr Kp = form.extension(d);
    bool found = false;
    const bool finite = plane_search(*Kp, sys, [&](const std::array<Code, 3>&) {
      found = true;
      return false;
    });
    if (found || !finite) return false;
  }
  return true;
}

namespace {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Basis of the kernel of a matrix over F (rows of length 4).
std::vector<std::array<Code, 4>> kernel(const Field& F, std::vector<std::array<Code, 4>> rows) {
  std::array<int, 4> pivot_col_of_row{};
  std::array<bool, 4> is_pivot{};
  std::size_t r = 0;
  for (int c = 0; c < 4 && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Code li = F.inv(rows[r][c]);
    for (auto& x : rows[r]) x = F.mul(x, li);
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      const Code f = rows[o][c];
      for (int k = 0; k < 4; ++k) rows[o][k] = F.sub(rows[o][k], F.mul(f, rows[r][k]));
    }
    pivot_col_of_row[r] = c;
    is_pivot[c] = true;
    ++r;
  }
  std::vector<std::array<Code, 4>> basis;
  for (int free = 0; free < 4; ++free) {
    if (is_pivot[free]) continue;
    std::array<Code, 4> v{};
    v[free] = 1;
    for (std::size_t i = 0; i < r; ++i) v[pivot_col_of_row[i]] = F.neg(rows[i][free]);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace

std::optional<Cone> cone_test(const CubicForm& form) {
  const Field& F = form.field();
  const Poly3& f = form.coeffs();
  // Second-order Hasse derivatives are linear in the point.
  std::vector<std::array<Code, 4>> rows;
  for (int b0 = 0; b0 <= 2; ++b0)
    for (int b1 = 0; b0 + b1 <= 2; ++b1)
      for (int b2 = 0; b0 + b1 + b2 <= 2; ++b2) {
        const std::array<int, 4> beta = {b0, b1, b2, 2 - b0 - b1 - b2};
        std::array<Code, 4> row{};
        for (int c = 0; c < 4; ++c) {
          auto e = beta;
          e[c] += 1;
          const Code coef = f[monomial_index(e[0], e[1], e[2])];
          if (coef == 0) continue;
          int mult = 1;
          for (int v = 0; v < 4; ++v) mult *= binom(e[v], beta[v]);
          row[c] = F.mul(coef, F.from_int(mult));
        }
        rows.push_back(row);
      }
  for (auto P : kernel(F, rows)) {
    if (form.eval_h(F, P) != 0) continue;
    bool triple = true;
    for (int v = 0; v < 4 && triple; ++v)
      if (eval_h_partial(F, f, P, v) != 0) triple = false;
    if (!triple) continue;
    int lead = 0;
    while (P[lead] == 0) ++lead;
    const Code li = F.inv(P[lead]);
    for (auto& x : P) x = F.mul(x, li);
    // Base curve: the section by a coordinate plane missing the vertex.
    std::array<std::array<Code, 4>, 4> L{};
    for (int v = 0, r = 0; v < 4; ++v)
      if (v != lead) L[v][r++] = 1;
    const Poly3 base = compose_h(F, f, L);
    return Cone{P, plane_cubic_smooth(form, base)};
  }
  return std::nullopt;
}

std::optional<Cone> cone_test(const CubicForm& form, const SingularLocus& locus) {
  // A vertex is a rational singular point; without one there is nothing to test.
  if (!locus.exceeded && !locus.has_rational_point()) return std::nullopt;
  return cone_test(form);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Reducible:
      return "Reducible";
    case Verdict::ConeOverSmoothCubic:
      return "ConeOverSmoothCubic";
    case Verdict::ConeOverSingularCubic:
      return "ConeOverSingularCubic";
    case Verdict::NonIsolatedNotCone:
      return "NonIsolatedNotCone";
    case Verdict::Isolated:
      return "Isolated";
    case Verdict::Smooth:
      return "Smooth";
  }
  return "?";
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Reducible, Verdict::ConeOverSmoothCubic, Verdict::ConeOverSingularCubic,
                    Verdict::NonIsolatedNotCone, Verdict::Isolated, Verdict::Smooth})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string SurfaceClass::label() const {
  if (verdict != Verdict::Isolated) return to_string(verdict);
  std::ostringstream os;
  os << "Isolated(" << delta << ",{";
  for (std::size_t i = 0; i < pattern.size(); ++i) os << (i ? "," : "") << pattern[i];
  os << "})";
  return os.str();
}

Classification classify_full(const CubicForm& form) {
  Classification out;
  out.locus = singular_locus(form);
  // A reducible cubic is singular along a curve, so only exceeded loci can
  // hide a linear factor.
  if (out.locus.exceeded) {
    out.factor = linear_factor(form);
    if (out.factor) {
      out.cls.verdict = Verdict::Reducible;
      return out;
    }
  }
  out.cone = cone_test(form, out.locus);
  if (out.cone) {
    out.cls.verdict = out.cone->base_smooth ? Verdict::ConeOverSmoothCubic : Verdict::ConeOverSingularCubic;
    return out;
  }
  if (out.locus.exceeded) {
    out.cls.verdict = Verdict::NonIsolatedNotCone;
    return out;
  }
  out.cls.delta = static_cast<unsigned>(out.locus.points.size());
  out.cls.pattern = out.locus.pattern();
  out.cls.verdict = out.cls.delta == 0 ? Verdict::Smooth : Verdict::Isolated;
  return out;
}

SurfaceClass classify(const CubicForm& form) { return classify_full(form).cls; }

}  // namespace ntcubic
