#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ntcubic/gf.hpp"

namespace ntcubic {

/// Exponent triple of a monomial x0^i x1^j x2^k of degree <= 3. In the
/// homogenized picture the fourth exponent (of w) is 3 - i - j - k.
struct Monomial {
  int i, j, k;
  int degree() const { return i + j + k; }
};

inline constexpr int kNumMonomials = 20;

/// Monomials ordered by total degree, then by descending (i, j).
const std::array<Monomial, kNumMonomials>& monomials();
int monomial_index(int i, int j, int k);

/// Dense coefficient vector of a polynomial of degree <= 3 in three variables.
using Poly3 = std::array<Code, kNumMonomials>;

/// Affine cubic in (x0, x1, x2) with coefficients in F_q (Base) or F_{q^3}
/// (Cubic). Coefficient codes embed unchanged into every search extension of
/// the coefficient field, so the same array evaluates anywhere.
class CubicForm {
 public:
  /// Throws InvalidForm unless some degree-3 coefficient is nonzero.
  CubicForm(TowerPtr tower, Level level, const Poly3& coeffs);

  const TowerPtr& tower() const { return tower_; }
  Level level() const { return level_; }
  const Field& field() const;
  const Poly3& coeffs() const { return c_; }
  Code coeff(int i, int j, int k) const { return c_[monomial_index(i, j, k)]; }

  /// Degree-d extension of the coefficient field (d = 1 is the field itself).
  FieldPtr extension(unsigned d) const;

  Code eval(Code x0, Code x1, Code x2) const { return eval_in(field(), x0, x1, x2); }
  Code eval_in(const Field& K, Code x0, Code x1, Code x2) const;
  /// Homogenized cubic at [x0:x1:x2:w].
  Code eval_h(const Field& K, const std::array<Code, 4>& X) const;

  std::string to_string() const;

  friend bool operator==(const CubicForm& a, const CubicForm& b) {
    return a.level_ == b.level_ && a.c_ == b.c_;
  }

 private:
  TowerPtr tower_;
  Level level_;
  Poly3 c_{};
};

/// Formal partial derivative of a Poly3 in variable var (0..2).
Poly3 derivative(const Field& f, const Poly3& p, int var);
/// Evaluate a Poly3 at an affine point of K.
Code eval_poly3(const Field& K, const Poly3& p, Code x0, Code x1, Code x2);

/// S_1: T(A x^3 + B x^2 + C x + D) - N(x) with x = x0 a + x1 a^q + x2 a^{q^2}.
CubicForm build_s1(const TowerPtr& tower, Element A, Element B, Element C, Element D);
/// S_2: A X0^3 + A^q X1^3 + A^{q^2} X2^3 + B X0^2 + ... + C^{q^2} X2 + E - X0X1X2,
/// with E = T(D).
CubicForm build_s2(const TowerPtr& tower, Element A, Element B, Element C, Element D);

/// Precomputed expansion that builds S_1 coefficient vectors from raw codes.
class S1Builder {
 public:
  explicit S1Builder(TowerPtr tower);
  Poly3 coeffs(Code A, Code B, Code C, Code E) const;
  CubicForm form(Code A, Code B, Code C, Code E) const;
  const TowerPtr& tower() const { return tower_; }

 private:
  TowerPtr tower_;
  Poly3 l1_{}, l2_{}, l3_{};  // powers of x0 a + x1 a^q + x2 a^{q^2}
  Poly3 norm_{};              // product of the three conjugate linear forms
};

/// M (x0, x1, x2)^t with M the conjugate matrix of the normal element.
std::array<Code, 3> apply_psi(const FieldTower& tower, const std::array<Code, 3>& v);

/// Composition F(L u) of the homogenized cubic with a 4x4 linear map; the
/// result is again read as a homogenized cubic (row 3 / column 3 is w).
Poly3 compose_h(const Field& K, const Poly3& f, const std::array<std::array<Code, 4>, 4>& L);
/// Pullback of an affine cubic along x -> M x.
Poly3 compose_linear(const Field& K, const Poly3& f, const Mat3& M);

/// Affine zeros with all coordinates in the degree-d extension.
std::uint64_t count_points(const CubicForm& form, unsigned d = 1);
/// Zeros in P^3 over the degree-d extension (affine plus the plane w = 0).
std::uint64_t count_points_projective(const CubicForm& form, unsigned d = 1);

struct SingularPoint {
  std::array<Code, 4> X{};  // [x0:x1:x2:w], w in {0,1}, codes in `field`
  FieldPtr field;
  unsigned degree = 1;  // over the coefficient field
  bool at_infinity() const { return X[3] == 0; }
};

struct SingularLocus {
  std::vector<SingularPoint> points;
  bool exceeded = false;
  /// Sorted degrees of the listed points.
  std::vector<unsigned> pattern() const;
  bool has_rational_point() const;
};

/// Singular points of the projective closure defined over the degree 1..4
/// extensions of the coefficient field. Gives up with exceeded = true once
/// more than `limit` points are seen.
SingularLocus singular_locus(const CubicForm& form, std::size_t limit = 4);
/// True iff a singular point lies on the plane w = 0 (degree <= 4 search).
bool singular_at_infinity(const CubicForm& form);

/// A plane a0 x0 + a1 x1 + a2 x2 + a3 w over the degree-`degree` extension,
/// first nonzero coefficient 1.
struct Plane {
  std::array<Code, 4> a{};
  FieldPtr field;
  unsigned degree = 1;
};
std::optional<Plane> linear_factor(const CubicForm& form);

struct Cone {
  std::array<Code, 4> vertex{};  // over the coefficient field
  bool base_smooth = false;
};
/// Triple point of the homogenized cubic, i.e. a vertex of a cone.
std::optional<Cone> cone_test(const CubicForm& form);
/// Same, but skips the linear algebra when the locus already rules a cone out.
std::optional<Cone> cone_test(const CubicForm& form, const SingularLocus& locus);

/// Smoothness of the plane cubic G(u0,u1,u2) = 0, whose coefficients sit in
/// the degree-3 slots of a Poly3 over the coefficient field of `form`.
/// Singular points are searched over the degree 1..3 extensions.
bool plane_cubic_smooth(const CubicForm& form, const Poly3& plane_cubic);

enum class Verdict {
  Reducible,
  ConeOverSmoothCubic,
  ConeOverSingularCubic,
  NonIsolatedNotCone,
  Isolated,
  Smooth
};
std::string to_string(Verdict v);
std::optional<Verdict> verdict_from_string(const std::string& s);

struct SurfaceClass {
  Verdict verdict = Verdict::Smooth;
  unsigned delta = 0;
  std::vector<unsigned> pattern;
  std::string label() const;  // e.g. "Isolated(3,{3,3,3})"
};

struct Classification {
  SurfaceClass cls;
  SingularLocus locus;
  std::optional<Plane> factor;
  std::optional<Cone> cone;
};

Classification classify_full(const CubicForm& form);
SurfaceClass classify(const CubicForm& form);

}  // namespace ntcubic
