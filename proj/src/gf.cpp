#include "ntcubic/gf.hpp"

#include <string>

#include "ntcubic/error.hpp"

namespace ntcubic {

std::string to_string(Level level) {
  switch (level) {
    case Level::Prime:
      return "prime";
    case Level::Base:
      return "base";
    case Level::Cubic:
      return "cubic";
  }
  return "?";
}

Code determinant(const Field& f, const Mat3& m) {
  auto term = [&](int a, int b, int c) {
    return f.mul(m[0][a], f.mul(m[1][b], m[2][c]));
  };
  Code pos = f.add(f.add(term(0, 1, 2), term(1, 2, 0)), term(2, 0, 1));
  Code neg = f.add(f.add(term(0, 2, 1), term(1, 0, 2)), term(2, 1, 0));
  return f.sub(pos, neg);
}

Mat3 invert(const Field& f, const Mat3& m) {
  const Code det = determinant(f, m);
  if (det == 0) throw Error("singular 3x3 matrix");
  const Code di = f.inv(det);
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Cofactor of m[j][i].
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      Code cof = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
      r[i][j] = f.mul(cof, di);
    }
  }
  return r;
}

std::array<Code, 3> apply(const Field& f, const Mat3& m, const std::array<Code, 3>& v) {
  std::array<Code, 3> out{};
  for (int i = 0; i < 3; ++i) {
    Code s = 0;
    for (int j = 0; j < 3; ++j) s = f.add(s, f.mul(m[i][j], v[j]));
    out[i] = s;
  }
  return out;
}

std::shared_ptr<const FieldTower> FieldTower::build(std::uint32_t p, std::uint32_t h) {
  if (h < 1) throw Error("h must be positive");
  auto prime = Field::prime(p);
  std::uint64_t cubic_size = 1;
  for (std::uint32_t i = 0; i < 3 * h; ++i) {
    cubic_size *= p;
    if (cubic_size > kMaxCubicSize) throw TooLarge("p^(3h) exceeds 2^24");
  }

  std::shared_ptr<FieldTower> t(new FieldTower());
  t->p_ = p;
  t->h_ = h;
  t->prime_ = prime;
  if (h == 1) {
    t->base_ = prime;
  } else {
    t->base_ = Field::extension(prime, upoly::smallest_irreducible(*prime, h));
  }
  t->q_ = t->base_->size();
  t->cubic_ = Field::extension(t->base_, upoly::smallest_irreducible(*t->base_, 3));
  const std::uint64_t q = t->q_;
  t->norm_exponent_ = q * q + q + 1;

  const Field& Fq = *t->base_;
  const Field& F = *t->cubic_;
  for (Code a = 0; a < F.size(); ++a) {
    std::array<Code, 3> conj = {a, F.frobenius(a, 1), F.frobenius(a, 2)};
    Mat3 coords{};
    for (int i = 0; i < 3; ++i) {
      auto d = F.digits(conj[i]);
      for (int j = 0; j < 3; ++j) coords[i][j] = d[j];
    }
    if (determinant(Fq, coords) != 0) {
      t->alpha_ = a;
      t->conj_ = conj;
      break;
    }
  }
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) t->psi_[k][j] = t->conj_[(k + j) % 3];
  t->psi_inv_ = invert(F, t->psi_);
  return t;
}

Element FieldTower::element(Level level, Code code) const {
  const std::uint32_t limit = level == Level::Prime ? p_ : level == Level::Base ? q_ : cubic_->size();
  if (code >= limit)
    throw Error("code " + std::to_string(code) + " out of range for " + to_string(level) + " level");
  return {level, code};
}

static void require_cubic(const Element& x, const char* op) {
  if (x.level != Level::Cubic) throw WrongLevel(std::string(op) + " expects an element of F_{q^3}");
}

Element FieldTower::trace(Element x) const {
  require_cubic(x, "trace");
  return {Level::Base, trace_code(x.code)};
}

Element FieldTower::norm(Element x) const {
  require_cubic(x, "norm");
  return {Level::Base, norm_code(x.code)};
}

Element FieldTower::frobenius(Element x, unsigned k) const {
  require_cubic(x, "frobenius");
  return {Level::Cubic, cubic_->frobenius(x.code, k % 3)};
}

std::array<Code, 3> FieldTower::coords_code(Code x) const {
  const Field& F = *cubic_;
  std::array<Code, 3> conj = {x, F.frobenius(x, 1), F.frobenius(x, 2)};
  return apply(F, psi_inv_, conj);
}

Code FieldTower::from_coords_code(const std::array<Code, 3>& v) const {
  const Field& F = *cubic_;
  Code s = 0;
  for (int i = 0; i < 3; ++i) s = F.add(s, F.mul(v[i], conj_[i]));
  return s;
}

std::array<Element, 3> FieldTower::coords_on_normal_basis(Element x) const {
  require_cubic(x, "coords_on_normal_basis");
  auto c = coords_code(x.code);
  for (Code ci : c)
    if (ci >= q_) throw Error("normal basis coordinate outside F_q");
  return {Element{Level::Base, c[0]}, Element{Level::Base, c[1]}, Element{Level::Base, c[2]}};
}

Element FieldTower::from_normal_basis(const std::array<Element, 3>& coords) const {
  std::array<Code, 3> v{};
  for (int i = 0; i < 3; ++i) {
    if (coords[i].level == Level::Cubic) throw WrongLevel("normal basis coordinates must lie in F_q");
    v[i] = coords[i].code;
  }
  return {Level::Cubic, from_coords_code(v)};
}

Element FieldTower::embed(Element x) const {
  return {Level::Cubic, x.code};
}

FieldPtr FieldTower::base_extension(unsigned d) const {
  if (d == 0) throw Error("extension degree must be positive");
  if (d == 1) return base_;
  if (d == 3) return cubic_;
  std::uint64_t size = 1;
  for (unsigned i = 0; i < d; ++i) size *= q_;
  if (size > Field::kMaxSize) throw TooLarge("extension of F_q exceeds 2^24 elements");
  std::lock_guard lock(ext_mutex_);
  auto it = base_ext_.find(d);
  if (it != base_ext_.end()) return it->second;
  auto f = Field::extension(base_, upoly::smallest_irreducible(*base_, d));
  base_ext_.emplace(d, f);
  return f;
}

FieldPtr FieldTower::cubic_extension(unsigned d) const {
  if (d == 0) throw Error("extension degree must be positive");
  if (d == 1) return cubic_;
  std::lock_guard lock(ext_mutex_);
  auto it = cubic_ext_.find(d);
  if (it != cubic_ext_.end()) return it->second;
  std::uint64_t size = 1;
  for (unsigned i = 0; i < d; ++i) size *= cubic_->size();
  if (size > Field::kMaxSize) throw TooLarge("extension of F_{q^3} exceeds 2^24 elements");
  auto f = Field::extension(cubic_, upoly::smallest_irreducible(*cubic_, d));
  cubic_ext_.emplace(d, f);
  return f;
}

}  // namespace ntcubic
