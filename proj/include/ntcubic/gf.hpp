#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ntcubic/field.hpp"

namespace ntcubic {

enum class Level { Prime, Base, Cubic };

std::string to_string(Level level);

/// A field element tagged with the tower level it lives in.
struct Element {
  Level level = Level::Cubic;
  Code code = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

/// Square matrix with entries in a Field, stored row-major.
using Mat3 = std::array<std::array<Code, 3>, 3>;

/// The tower F_p < F_q < F_{q^3} together with a normal basis
/// {alpha, alpha^q, alpha^{q^2}} of F_{q^3} over F_q.
///
/// The moduli are the smallest monic irreducibles in the integer ordering of
/// their non-leading coefficients, and alpha is the smallest code whose
/// conjugates are independent, so every run builds the same tower.
/// A tower is immutable after construction; the lazily built search
/// extensions are guarded internally.
class FieldTower {
 public:
  /// Guard on the size of F_{q^3}.
  static constexpr std::uint64_t kMaxCubicSize = 1ull << 24;

  static std::shared_ptr<const FieldTower> build(std::uint32_t p, std::uint32_t h);

  std::uint32_t p() const { return p_; }
  std::uint32_t h() const { return h_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t cubic_size() const { return cubic_->size(); }

  const FieldPtr& prime_field() const { return prime_; }
  const FieldPtr& base_field() const { return base_; }
  const FieldPtr& cubic_field() const { return cubic_; }
  const Field& Fq() const { return *base_; }
  const Field& Fq3() const { return *cubic_; }

  /// Modulus of F_q over F_p (low degree first); {0, 1} when h = 1.
  const std::vector<Code>& modulus1() const { return base_->modulus(); }
  /// Modulus of F_{q^3} over F_q.
  const std::vector<Code>& modulus2() const { return cubic_->modulus(); }
  Code alpha() const { return alpha_; }
  /// (alpha, alpha^q, alpha^{q^2}).
  const std::array<Code, 3>& conjugates() const { return conj_; }
  /// Conjugate matrix: row k is (alpha^{q^k}, alpha^{q^{k+1}}, alpha^{q^{k+2}}).
  const Mat3& psi_matrix() const { return psi_; }
  const Mat3& psi_inverse() const { return psi_inv_; }

  // Tagged interface (level checked).
  Element element(Level level, Code code) const;
  Element trace(Element x) const;
  Element norm(Element x) const;
  Element frobenius(Element x, unsigned k) const;
  std::array<Element, 3> coords_on_normal_basis(Element x) const;
  Element from_normal_basis(const std::array<Element, 3>& coords) const;
  /// Embeds a Base-level element into F_{q^3}.
  Element embed(Element x) const;

  // Untagged fast paths on F_{q^3} codes.
  Code trace_code(Code x) const {
    const Field& F = *cubic_;
    return F.add(F.add(x, F.frobenius(x, 1)), F.frobenius(x, 2));
  }
  Code norm_code(Code x) const { return cubic_->pow(x, norm_exponent_); }
  std::array<Code, 3> coords_code(Code x) const;
  Code from_coords_code(const std::array<Code, 3>& v) const;

  /// Degree-d extension of F_q used for point searches, built over F_q with the
  /// smallest irreducible modulus. d = 1 is F_q and d = 3 is the tower's F_{q^3}.
  FieldPtr base_extension(unsigned d) const;
  /// Degree-d extension of F_{q^3}.
  FieldPtr cubic_extension(unsigned d) const;

 private:
  FieldTower() = default;

  std::uint32_t p_ = 0, h_ = 0, q_ = 0;
  std::uint64_t norm_exponent_ = 0;
  FieldPtr prime_, base_, cubic_;
  Code alpha_ = 0;
  std::array<Code, 3> conj_{};
  Mat3 psi_{};
  Mat3 psi_inv_{};

  mutable std::mutex ext_mutex_;
  mutable std::map<unsigned, FieldPtr> base_ext_;
  mutable std::map<unsigned, FieldPtr> cubic_ext_;
};

using TowerPtr = std::shared_ptr<const FieldTower>;

/// Inverse of a 3x3 matrix over f; throws Error when singular.
Mat3 invert(const Field& f, const Mat3& m);
Code determinant(const Field& f, const Mat3& m);
std::array<Code, 3> apply(const Field& f, const Mat3& m, const std::array<Code, 3>& v);

}  // namespace ntcubic
