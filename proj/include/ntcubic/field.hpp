#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ntcubic {

/// Canonical encoding of a field element. For an extension of degree d over a
/// base field of size Q the code is sum c_i * Q^i, where c_i are base codes and
/// c_0 is the constant term. Base elements therefore keep their code when they
/// are embedded as constants.
using Code = std::uint32_t;

/// A finite field realized by lookup tables, either a prime field or a simple
/// extension of another Field by a monic irreducible polynomial.
///
/// Fields are immutable once built and are shared through shared_ptr.
class Field {
 public:
  /// Largest field this class will tabulate.
  static constexpr std::uint32_t kMaxSize = 1u << 24;

  static std::shared_ptr<const Field> prime(std::uint32_t p);

  /// Extension base[t]/(modulus). `modulus` lists base codes low degree first
  /// and must be monic of degree >= 1. Irreducibility is checked.
  static std::shared_ptr<const Field> extension(std::shared_ptr<const Field> base,
                                                std::vector<Code> modulus);

  std::uint32_t size() const { return size_; }
  std::uint32_t characteristic() const { return p_; }
  /// Degree over the immediate base (1 for a prime field).
  unsigned degree() const { return degree_; }
  /// Degree over the prime field.
  unsigned absolute_degree() const { return abs_degree_; }
  bool is_prime() const { return base_ == nullptr; }
  const std::shared_ptr<const Field>& base() const { return base_; }
  /// Size of the immediate base (p for a prime field).
  std::uint32_t base_size() const { return base_ ? base_->size() : p_; }
  const std::vector<Code>& modulus() const { return modulus_; }

  Code zero() const { return 0; }
  Code one() const { return 1; }

  Code add(Code a, Code b) const {
    if (small_) return add_table_[a * size_ + b];
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint32_t la = log_[a];
    std::uint32_t d = log_[b] + order_ - la;
    if (d >= order_) d -= order_;
    std::uint32_t z = zech_[d];
    if (z == kNoLog) return 0;
    return exp_[la + z];
  }
  Code neg(Code a) const { return neg_[a]; }
  Code sub(Code a, Code b) const { return add(a, neg_[b]); }
  Code mul(Code a, Code b) const {
    if (small_) return mul_table_[a * size_ + b];
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  /// Multiplicative inverse; inv(0) is 0 by convention.
  Code inv(Code a) const { return inv_[a]; }
  Code div(Code a, Code b) const { return mul(a, inv_[b]); }
  Code pow(Code a, std::uint64_t e) const;

  /// The integer n reduced mod p, as a field element.
  Code from_int(long long n) const;
  /// x^(Q^k) where Q is the size of the immediate base.
  Code frobenius(Code x, unsigned k = 1) const;
  /// x^(p^k) (absolute Frobenius).
  Code abs_frobenius(Code x, unsigned k = 1) const;
  bool in_base(Code x) const { return x < base_size(); }

  std::vector<Code> digits(Code x) const;
  Code from_digits(std::span<const Code> digits) const;

  /// Generator of the multiplicative group used for the log tables.
  Code generator() const { return exp_[1]; }
  std::uint32_t log(Code x) const { return log_[x]; }
  Code exp(std::uint64_t k) const { return exp_[k % order_]; }

 private:
  static constexpr std::uint32_t kNoLog = 0xffffffffu;
  static constexpr std::uint32_t kSmallLimit = 256;

  Field() = default;
  // Fills every table from reference arithmetic on codes.
  template <class SlowAdd, class SlowMul>
  void build_tables(SlowAdd slow_add, SlowMul slow_mul);

  std::uint32_t p_ = 0;
  std::uint32_t size_ = 0;
  std::uint32_t order_ = 0;  // size - 1
  unsigned degree_ = 1;
  unsigned abs_degree_ = 1;
  std::shared_ptr<const Field> base_;
  std::vector<Code> modulus_;

  bool small_ = false;
  std::vector<std::uint16_t> add_table_;
  std::vector<std::uint16_t> mul_table_;
  std::vector<std::uint32_t> log_;
  std::vector<Code> exp_;  // length 2 * order_
  std::vector<std::uint32_t> zech_;
  std::vector<Code> neg_;
  std::vector<Code> inv_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Polynomials over a Field, coefficient codes listed low degree first.
namespace upoly {

using Poly = std::vector<Code>;

void trim(Poly& a);
int degree(const Poly& a);
Poly mul(const Field& f, const Poly& a, const Poly& b);
/// Remainder of a modulo b (b nonzero).
Poly mod(const Field& f, const Poly& a, const Poly& b);
Poly gcd(const Field& f, Poly a, Poly b);
Code eval(const Field& f, const Poly& a, Code x);
/// True iff the monic polynomial has no factor of degree 1..deg/2 over f.
bool is_irreducible(const Field& f, const Poly& monic);
/// Monic irreducible of the given degree with the smallest integer encoding of
/// its non-leading coefficients (sum c_i |f|^i).
Poly smallest_irreducible(const Field& f, unsigned degree);

}  // namespace upoly

}  // namespace ntcubic
