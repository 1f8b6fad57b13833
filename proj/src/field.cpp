#include "ntcubic/field.hpp"

#include <algorithm>
#include <string>

#include "ntcubic/error.hpp"

namespace ntcubic {

namespace {

bool is_prime_number(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

template <class SlowAdd, class SlowMul>
void Field::build_tables(SlowAdd slow_add, SlowMul slow_mul) {
  const std::uint32_t n = size_;
  order_ = n - 1;

  auto slow_pow = [&](Code a, std::uint64_t e) {
    Code r = 1;
    while (e) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  };

  // Smallest code generating the multiplicative group.
  Code gen = 0;
  if (n == 2) {
    gen = 1;
  } else {
    auto factors = prime_factors(order_);
    for (Code g = 2; g < n; ++g) {
      bool primitive = true;
      for (auto r : factors) {
        if (slow_pow(g, order_ / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        gen = g;
        break;
      }
    }
  }

  exp_.assign(2 * std::size_t(order_), 0);
  log_.assign(n, kNoLog);
  Code x = 1;
  for (std::uint32_t k = 0; k < order_; ++k) {
    exp_[k] = x;
    exp_[k + order_] = x;
    log_[x] = k;
    x = slow_mul(x, gen);
  }

  // The constant p-1 has the same code in every field of the tower.
  const std::uint32_t log_minus_one = log_[p_ - 1];
  neg_.assign(n, 0);
  inv_.assign(n, 0);
  for (Code a = 1; a < n; ++a) {
    neg_[a] = exp_[log_[a] + log_minus_one];
    inv_[a] = exp_[(order_ - log_[a]) % order_];
  }

  small_ = n <= kSmallLimit;
  if (small_) {
    add_table_.assign(std::size_t(n) * n, 0);
    mul_table_.assign(std::size_t(n) * n, 0);
    for (Code a = 0; a < n; ++a) {
      for (Code b = 0; b < n; ++b) {
        add_table_[a * n + b] = static_cast<std::uint16_t>(slow_add(a, b));
        Code m = (a == 0 || b == 0) ? 0 : exp_[log_[a] + log_[b]];
        mul_table_[a * n + b] = static_cast<std::uint16_t>(m);
      }
    }
  } else {
    zech_.assign(order_, kNoLog);
    for (std::uint32_t k = 0; k < order_; ++k) {
      Code s = slow_add(1, exp_[k]);
      zech_[k] = s == 0 ? kNoLog : log_[s];
    }
  }
}

std::shared_ptr<const Field> Field::prime(std::uint32_t p) {
  if (!is_prime_number(p)) throw NotPrime(std::to_string(p) + " is not prime");
  if (p > kMaxSize) throw TooLarge("prime too large to tabulate");
  std::shared_ptr<Field> f(new Field());
  f->p_ = p;
  f->size_ = p;
  f->degree_ = 1;
  f->abs_degree_ = 1;
  f->modulus_ = {0, 1};
  const std::uint64_t pp = p;
  f->build_tables([pp](Code a, Code b) { return Code((a + b) % pp); },
                  [pp](Code a, Code b) { return Code((std::uint64_t(a) * b) % pp); });
  return f;
}

std::shared_ptr<const Field> Field::extension(std::shared_ptr<const Field> base,
                                              std::vector<Code> modulus) {
  upoly::trim(modulus);
  const int d = upoly::degree(modulus);
  if (d < 1 || modulus.back() != 1) throw Error("extension modulus must be monic of degree >= 1");
  for (Code c : modulus)
    if (c >= base->size()) throw Error("modulus coefficient outside base field");
  std::uint64_t size = 1;
  for (int i = 0; i < d; ++i) {
    size *= base->size();
    if (size > kMaxSize) throw TooLarge("extension field exceeds 2^24 elements");
  }
  if (!upoly::is_irreducible(*base, modulus)) throw Error("extension modulus is reducible");

  std::shared_ptr<Field> f(new Field());
  f->p_ = base->characteristic();
  f->size_ = static_cast<std::uint32_t>(size);
  f->degree_ = static_cast<unsigned>(d);
  f->abs_degree_ = base->absolute_degree() * f->degree_;
  f->base_ = base;
  f->modulus_ = modulus;

  const Field& B = *base;
  const std::uint32_t Q = B.size();
  auto split = [Q, d](Code x, Code* out) {
    for (int i = 0; i < d; ++i) {
      out[i] = x % Q;
      x /= Q;
    }
  };
  auto join = [Q, d](const Code* in) {
    Code x = 0;
    for (int i = d - 1; i >= 0; --i) x = x * Q + in[i];
    return x;
  };
  auto slow_add = [&](Code a, Code b) {
    Code da[8], db[8];
    split(a, da);
    split(b, db);
    for (int i = 0; i < d; ++i) da[i] = B.add(da[i], db[i]);
    return join(da);
  };
  auto slow_mul = [&](Code a, Code b) {
    Code da[8], db[8], prod[16] = {};
    split(a, da);
    split(b, db);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) prod[i + j] = B.add(prod[i + j], B.mul(da[i], db[j]));
    for (int k = 2 * d - 2; k >= d; --k) {
      Code c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (int i = 0; i < d; ++i) prod[k - d + i] = B.sub(prod[k - d + i], B.mul(c, modulus[i]));
    }
    return join(prod);
  };
  if (d > 8) throw TooLarge("extension degree above 8 is not supported");
  f->build_tables(slow_add, slow_mul);
  return f;
}

Code Field::pow(Code a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(std::uint64_t(log_[a]) * (e % order_)) % order_];
}

Code Field::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Code>(r);
}

Code Field::frobenius(Code x, unsigned k) const {
  if (x == 0) return 0;
  std::uint64_t e = 1;
  for (unsigned i = 0; i < k; ++i) e = (e * base_size()) % order_;
  if (order_ == 1) return x;
  return exp_[(std::uint64_t(log_[x]) * e) % order_];
}

Code Field::abs_frobenius(Code x, unsigned k) const {
  if (x == 0 || order_ == 1) return x;
  std::uint64_t e = 1;
  for (unsigned i = 0; i < k; ++i) e = (e * p_) % order_;
  return exp_[(std::uint64_t(log_[x]) * e) % order_];
}

std::vector<Code> Field::digits(Code x) const {
  std::vector<Code> out(degree_);
  const std::uint32_t Q = base_size();
  for (unsigned i = 0; i < degree_; ++i) {
    out[i] = x % Q;
    x /= Q;
  }
  return out;
}

Code Field::from_digits(std::span<const Code> digits) const {
  Code x = 0;
  const std::uint32_t Q = base_size();
  for (std::size_t i = digits.size(); i-- > 0;) x = x * Q + digits[i];
  return x;
}

namespace upoly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != 0) return static_cast<int>(i);
  return -1;
}

Poly mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  trim(r);
  return r;
}

Poly mod(const Field& f, const Poly& a, const Poly& b) {
  Poly r = a;
  trim(r);
  const int db = degree(b);
  if (db < 0) throw Error("polynomial division by zero");
  const Code lead_inv = f.inv(b[db]);
  for (int k = degree(r); k >= db; k = degree(r)) {
    Code c = f.mul(r[k], lead_inv);
    for (int i = 0; i <= db; ++i) r[k - db + i] = f.sub(r[k - db + i], f.mul(c, b[i]));
    trim(r);
  }
  return r;
}

Poly gcd(const Field& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Code li = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, li);
  }
  return a;
}

Code eval(const Field& f, const Poly& a, Code x) {
  Code r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
  return r;
}

bool is_irreducible(const Field& f, const Poly& monic) {
  const int d = degree(monic);
  if (d < 1) return false;
  if (d == 1) return true;
  const std::uint32_t Q = f.size();
  for (int k = 1; k <= d / 2; ++k) {
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= Q;
    Poly cand(k + 1, 0);
    cand[k] = 1;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t t = idx;
      for (int i = 0; i < k; ++i) {
        cand[i] = static_cast<Code>(t % Q);
        t /= Q;
      }
      if (mod(f, monic, cand).empty()) return false;
    }
  }
  return true;
}

Poly smallest_irreducible(const Field& f, unsigned degree) {
  const std::uint32_t Q = f.size();
  std::uint64_t count = 1;
  for (unsigned i = 0; i < degree; ++i) count *= Q;
  Poly cand(degree + 1, 0);
  cand[degree] = 1;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t t = idx;
    for (unsigned i = 0; i < degree; ++i) {
      cand[i] = static_cast<Code>(t % Q);
      t /= Q;
    }
    if (is_irreducible(f, cand)) return cand;
  }
  throw Error("no irreducible polynomial found");
}

}  // namespace upoly

}  // namespace ntcubic
