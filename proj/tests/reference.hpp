#pragma once

// Schoolbook two-level tower arithmetic for use as a test oracle. Everything is
// recomputed from the moduli with plain integer arithmetic mod p; no lookup
// tables from the library are consulted.

#include <cstdint>
#include <vector>

namespace reftest {

struct RefTower {
  std::uint32_t p;
  std::vector<std::uint32_t> m1;  // over F_p, monic, low degree first
  std::vector<std::uint32_t> m2;  // over F_q, monic, low degree first
  std::uint32_t h() const { return static_cast<std::uint32_t>(m1.size() - 1); }
  std::uint32_t q() const {
    std::uint32_t r = 1;
    for (std::uint32_t i = 0; i < h(); ++i) r *= p;
    return r;
  }

  std::uint32_t q_add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0, scale = 1;
    for (std::uint32_t i = 0; i < h(); ++i) {
      r += ((a % p + b % p) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return r;
  }
  std::uint32_t q_neg(std::uint32_t a) const {
    std::uint32_t r = 0, scale = 1;
    for (std::uint32_t i = 0; i < h(); ++i) {
      r += ((p - a % p) % p) * scale;
      a /= p;
      scale *= p;
    }
    return r;
  }
  std::uint32_t q_mul(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t d = h();
    std::vector<std::uint64_t> da(d), db(d), prod(2 * d, 0);
    for (std::uint32_t i = 0; i < d; ++i) {
      da[i] = a % p;
      a /= p;
      db[i] = b % p;
      b /= p;
    }
    for (std::uint32_t i = 0; i < d; ++i)
      for (std::uint32_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    for (std::uint32_t k = 2 * d; k-- > d;) {
      std::uint64_t c = prod[k];
      prod[k] = 0;
      for (std::uint32_t i = 0; i < d; ++i) prod[k - d + i] = (prod[k - d + i] + (p - c) * m1[i]) % p;
    }
    std::uint32_t r = 0;
    for (std::uint32_t i = d; i-- > 0;) r = r * p + static_cast<std::uint32_t>(prod[i]);
    return r;
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t Q = q();
    std::uint32_t r = 0, scale = 1;
    for (int i = 0; i < 3; ++i) {
      r += q_add(a % Q, b % Q) * scale;
      a /= Q;
      b /= Q;
      scale *= Q;
    }
    return r;
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t Q = q();
    std::uint32_t da[3], db[3], prod[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      da[i] = a % Q;
      a /= Q;
      db[i] = b % Q;
      b /= Q;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) prod[i + j] = q_add(prod[i + j], q_mul(da[i], db[j]));
    for (int k = 4; k >= 3; --k) {
      std::uint32_t c = prod[k];
      prod[k] = 0;
      for (int i = 0; i < 3; ++i) prod[k - 3 + i] = q_add(prod[k - 3 + i], q_neg(q_mul(c, m2[i])));
    }
    return prod[0] + Q * (prod[1] + Q * prod[2]);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
};

}  // namespace reftest
