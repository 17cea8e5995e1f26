#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frb/errors.hpp"

namespace frb::gf {

inline bool is_prime(uint32_t x) {
  if (x < 2) return false;
  for (uint32_t i = 2; i * i <= x; ++i)
    if (x % i == 0) return false;
  return true;
}

// q = p^m with p prime, or nothing.
inline std::optional<std::pair<uint32_t, uint32_t>> prime_power_split(uint32_t q) {
  if (q < 2) return std::nullopt;
  for (uint32_t p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    uint32_t m = 0, t = q;
    while (t % p == 0) {
      t /= p;
      ++m;
    }
    if (t != 1) return std::nullopt;
    return std::make_pair(p, m);
  }
  return std::make_pair(q, 1u);  // q itself prime
}

struct FieldSpec {
  uint32_t p = 0;
  uint32_t m = 0;
  std::vector<uint16_t> modulus;  // m+1 coeffs low->high, monic; empty when m == 1

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

namespace detail {

inline bool poly_divisible(const std::vector<uint16_t>& a, const std::vector<uint16_t>& b, uint32_t p) {
  std::vector<uint32_t> r(a.begin(), a.end());
  const std::size_t db = b.size() - 1;
  while (r.size() > db) {
    uint32_t c = r.back() % p;
    if (c) {
      std::size_t off = r.size() - 1 - db;
      for (std::size_t i = 0; i < b.size(); ++i) {
        uint32_t sub = (c * b[i]) % p;
        r[off + i] = (r[off + i] + p - sub) % p;
      }
    }
    r.pop_back();
  }
  for (uint32_t x : r)
    if (x % p) return false;
  return true;
}

// Lexicographically least monic irreducible of degree m over GF(p): candidates
// ordered by the base-p reading of their non-leading coefficients.
inline std::vector<uint16_t> least_irreducible(uint32_t p, uint32_t m) {
  std::vector<std::vector<uint16_t>> divisors;
  for (uint32_t d = 1; d <= m / 2; ++d) {
    uint64_t total = 1;
    for (uint32_t i = 0; i < d; ++i) total *= p;
    for (uint64_t idx = 0; idx < total; ++idx) {
      std::vector<uint16_t> c(d + 1, 0);
      uint64_t t = idx;
      for (uint32_t i = 0; i < d; ++i) {
        c[i] = static_cast<uint16_t>(t % p);
        t /= p;
      }
      c[d] = 1;
      divisors.push_back(std::move(c));
    }
  }
  uint64_t total = 1;
  for (uint32_t i = 0; i < m; ++i) total *= p;
  for (uint64_t idx = 0; idx < total; ++idx) {
    std::vector<uint16_t> cand(m + 1, 0);
    uint64_t t = idx;
    for (uint32_t i = 0; i < m; ++i) {
      cand[i] = static_cast<uint16_t>(t % p);
      t /= p;
    }
    cand[m] = 1;
    bool ok = true;
    for (const auto& dv : divisors) {
      if (poly_divisible(cand, dv, p)) {
        ok = false;
        break;
      }
    }
    if (ok) return cand;
  }
  return {};
}

}  // namespace detail

// GF(p^m) with elements named by the base-p integer reading of their
// coefficient vector: index 0 is the zero, index 1 the one of the field.
// Immutable after construction; all operations are pure.
class Field {
 public:
  static constexpr uint32_t kMaxOrder = 1u << 16;
  static constexpr uint32_t kTableLimit = 256;  // mul/inv tables cached up to here

  explicit Field(uint32_t q) {
    auto pp = prime_power_split(q);
    if (!pp) raise(Errc::not_prime_power, std::to_string(q) + " is not a prime power");
    if (q > kMaxOrder)
      raise(Errc::no_modulus, "fields larger than 2^16 are not supported");
    p_ = pp->first;
    m_ = pp->second;
    q_ = q;
    if (m_ > 1) {
      modulus_ = detail::least_irreducible(p_, m_);
      if (modulus_.empty())
        raise(Errc::no_modulus, "no irreducible modulus found for GF(" + std::to_string(q) + ")");
    }
    if (q_ <= kTableLimit) {
      mul_table_.resize(std::size_t{q_} * q_);
      for (uint32_t a = 0; a < q_; ++a)
        for (uint32_t b = 0; b < q_; ++b)
          mul_table_[std::size_t{a} * q_ + b] = static_cast<uint16_t>(mul_raw(a, b));
      inv_table_.assign(q_, 0);
      for (uint32_t a = 1; a < q_; ++a)
        for (uint32_t b = 1; b < q_; ++b)
          if (mul_table_[std::size_t{a} * q_ + b] == 1) {
            inv_table_[a] = static_cast<uint16_t>(b);
            break;
          }
    }
  }

  uint32_t order() const { return q_; }
  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return m_; }
  FieldSpec spec() const { return {p_, m_, modulus_}; }

  uint32_t add(uint32_t a, uint32_t b) const {
    check(a);
    check(b);
    if (m_ == 1) return (a + b) % p_;
    if (p_ == 2) return a ^ b;
    uint32_t r = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
      r += (a % p_ + b % p_) % p_ * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return r;
  }

  uint32_t neg(uint32_t a) const {
    check(a);
    if (m_ == 1) return (p_ - a) % p_;
    if (p_ == 2) return a;
    uint32_t r = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
      r += (p_ - a % p_) % p_ * scale;
      a /= p_;
      scale *= p_;
    }
    return r;
  }

  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

  uint32_t mul(uint32_t a, uint32_t b) const {
    check(a);
    check(b);
    if (!mul_table_.empty()) return mul_table_[std::size_t{a} * q_ + b];
    return mul_raw(a, b);
  }

  uint32_t inv(uint32_t a) const {
    check(a);
    if (a == 0) raise(Errc::division_by_zero, "inv(0)");
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, q_ - 2);
  }

  uint32_t pow(uint32_t a, uint64_t e) const {
    check(a);
    uint32_t r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

 private:
  void check(uint32_t a) const {
    if (a >= q_) raise(Errc::index_out_of_range, "element index outside field");
  }

  uint32_t mul_raw(uint32_t a, uint32_t b) const {
    if (m_ == 1) return (uint64_t{a} * b) % p_;
    uint32_t da[17], db[17];
    for (uint32_t i = 0; i < m_; ++i) {
      da[i] = a % p_;
      a /= p_;
      db[i] = b % p_;
      b /= p_;
    }
    std::vector<uint32_t> conv(2 * m_ - 1, 0);
    for (uint32_t i = 0; i < m_; ++i) {
      if (!da[i]) continue;
      for (uint32_t j = 0; j < m_; ++j)
        conv[i + j] = (conv[i + j] + da[i] * db[j]) % p_;
    }
    // reduce by modulus
    const std::size_t dm = m_;
    while (conv.size() > dm) {
      uint32_t c = conv.back();
      if (c) {
        std::size_t off = conv.size() - 1 - dm;
        for (std::size_t i = 0; i < modulus_.size(); ++i) {
          uint32_t sub = (c * modulus_[i]) % p_;
          conv[off + i] = (conv[off + i] + p_ - sub) % p_;
        }
      }
      conv.pop_back();
    }
    uint32_t r = 0;
    for (std::size_t i = conv.size(); i-- > 0;) r = r * p_ + conv[i];
    return r;
  }

  uint32_t p_ = 0, m_ = 0, q_ = 0;
  std::vector<uint16_t> modulus_;
  std::vector<uint16_t> mul_table_;
  std::vector<uint16_t> inv_table_;
};

// Value wrapper binding an element index to its field; binary operations
// refuse mixed-field operands.
class Element {
 public:
  Element(const Field& f, uint32_t index) : f_(&f), i_(index) {
    if (index >= f.order()) raise(Errc::index_out_of_range, "element index outside field");
  }

  uint32_t index() const { return i_; }
  const Field& field() const { return *f_; }

  friend Element operator+(Element a, Element b) {
    same(a, b);
    return {*a.f_, a.f_->add(a.i_, b.i_)};
  }
  friend Element operator-(Element a, Element b) {
    same(a, b);
    return {*a.f_, a.f_->sub(a.i_, b.i_)};
  }
  friend Element operator*(Element a, Element b) {
    same(a, b);
    return {*a.f_, a.f_->mul(a.i_, b.i_)};
  }
  friend Element operator/(Element a, Element b) {
    same(a, b);
    return {*a.f_, a.f_->mul(a.i_, b.f_->inv(b.i_))};
  }
  friend bool operator==(Element a, Element b) {
    same(a, b);
    return a.i_ == b.i_;
  }

 private:
  static void same(const Element& a, const Element& b) {
    if (a.f_ != b.f_ && !(a.f_->spec() == b.f_->spec()))
      raise(Errc::field_mismatch, "operands belong to different fields");
  }

  const Field* f_;
  uint32_t i_;
};

}  // namespace frb::gf
