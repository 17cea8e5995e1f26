#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frb/errors.hpp"
#include "frb/gf.hpp"

namespace frb::mds {

// Smallest characteristic-2 field order that seats theta evaluation points.
inline uint32_t default_field_order(int theta) {
  uint32_t q = 2;
  while (q < static_cast<uint32_t>(theta)) q <<= 1;
  return q;
}

// Systematic (theta, M) Reed-Solomon code over GF(q): codeword i is the
// evaluation at the i-th canonical field element of the degree-<M polynomial
// interpolating the file on the first M points, so coordinates 0..M-1 carry
// the file verbatim. Decoding solves the M x M system on any M known
// coordinates and cross-checks the rest.
class MdsCode {
 public:
  MdsCode(int theta, int dim, uint32_t q) : theta_(theta), m_(dim), field_(q) {
    if (dim < 1 || dim > theta) raise(Errc::bad_dimension, "need 1 <= M <= theta");
    if (static_cast<uint32_t>(theta) > q)
      raise(Errc::field_too_small, "theta = " + std::to_string(theta) + " exceeds field order " +
                                       std::to_string(q));
    // Vandermonde on the first theta elements, normalized so the top M x M
    // block is the identity: G = V * inv(V_top).
    std::vector<std::vector<uint32_t>> vand(theta, std::vector<uint32_t>(m_));
    for (int i = 0; i < theta; ++i)
      for (int j = 0; j < m_; ++j)
        vand[i][j] = field_.pow(static_cast<uint32_t>(i), static_cast<uint64_t>(j));

    std::vector<std::vector<uint32_t>> inv = invert_top(vand);
    gen_.assign(theta, std::vector<uint16_t>(m_, 0));
    for (int i = 0; i < theta; ++i)
      for (int j = 0; j < m_; ++j) {
        uint32_t acc = 0;
        for (int l = 0; l < m_; ++l)
          acc = field_.add(acc, field_.mul(vand[i][l], inv[l][j]));
        gen_[i][j] = static_cast<uint16_t>(acc);
      }
  }

  int length() const { return theta_; }
  int dim() const { return m_; }
  const gf::Field& field() const { return field_; }

  std::vector<uint16_t> encode(const std::vector<uint16_t>& file) const {
    if (static_cast<int>(file.size()) != m_)
      raise(Errc::length_mismatch, "file has " + std::to_string(file.size()) +
                                       " symbols, code dimension is " + std::to_string(m_));
    for (uint16_t s : file)
      if (s >= field_.order()) raise(Errc::index_out_of_range, "symbol outside field");
    std::vector<uint16_t> cw(theta_);
    for (int i = 0; i < theta_; ++i) {
      uint32_t acc = 0;
      for (int j = 0; j < m_; ++j) acc = field_.add(acc, field_.mul(gen_[i][j], file[j]));
      cw[i] = static_cast<uint16_t>(acc);
    }
    return cw;
  }

  // known: (position, symbol) pairs with at least M distinct positions.
  std::vector<uint16_t> decode_erasures(std::vector<std::pair<int, uint16_t>> known) const {
    std::sort(known.begin(), known.end());
    std::vector<std::pair<int, uint16_t>> uniq;
    for (const auto& [pos, sym] : known) {
      if (pos < 0 || pos >= theta_) raise(Errc::index_out_of_range, "codeword position");
      if (!uniq.empty() && uniq.back().first == pos) {
        if (uniq.back().second != sym)
          raise(Errc::inconsistent, "conflicting symbols at position " + std::to_string(pos));
        continue;
      }
      uniq.push_back({pos, sym});
    }
    if (static_cast<int>(uniq.size()) < m_)
      raise(Errc::insufficient_symbols, "have " + std::to_string(uniq.size()) +
                                            " distinct positions, need " + std::to_string(m_));

    // solve gen[rows] * f = syms on the first M known coordinates
    std::vector<std::vector<uint32_t>> a(m_, std::vector<uint32_t>(m_ + 1));
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < m_; ++j) a[r][j] = gen_[uniq[r].first][j];
      a[r][m_] = uniq[r].second;
    }
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      for (int r = col; r < m_; ++r)
        if (a[r][col]) {
          piv = r;
          break;
        }
      if (piv < 0) raise(Errc::inconsistent, "singular decode system");
      std::swap(a[col], a[piv]);
      uint32_t ic = field_.inv(a[col][col]);
      for (int j = col; j <= m_; ++j) a[col][j] = field_.mul(a[col][j], ic);
      for (int r = 0; r < m_; ++r) {
        if (r == col || !a[r][col]) continue;
        uint32_t f = a[r][col];
        for (int j = col; j <= m_; ++j)
          a[r][j] = field_.sub(a[r][j], field_.mul(f, a[col][j]));
      }
    }
    std::vector<uint16_t> file(m_);
    for (int j = 0; j < m_; ++j) file[j] = static_cast<uint16_t>(a[j][m_]);

    // remaining known coordinates must lie on the same codeword
    for (std::size_t r = m_; r < uniq.size(); ++r) {
      uint32_t acc = 0;
      for (int j = 0; j < m_; ++j)
        acc = field_.add(acc, field_.mul(gen_[uniq[r].first][j], file[j]));
      if (acc != uniq[r].second)
        raise(Errc::inconsistent,
              "known symbol at position " + std::to_string(uniq[r].first) + " is off-codeword");
    }
    return file;
  }

 private:
  std::vector<std::vector<uint32_t>> invert_top(
      const std::vector<std::vector<uint32_t>>& vand) const {
    std::vector<std::vector<uint32_t>> a(m_, std::vector<uint32_t>(2 * m_, 0));
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) a[i][j] = vand[i][j];
      a[i][m_ + i] = 1;
    }
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      for (int r = col; r < m_; ++r)
        if (a[r][col]) {
          piv = r;
          break;
        }
      if (piv < 0) raise(Errc::bad_dimension, "vandermonde block not invertible");
      std::swap(a[col], a[piv]);
      uint32_t ic = field_.inv(a[col][col]);
      for (int j = 0; j < 2 * m_; ++j) a[col][j] = field_.mul(a[col][j], ic);
      for (int r = 0; r < m_; ++r) {
        if (r == col || !a[r][col]) continue;
        uint32_t f = a[r][col];
        for (int j = 0; j < 2 * m_; ++j)
          a[r][j] = field_.sub(a[r][j], field_.mul(f, a[col][j]));
      }
    }
    std::vector<std::vector<uint32_t>> inv(m_, std::vector<uint32_t>(m_));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) inv[i][j] = a[i][m_ + j];
    return inv;
  }

  int theta_;
  int m_;
  gf::Field field_;
  std::vector<std::vector<uint16_t>> gen_;  // theta x M, top block identity
};

}  // namespace frb::mds
