#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "frb/bits.hpp"
#include "frb/errors.hpp"

namespace frb {

struct UniformityProfile {
  std::optional<int> alpha;  // common row weight, if any
  std::optional<int> rho;    // common column weight, if any
};

// n x theta 0/1 matrix held as row supports and column supports in sync.
// Rows are storage nodes, columns are codeword symbols.
class BinaryIncidenceMatrix {
 public:
  BinaryIncidenceMatrix() = default;
  BinaryIncidenceMatrix(int n, int theta)
      : n_(n), theta_(theta), row_(n, Bitset(theta)), col_(theta, Bitset(n)) {
    if (n < 0 || theta < 0) raise(Errc::bad_dimension, "negative matrix dimension");
  }

  int rows() const { return n_; }
  int cols() const { return theta_; }

  void set(int i, int j) {
    check_row(i);
    check_col(j);
    row_[i].set(j);
    col_[j].set(i);
  }

  bool at(int i, int j) const {
    check_row(i);
    check_col(j);
    return row_[i].test(j);
  }

  const Bitset& row_support(int i) const {
    check_row(i);
    return row_[i];
  }
  const Bitset& col_support(int j) const {
    check_col(j);
    return col_[j];
  }

  UniformityProfile weights() const {
    UniformityProfile p;
    if (n_ > 0) {
      std::size_t a = row_[0].count();
      bool uni = true;
      for (const auto& r : row_)
        if (r.count() != a) {
          uni = false;
          break;
        }
      if (uni) p.alpha = static_cast<int>(a);
    }
    if (theta_ > 0) {
      std::size_t r = col_[0].count();
      bool uni = true;
      for (const auto& c : col_)
        if (c.count() != r) {
          uni = false;
          break;
        }
      if (uni) p.rho = static_cast<int>(r);
    }
    return p;
  }

  // Union of column supports: the rows touched by T.
  Bitset cover_rows(const std::vector<int>& cols) const {
    Bitset out(n_);
    for (int j : cols) {
      check_col(j);
      out |= col_[j];
    }
    return out;
  }

  // Union of row supports: the columns touched by S.
  Bitset cover_cols(const std::vector<int>& rows) const {
    Bitset out(theta_);
    for (int i : rows) {
      check_row(i);
      out |= row_[i];
    }
    return out;
  }

  bool has_empty_column() const {
    for (const auto& c : col_)
      if (c.none()) return true;
    return false;
  }

  int min_col_weight() const {
    int m = n_ + 1;
    for (const auto& c : col_) m = std::min(m, static_cast<int>(c.count()));
    return theta_ == 0 ? 0 : m;
  }

  BinaryIncidenceMatrix transposed() const {
    BinaryIncidenceMatrix t(theta_, n_);
    t.row_ = col_;
    t.col_ = row_;
    return t;
  }

  bool consistent() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < theta_; ++j)
        if (row_[i].test(j) != col_[j].test(i)) return false;
    return true;
  }

  friend bool operator==(const BinaryIncidenceMatrix& a, const BinaryIncidenceMatrix& b) {
    return a.n_ == b.n_ && a.theta_ == b.theta_ && a.row_ == b.row_;
  }

  // Text format: header "n theta", then n rows of 0/1 characters.
  void write_text(std::ostream& os) const {
    os << n_ << ' ' << theta_ << '\n';
    for (const auto& r : row_) os << r.to01() << '\n';
  }

  static BinaryIncidenceMatrix read_text(std::istream& is) {
    long long n = -1, theta = -1;
    if (!(is >> n >> theta) || n < 0 || theta < 0)
      raise(Errc::parse_error, "bad header, expected \"n theta\"");
    std::string line;
    std::getline(is, line);  // rest of header line
    BinaryIncidenceMatrix m(static_cast<int>(n), static_cast<int>(theta));
    for (int i = 0; i < n; ++i) {
      if (!std::getline(is, line))
        raise(Errc::parse_error, "missing row " + std::to_string(i + 1));
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (static_cast<long long>(line.size()) != theta)
        raise(Errc::parse_error, "row " + std::to_string(i + 1) + " has length " +
                                     std::to_string(line.size()) + ", expected " +
                                     std::to_string(theta));
      for (int j = 0; j < theta; ++j) {
        if (line[j] == '1')
          m.set(i, j);
        else if (line[j] != '0')
          raise(Errc::parse_error, "row " + std::to_string(i + 1) + ", column " +
                                       std::to_string(j + 1) + ": expected 0 or 1");
      }
    }
    return m;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n_;
    j["theta"] = theta_;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : row_) rows.push_back(r.to01());
    j["rows"] = rows;
    return j;
  }

  static BinaryIncidenceMatrix from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j.contains("theta") || !j.contains("rows"))
      raise(Errc::parse_error, "matrix json needs n, theta, rows");
    BinaryIncidenceMatrix m(j.at("n").get<int>(), j.at("theta").get<int>());
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != m.n_)
      raise(Errc::parse_error, "matrix json row count mismatch");
    for (int i = 0; i < m.n_; ++i) {
      std::string s = rows.at(i).get<std::string>();
      if (static_cast<int>(s.size()) != m.theta_)
        raise(Errc::parse_error, "matrix json row length mismatch");
      for (int jx = 0; jx < m.theta_; ++jx)
        if (s[jx] == '1') m.set(i, jx);
    }
    return m;
  }

 private:
  void check_row(int i) const {
    if (i < 0 || i >= n_) raise(Errc::index_out_of_range, "row index " + std::to_string(i));
  }
  void check_col(int j) const {
    if (j < 0 || j >= theta_) raise(Errc::index_out_of_range, "column index " + std::to_string(j));
  }

  int n_ = 0, theta_ = 0;
  std::vector<Bitset> row_;
  std::vector<Bitset> col_;
};

}  // namespace frb
