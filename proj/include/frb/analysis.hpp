#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "frb/bits.hpp"
#include "frb/designs.hpp"
#include "frb/errors.hpp"
#include "frb/incidence.hpp"

namespace frb::analysis {

// A set of columns whose cover falls short: |covered_rows| < |columns| + delta
// for the delta it was produced under (delta = 0 for plain batch violations).
struct Witness {
  std::vector<int> columns;
  std::vector<int> covered_rows;

  nlohmann::ordered_json to_json() const {
    return {{"columns", columns}, {"covered_rows", covered_rows}};
  }
};

inline bool witness_valid(const BinaryIncidenceMatrix& m, const Witness& w, int delta) {
  Bitset cover = m.cover_rows(w.columns);
  if (cover.to_indices() != w.covered_rows) return false;
  return cover.count() < w.columns.size() + static_cast<std::size_t>(delta);
}

struct TResult {
  int t = 0;
  bool exact = true;
  std::optional<Witness> witness;  // violating set of size t+1 (when one exists)
};

inline constexpr int kExactRowCap = 30;

namespace detail {

inline std::vector<uint64_t> col_masks(const BinaryIncidenceMatrix& m) {
  if (m.rows() > 64) raise(Errc::bad_dimension, "more than 64 rows");
  std::vector<uint64_t> cm(m.cols());
  for (int j = 0; j < m.cols(); ++j) cm[j] = m.col_support(j).low64();
  return cm;
}

inline std::vector<uint64_t> row_masks(const BinaryIncidenceMatrix& m) {
  if (m.cols() > 64) raise(Errc::bad_dimension, "more than 64 columns");
  std::vector<uint64_t> rm(m.rows());
  for (int i = 0; i < m.rows(); ++i) rm[i] = m.row_support(i).low64();
  return rm;
}

inline Witness make_witness(const BinaryIncidenceMatrix& m, std::vector<int> cols) {
  Witness w;
  w.covered_rows = m.cover_rows(cols).to_indices();
  w.columns = std::move(cols);
  return w;
}

// Minimum union of k row supports over lexicographically enumerated subsets,
// with branch-and-bound pruning (the union only grows along a branch).
struct MinUnion {
  const std::vector<uint64_t>& rm;
  int n, k;
  int best;
  std::vector<int> best_rows;
  std::vector<int> cur;

  MinUnion(const std::vector<uint64_t>& rowmasks, int nrows, int kk)
      : rm(rowmasks), n(nrows), k(kk), best(1 << 30) {}

  void run() {
    cur.clear();
    rec(0, 0, 0);
  }

  void rec(int start, int chosen, uint64_t uni) {
    int pc = std::popcount(uni);
    if (pc >= best) return;
    if (chosen == k) {
      best = pc;
      best_rows = cur;
      return;
    }
    for (int r = start; r <= n - (k - chosen); ++r) {
      cur.push_back(r);
      rec(r + 1, chosen + 1, uni | rm[r]);
      cur.pop_back();
    }
  }
};

}  // namespace detail

inline std::pair<long long, std::vector<int>> file_size_witness(const BinaryIncidenceMatrix& m,
                                                                int k) {
  if (k < 1 || k > m.rows()) raise(Errc::k_out_of_range, "k = " + std::to_string(k));
  if (m.cols() <= 64) {
    const auto rm = detail::row_masks(m);
    detail::MinUnion mu(rm, m.rows(), k);
    mu.run();
    return {mu.best, mu.best_rows};
  }
  // generic fallback for wide matrices
  long long best = m.cols() + 1;
  std::vector<int> best_rows;
  auto c = first_combination(k);
  do {
    auto cover = m.cover_cols(c);
    long long pc = static_cast<long long>(cover.count());
    if (pc < best) {
      best = pc;
      best_rows = c;
    }
  } while (next_combination(c, m.rows()));
  return {best, best_rows};
}

// Exact minimum, over all k-subsets of rows, of the union of their supports.
inline long long file_size(const BinaryIncidenceMatrix& m, int k) {
  return file_size_witness(m, k).first;
}

// Largest t such that every set of i <= t columns covers at least i + delta
// rows. A violating i-set exists iff some row set R contains at least
// |R| - delta + 1 full column supports, so row subsets are enumerated by
// increasing size (lexicographic within a size) and the first hit yields both
// t = |R| - delta and a minimum witness. Exact for n <= kExactRowCap rows;
// larger matrices get a sampled upper bound flagged exact = false.
inline TResult ecbc_t(const BinaryIncidenceMatrix& m, int delta) {
  const int n = m.rows(), theta = m.cols();
  if (theta == 0) return {0, true, std::nullopt};
  if (m.has_empty_column()) raise(Errc::empty_column, "matrix has an all-zero column");
  const int rho_min = m.min_col_weight();
  if (delta < 0 || delta > rho_min - 1)
    raise(Errc::delta_too_large, "delta must be at most (min column weight) - 1");

  const auto cm = detail::col_masks(m);

  auto scan_mask = [&](uint64_t mask, int size) -> std::optional<Witness> {
    const int threshold = size - delta + 1;
    const uint64_t outside = ~mask;
    int cnt = 0;
    for (int j = 0; j < theta; ++j) {
      if ((cm[j] & outside) == 0 && ++cnt == threshold) {
        std::vector<int> picked;
        picked.reserve(threshold);
        for (int jj = 0; jj <= j; ++jj)
          if ((cm[jj] & outside) == 0) picked.push_back(jj);
        return detail::make_witness(m, std::move(picked));
      }
    }
    return std::nullopt;
  };

  if (n <= kExactRowCap) {
    for (int s = rho_min; s <= n; ++s) {
      if (s - delta + 1 > theta) break;  // no size this large can qualify
      auto c = first_combination(s);
      do {
        if (auto w = scan_mask(mask_of(c), s)) return {s - delta, true, std::move(w)};
      } while (next_combination(c, n));
    }
    return {theta, true, std::nullopt};
  }

  // sampled upper bound for oversized instances
  std::mt19937_64 rng(0x66726274ULL);
  int best = theta;
  std::optional<Witness> best_w;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  const int budget = 1 << 20;
  for (int it = 0; it < budget; ++it) {
    int s = rho_min + static_cast<int>(rng() % static_cast<uint64_t>(n - rho_min + 1));
    if (s - delta >= best) continue;
    for (int i = 0; i < s; ++i)
      std::swap(perm[i], perm[i + static_cast<int>(rng() % static_cast<uint64_t>(n - i))]);
    uint64_t mask = 0;
    for (int i = 0; i < s; ++i) mask |= uint64_t{1} << perm[i];
    if (auto w = scan_mask(mask, s)) {
      best = s - delta;
      best_w = std::move(w);
    }
  }
  return {best, false, std::move(best_w)};
}

inline TResult batch_t(const BinaryIncidenceMatrix& m) { return ecbc_t(m, 0); }

// Independent brute-force check: enumerate all column subsets of size up to
// max_size directly. Exact whenever a violation is found or max_size = theta.
inline TResult batch_t_oracle(const BinaryIncidenceMatrix& m, int delta, int max_size) {
  const int theta = m.cols();
  if (max_size < 0 || max_size > theta)
    raise(Errc::k_out_of_range, "max_size outside [0, theta]");
  const auto cm = detail::col_masks(m);

  std::vector<int> cur;
  // depth-first by size: returns a violating set of size `target` or nothing
  auto find_at = [&](auto&& self, int start, int target, uint64_t uni) -> std::optional<Witness> {
    if (static_cast<int>(cur.size()) == target) {
      if (std::popcount(uni) < target + delta) return detail::make_witness(m, cur);
      return std::nullopt;
    }
    for (int j = start; j <= theta - (target - static_cast<int>(cur.size())); ++j) {
      cur.push_back(j);
      if (auto w = self(self, j + 1, target, uni | cm[j])) return w;
      cur.pop_back();
    }
    return std::nullopt;
  };

  for (int s = 1; s <= max_size; ++s) {
    cur.clear();
    if (auto w = find_at(find_at, 0, s, 0)) return {s - 1, true, std::move(w)};
  }
  return {max_size, max_size == theta, std::nullopt};
}

struct ExpansionCheck {
  int t_required = 0;
  int k = 0;
  long long m_required = 0;
  bool cover_ok = false;        // every <= t columns have >= |T| neighbours
  bool reconstruct_ok = false;  // every k rows have >= M neighbours
  std::optional<Witness> cover_violation;
  std::optional<std::vector<int>> reconstruct_violation;
  long long min_cover = 0;

  bool all_pass() const { return cover_ok && reconstruct_ok; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["t_required"] = t_required;
    j["k"] = k;
    j["m_required"] = m_required;
    j["cover_ok"] = cover_ok;
    if (cover_violation) j["cover_violation"] = cover_violation->to_json();
    j["reconstruct_ok"] = reconstruct_ok;
    j["min_cover"] = min_cover;
    if (reconstruct_violation) j["reconstruct_violation"] = *reconstruct_violation;
    j["all_pass"] = all_pass();
    return j;
  }
};

// Both bipartite-expansion conditions: column sets up to size t expand, and
// every k rows reach at least M columns.
inline ExpansionCheck expansion_check(const BinaryIncidenceMatrix& m, int t, int k, long long M) {
  ExpansionCheck rep;
  rep.t_required = t;
  rep.k = k;
  rep.m_required = M;
  TResult bt = batch_t(m);
  rep.cover_ok = bt.t >= t;
  if (!rep.cover_ok) rep.cover_violation = bt.witness;
  auto fs = file_size_witness(m, k);
  rep.min_cover = fs.first;
  rep.reconstruct_ok = fs.first >= M;
  if (!rep.reconstruct_ok) rep.reconstruct_violation = fs.second;
  return rep;
}

enum class Family { td2, td3, tdres, affine };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::td2: return "td2";
    case Family::td3: return "td3";
    case Family::tdres: return "tdres";
    case Family::affine: return "affine";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "td2") return Family::td2;
  if (s == "td3") return Family::td3;
  if (s == "tdres") return Family::tdres;
  if (s == "affine") return Family::affine;
  raise(Errc::bad_family, "unknown family \"" + s + "\"");
}

inline long long choose2(long long k) { return k * (k - 1) / 2; }

struct FormulaValue {
  long long value = 0;
  bool exact = true;  // false where the source result is only a lower bound
};

// Closed-form file size predictions per family; param is alpha (node
// capacity) for the TD families and q for affine planes.
inline FormulaValue formula_M(Family family, int param, int k) {
  const long long a = param, kk = k;
  auto need = [&](int n) {
    if (k < 1 || k > n)
      raise(Errc::k_out_of_range, "k = " + std::to_string(k) + " outside [1, " +
                                      std::to_string(n) + "]");
  };
  switch (family) {
    case Family::td2:
      need(2 * param);
      return {kk * a - (kk * kk) / 4, true};
    case Family::td3: {
      need(3 * param);
      long long x = kk / 3, y = kk % 3;
      return {kk * a - choose2(kk) + 3 * choose2(x) + x * y, true};
    }
    case Family::tdres: {
      need(param * param - param);
      long long mdiv = a - 1;
      long long x = kk / mdiv, y = kk % mdiv;
      return {kk * a - choose2(kk) + mdiv * choose2(x) + x * y, false};
    }
    case Family::affine: {
      need(param * param);
      return {kk * (a + 1) - choose2(kk), true};
    }
  }
  raise(Errc::bad_family, "bad family");
}

struct PaperTarget {
  std::optional<int> exact;
  std::optional<std::pair<int, int>> bounds;

  bool has() const { return exact.has_value() || bounds.has_value(); }
  bool check(int value) const {
    if (exact && value != *exact) return false;
    if (bounds && (value < bounds->first || value > bounds->second)) return false;
    return true;
  }
};

inline PaperTarget paper_batch_t(Family family, int param) {
  switch (family) {
    case Family::td2:
      if (param > 2) return {5, std::nullopt};
      return {};
    case Family::td3:
      if (param == 4) return {11, std::nullopt};
      if (param == 5) return {12, std::nullopt};
      if (param >= 7) return {std::nullopt, std::make_pair(6, 2 * param + 1)};
      return {};
    case Family::tdres:
      if (param >= 3) return {param * param - param - 1, std::nullopt};
      return {};
    case Family::affine:
      return {param * param, std::nullopt};
  }
  return {};
}

inline PaperTarget paper_ecbc_t(Family family, int param, int delta) {
  if (delta == 0) return paper_batch_t(family, param);
  switch (family) {
    case Family::td2:
      if (delta == 1 && param > 2) return {3, std::nullopt};
      return {};
    case Family::td3:
      if (delta == 2) {
        if (param == 4) return {8, std::nullopt};
        if (param == 5) return {9, std::nullopt};
        if (param >= 6) return {std::nullopt, std::make_pair(4, 2 * param - 2)};
      }
      return {};
    case Family::affine:
      if (delta == param - 1)
        return {std::nullopt,
                std::make_pair((param * param - param + 2) / 2, param * param - param)};
      return {};
    default:
      return {};
  }
}

// Search for `num_columns` columns covering at most `max_rows` rows: scans row
// sets of size up to max_rows for one containing that many column supports.
inline std::optional<Witness> find_covering_defect(const BinaryIncidenceMatrix& m,
                                                   int num_columns, int max_rows) {
  const int n = m.rows(), theta = m.cols();
  if (n > kExactRowCap) raise(Errc::bad_dimension, "row count above exact-search cap");
  if (max_rows > n || num_columns > theta) return std::nullopt;
  const auto cm = detail::col_masks(m);
  for (int s = m.min_col_weight(); s <= max_rows; ++s) {
    auto c = first_combination(s);
    do {
      const uint64_t outside = ~mask_of(c);
      int cnt = 0;
      for (int j = 0; j < theta; ++j) {
        if ((cm[j] & outside) == 0 && ++cnt == num_columns) {
          std::vector<int> picked;
          picked.reserve(num_columns);
          for (int jj = 0; jj <= j; ++jj)
            if ((cm[jj] & outside) == 0) picked.push_back(jj);
          return detail::make_witness(m, std::move(picked));
        }
      }
    } while (next_combination(c, n));
  }
  return std::nullopt;
}

// The q^2-q+1 lines of an affine plane that miss all of one block except a
// single point p: one other line from that block's parallel class plus, from
// each remaining class, the q-1 lines avoiding p. Covers at most q^2-1 rows,
// violating the delta = q-1 covering condition.
inline Witness affine_ecbc_defect(const designs::AffinePlane& ap) {
  const int q = ap.q;
  const BinaryIncidenceMatrix m = designs::affine_incidence(ap);
  const int b = ap.parallel_classes[0][0];
  const int p = *std::min_element(ap.lines[b].begin(), ap.lines[b].end());
  std::vector<int> cols;
  for (int l : ap.parallel_classes[0])
    if (l != b) {
      cols.push_back(l);
      break;
    }
  for (int cl = 1; cl <= q; ++cl)
    for (int l : ap.parallel_classes[cl])
      if (!m.at(p, l)) cols.push_back(l);
  std::sort(cols.begin(), cols.end());
  return detail::make_witness(m, std::move(cols));
}

struct MEntry {
  int k = 0;
  long long computed = 0;
  std::optional<long long> formula;
  bool formula_exact = false;
  bool informational = false;  // reported but not a pass/fail claim
  bool pass = true;
};

struct TEntry {
  TResult result;
  PaperTarget target;
  bool pass = true;
};

struct EcbcEntry {
  int delta = 0;
  TResult result;
  PaperTarget target;
  bool pass = true;
};

struct CodeReport {
  Family family = Family::td2;
  int param = 0;
  int n = 0, theta = 0;
  std::optional<int> alpha, rho;
  std::vector<MEntry> m_table;
  TEntry t;
  std::vector<EcbcEntry> ecbc;

  bool all_pass() const {
    if (!t.pass) return false;
    for (const auto& e : m_table)
      if (!e.pass) return false;
    for (const auto& e : ecbc)
      if (!e.pass) return false;
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["family"] = family_name(family);
    j["param"] = param;
    nlohmann::ordered_json params;
    params["n"] = n;
    params["theta"] = theta;
    params["rho"] = rho ? nlohmann::ordered_json(*rho) : nlohmann::ordered_json(nullptr);
    params["alpha"] = alpha ? nlohmann::ordered_json(*alpha) : nlohmann::ordered_json(nullptr);
    j["params"] = params;
    auto mt = nlohmann::ordered_json::array();
    for (const auto& e : m_table) {
      nlohmann::ordered_json je;
      je["k"] = e.k;
      je["computed"] = e.computed;
      je["formula"] = e.formula ? nlohmann::ordered_json(*e.formula) : nlohmann::ordered_json(nullptr);
      je["exact"] = e.formula_exact;
      if (e.informational) je["informational"] = true;
      je["pass"] = e.pass;
      mt.push_back(je);
    }
    j["M_table"] = mt;
    auto fill_t = [](nlohmann::ordered_json& je, const TResult& r, const PaperTarget& tgt,
                     bool pass) {
      je["exact"] = r.exact;
      je["paper_exact"] =
          tgt.exact ? nlohmann::ordered_json(*tgt.exact) : nlohmann::ordered_json(nullptr);
      je["paper_bounds"] = tgt.bounds
                               ? nlohmann::ordered_json({tgt.bounds->first, tgt.bounds->second})
                               : nlohmann::ordered_json(nullptr);
      je["witness"] = r.witness ? r.witness->to_json() : nlohmann::ordered_json(nullptr);
      je["pass"] = pass;
    };
    nlohmann::ordered_json jt;
    jt["computed"] = t.result.t;
    fill_t(jt, t.result, t.target, t.pass);
    j["t"] = jt;
    auto ej = nlohmann::ordered_json::array();
    for (const auto& e : ecbc) {
      nlohmann::ordered_json je;
      je["delta"] = e.delta;
      je["t"] = e.result.t;
      fill_t(je, e.result, e.target, e.pass);
      ej.push_back(je);
    }
    j["ecbc"] = ej;
    j["all_pass"] = all_pass();
    return j;
  }
};

// Regression harness: computed file sizes and batch parameters against the
// closed-form predictions and known exact values / bound intervals.
inline CodeReport verify_code(const BinaryIncidenceMatrix& m, Family family, int param, int k_lo,
                              int k_hi, const std::vector<int>& deltas) {
  CodeReport rep;
  rep.family = family;
  rep.param = param;
  rep.n = m.rows();
  rep.theta = m.cols();

  int want_n = 0, want_theta = 0;
  switch (family) {
    case Family::td2: want_n = 2 * param; want_theta = param * param; break;
    case Family::td3: want_n = 3 * param; want_theta = param * param; break;
    case Family::tdres: want_n = param * param - param; want_theta = param * param; break;
    case Family::affine: want_n = param * param; want_theta = param * param + param; break;
  }
  if (m.rows() != want_n || m.cols() != want_theta)
    raise(Errc::bad_dimension, std::string("matrix is ") + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()) + " but family " +
                                   family_name(family) + "(" + std::to_string(param) +
                                   ") needs " + std::to_string(want_n) + "x" +
                                   std::to_string(want_theta));

  auto prof = m.weights();
  rep.alpha = prof.alpha;
  rep.rho = prof.rho;

  for (int k = k_lo; k <= k_hi; ++k) {
    MEntry e;
    e.k = k;
    e.computed = file_size(m, k);
    FormulaValue fv = formula_M(family, param, k);
    e.formula = fv.value;
    e.formula_exact = fv.exact;
    e.informational = (family == Family::affine && k > param);
    if (e.informational)
      e.pass = true;
    else if (!fv.exact)
      e.pass = e.computed >= fv.value;
    else
      e.pass = e.computed == fv.value;
    rep.m_table.push_back(e);
  }

  rep.t.result = batch_t(m);
  rep.t.target = paper_batch_t(family, param);
  rep.t.pass = rep.t.target.check(rep.t.result.t);

  for (int d : deltas) {
    if (d == 0) continue;  // already covered by the batch entry
    EcbcEntry e;
    e.delta = d;
    e.result = ecbc_t(m, d);
    e.target = paper_ecbc_t(family, param, d);
    e.pass = e.target.check(e.result.t);
    rep.ecbc.push_back(std::move(e));
  }
  return rep;
}

}  // namespace frb::analysis
