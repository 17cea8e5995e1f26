#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "frb/errors.hpp"
#include "frb/gf.hpp"
#include "frb/incidence.hpp"

namespace frb::designs {

// Point ids are dense integers; a TD point (group g, field element e) has id
// g*h + e, an affine point (x, y) has id x*q + y.
struct TransversalDesign {
  int ell = 0;
  int h = 0;
  bool algebraic = true;  // field construction (resolvable) vs cyclic fallback
  std::vector<std::vector<int>> groups;      // ell groups of h point ids
  std::vector<std::vector<int>> blocks;      // h^2 blocks of ell point ids
  std::vector<std::vector<int>> resolution;  // h classes of h block ids; empty if none

  int n_points() const { return ell * h; }
};

struct AffinePlane {
  int q = 0;
  std::vector<std::vector<int>> lines;             // q^2+q lines of q point ids
  std::vector<std::vector<int>> parallel_classes;  // q+1 classes of q line ids

  int n_points() const { return q * q; }
};

// Resolvable TD(ell,h) for prime-power h: groups {i} x GF(h); block (a,b) takes
// point (i, a*c_i + b) with c_i the i-th canonical field element; block id
// a*h + b, so columns are resolution-class-major. For h that is not a prime
// power a cyclic single-Latin-square construction covers ell <= 3 (without a
// resolution for ell = 3).
inline TransversalDesign build_td(int ell, int h) {
  if (ell < 2) raise(Errc::bad_dimension, "ell must be at least 2");
  if (ell > h) raise(Errc::ell_too_large, "ell exceeds h");
  TransversalDesign td;
  td.ell = ell;
  td.h = h;
  td.groups.resize(ell);
  for (int g = 0; g < ell; ++g) {
    td.groups[g].resize(h);
    for (int e = 0; e < h; ++e) td.groups[g][e] = g * h + e;
  }
  const bool pp = gf::prime_power_split(static_cast<uint32_t>(h)).has_value();
  if (pp) {
    gf::Field f(static_cast<uint32_t>(h));
    td.algebraic = true;
    td.blocks.resize(static_cast<std::size_t>(h) * h);
    td.resolution.resize(h);
    for (int a = 0; a < h; ++a) {
      for (int b = 0; b < h; ++b) {
        std::vector<int> blk(ell);
        for (int i = 0; i < ell; ++i) {
          uint32_t v = f.add(f.mul(static_cast<uint32_t>(a), static_cast<uint32_t>(i)),
                             static_cast<uint32_t>(b));
          blk[i] = i * h + static_cast<int>(v);
        }
        td.blocks[static_cast<std::size_t>(a) * h + b] = std::move(blk);
      }
      td.resolution[a].resize(h);
      for (int b = 0; b < h; ++b) td.resolution[a][b] = a * h + b;
    }
    return td;
  }
  if (ell > 3)
    raise(Errc::not_prime_power, "TD(" + std::to_string(ell) + "," + std::to_string(h) +
                                     ") needs a prime-power group size");
  td.algebraic = false;
  td.blocks.resize(static_cast<std::size_t>(h) * h);
  if (ell == 2) {
    // block (c,i) = {(0,i), (1,i+c)}; classes indexed by c
    td.resolution.resize(h);
    for (int c = 0; c < h; ++c) {
      for (int i = 0; i < h; ++i)
        td.blocks[static_cast<std::size_t>(c) * h + i] = {i, h + (i + c) % h};
      td.resolution[c].resize(h);
      for (int i = 0; i < h; ++i) td.resolution[c][i] = c * h + i;
    }
  } else {
    // block (i,j) = {(0,i), (1,j), (2,i+j)}; no resolution in general
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        td.blocks[static_cast<std::size_t>(i) * h + j] = {i, h + j, 2 * h + (i + j) % h};
  }
  return td;
}

// Affine plane of prime-power order q: q slope classes of lines y = a*x + b
// (line id a*q + b) followed by the vertical class x = c (line id q^2 + c).
inline AffinePlane build_affine(int q) {
  if (!gf::prime_power_split(static_cast<uint32_t>(q)))
    raise(Errc::not_prime_power, std::to_string(q) + " is not a prime power");
  gf::Field f(static_cast<uint32_t>(q));
  AffinePlane ap;
  ap.q = q;
  ap.lines.resize(static_cast<std::size_t>(q) * q + q);
  ap.parallel_classes.resize(q + 1);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      std::vector<int> line(q);
      for (int x = 0; x < q; ++x) {
        uint32_t y = f.add(f.mul(static_cast<uint32_t>(a), static_cast<uint32_t>(x)),
                           static_cast<uint32_t>(b));
        line[x] = x * q + static_cast<int>(y);
      }
      ap.lines[static_cast<std::size_t>(a) * q + b] = std::move(line);
    }
    ap.parallel_classes[a].resize(q);
    for (int b = 0; b < q; ++b) ap.parallel_classes[a][b] = a * q + b;
  }
  for (int c = 0; c < q; ++c) {
    std::vector<int> line(q);
    for (int y = 0; y < q; ++y) line[y] = c * q + y;
    ap.lines[static_cast<std::size_t>(q) * q + c] = std::move(line);
  }
  ap.parallel_classes[q].resize(q);
  for (int c = 0; c < q; ++c) ap.parallel_classes[q][c] = q * q + c;
  return ap;
}

struct AxiomCheck {
  std::string axiom;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const AxiomCheck* find(const std::string& axiom) const {
    for (const auto& c : checks)
      if (c.axiom == axiom) return &c;
    return nullptr;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      arr.push_back({{"axiom", c.axiom}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"all_pass", all_pass()}, {"checks", arr}};
  }
};

namespace detail {

inline void check_partition(ValidationReport& rep, const std::string& axiom,
                            const std::vector<std::vector<int>>& parts, int n_items,
                            std::size_t want_parts, std::size_t want_size,
                            const std::string& what) {
  AxiomCheck c{axiom, true, ""};
  std::vector<int> seen(n_items, 0);
  if (parts.size() != want_parts) {
    c.pass = false;
    c.detail = "expected " + std::to_string(want_parts) + " " + what + ", got " +
               std::to_string(parts.size());
  }
  for (std::size_t gi = 0; c.pass && gi < parts.size(); ++gi) {
    if (parts[gi].size() != want_size) {
      c.pass = false;
      c.detail = what + " " + std::to_string(gi) + " has size " +
                 std::to_string(parts[gi].size()) + ", expected " + std::to_string(want_size);
      break;
    }
    for (int p : parts[gi]) {
      if (p < 0 || p >= n_items || seen[p]++) {
        c.pass = false;
        c.detail = "item " + std::to_string(p) + " repeated or out of range in " + what + " " +
                   std::to_string(gi);
        break;
      }
    }
  }
  if (c.pass)
    for (int p = 0; p < n_items; ++p)
      if (!seen[p]) {
        c.pass = false;
        c.detail = "item " + std::to_string(p) + " missing from every " + what;
        break;
      }
  rep.checks.push_back(std::move(c));
}

}  // namespace detail

inline ValidationReport validate_td(const TransversalDesign& td) {
  ValidationReport rep;
  const int n = td.n_points(), h = td.h, ell = td.ell;

  detail::check_partition(rep, "td2-groups-partition", td.groups, n,
                          static_cast<std::size_t>(ell), static_cast<std::size_t>(h), "group");

  {
    AxiomCheck c{"td3-block-count", true, ""};
    if (static_cast<int>(td.blocks.size()) != h * h) {
      c.pass = false;
      c.detail = "expected " + std::to_string(h * h) + " blocks, got " +
                 std::to_string(td.blocks.size());
    }
    for (std::size_t b = 0; c.pass && b < td.blocks.size(); ++b)
      if (static_cast<int>(td.blocks[b].size()) != ell) {
        c.pass = false;
        c.detail = "block " + std::to_string(b) + " has size " +
                   std::to_string(td.blocks[b].size());
      }
    rep.checks.push_back(std::move(c));
  }

  std::vector<int> group_of(n, -1);
  for (int g = 0; g < static_cast<int>(td.groups.size()); ++g)
    for (int p : td.groups[g])
      if (p >= 0 && p < n) group_of[p] = g;

  {
    AxiomCheck c{"td4-block-meets-each-group", true, ""};
    for (std::size_t b = 0; c.pass && b < td.blocks.size(); ++b) {
      std::vector<int> hits(ell, 0);
      for (int p : td.blocks[b]) {
        if (p < 0 || p >= n || group_of[p] < 0) {
          c.pass = false;
          c.detail = "block " + std::to_string(b) + " contains unknown point";
          break;
        }
        ++hits[group_of[p]];
      }
      for (int g = 0; c.pass && g < ell; ++g)
        if (hits[g] != 1) {
          c.pass = false;
          c.detail = "block " + std::to_string(b) + " meets group " + std::to_string(g) + " " +
                     std::to_string(hits[g]) + " times";
        }
    }
    rep.checks.push_back(std::move(c));
  }

  {
    AxiomCheck c{"td5-pair-coverage", true, ""};
    std::map<std::pair<int, int>, int> cover;
    for (const auto& blk : td.blocks)
      for (std::size_t i = 0; i < blk.size(); ++i)
        for (std::size_t j = i + 1; j < blk.size(); ++j)
          ++cover[{std::min(blk[i], blk[j]), std::max(blk[i], blk[j])}];
    for (int p = 0; c.pass && p < n; ++p)
      for (int r = p + 1; c.pass && r < n; ++r) {
        if (group_of[p] == group_of[r]) continue;
        auto it = cover.find({p, r});
        int cnt = it == cover.end() ? 0 : it->second;
        if (cnt != 1) {
          c.pass = false;
          c.detail = "pair (" + std::to_string(p) + "," + std::to_string(r) + ") covered " +
                     std::to_string(cnt) + " times";
        }
      }
    rep.checks.push_back(std::move(c));
  }

  {
    AxiomCheck c{"td-replication", true, ""};
    std::vector<int> deg(n, 0);
    for (const auto& blk : td.blocks)
      for (int p : blk)
        if (p >= 0 && p < n) ++deg[p];
    for (int p = 0; c.pass && p < n; ++p)
      if (deg[p] != h) {
        c.pass = false;
        c.detail = "point " + std::to_string(p) + " lies in " + std::to_string(deg[p]) +
                   " blocks, expected " + std::to_string(h);
      }
    rep.checks.push_back(std::move(c));
  }

  if (!td.resolution.empty()) {
    detail::check_partition(rep, "td-resolution-partition", td.resolution,
                            static_cast<int>(td.blocks.size()), static_cast<std::size_t>(h),
                            static_cast<std::size_t>(h), "class");
    AxiomCheck c{"td-resolution-point-once", true, ""};
    for (std::size_t cl = 0; c.pass && cl < td.resolution.size(); ++cl) {
      std::vector<int> cnt(n, 0);
      for (int b : td.resolution[cl])
        if (b >= 0 && b < static_cast<int>(td.blocks.size()))
          for (int p : td.blocks[b]) ++cnt[p];
      for (int p = 0; c.pass && p < n; ++p)
        if (cnt[p] != 1) {
          c.pass = false;
          c.detail = "class " + std::to_string(cl) + " hits point " + std::to_string(p) + " " +
                     std::to_string(cnt[p]) + " times";
        }
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

inline ValidationReport validate_affine(const AffinePlane& ap) {
  ValidationReport rep;
  const int n = ap.n_points(), q = ap.q;

  {
    AxiomCheck c{"affine-line-count", true, ""};
    if (static_cast<int>(ap.lines.size()) != q * q + q) {
      c.pass = false;
      c.detail = "expected " + std::to_string(q * q + q) + " lines, got " +
                 std::to_string(ap.lines.size());
    }
    for (std::size_t l = 0; c.pass && l < ap.lines.size(); ++l)
      if (static_cast<int>(ap.lines[l].size()) != q) {
        c.pass = false;
        c.detail = "line " + std::to_string(l) + " has size " + std::to_string(ap.lines[l].size());
      }
    rep.checks.push_back(std::move(c));
  }

  {
    AxiomCheck c{"affine-pair-coverage", true, ""};
    std::map<std::pair<int, int>, int> cover;
    for (const auto& line : ap.lines)
      for (std::size_t i = 0; i < line.size(); ++i)
        for (std::size_t j = i + 1; j < line.size(); ++j)
          ++cover[{std::min(line[i], line[j]), std::max(line[i], line[j])}];
    for (int p = 0; c.pass && p < n; ++p)
      for (int r = p + 1; c.pass && r < n; ++r) {
        auto it = cover.find({p, r});
        int cnt = it == cover.end() ? 0 : it->second;
        if (cnt != 1) {
          c.pass = false;
          c.detail = "pair (" + std::to_string(p) + "," + std::to_string(r) + ") covered " +
                     std::to_string(cnt) + " times";
        }
      }
    rep.checks.push_back(std::move(c));
  }

  {
    AxiomCheck c{"affine-replication", true, ""};
    std::vector<int> deg(n, 0);
    for (const auto& line : ap.lines)
      for (int p : line)
        if (p >= 0 && p < n) ++deg[p];
    for (int p = 0; c.pass && p < n; ++p)
      if (deg[p] != q + 1) {
        c.pass = false;
        c.detail = "point " + std::to_string(p) + " lies on " + std::to_string(deg[p]) +
                   " lines, expected " + std::to_string(q + 1);
      }
    rep.checks.push_back(std::move(c));
  }

  detail::check_partition(rep, "affine-classes-partition", ap.parallel_classes,
                          static_cast<int>(ap.lines.size()), static_cast<std::size_t>(q + 1),
                          static_cast<std::size_t>(q), "class");
  {
    AxiomCheck c{"affine-point-once-per-class", true, ""};
    for (std::size_t cl = 0; c.pass && cl < ap.parallel_classes.size(); ++cl) {
      std::vector<int> cnt(n, 0);
      for (int l : ap.parallel_classes[cl])
        if (l >= 0 && l < static_cast<int>(ap.lines.size()))
          for (int p : ap.lines[l]) ++cnt[p];
      for (int p = 0; c.pass && p < n; ++p)
        if (cnt[p] != 1) {
          c.pass = false;
          c.detail = "class " + std::to_string(cl) + " hits point " + std::to_string(p) + " " +
                     std::to_string(cnt[p]) + " times";
        }
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

inline BinaryIncidenceMatrix td_incidence(const TransversalDesign& td) {
  BinaryIncidenceMatrix m(td.n_points(), static_cast<int>(td.blocks.size()));
  for (int b = 0; b < static_cast<int>(td.blocks.size()); ++b)
    for (int p : td.blocks[b]) m.set(p, b);
  return m;
}

inline BinaryIncidenceMatrix affine_incidence(const AffinePlane& ap) {
  BinaryIncidenceMatrix m(ap.n_points(), static_cast<int>(ap.lines.size()));
  for (int l = 0; l < static_cast<int>(ap.lines.size()); ++l)
    for (int p : ap.lines[l]) m.set(p, l);
  return m;
}

inline nlohmann::ordered_json to_json(const TransversalDesign& td) {
  nlohmann::ordered_json j;
  j["family"] = "td";
  j["params"] = {{"ell", td.ell},
                 {"h", td.h},
                 {"construction", td.algebraic ? "field" : "cyclic"}};
  j["points"] = td.n_points();
  j["groups"] = td.groups;
  j["blocks"] = td.blocks;
  if (!td.resolution.empty()) j["resolution"] = td.resolution;
  return j;
}

inline nlohmann::ordered_json to_json(const AffinePlane& ap) {
  nlohmann::ordered_json j;
  j["family"] = "affine";
  j["params"] = {{"q", ap.q}};
  j["points"] = ap.n_points();
  j["blocks"] = ap.lines;
  j["parallel_classes"] = ap.parallel_classes;
  return j;
}

inline TransversalDesign td_from_json(const nlohmann::json& j) {
  if (!j.contains("family") || j.at("family") != "td")
    raise(Errc::parse_error, "not a td design json");
  TransversalDesign td;
  td.ell = j.at("params").at("ell").get<int>();
  td.h = j.at("params").at("h").get<int>();
  td.algebraic = j.at("params").value("construction", "field") == std::string("field");
  td.groups = j.at("groups").get<std::vector<std::vector<int>>>();
  td.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
  if (j.contains("resolution"))
    td.resolution = j.at("resolution").get<std::vector<std::vector<int>>>();
  return td;
}

inline AffinePlane affine_from_json(const nlohmann::json& j) {
  if (!j.contains("family") || j.at("family") != "affine")
    raise(Errc::parse_error, "not an affine design json");
  AffinePlane ap;
  ap.q = j.at("params").at("q").get<int>();
  ap.lines = j.at("blocks").get<std::vector<std::vector<int>>>();
  ap.parallel_classes = j.at("parallel_classes").get<std::vector<std::vector<int>>>();
  return ap;
}

}  // namespace frb::designs
