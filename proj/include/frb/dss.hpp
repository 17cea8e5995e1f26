#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "frb/analysis.hpp"
#include "frb/bits.hpp"
#include "frb/errors.hpp"
#include "frb/incidence.hpp"
#include "frb/matching.hpp"
#include "frb/mds.hpp"

namespace frb::dss {

struct RepairPlan {
  int failed_node = -1;
  std::vector<std::pair<int, int>> transfers;  // (symbol position, helper node)

  nlohmann::ordered_json to_json() const {
    auto tr = nlohmann::ordered_json::array();
    for (const auto& [pos, helper] : transfers)
      tr.push_back({{"position", pos}, {"helper", helper}});
    return {{"failed_node", failed_node}, {"transfers", tr}};
  }
};

struct BatchAssignment {
  std::vector<std::pair<int, int>> assignment;  // (symbol position, serving node)

  nlohmann::ordered_json to_json() const {
    auto as = nlohmann::ordered_json::array();
    for (const auto& [pos, node] : assignment)
      as.push_back({{"position", pos}, {"node", node}});
    return {{"assignment", as}};
  }
};

struct ServeOutcome {
  std::optional<BatchAssignment> assignment;
  std::optional<analysis::Witness> certificate;  // Hall violator when unservable

  bool ok() const { return assignment.has_value(); }
};

struct SweepFailure {
  std::vector<int> failed_nodes;
  std::vector<int> request;
  analysis::Witness certificate;
};

struct SweepReport {
  int t = 0;
  int delta = 0;
  double cases_total = 0;
  uint64_t cases_run = 0;
  uint64_t cases_failed = 0;
  bool sampled = false;
  uint64_t seed = 0;
  std::vector<SweepFailure> failures;  // first few, capped
  // remark: does every delta-set of nodes hold at most t distinct symbols,
  // and is that symbol set itself servable as a batch from the survivors
  uint64_t patterns_checked = 0;
  uint64_t patterns_within_t = 0;
  uint64_t patterns_recoverable = 0;

  static constexpr std::size_t kMaxRecorded = 32;

  bool pass() const { return cases_failed == 0; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["t"] = t;
    j["delta"] = delta;
    j["cases_total"] = cases_total;
    j["cases_run"] = cases_run;
    j["cases_failed"] = cases_failed;
    j["sampled"] = sampled;
    j["seed"] = seed;
    auto fj = nlohmann::ordered_json::array();
    for (const auto& f : failures)
      fj.push_back({{"failed_nodes", f.failed_nodes},
                    {"request", f.request},
                    {"certificate", f.certificate.to_json()}});
    j["failures"] = fj;
    j["remark"] = {{"patterns_checked", patterns_checked},
                   {"patterns_within_t", patterns_within_t},
                   {"patterns_recoverable", patterns_recoverable}};
    j["pass"] = pass();
    return j;
  }
};

// MDS codeword placed on nodes per the incidence layout: node i stores the
// codeword symbols indexed by its row support.
class StorageSystem {
 public:
  StorageSystem(BinaryIncidenceMatrix layout, const std::vector<uint16_t>& file,
                std::optional<uint32_t> field_order = std::nullopt)
      : layout_(std::move(layout)),
        code_(layout_.cols(), static_cast<int>(file.size()),
              field_order ? *field_order : mds::default_field_order(layout_.cols())) {
    if (layout_.has_empty_column())
      raise(Errc::empty_column, "layout leaves a codeword symbol unstored");
    codeword_ = code_.encode(file);
    contents_.resize(layout_.rows());
    for (int i = 0; i < layout_.rows(); ++i)
      for (int pos : layout_.row_support(i).to_indices())
        contents_[i].push_back({pos, codeword_[pos]});
    failed_.assign(layout_.rows(), 0);
  }

  int nodes() const { return layout_.rows(); }
  int symbols() const { return layout_.cols(); }
  const BinaryIncidenceMatrix& layout() const { return layout_; }
  const mds::MdsCode& code() const { return code_; }
  const std::vector<uint16_t>& codeword() const { return codeword_; }
  const std::vector<std::pair<int, uint16_t>>& node_content(int i) const {
    check_node(i);
    return contents_[i];
  }

  // Gather everything the given k nodes hold and erasure-decode the file.
  std::vector<uint16_t> reconstruct(const std::vector<int>& node_set) const {
    std::vector<std::pair<int, uint16_t>> known;
    for (int i : node_set) {
      check_node(i);
      if (failed_[i]) raise(Errc::index_out_of_range, "node " + std::to_string(i) + " is failed");
      known.insert(known.end(), contents_[i].begin(), contents_[i].end());
    }
    return code_.decode_erasures(std::move(known));
  }

  // Single-node uncoded repair: match each lost symbol to a distinct helper
  // that stores it, then copy. Restores the exact original content.
  RepairPlan repair(int node) {
    check_node(node);
    for (int i = 0; i < nodes(); ++i)
      if (failed_[i] && i != node)
        raise(Errc::inconsistent, "repair requires all other nodes alive");
    failed_[node] = 1;
    std::vector<int> positions = layout_.row_support(node).to_indices();
    HopcroftKarp hk(static_cast<int>(positions.size()), nodes());
    for (std::size_t li = 0; li < positions.size(); ++li)
      for (int helper : layout_.col_support(positions[li]).to_indices())
        if (helper != node) hk.add_edge(static_cast<int>(li), helper);
    int matched = hk.solve();
    if (matched != static_cast<int>(positions.size())) {
      failed_[node] = 0;
      raise(Errc::no_distinct_helpers,
            "no system of distinct helpers for node " + std::to_string(node));
    }
    RepairPlan plan;
    plan.failed_node = node;
    for (std::size_t li = 0; li < positions.size(); ++li)
      plan.transfers.push_back({positions[li], hk.match_left()[li]});
    // apply: each helper ships its stored copy of the symbol
    contents_[node].clear();
    for (const auto& [pos, helper] : plan.transfers) {
      auto& hc = contents_[helper];
      auto it = std::find_if(hc.begin(), hc.end(),
                             [p = pos](const auto& e) { return e.first == p; });
      contents_[node].push_back({pos, it->second});
    }
    std::sort(contents_[node].begin(), contents_[node].end());
    failed_[node] = 0;
    return plan;
  }

  // Maximum matching between requested symbols and alive nodes storing them;
  // a batch is servable iff the matching saturates the request.
  ServeOutcome serve_batch(const std::vector<int>& request, const std::vector<int>& failed) const {
    std::vector<int> req = request;
    std::sort(req.begin(), req.end());
    for (std::size_t i = 0; i < req.size(); ++i) {
      if (req[i] < 0 || req[i] >= symbols())
        raise(Errc::index_out_of_range, "requested position " + std::to_string(req[i]));
      if (i && req[i] == req[i - 1])
        raise(Errc::index_out_of_range, "duplicate requested position " + std::to_string(req[i]));
    }
    std::vector<char> down(nodes(), 0);
    for (int f : failed) {
      check_node(f);
      down[f] = 1;
    }
    HopcroftKarp hk(static_cast<int>(req.size()), nodes());
    for (std::size_t li = 0; li < req.size(); ++li)
      for (int node : layout_.col_support(req[li]).to_indices())
        if (!down[node]) hk.add_edge(static_cast<int>(li), node);
    int matched = hk.solve();
    ServeOutcome out;
    if (matched == static_cast<int>(req.size())) {
      BatchAssignment a;
      for (std::size_t li = 0; li < req.size(); ++li)
        a.assignment.push_back({req[li], hk.match_left()[li]});
      out.assignment = std::move(a);
      return out;
    }
    std::vector<int> viol_cols;
    for (int li : hk.hall_violator()) viol_cols.push_back(req[li]);
    analysis::Witness w;
    w.columns = std::move(viol_cols);
    w.covered_rows = layout_.cover_rows(w.columns).to_indices();
    out.certificate = std::move(w);
    return out;
  }

  // All (or a seeded sample of) delta-failure patterns crossed with t-symbol
  // requests; every case must be servable.
  SweepReport failure_sweep(int t, int delta, uint64_t budget, uint64_t seed) const {
    if (t < 0 || t > symbols()) raise(Errc::k_out_of_range, "t outside [0, theta]");
    if (delta < 0 || delta > nodes()) raise(Errc::k_out_of_range, "delta outside [0, n]");
    SweepReport rep;
    rep.t = t;
    rep.delta = delta;
    rep.seed = seed;
    rep.cases_total = binomial(nodes(), delta) * binomial(symbols(), t);
    rep.sampled = budget > 0 && rep.cases_total > static_cast<double>(budget);

    auto run_case = [&](const std::vector<int>& fail_set, const std::vector<int>& req) {
      ++rep.cases_run;
      ServeOutcome o = serve_batch(req, fail_set);
      if (!o.ok()) {
        ++rep.cases_failed;
        if (rep.failures.size() < SweepReport::kMaxRecorded)
          rep.failures.push_back({fail_set, req, *o.certificate});
      }
    };
    auto remark_case = [&](const std::vector<int>& fail_set) {
      ++rep.patterns_checked;
      std::vector<int> held = layout_.cover_cols(fail_set).to_indices();
      if (static_cast<int>(held.size()) <= t) {
        ++rep.patterns_within_t;
        if (serve_batch(held, fail_set).ok()) ++rep.patterns_recoverable;
      }
    };

    if (!rep.sampled) {
      std::vector<int> fail_set = first_combination(delta);
      bool more_fail = true;
      while (more_fail) {
        remark_case(fail_set);
        std::vector<int> req = first_combination(t);
        bool more_req = true;
        while (more_req) {
          run_case(fail_set, req);
          more_req = t > 0 && next_combination(req, symbols());
        }
        more_fail = delta > 0 && next_combination(fail_set, nodes());
      }
      return rep;
    }

    std::mt19937_64 rng(seed);
    auto sample = [&](int count, int universe) {
      std::vector<int> pool(universe);
      for (int i = 0; i < universe; ++i) pool[i] = i;
      for (int i = 0; i < count; ++i)
        std::swap(pool[i], pool[i + static_cast<int>(rng() % static_cast<uint64_t>(universe - i))]);
      pool.resize(count);
      std::sort(pool.begin(), pool.end());
      return pool;
    };
    for (uint64_t it = 0; it < budget; ++it) {
      std::vector<int> fail_set = sample(delta, nodes());
      std::vector<int> req = sample(t, symbols());
      remark_case(fail_set);
      run_case(fail_set, req);
    }
    return rep;
  }

  nlohmann::ordered_json snapshot() const {
    nlohmann::ordered_json j;
    j["mds"] = {{"theta", code_.length()}, {"M", code_.dim()}, {"q", code_.field().order()}};
    j["layout"] = layout_.to_json();
    j["codeword"] = codeword_;
    auto fj = nlohmann::ordered_json::array();
    for (int i = 0; i < nodes(); ++i)
      if (failed_[i]) fj.push_back(i);
    j["failed"] = fj;
    return j;
  }

 private:
  void check_node(int i) const {
    if (i < 0 || i >= nodes()) raise(Errc::index_out_of_range, "node " + std::to_string(i));
  }

  BinaryIncidenceMatrix layout_;
  mds::MdsCode code_;
  std::vector<uint16_t> codeword_;
  std::vector<std::vector<std::pair<int, uint16_t>>> contents_;
  std::vector<char> failed_;
};

}  // namespace frb::dss
