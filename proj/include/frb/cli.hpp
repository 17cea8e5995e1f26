#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frb/analysis.hpp"
#include "frb/designs.hpp"
#include "frb/dss.hpp"
#include "frb/errors.hpp"
#include "frb/incidence.hpp"
#include "frb/mds.hpp"
#include "frb/version.hpp"

namespace frb::cli {

// Exit codes: 0 pass, 1 claim/case failure, 2 usage or I/O error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitUsage = 2;

struct Range {
  int lo = 0;
  int hi = 0;
};

// "a..b" (inclusive) or a single "a"
inline Range parse_range(const std::string& s) {
  auto parse_int = [&](const std::string& part) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      raise(Errc::parse_error, "bad range \"" + s + "\"");
    }
    if (used != part.size()) raise(Errc::parse_error, "bad range \"" + s + "\"");
    return v;
  };
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    int v = parse_int(s);
    return {v, v};
  }
  Range r{parse_int(s.substr(0, dots)), parse_int(s.substr(dots + 2))};
  if (r.lo > r.hi) raise(Errc::parse_error, "empty range \"" + s + "\"");
  return r;
}

struct RunConfig {
  std::string command;
  std::string family;
  int ell = 0;
  int h = 0;
  int q = 0;
  int alpha = 0;
  std::string in;
  std::string out;
  std::string k = "";
  std::string delta = "0";
  int k_single = 0;
  int t = 0;
  int m_override = 0;  // 0 = wire M from file_size(layout, k)
  int max_size = -1;
  uint64_t seed = 0;
  uint64_t budget = 0;
  std::optional<uint32_t> field_order;
  std::string format = "json";

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["family"] = family;
    j["ell"] = ell;
    j["h"] = h;
    j["q"] = q;
    j["alpha"] = alpha;
    j["in"] = in;
    j["out"] = out;
    j["k"] = k;
    j["delta"] = delta;
    j["k_single"] = k_single;
    j["t"] = t;
    j["m_override"] = m_override;
    j["max_size"] = max_size;
    j["seed"] = seed;
    j["budget"] = budget;
    j["field_order"] =
        field_order ? nlohmann::ordered_json(*field_order) : nlohmann::ordered_json(nullptr);
    j["format"] = format;
    return j;
  }
};

namespace detail {

inline nlohmann::ordered_json envelope(const RunConfig& cfg, nlohmann::ordered_json report) {
  nlohmann::ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = cfg.to_json();
  j["seed"] = cfg.seed;
  j["report"] = std::move(report);
  return j;
}

inline void write_report(const RunConfig& cfg, const nlohmann::ordered_json& env,
                         const std::string& text, std::ostream& out) {
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) raise(Errc::io_error, "cannot write " + cfg.out);
    f << env.dump(2) << '\n';
  }
  if (cfg.format == "text")
    out << text;
  else
    out << env.dump(2) << '\n';
}

inline BinaryIncidenceMatrix load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(Errc::io_error, "cannot open " + path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      f >> j;
    } catch (const std::exception& e) {
      raise(Errc::parse_error, std::string("bad matrix json: ") + e.what());
    }
    return BinaryIncidenceMatrix::from_json(j);
  }
  return BinaryIncidenceMatrix::read_text(f);
}

inline std::string witness_text(const analysis::Witness& w) {
  std::string s = "columns {";
  for (std::size_t i = 0; i < w.columns.size(); ++i)
    s += (i ? "," : "") + std::to_string(w.columns[i]);
  s += "} cover " + std::to_string(w.covered_rows.size()) + " rows";
  return s;
}

}  // namespace detail

inline int cmd_construct(const RunConfig& cfg, std::ostream& out) {
  nlohmann::ordered_json rep;
  BinaryIncidenceMatrix m;
  nlohmann::ordered_json design_json;
  std::string label;
  if (cfg.family == "td") {
    auto td = designs::build_td(cfg.ell, cfg.h);
    m = designs::td_incidence(td);
    design_json = designs::to_json(td);
    label = "td(" + std::to_string(cfg.ell) + "," + std::to_string(cfg.h) + ")";
  } else if (cfg.family == "affine") {
    auto ap = designs::build_affine(cfg.q);
    m = designs::affine_incidence(ap);
    design_json = designs::to_json(ap);
    label = "affine(" + std::to_string(cfg.q) + ")";
  } else {
    raise(Errc::bad_family, "construct needs --family td or affine");
  }
  auto prof = m.weights();
  rep["design"] = label;
  rep["n"] = m.rows();
  rep["theta"] = m.cols();
  rep["alpha"] = prof.alpha ? nlohmann::ordered_json(*prof.alpha) : nlohmann::ordered_json(nullptr);
  rep["rho"] = prof.rho ? nlohmann::ordered_json(*prof.rho) : nlohmann::ordered_json(nullptr);
  if (!cfg.out.empty()) {
    std::ofstream fm(cfg.out + ".im");
    if (!fm) raise(Errc::io_error, "cannot write " + cfg.out + ".im");
    m.write_text(fm);
    std::ofstream fj(cfg.out + ".json");
    if (!fj) raise(Errc::io_error, "cannot write " + cfg.out + ".json");
    fj << design_json.dump(2) << '\n';
    rep["files"] = {cfg.out + ".im", cfg.out + ".json"};
  }
  std::ostringstream text;
  text << label << ": n=" << m.rows() << " theta=" << m.cols();
  if (prof.alpha) text << " alpha=" << *prof.alpha;
  if (prof.rho) text << " rho=" << *prof.rho;
  text << '\n';
  if (!cfg.out.empty()) text << "wrote " << cfg.out << ".im, " << cfg.out << ".json\n";

  auto env = detail::envelope(cfg, rep);
  if (cfg.format == "text")
    out << text.str();
  else
    out << env.dump(2) << '\n';
  return kExitPass;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  designs::ValidationReport vr;
  std::string label;
  if (!cfg.in.empty()) {
    std::ifstream f(cfg.in);
    if (!f) raise(Errc::io_error, "cannot open " + cfg.in);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const std::exception& e) {
      raise(Errc::parse_error, std::string("bad design json: ") + e.what());
    }
    std::string fam = j.value("family", "");
    if (fam == "td") {
      vr = designs::validate_td(designs::td_from_json(j));
      label = "td from " + cfg.in;
    } else if (fam == "affine") {
      vr = designs::validate_affine(designs::affine_from_json(j));
      label = "affine from " + cfg.in;
    } else {
      raise(Errc::parse_error, "design json has no known family");
    }
  } else if (cfg.family == "td") {
    vr = designs::validate_td(designs::build_td(cfg.ell, cfg.h));
    label = "td(" + std::to_string(cfg.ell) + "," + std::to_string(cfg.h) + ")";
  } else if (cfg.family == "affine") {
    vr = designs::validate_affine(designs::build_affine(cfg.q));
    label = "affine(" + std::to_string(cfg.q) + ")";
  } else {
    raise(Errc::bad_family, "validate needs --in or --family");
  }
  nlohmann::ordered_json rep = vr.to_json();
  rep["design"] = label;
  std::ostringstream text;
  for (const auto& c : vr.checks)
    text << (c.pass ? "pass " : "FAIL ") << c.axiom << (c.detail.empty() ? "" : ": " + c.detail)
         << '\n';
  text << (vr.all_pass() ? "all axioms hold" : "axiom violations found") << '\n';
  detail::write_report(cfg, detail::envelope(cfg, rep), text.str(), out);
  return vr.all_pass() ? kExitPass : kExitClaimFailed;
}

inline int cmd_params(const RunConfig& cfg, std::ostream& out) {
  BinaryIncidenceMatrix m = detail::load_matrix(cfg.in);
  analysis::Family fam = analysis::family_from_name(cfg.family);
  int param = fam == analysis::Family::affine ? cfg.q : cfg.alpha;
  if (param <= 0) raise(Errc::bad_family, "family parameter (--alpha or --q) required");
  Range kr = cfg.k.empty() ? Range{1, param} : parse_range(cfg.k);
  Range dr = parse_range(cfg.delta);
  std::vector<int> deltas;
  for (int d = dr.lo; d <= dr.hi; ++d) deltas.push_back(d);
  analysis::CodeReport rep = analysis::verify_code(m, fam, param, kr.lo, kr.hi, deltas);

  std::ostringstream text;
  text << analysis::family_name(fam) << "(" << param << ") on " << m.rows() << "x" << m.cols()
       << '\n';
  for (const auto& e : rep.m_table) {
    text << "  M(k=" << e.k << ") = " << e.computed;
    if (e.formula)
      text << " formula " << (e.formula_exact ? "= " : ">= ") << *e.formula
           << (e.informational ? " (informational)" : e.pass ? " ok" : " MISMATCH");
    text << '\n';
  }
  text << "  t = " << rep.t.result.t;
  if (rep.t.target.exact) text << " (paper " << *rep.t.target.exact << ")";
  if (rep.t.target.bounds)
    text << " (paper bounds [" << rep.t.target.bounds->first << ","
         << rep.t.target.bounds->second << "])";
  text << (rep.t.pass ? " ok" : " MISMATCH") << '\n';
  for (const auto& e : rep.ecbc) {
    text << "  ecbc t(delta=" << e.delta << ") = " << e.result.t;
    if (e.target.exact) text << " (paper " << *e.target.exact << ")";
    if (e.target.bounds)
      text << " (paper bounds [" << e.target.bounds->first << "," << e.target.bounds->second
           << "])";
    text << (e.pass ? " ok" : " MISMATCH") << '\n';
  }
  text << (rep.all_pass() ? "all claims hold" : "claim failures found") << '\n';
  detail::write_report(cfg, detail::envelope(cfg, rep.to_json()), text.str(), out);
  return rep.all_pass() ? kExitPass : kExitClaimFailed;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  BinaryIncidenceMatrix m = detail::load_matrix(cfg.in);
  Range dr = parse_range(cfg.delta);
  int max_size = cfg.max_size < 0 ? m.cols() : cfg.max_size;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  bool all_agree = true;
  bool vacuous = max_size == 0;
  std::ostringstream text;
  for (int d = dr.lo; d <= dr.hi; ++d) {
    analysis::TResult main = analysis::ecbc_t(m, d);
    analysis::TResult oracle = analysis::batch_t_oracle(m, d, max_size);
    // oracle is conclusive when it found a violation or exhausted all sizes;
    // otherwise it only certifies t >= max_size
    bool agree = oracle.exact ? (!main.exact || main.t == oracle.t)
                              : (main.t >= oracle.t);
    all_agree = all_agree && agree;
    nlohmann::ordered_json e;
    e["delta"] = d;
    e["t"] = main.t;
    e["t_exact"] = main.exact;
    e["oracle_t"] = oracle.t;
    e["oracle_conclusive"] = oracle.exact;
    e["agree"] = agree;
    entries.push_back(e);
    text << "delta=" << d << ": t=" << main.t << " oracle=" << oracle.t
         << (oracle.exact ? "" : " (lower bound)") << (agree ? " agree" : " DISAGREE") << '\n';
  }
  if (vacuous) text << "warning: max size 0, agreement is vacuous\n";
  nlohmann::ordered_json rep;
  rep["max_size"] = max_size;
  rep["vacuous"] = vacuous;
  rep["entries"] = entries;
  rep["all_agree"] = all_agree;
  detail::write_report(cfg, detail::envelope(cfg, rep), text.str(), out);
  return all_agree ? kExitPass : kExitClaimFailed;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  BinaryIncidenceMatrix m = detail::load_matrix(cfg.in);
  const int k = cfg.k_single;
  if (k < 1 || k > m.rows()) raise(Errc::k_out_of_range, "--k outside [1, n]");
  Range dr = parse_range(cfg.delta);
  if (dr.lo != dr.hi) raise(Errc::parse_error, "simulate takes a single --delta");
  const int delta = dr.lo;

  const long long M = cfg.m_override > 0 ? cfg.m_override : analysis::file_size(m, k);
  const uint32_t q = cfg.field_order ? *cfg.field_order : mds::default_field_order(m.cols());
  std::mt19937_64 rng(cfg.seed);
  std::vector<uint16_t> file(static_cast<std::size_t>(M));
  for (auto& s : file) s = static_cast<uint16_t>(rng() % q);
  dss::StorageSystem sys(m, file, q);

  nlohmann::ordered_json rep;
  rep["M"] = M;
  rep["q"] = q;
  rep["t"] = cfg.t;
  rep["delta"] = delta;

  // reconstruction over all k-subsets (or a seeded sample)
  uint64_t rec_run = 0, rec_failed = 0;
  nlohmann::ordered_json rec_failures = nlohmann::ordered_json::array();
  double rec_total = binomial(m.rows(), k);
  bool rec_sampled = cfg.budget > 0 && rec_total > static_cast<double>(cfg.budget);
  auto run_reconstruct = [&](const std::vector<int>& nodes) {
    ++rec_run;
    bool ok = false;
    std::string why;
    try {
      ok = sys.reconstruct(nodes) == file;
      if (!ok) why = "decoded file differs";
    } catch (const Error& e) {
      why = e.what();
    }
    if (!ok) {
      ++rec_failed;
      if (rec_failures.size() < 32) rec_failures.push_back({{"nodes", nodes}, {"error", why}});
    }
  };
  if (!rec_sampled) {
    auto c = first_combination(k);
    do {
      run_reconstruct(c);
    } while (next_combination(c, m.rows()));
  } else {
    std::vector<int> pool(m.rows());
    for (uint64_t it = 0; it < cfg.budget; ++it) {
      for (int i = 0; i < m.rows(); ++i) pool[i] = i;
      for (int i = 0; i < k; ++i)
        std::swap(pool[i],
                  pool[i + static_cast<int>(rng() % static_cast<uint64_t>(m.rows() - i))]);
      std::vector<int> nodes(pool.begin(), pool.begin() + k);
      std::sort(nodes.begin(), nodes.end());
      run_reconstruct(nodes);
    }
  }
  rep["reconstruct"] = {{"k", k},
                        {"cases_total", rec_total},
                        {"cases_run", rec_run},
                        {"cases_failed", rec_failed},
                        {"sampled", rec_sampled},
                        {"failures", rec_failures}};

  // repair of every node, bit-exact restoration required
  uint64_t rep_failed = 0;
  nlohmann::ordered_json repair_failures = nlohmann::ordered_json::array();
  for (int node = 0; node < sys.nodes(); ++node) {
    auto before = sys.node_content(node);
    try {
      dss::RepairPlan plan = sys.repair(node);
      std::vector<int> helpers;
      for (auto& [pos, h] : plan.transfers) helpers.push_back(h);
      std::sort(helpers.begin(), helpers.end());
      bool distinct = std::adjacent_find(helpers.begin(), helpers.end()) == helpers.end();
      if (!distinct || sys.node_content(node) != before) {
        ++rep_failed;
        repair_failures.push_back({{"node", node}, {"error", "restoration mismatch"}});
      }
    } catch (const Error& e) {
      ++rep_failed;
      repair_failures.push_back({{"node", node}, {"error", e.what()}});
    }
  }
  rep["repair"] = {{"nodes", sys.nodes()},
                   {"cases_failed", rep_failed},
                   {"failures", repair_failures}};

  dss::SweepReport sweep = sys.failure_sweep(cfg.t, delta, cfg.budget, cfg.seed);
  rep["sweep"] = sweep.to_json();

  bool pass = rec_failed == 0 && rep_failed == 0 && sweep.pass();
  rep["pass"] = pass;

  std::ostringstream text;
  text << "M=" << M << " q=" << q << '\n';
  text << "reconstruct k=" << k << ": " << rec_run - rec_failed << "/" << rec_run << " ok"
       << (rec_sampled ? " (sampled)" : "") << '\n';
  text << "repair: " << sys.nodes() - rep_failed << "/" << sys.nodes() << " ok\n";
  text << "batch sweep t=" << cfg.t << " delta=" << delta << ": " << sweep.cases_run
       << " cases, " << sweep.cases_failed << " failed" << (sweep.sampled ? " (sampled)" : "")
       << '\n';
  if (!sweep.failures.empty())
    text << "first certificate: " << detail::witness_text(sweep.failures[0].certificate) << '\n';
  text << (pass ? "PASS" : "FAIL") << '\n';
  detail::write_report(cfg, detail::envelope(cfg, rep), text.str(), out);
  return pass ? kExitPass : kExitClaimFailed;
}

// Entry point shared by the binary and the tests. Args exclude the program
// name. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"transversal-design and affine-plane batch code toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // keep -h free for the TD group size
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--seed", cfg.seed, "PRNG seed recorded in the report");
    sub->add_option("--budget", cfg.budget, "case cap for sweeps, 0 = exhaustive");
    sub->add_option("--format", cfg.format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", cfg.out, "output path");
  };

  auto* c_construct = app.add_subcommand("construct", "build a design, write matrix + design json");
  c_construct->add_option("--family", cfg.family, "td|affine")->required();
  c_construct->add_option("--ell", cfg.ell, "TD block size");
  c_construct->add_option("--h", cfg.h, "TD group size");
  c_construct->add_option("--q", cfg.q, "affine plane order");
  add_common(c_construct);

  auto* c_validate = app.add_subcommand("validate", "check design axioms exhaustively");
  c_validate->add_option("--in", cfg.in, "design json");
  c_validate->add_option("--family", cfg.family, "td|affine");
  c_validate->add_option("--ell", cfg.ell, "TD block size");
  c_validate->add_option("--h", cfg.h, "TD group size");
  c_validate->add_option("--q", cfg.q, "affine plane order");
  add_common(c_validate);

  auto* c_params = app.add_subcommand("params", "compute M(k), t, ecbc t and check paper claims");
  c_params->add_option("--in", cfg.in, "incidence matrix (.im text or .json)")->required();
  c_params->add_option("--family", cfg.family, "td2|td3|tdres|affine")->required();
  c_params->add_option("--alpha", cfg.alpha, "TD family parameter");
  c_params->add_option("--q", cfg.q, "affine order");
  c_params->add_option("--k", cfg.k, "k range a..b");
  c_params->add_option("--delta", cfg.delta, "delta range a..b");
  add_common(c_params);

  auto* c_oracle = app.add_subcommand("oracle", "cross-check t against brute-force enumeration");
  c_oracle->add_option("--in", cfg.in, "incidence matrix")->required();
  c_oracle->add_option("--delta", cfg.delta, "delta range a..b");
  c_oracle->add_option("--max", cfg.max_size, "largest column-subset size to enumerate");
  add_common(c_oracle);

  auto* c_simulate = app.add_subcommand("simulate", "store, reconstruct, repair, batch sweeps");
  c_simulate->add_option("--in", cfg.in, "incidence matrix")->required();
  c_simulate->add_option("--k", cfg.k_single, "reconstruction set size")->required();
  c_simulate->add_option("--t", cfg.t, "batch size to sweep")->required();
  c_simulate->add_option("--delta", cfg.delta, "failure count");
  c_simulate->add_option("--q", cfg.q, "field order override");
  c_simulate->add_option("--M", cfg.m_override, "file size override (default file_size(layout, k))");
  add_common(c_simulate);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(c_construct)) {
      cfg.command = "construct";
      return cmd_construct(cfg, out);
    }
    if (app.got_subcommand(c_validate)) {
      cfg.command = "validate";
      return cmd_validate(cfg, out);
    }
    if (app.got_subcommand(c_params)) {
      cfg.command = "params";
      return cmd_params(cfg, out);
    }
    if (app.got_subcommand(c_oracle)) {
      cfg.command = "oracle";
      return cmd_oracle(cfg, out);
    }
    if (app.got_subcommand(c_simulate)) {
      cfg.command = "simulate";
      if (cfg.q > 0) cfg.field_order = static_cast<uint32_t>(cfg.q);
      return cmd_simulate(cfg, out);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace frb::cli
