#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "json.hpp"

#include "frb/cli.hpp"
#include "helpers.hpp"

using frb::cli::run;

namespace {

struct Result {
  int rc;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int rc = run(std::move(args), out, err);
  return {rc, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) {
  static std::string dir = [] {
    std::string d = "/tmp/frb_cli_test_XXXXXX";
    if (mkdtemp(d.data()) == nullptr) d = "/tmp";
    return d;
  }();
  return dir + "/" + name;
}

}  // namespace

TEST_CASE("construct writes matrix and design files") {
  auto prefix = tmp_path("td34");
  auto r = invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix});
  REQUIRE(r.rc == 0);
  auto env = nlohmann::json::parse(r.out);
  CHECK(env["report"]["n"] == 12);
  CHECK(env["report"]["theta"] == 16);
  CHECK(env["report"]["alpha"] == 4);
  CHECK(env["report"]["rho"] == 3);
  CHECK(env["tool"]["name"] == "frbkit");

  std::ifstream fm(prefix + ".im");
  REQUIRE(fm.good());
  auto m = frb::BinaryIncidenceMatrix::read_text(fm);
  CHECK(m.rows() == 12);
  CHECK(m.cols() == 16);

  std::ifstream fj(prefix + ".json");
  REQUIRE(fj.good());
  nlohmann::json dj;
  fj >> dj;
  CHECK(dj["family"] == "td");
}

TEST_CASE("construct affine and parameter errors") {
  auto r = invoke({"construct", "--family", "affine", "--q", "3", "--out", tmp_path("ap3")});
  CHECK(r.rc == 0);

  auto bad = invoke({"construct", "--family", "td", "--ell", "5", "--h", "4"});
  CHECK(bad.rc == 2);
  CHECK(bad.err.find("EllTooLarge") != std::string::npos);

  auto badfam = invoke({"construct", "--family", "projective", "--q", "3"});
  CHECK(badfam.rc == 2);
}

TEST_CASE("validate passes for constructions and fails on tampered designs") {
  auto r = invoke({"validate", "--family", "td", "--ell", "3", "--h", "4"});
  CHECK(r.rc == 0);

  auto rj = invoke({"validate", "--family", "affine", "--q", "4", "--format", "text"});
  CHECK(rj.rc == 0);
  CHECK(rj.out.find("all axioms hold") != std::string::npos);

  // tamper with a stored design
  auto prefix = tmp_path("td23");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "2", "--h", "3", "--out", prefix}).rc ==
          0);
  nlohmann::json dj;
  {
    std::ifstream f(prefix + ".json");
    f >> dj;
  }
  dj["blocks"][0][1] = dj["blocks"][0][0];
  auto tampered = tmp_path("td23_bad.json");
  {
    std::ofstream f(tampered);
    f << dj.dump();
  }
  auto bad = invoke({"validate", "--in", tampered});
  CHECK(bad.rc == 1);
}

TEST_CASE("params reproduces the example report") {
  auto prefix = tmp_path("td34p");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  auto r = invoke({"params", "--in", prefix + ".im", "--family", "td3", "--alpha", "4", "--k",
                   "1..4", "--delta", "0..2"});
  REQUIRE(r.rc == 0);
  auto env = nlohmann::json::parse(r.out);
  const auto& rep = env["report"];
  CHECK(rep["params"]["n"] == 12);
  CHECK(rep["M_table"][3]["computed"] == 11);
  CHECK(rep["t"]["computed"] == 11);
  CHECK(rep["ecbc"][1]["delta"] == 2);
  CHECK(rep["ecbc"][1]["t"] == 8);
  CHECK(rep["all_pass"] == true);
}

TEST_CASE("params handles the affine ecbc bounds") {
  auto prefix = tmp_path("ap3p");
  REQUIRE(invoke({"construct", "--family", "affine", "--q", "3", "--out", prefix}).rc == 0);
  auto r = invoke({"params", "--in", prefix + ".im", "--family", "affine", "--q", "3", "--delta",
                   "2"});
  REQUIRE(r.rc == 0);
  auto env = nlohmann::json::parse(r.out);
  CHECK(env["report"]["ecbc"][0]["t"] == 6);
  CHECK(env["report"]["ecbc"][0]["paper_bounds"][0] == 4);
  CHECK(env["report"]["ecbc"][0]["paper_bounds"][1] == 6);
}

TEST_CASE("params exits 2 on unreadable or malformed input") {
  CHECK(invoke({"params", "--in", tmp_path("missing.im"), "--family", "td2", "--alpha", "4"}).rc ==
        2);
  auto garbage = tmp_path("garbage.im");
  {
    std::ofstream f(garbage);
    f << "not a matrix\n";
  }
  CHECK(invoke({"params", "--in", garbage, "--family", "td2", "--alpha", "4"}).rc == 2);
  // dimension mismatch between matrix and family
  auto prefix = tmp_path("td34d");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  CHECK(invoke({"params", "--in", prefix + ".im", "--family", "td2", "--alpha", "4"}).rc == 2);
  // bad range syntax
  CHECK(invoke({"params", "--in", prefix + ".im", "--family", "td3", "--alpha", "4", "--k",
                "1..x"})
            .rc == 2);
}

TEST_CASE("oracle agreement and vacuous warning") {
  auto prefix = tmp_path("td23o");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "2", "--h", "3", "--out", prefix}).rc ==
          0);
  auto r = invoke({"oracle", "--in", prefix + ".im", "--max", "9"});
  REQUIRE(r.rc == 0);
  auto env = nlohmann::json::parse(r.out);
  CHECK(env["report"]["all_agree"] == true);
  CHECK(env["report"]["entries"][0]["t"] == 5);

  auto rv = invoke({"oracle", "--in", prefix + ".im", "--max", "0", "--format", "text"});
  CHECK(rv.rc == 0);
  CHECK(rv.out.find("vacuous") != std::string::npos);
}

TEST_CASE("simulate passes on the TD(3,4) system") {
  auto prefix = tmp_path("td34s");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  auto r = invoke({"simulate", "--in", prefix + ".im", "--k", "4", "--t", "11", "--delta", "0",
                   "--seed", "7"});
  REQUIRE(r.rc == 0);
  auto env = nlohmann::json::parse(r.out);
  CHECK(env["report"]["M"] == 11);
  CHECK(env["report"]["q"] == 16);
  CHECK(env["report"]["reconstruct"]["cases_run"] == 495);
  CHECK(env["report"]["sweep"]["cases_run"] == 4368);
  CHECK(env["report"]["pass"] == true);
}

TEST_CASE("simulate with an overridden file size hits InsufficientSymbols") {
  auto prefix = tmp_path("td34f");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  auto r = invoke({"simulate", "--in", prefix + ".im", "--k", "3", "--t", "11", "--delta", "0",
                   "--M", "11", "--budget", "2000"});
  CHECK(r.rc == 1);
  auto env = nlohmann::json::parse(r.out);
  CHECK(env["report"]["reconstruct"]["cases_failed"].get<int>() > 0);
  std::string allout = env["report"]["reconstruct"]["failures"].dump();
  CHECK(allout.find("InsufficientSymbols") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical reports") {
  auto prefix = tmp_path("td34r");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  std::vector<std::string> args = {"params", "--in",    prefix + ".im", "--family",
                                   "td3",    "--alpha", "4",            "--k",
                                   "1..4",   "--delta", "0..2"};
  auto a = invoke(args);
  auto b = invoke(args);
  CHECK(a.out == b.out);

  std::vector<std::string> sim = {"simulate", "--in", prefix + ".im", "--k", "4",
                                  "--t",      "8",    "--delta",      "2",   "--budget",
                                  "500",      "--seed", "42"};
  auto c = invoke(sim);
  auto d = invoke(sim);
  CHECK(c.rc == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("the built binary honors the exit code contract") {
  auto prefix = tmp_path("td34b");
  REQUIRE(invoke({"construct", "--family", "td", "--ell", "3", "--h", "4", "--out", prefix}).rc ==
          0);
  std::string tool = FRB_TOOL_PATH;
  std::string quiet = " > /dev/null 2>&1";
  CHECK(std::system((tool + " params --in " + prefix + ".im --family td3 --alpha 4 --k 1..4" +
                     quiet)
                        .c_str()) == 0);
  int rc_usage = std::system((tool + " params --in /nonexistent.im --family td2 --alpha 4" + quiet)
                                 .c_str());
  CHECK(WEXITSTATUS(rc_usage) == 2);
  int rc_help = std::system((tool + " --help" + quiet).c_str());
  CHECK(WEXITSTATUS(rc_help) == 0);
  int rc_nocmd = std::system((tool + quiet).c_str());
  CHECK(WEXITSTATUS(rc_nocmd) == 2);
}
