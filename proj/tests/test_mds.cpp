#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "frb/bits.hpp"
#include "frb/mds.hpp"
#include "helpers.hpp"

using namespace frb;
using frb::mds::MdsCode;

namespace {

std::vector<uint16_t> random_file(int m, uint32_t q, std::mt19937_64& rng) {
  std::vector<uint16_t> f(m);
  for (auto& s : f) s = static_cast<uint16_t>(rng() % q);
  return f;
}

}  // namespace

TEST_CASE("construction errors") {
  CHECK_NOTHROW(MdsCode(16, 11, 16));
  require_error(Errc::field_too_small, [] { MdsCode(20, 12, 16); });
  require_error(Errc::bad_dimension, [] { MdsCode(8, 0, 16); });
  require_error(Errc::bad_dimension, [] { MdsCode(8, 9, 16); });
  require_error(Errc::not_prime_power, [] { MdsCode(6, 3, 6); });
}

TEST_CASE("default field is the smallest power of two that fits") {
  CHECK(mds::default_field_order(16) == 16);
  CHECK(mds::default_field_order(12) == 16);
  CHECK(mds::default_field_order(2) == 2);
  CHECK(mds::default_field_order(1) == 2);
  CHECK(mds::default_field_order(33) == 64);
}

TEST_CASE("encoding is systematic") {
  MdsCode code(16, 11, 16);
  std::mt19937_64 rng(3);
  auto f = random_file(11, 16, rng);
  auto cw = code.encode(f);
  REQUIRE(cw.size() == 16);
  for (int i = 0; i < 11; ++i) CHECK(cw[i] == f[i]);
}

TEST_CASE("identity code and zero file") {
  MdsCode idc(9, 9, 16);
  std::mt19937_64 rng(4);
  auto f = random_file(9, 16, rng);
  CHECK(idc.encode(f) == f);

  MdsCode code(12, 5, 16);
  std::vector<uint16_t> zero(5, 0);
  auto cw = code.encode(zero);
  for (auto s : cw) CHECK(s == 0);
}

TEST_CASE("encode validates input") {
  MdsCode code(8, 4, 8);
  require_error(Errc::length_mismatch, [&] { code.encode({1, 2, 3}); });
  require_error(Errc::index_out_of_range, [&] { code.encode({1, 2, 3, 9}); });
}

TEST_CASE("erasure decoding") {
  MdsCode code(12, 7, 16);
  std::mt19937_64 rng(5);
  auto f = random_file(7, 16, rng);
  auto cw = code.encode(f);

  SECTION("any M known coordinates recover the file") {
    auto c = first_combination(7);
    do {
      std::vector<std::pair<int, uint16_t>> known;
      for (int pos : c) known.push_back({pos, cw[pos]});
      REQUIRE(code.decode_erasures(known) == f);
    } while (next_combination(c, 12));
  }

  SECTION("all coordinates work too") {
    std::vector<std::pair<int, uint16_t>> known;
    for (int pos = 0; pos < 12; ++pos) known.push_back({pos, cw[pos]});
    CHECK(code.decode_erasures(known) == f);
  }

  SECTION("M-1 coordinates are not enough") {
    std::vector<std::pair<int, uint16_t>> known;
    for (int pos = 0; pos < 6; ++pos) known.push_back({pos, cw[pos]});
    require_error(Errc::insufficient_symbols, [&] { code.decode_erasures(known); });
  }

  SECTION("duplicate positions are fine when consistent") {
    std::vector<std::pair<int, uint16_t>> known;
    for (int pos = 0; pos < 7; ++pos) known.push_back({pos, cw[pos]});
    known.push_back({0, cw[0]});
    CHECK(code.decode_erasures(known) == f);
    known.push_back({0, static_cast<uint16_t>(cw[0] ^ 1)});
    require_error(Errc::inconsistent, [&] { code.decode_erasures(known); });
  }

  SECTION("off-codeword symbols are detected") {
    std::vector<std::pair<int, uint16_t>> known;
    for (int pos = 0; pos < 8; ++pos) known.push_back({pos, cw[pos]});
    known[7].second = static_cast<uint16_t>(known[7].second ^ 1);
    require_error(Errc::inconsistent, [&] { code.decode_erasures(known); });
  }
}

TEST_CASE("MDS property exhaustively at theta = 8") {
  MdsCode code(8, 4, 8);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_file(4, 8, rng);
    auto cw = code.encode(f);
    auto c = first_combination(4);
    do {
      std::vector<std::pair<int, uint16_t>> known;
      for (int pos : c) known.push_back({pos, cw[pos]});
      REQUIRE(code.decode_erasures(known) == f);
    } while (next_combination(c, 8));
  }
}

TEST_CASE("encoding is linear") {
  MdsCode code(10, 6, 16);
  gf::Field f16(16);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_file(6, 16, rng);
    auto g = random_file(6, 16, rng);
    uint32_t a = static_cast<uint32_t>(rng() % 16);
    std::vector<uint16_t> comb(6);
    for (int i = 0; i < 6; ++i)
      comb[i] = static_cast<uint16_t>(f16.add(f16.mul(a, f[i]), g[i]));
    auto lhs = code.encode(comb);
    auto cf = code.encode(f);
    auto cg = code.encode(g);
    for (int i = 0; i < 10; ++i)
      REQUIRE(lhs[i] == f16.add(f16.mul(a, cf[i]), cg[i]));
  }
}

TEST_CASE("odd-characteristic field works as well") {
  MdsCode code(9, 5, 9);
  std::mt19937_64 rng(9);
  auto f = random_file(5, 9, rng);
  auto cw = code.encode(f);
  std::vector<std::pair<int, uint16_t>> known;
  for (int pos = 4; pos < 9; ++pos) known.push_back({pos, cw[pos]});
  CHECK(code.decode_erasures(known) == f);
}
