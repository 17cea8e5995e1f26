#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "frb/errors.hpp"

template <typename Fn>
void require_error(frb::Errc want, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << frb::errc_name(want) << ", nothing thrown");
  } catch (const frb::Error& e) {
    if (e.code() != want)
      FAIL("expected " << frb::errc_name(want) << ", got " << e.what());
    SUCCEED();
  }
}
