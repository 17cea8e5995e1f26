#pragma once

#include <stdexcept>
#include <string>

namespace frb {

enum class Errc {
  not_prime_power,
  no_modulus,
  division_by_zero,
  field_mismatch,
  ell_too_large,
  index_out_of_range,
  parse_error,
  k_out_of_range,
  empty_column,
  delta_too_large,
  bad_family,
  field_too_small,
  bad_dimension,
  length_mismatch,
  insufficient_symbols,
  inconsistent,
  no_distinct_helpers,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_prime_power: return "NotPrimePower";
    case Errc::no_modulus: return "NoModulus";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::field_mismatch: return "FieldMismatch";
    case Errc::ell_too_large: return "EllTooLarge";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::parse_error: return "ParseError";
    case Errc::k_out_of_range: return "KOutOfRange";
    case Errc::empty_column: return "EmptyColumn";
    case Errc::delta_too_large: return "DeltaTooLarge";
    case Errc::bad_family: return "BadFamily";
    case Errc::field_too_small: return "FieldTooSmall";
    case Errc::bad_dimension: return "BadDimension";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::insufficient_symbols: return "InsufficientSymbols";
    case Errc::inconsistent: return "Inconsistent";
    case Errc::no_distinct_helpers: return "NoDistinctHelpers";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace frb
