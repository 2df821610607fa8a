#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpv {

/// IEEE-style binary format. `sbits` counts the hidden bit, so the trailing
/// significand field is `sbits - 1` bits wide.
struct FPFormat {
  unsigned ebits = 0;
  unsigned sbits = 0;
  std::string name;

  unsigned width() const { return ebits + sbits; }
  long bias() const { return (1L << (ebits - 1)) - 1; }
  long emax() const { return bias(); }
  long emin() const { return 1 - bias(); }
  unsigned trailing_bits() const { return sbits - 1; }

  friend bool operator==(const FPFormat &a, const FPFormat &b) {
    return a.ebits == b.ebits && a.sbits == b.sbits;
  }
};

inline FPFormat fp8_format() { return {4, 4, "fp8"}; }
inline FPFormat half_format() { return {5, 11, "half"}; }
inline FPFormat single_format() { return {8, 24, "single"}; }
inline FPFormat double_format() { return {11, 53, "double"}; }

/// Accepts "fp8", "half", "single"/"float", "double".
std::optional<FPFormat> format_by_name(std::string_view name);

/// Concrete type of a value: an FP format or an integer of some width.
/// `i1` is the boolean produced by fcmp and consumed by select.
struct Type {
  enum class Kind { Float, Int };

  Kind kind = Kind::Int;
  FPFormat fmt;
  unsigned int_width = 0;

  static Type fp(FPFormat f) { return {Kind::Float, std::move(f), 0}; }
  static Type integer(unsigned w) { return {Kind::Int, {}, w}; }

  bool is_fp() const { return kind == Kind::Float; }
  bool is_int() const { return kind == Kind::Int; }
  unsigned bit_width() const { return is_fp() ? fmt.width() : int_width; }

  /// "half", "single", "i16", ...
  std::string to_string() const;

  friend bool operator==(const Type &a, const Type &b) {
    if (a.kind != b.kind)
      return false;
    return a.is_fp() ? a.fmt == b.fmt : a.int_width == b.int_width;
  }
};

/// Parses a DSL/CLI type token: half, float, single, double, fp8, iN.
std::optional<Type> parse_type(std::string_view token);

/// Value domains the typer enumerates over.
struct WidthConfig {
  std::vector<FPFormat> fp_formats{half_format(), single_format(),
                                   double_format()};
  std::vector<unsigned> int_widths{8, 16, 32, 64};

  /// Sorts both domains ascending and drops duplicates.
  void normalize();
};

} // namespace fpv
