#pragma once

#include "fpv/condcode.hpp"
#include "fpv/format.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fpv {

using BigInt = boost::multiprecision::cpp_int;

/// A value of an arbitrary `FPFormat`, stored as its interchange bit pattern.
///
/// Only one NaN exists: every NaN pattern is canonicalized on construction to
/// sign 0 with the top trailing-significand bit set. Arithmetic is done on
/// exact integers and rounded once, to nearest with ties to even.
class MiniFloat {
public:
  MiniFloat(FPFormat fmt, uint64_t bits);

  static MiniFloat zero(const FPFormat &f, bool negative);
  static MiniFloat infinity(const FPFormat &f, bool negative);
  static MiniFloat nan(const FPFormat &f);
  static MiniFloat largest_finite(const FPFormat &f, bool negative);

  /// Rounds (-1)^negative * num / den * 2^exp2 to `f`. `den` must be > 0 and
  /// `num` >= 0.
  static MiniFloat round(const FPFormat &f, bool negative, BigInt num,
                         BigInt den, long exp2);

  /// Parses a decimal literal ("1.5", "-0.0", "1e-3", "nan", "inf", "-inf")
  /// and rounds it to `f`. Returns nullopt on malformed text.
  static std::optional<MiniFloat> from_decimal(const FPFormat &f,
                                               std::string_view text);

  /// Rounds a signed integer to `f` (may produce infinity).
  static MiniFloat from_integer(const FPFormat &f, const BigInt &v);

  const FPFormat &format() const { return fmt_; }
  uint64_t bits() const { return bits_; }

  bool sign() const { return (bits_ >> (fmt_.width() - 1)) & 1; }
  uint64_t biased_exponent() const;
  uint64_t trailing() const;

  bool is_nan() const;
  bool is_inf() const;
  bool is_zero() const;
  bool is_subnormal() const;
  bool is_normal() const;
  bool is_finite() const { return !is_nan() && !is_inf(); }
  /// Sign bit set and not NaN (the single NaN has no sign).
  bool is_negative() const { return !is_nan() && sign(); }

  /// For finite nonzero values: |value| = mantissa * 2^exponent.
  struct Exact {
    BigInt mantissa;
    long exponent = 0;
  };
  Exact exact() const;

  /// Exact for every format up to double.
  double to_double() const;
  std::string to_string() const;
  /// "s e t" fields in binary, e.g. "1 00000 0000000000".
  std::string bit_string() const;

  friend bool operator==(const MiniFloat &a, const MiniFloat &b) {
    return a.fmt_ == b.fmt_ && a.bits_ == b.bits_;
  }

private:
  FPFormat fmt_;
  uint64_t bits_ = 0;
};

/// Every distinct value of `f` (all non-NaN patterns plus the one NaN), in
/// ascending bit-pattern order.
std::vector<MiniFloat> all_values(const FPFormat &f);

MiniFloat mf_add(const MiniFloat &a, const MiniFloat &b);
MiniFloat mf_sub(const MiniFloat &a, const MiniFloat &b);
MiniFloat mf_mul(const MiniFloat &a, const MiniFloat &b);
MiniFloat mf_div(const MiniFloat &a, const MiniFloat &b);

/// IEEE remainder: x - n*y with n the integer nearest x/y, ties to even.
MiniFloat mf_ieee_remainder(const MiniFloat &x, const MiniFloat &y);

/// C fmod built from the IEEE remainder of the magnitudes, shifted into
/// [0, |y|) and given the sign of x.
MiniFloat mf_rem(const MiniFloat &x, const MiniFloat &y);

MiniFloat mf_abs(const MiniFloat &a);
MiniFloat mf_neg(const MiniFloat &a);

/// -1, 0, 1; nullopt when either side is NaN. -0.0 compares equal to +0.0.
std::optional<int> mf_compare(const MiniFloat &a, const MiniFloat &b);
bool mf_cmp(CondCode cc, const MiniFloat &a, const MiniFloat &b);

/// fpext / fptrunc.
MiniFloat mf_convert(const MiniFloat &a, const FPFormat &dst);

/// fptosi / fptoui: truncation toward zero. nullopt when the value is NaN,
/// infinite or the truncated value does not fit; otherwise the two's
/// complement bit pattern of `width` bits.
std::optional<uint64_t> mf_to_int(const MiniFloat &a, unsigned width,
                                  bool is_signed);

/// sitofp / uitofp from a `width`-bit pattern. nullopt when rounding
/// overflows to infinity.
std::optional<MiniFloat> mf_from_int(uint64_t bits, unsigned width,
                                     bool is_signed, const FPFormat &dst);

/// Interprets a `width`-bit pattern as signed or unsigned.
BigInt int_value(uint64_t bits, unsigned width, bool is_signed);

inline uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

} // namespace fpv
