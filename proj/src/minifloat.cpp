#include "fpv/minifloat.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fpv {

namespace mp = boost::multiprecision;

namespace {

uint64_t exponent_all_ones(const FPFormat &f) {
  return (uint64_t{1} << f.ebits) - 1;
}

uint64_t pack(const FPFormat &f, bool sign, uint64_t biased,
              uint64_t trailing) {
  return (uint64_t(sign) << (f.width() - 1)) | (biased << f.trailing_bits()) |
         trailing;
}

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i)
    r *= 10;
  return r;
}

// Signed exact value as (numerator, exponent) with common exponent `e`.
BigInt signed_mantissa_at(const MiniFloat &v, long e) {
  auto ex = v.exact();
  BigInt m = ex.mantissa << (ex.exponent - e);
  return v.sign() ? BigInt(-m) : m;
}

} // namespace

MiniFloat::MiniFloat(FPFormat fmt, uint64_t bits)
    : fmt_(std::move(fmt)), bits_(bits & width_mask(fmt_.width())) {
  assert(fmt_.ebits >= 2 && fmt_.sbits >= 2 && fmt_.width() <= 64);
  if (is_nan())
    bits_ = pack(fmt_, false, exponent_all_ones(fmt_),
                 uint64_t{1} << (fmt_.trailing_bits() - 1));
}

MiniFloat MiniFloat::zero(const FPFormat &f, bool negative) {
  return {f, pack(f, negative, 0, 0)};
}

MiniFloat MiniFloat::infinity(const FPFormat &f, bool negative) {
  return {f, pack(f, negative, exponent_all_ones(f), 0)};
}

MiniFloat MiniFloat::nan(const FPFormat &f) {
  return {f, pack(f, false, exponent_all_ones(f), 1)};
}

MiniFloat MiniFloat::largest_finite(const FPFormat &f, bool negative) {
  return {f, pack(f, negative, exponent_all_ones(f) - 1,
                  width_mask(f.trailing_bits()))};
}

uint64_t MiniFloat::biased_exponent() const {
  return (bits_ >> fmt_.trailing_bits()) & exponent_all_ones(fmt_);
}

uint64_t MiniFloat::trailing() const {
  return bits_ & width_mask(fmt_.trailing_bits());
}

bool MiniFloat::is_nan() const {
  return biased_exponent() == exponent_all_ones(fmt_) && trailing() != 0;
}
bool MiniFloat::is_inf() const {
  return biased_exponent() == exponent_all_ones(fmt_) && trailing() == 0;
}
bool MiniFloat::is_zero() const {
  return biased_exponent() == 0 && trailing() == 0;
}
bool MiniFloat::is_subnormal() const {
  return biased_exponent() == 0 && trailing() != 0;
}
bool MiniFloat::is_normal() const {
  auto e = biased_exponent();
  return e != 0 && e != exponent_all_ones(fmt_);
}

MiniFloat::Exact MiniFloat::exact() const {
  assert(is_finite());
  long p = fmt_.sbits;
  auto e = biased_exponent();
  if (e == 0)
    return {BigInt(trailing()), fmt_.emin() - (p - 1)};
  return {BigInt(trailing() | (uint64_t{1} << (p - 1))),
          long(e) - fmt_.bias() - (p - 1)};
}

MiniFloat MiniFloat::round(const FPFormat &f, bool negative, BigInt num,
                           BigInt den, long exp2) {
  assert(num >= 0 && den > 0);
  if (num == 0)
    return zero(f, negative);

  // e = floor(log2(num / den)) + exp2
  long a = long(mp::msb(num)), b = long(mp::msb(den));
  long e = a - b;
  if ((num << b) < (den << a))
    --e;
  e += exp2;

  const long p = f.sbits;
  long quantum = std::max(e, f.emin()) - (p - 1);
  long shift = exp2 - quantum;
  if (shift >= 0)
    num <<= shift;
  else
    den <<= -shift;

  BigInt q, r;
  mp::divide_qr(num, den, q, r);
  BigInt twice = r << 1;
  if (twice > den || (twice == den && mp::bit_test(q, 0)))
    ++q;
  if (q == (BigInt(1) << p)) {
    q >>= 1;
    ++quantum;
  }
  if (q == 0)
    return zero(f, negative);

  const BigInt hidden = BigInt(1) << (p - 1);
  if (q >= hidden) {
    long biased = quantum + (p - 1) + f.bias();
    if (biased >= long(exponent_all_ones(f)))
      return infinity(f, negative);
    return {f, pack(f, negative, uint64_t(biased),
                    static_cast<uint64_t>(q - hidden))};
  }
  return {f, pack(f, negative, 0, static_cast<uint64_t>(q))};
}

std::optional<MiniFloat> MiniFloat::from_decimal(const FPFormat &f,
                                                 std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  if (text == "nan")
    return nan(f);
  if (text == "inf")
    return infinity(f, negative);

  BigInt digits = 0;
  long scale = 0; // value = digits * 10^scale
  size_t i = 0;
  bool any = false, point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      any = true;
      if (point)
        --scale;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!any)
    return std::nullopt;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E')
      return std::nullopt;
    ++i;
    long exp = 0;
    bool exp_neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    if (i == text.size())
      return std::nullopt;
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9')
        return std::nullopt;
      exp = std::min<long>(exp * 10 + (text[i] - '0'), 100000);
    }
    scale += exp_neg ? -exp : exp;
  }
  if (digits == 0)
    return zero(f, negative);
  // Far outside every supported range; avoid building huge powers of ten.
  if (scale > 5000)
    return infinity(f, negative);
  if (scale < -5000)
    return zero(f, negative);
  if (scale >= 0)
    return round(f, negative, digits * pow10(unsigned(scale)), 1, 0);
  return round(f, negative, digits, pow10(unsigned(-scale)), 0);
}

MiniFloat MiniFloat::from_integer(const FPFormat &f, const BigInt &v) {
  return round(f, v < 0, mp::abs(v), 1, 0);
}

double MiniFloat::to_double() const {
  if (is_nan())
    return std::nan("");
  if (is_inf())
    return sign() ? -HUGE_VAL : HUGE_VAL;
  if (is_zero())
    return sign() ? -0.0 : 0.0;
  auto ex = exact();
  double m = ex.mantissa.convert_to<double>();
  double v = std::ldexp(m, int(ex.exponent));
  return sign() ? -v : v;
}

std::string MiniFloat::to_string() const {
  if (is_nan())
    return "nan";
  if (is_inf())
    return sign() ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), to_double());
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos)
    s += ".0";
  return s;
}

std::string MiniFloat::bit_string() const {
  std::string s;
  s += sign() ? '1' : '0';
  s += ' ';
  for (int i = int(fmt_.ebits) - 1; i >= 0; --i)
    s += ((biased_exponent() >> i) & 1) ? '1' : '0';
  s += ' ';
  for (int i = int(fmt_.trailing_bits()) - 1; i >= 0; --i)
    s += ((trailing() >> i) & 1) ? '1' : '0';
  return s;
}

std::vector<MiniFloat> all_values(const FPFormat &f) {
  std::vector<MiniFloat> out;
  const uint64_t count = uint64_t{1} << f.width();
  bool nan_seen = false;
  for (uint64_t b = 0; b < count; ++b) {
    MiniFloat v(f, b);
    if (v.is_nan()) {
      if (nan_seen)
        continue;
      nan_seen = true;
    }
    out.push_back(v);
  }
  return out;
}

MiniFloat mf_add(const MiniFloat &a, const MiniFloat &b) {
  const auto &f = a.format();
  if (a.is_nan() || b.is_nan())
    return MiniFloat::nan(f);
  if (a.is_inf() && b.is_inf())
    return a.sign() == b.sign() ? a : MiniFloat::nan(f);
  if (a.is_inf())
    return a;
  if (b.is_inf())
    return b;
  if (a.is_zero() && b.is_zero())
    return MiniFloat::zero(f, a.sign() && b.sign());
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;

  long e = std::min(a.exact().exponent, b.exact().exponent);
  BigInt sum = signed_mantissa_at(a, e) + signed_mantissa_at(b, e);
  if (sum == 0)
    return MiniFloat::zero(f, false);
  return MiniFloat::round(f, sum < 0, mp::abs(sum), 1, e);
}

MiniFloat mf_sub(const MiniFloat &a, const MiniFloat &b) {
  return mf_add(a, mf_neg(b));
}

MiniFloat mf_mul(const MiniFloat &a, const MiniFloat &b) {
  const auto &f = a.format();
  bool s = a.sign() != b.sign();
  if (a.is_nan() || b.is_nan())
    return MiniFloat::nan(f);
  if ((a.is_inf() && b.is_zero()) || (a.is_zero() && b.is_inf()))
    return MiniFloat::nan(f);
  if (a.is_inf() || b.is_inf())
    return MiniFloat::infinity(f, s);
  if (a.is_zero() || b.is_zero())
    return MiniFloat::zero(f, s);
  auto x = a.exact(), y = b.exact();
  return MiniFloat::round(f, s, x.mantissa * y.mantissa, 1,
                          x.exponent + y.exponent);
}

MiniFloat mf_div(const MiniFloat &a, const MiniFloat &b) {
  const auto &f = a.format();
  bool s = a.sign() != b.sign();
  if (a.is_nan() || b.is_nan())
    return MiniFloat::nan(f);
  if ((a.is_inf() && b.is_inf()) || (a.is_zero() && b.is_zero()))
    return MiniFloat::nan(f);
  if (a.is_inf() || b.is_zero())
    return MiniFloat::infinity(f, s);
  if (b.is_inf() || a.is_zero())
    return MiniFloat::zero(f, s);
  auto x = a.exact(), y = b.exact();
  return MiniFloat::round(f, s, x.mantissa, y.mantissa,
                          x.exponent - y.exponent);
}

MiniFloat mf_ieee_remainder(const MiniFloat &x, const MiniFloat &y) {
  const auto &f = x.format();
  if (x.is_nan() || y.is_nan() || x.is_inf() || y.is_zero())
    return MiniFloat::nan(f);
  if (y.is_inf() || x.is_zero())
    return x;

  auto ex = x.exact(), ey = y.exact();
  long e = std::min(ex.exponent, ey.exponent);
  BigInt X = ex.mantissa << (ex.exponent - e);
  BigInt Y = ey.mantissa << (ey.exponent - e);

  BigInt n, r;
  mp::divide_qr(X, Y, n, r);
  BigInt twice = r << 1;
  if (twice > Y || (twice == Y && mp::bit_test(n, 0)))
    r -= Y;
  if (r == 0)
    return MiniFloat::zero(f, x.sign());
  bool negative = x.sign() != (r < 0);
  return MiniFloat::round(f, negative, mp::abs(r), 1, e);
}

MiniFloat mf_rem(const MiniFloat &x, const MiniFloat &y) {
  MiniFloat abs_y = mf_abs(y);
  MiniFloat r = mf_ieee_remainder(mf_abs(x), abs_y);
  if (r.is_negative())
    r = mf_add(r, abs_y);
  return x.is_negative() != r.is_negative() ? mf_neg(r) : r;
}

MiniFloat mf_abs(const MiniFloat &a) {
  const auto &f = a.format();
  return {f, a.bits() & ~(uint64_t{1} << (f.width() - 1))};
}

MiniFloat mf_neg(const MiniFloat &a) {
  if (a.is_nan())
    return a;
  const auto &f = a.format();
  return {f, a.bits() ^ (uint64_t{1} << (f.width() - 1))};
}

std::optional<int> mf_compare(const MiniFloat &a, const MiniFloat &b) {
  if (a.is_nan() || b.is_nan())
    return std::nullopt;
  if (a.is_zero() && b.is_zero())
    return 0;
  auto rank = [](const MiniFloat &v) -> int {
    if (v.is_inf())
      return v.sign() ? -2 : 2;
    return 0;
  };
  int ra = rank(a), rb = rank(b);
  if (ra != 0 || rb != 0) {
    if (ra == rb)
      return 0;
    if (ra != 0 && rb != 0)
      return ra < rb ? -1 : 1;
    return ra != 0 ? (ra < 0 ? -1 : 1) : (rb < 0 ? 1 : -1);
  }
  long e = std::min(a.is_zero() ? b.exact().exponent : a.exact().exponent,
                    b.is_zero() ? a.exact().exponent : b.exact().exponent);
  BigInt va = a.is_zero() ? BigInt(0) : signed_mantissa_at(a, e);
  BigInt vb = b.is_zero() ? BigInt(0) : signed_mantissa_at(b, e);
  return va < vb ? -1 : (va == vb ? 0 : 1);
}

bool mf_cmp(CondCode cc, const MiniFloat &a, const MiniFloat &b) {
  auto c = mf_compare(a, b);
  if (!c)
    return !is_ordered(cc);
  if (cc == CondCode::uno)
    return false;
  switch (relation_of(cc)) {
  case Relation::Eq: return *c == 0;
  case Relation::Gt: return *c > 0;
  case Relation::Ge: return *c >= 0;
  case Relation::Lt: return *c < 0;
  case Relation::Le: return *c <= 0;
  case Relation::Ne: return *c != 0;
  case Relation::True: return true;
  }
  return false;
}

MiniFloat mf_convert(const MiniFloat &a, const FPFormat &dst) {
  if (a.is_nan())
    return MiniFloat::nan(dst);
  if (a.is_inf())
    return MiniFloat::infinity(dst, a.sign());
  if (a.is_zero())
    return MiniFloat::zero(dst, a.sign());
  auto ex = a.exact();
  return MiniFloat::round(dst, a.sign(), ex.mantissa, 1, ex.exponent);
}

std::optional<uint64_t> mf_to_int(const MiniFloat &a, unsigned width,
                                  bool is_signed) {
  if (!a.is_finite())
    return std::nullopt;
  if (a.is_zero())
    return 0;
  auto ex = a.exact();
  BigInt mag = ex.exponent >= 0 ? BigInt(ex.mantissa << ex.exponent)
                                : BigInt(ex.mantissa >> -ex.exponent);
  BigInt v = a.sign() ? BigInt(-mag) : mag;
  BigInt lo = is_signed ? BigInt(-(BigInt(1) << (width - 1))) : BigInt(0);
  BigInt hi = is_signed ? BigInt((BigInt(1) << (width - 1)) - 1)
                        : BigInt((BigInt(1) << width) - 1);
  if (v < lo || v > hi)
    return std::nullopt;
  if (v < 0)
    v += BigInt(1) << width;
  return static_cast<uint64_t>(v);
}

BigInt int_value(uint64_t bits, unsigned width, bool is_signed) {
  bits &= width_mask(width);
  BigInt v = bits;
  if (is_signed && width > 0 && ((bits >> (width - 1)) & 1))
    v -= BigInt(1) << width;
  return v;
}

std::optional<MiniFloat> mf_from_int(uint64_t bits, unsigned width,
                                     bool is_signed, const FPFormat &dst) {
  MiniFloat r = MiniFloat::from_integer(dst, int_value(bits, width, is_signed));
  if (r.is_inf())
    return std::nullopt;
  return r;
}

} // namespace fpv
