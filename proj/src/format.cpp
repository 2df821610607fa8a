#include "fpv/format.hpp"

#include <algorithm>
#include <charconv>

namespace fpv {

std::optional<FPFormat> format_by_name(std::string_view name) {
  if (name == "fp8")
    return fp8_format();
  if (name == "half")
    return half_format();
  if (name == "single" || name == "float")
    return single_format();
  if (name == "double")
    return double_format();
  return std::nullopt;
}

std::string Type::to_string() const {
  if (is_fp())
    return fmt.name;
  return "i" + std::to_string(int_width);
}

std::optional<Type> parse_type(std::string_view token) {
  if (auto f = format_by_name(token))
    return Type::fp(*f);
  if (token.size() < 2 || token[0] != 'i')
    return std::nullopt;
  unsigned w = 0;
  auto [ptr, ec] =
      std::from_chars(token.data() + 1, token.data() + token.size(), w);
  if (ec != std::errc() || ptr != token.data() + token.size() || w == 0 ||
      w > 64)
    return std::nullopt;
  return Type::integer(w);
}

void WidthConfig::normalize() {
  std::sort(fp_formats.begin(), fp_formats.end(),
            [](const FPFormat &a, const FPFormat &b) {
              return a.width() < b.width();
            });
  fp_formats.erase(std::unique(fp_formats.begin(), fp_formats.end()),
                   fp_formats.end());
  std::sort(int_widths.begin(), int_widths.end());
  int_widths.erase(std::unique(int_widths.begin(), int_widths.end()),
                   int_widths.end());
}

} // namespace fpv
