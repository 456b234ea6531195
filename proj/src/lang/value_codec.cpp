//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/value_codec.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace metamol::lang {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c: s) {
    if (c < '0' || c > '9')
      return false;
  }
  return true;
}

}  // namespace

std::string format_value(double v) {
  if (!std::isfinite(v))
    throw ValueError("non-finite value");
  if (v == 0)
    return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", std::fabs(v));
  // buf = "d.ddde[+-]xx"
  std::string digits { buf[0], buf[2], buf[3], buf[4] };
  const int exponent = std::atoi(buf + 6);
  std::string out = v < 0 ? "-" : "";

  if (exponent >= 6 || exponent < -4) {
    while (digits.size() > 1 && digits.back() == '0')
      digits.pop_back();
    out += digits[0];
    if (digits.size() > 1)
      out += "." + digits.substr(1);
    out += "e" + std::to_string(exponent);
    return out;
  }
  if (exponent >= 0) {
    std::string whole = digits.substr(0, std::min<std::size_t>(exponent + 1, 4));
    whole.append(std::max(0, exponent + 1 - 4), '0');
    std::string frac = exponent < 3 ? digits.substr(exponent + 1) : "";
    while (!frac.empty() && frac.back() == '0')
      frac.pop_back();
    out += whole;
    if (!frac.empty())
      out += "." + frac;
    return out;
  }
  std::string frac = std::string(-exponent - 1, '0') + digits;
  while (frac.back() == '0')
    frac.pop_back();
  return out + "0." + frac;
}

std::vector<std::string> encode_value(double v) {
  std::vector<std::string> out;
  for (char c: format_value(v))
    out.emplace_back(1, c);
  return out;
}

bool is_numeric_token(std::string_view token) {
  return token.size() == 1
         && ((token[0] >= '0' && token[0] <= '9') || token[0] == '.' || token[0] == '-'
             || token[0] == 'e');
}

double parse_value(std::string_view text) {
  auto fail = [&]() -> double {
    throw ValueError("malformed value '" + std::string(text) + "'");
  };
  std::string_view rest = text;
  if (!rest.empty() && rest[0] == '-')
    rest.remove_prefix(1);
  std::string_view mantissa = rest.substr(0, rest.find('e'));
  std::string_view exponent;
  if (mantissa.size() < rest.size()) {
    exponent = rest.substr(mantissa.size() + 1);
    if (!exponent.empty() && exponent[0] == '-')
      exponent.remove_prefix(1);
    if (!all_digits(exponent))
      return fail();
  }
  const std::size_t dot = mantissa.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(mantissa))
      return fail();
  } else if (!all_digits(mantissa.substr(0, dot)) || !all_digits(mantissa.substr(dot + 1))) {
    return fail();
  }
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    return fail();
  return value;
}

double decode_value(const std::vector<std::string> &tokens) {
  std::string text;
  for (const std::string &t: tokens) {
    if (!is_numeric_token(t))
      throw ValueError("non-numeric token '" + t + "'");
    text += t;
  }
  return parse_value(text);
}

}  // namespace metamol::lang
