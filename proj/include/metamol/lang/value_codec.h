//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metamol::lang {

class ValueError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Four significant digits, shortest form: "46.07", "1235", "0.5", "0".
/// Magnitudes below 1e-4 or from 1e6 up use a bare exponent: "-2e-5",
/// "1.5e6".
std::string format_value(double v);

/// One token per character of format_value.
std::vector<std::string> encode_value(double v);

/// Inverse of encode_value. Throws ValueError on anything outside the
/// grammar -?D+(.D+)?(e-?D+)?.
double decode_value(const std::vector<std::string> &tokens);
double parse_value(std::string_view text);

bool is_numeric_token(std::string_view token);

}  // namespace metamol::lang
