//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/value_codec.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

namespace metamol::lang {
namespace {

using Tokens = std::vector<std::string>;

TEST(ValueCodec, Examples) {
  EXPECT_EQ(encode_value(0), Tokens { "0" });
  EXPECT_EQ(encode_value(46.069), (Tokens { "4", "6", ".", "0", "7" }));
  EXPECT_EQ(encode_value(-0.00002), (Tokens { "-", "2", "e", "-", "5" }));
  EXPECT_DOUBLE_EQ(decode_value({ "4", "6", ".", "0", "7" }), 46.07);
  EXPECT_DOUBLE_EQ(decode_value({ "-", "2", "e", "-", "5" }), -2e-5);
  EXPECT_THROW(decode_value({ "4", "." }), ValueError);
}

TEST(ValueCodec, Formatting) {
  EXPECT_EQ(format_value(-0.0), "0");
  EXPECT_EQ(format_value(100), "100");
  EXPECT_EQ(format_value(0.5), "0.5");
  EXPECT_EQ(format_value(1234.6), "1235");
  EXPECT_EQ(format_value(12346), "12350");
  EXPECT_EQ(format_value(123456), "123500");
  EXPECT_EQ(format_value(999999.6), "1e6");
  EXPECT_EQ(format_value(1.5e6), "1.5e6");
  EXPECT_EQ(format_value(0.0001234), "0.0001234");
  EXPECT_EQ(format_value(0.3333333), "0.3333");
  EXPECT_EQ(format_value(-7.25), "-7.25");
  EXPECT_EQ(format_value(9.99996), "10");
  EXPECT_EQ(format_value(3.2e-7), "3.2e-7");
  EXPECT_THROW(format_value(std::numeric_limits<double>::infinity()), ValueError);
  EXPECT_THROW(format_value(std::nan("")), ValueError);
}

TEST(ValueCodec, Malformed) {
  for (const char *bad: { "", "-", ".5", "5.", "1e", "1e-", "--1", "1.2.3", "e5", "1-2" })
    EXPECT_THROW(parse_value(bad), ValueError) << bad;
  EXPECT_THROW(decode_value({ "4", "C" }), ValueError);
  EXPECT_THROW(decode_value({ "45" }), ValueError);
}

TEST(ValueCodec, RoundTripRelativeError) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> expo(-6, 6);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = std::pow(10.0, expo(rng)) * (rng() % 2 ? 1 : -1);
    const double back = decode_value(encode_value(v));
    worst = std::max(worst, std::fabs(back - v) / std::max(std::fabs(v), 1e-12));
  }
  EXPECT_LE(worst, 5e-4);
}

TEST(ValueCodec, AlphabetOnly) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1e7, 1e7);
  for (int i = 0; i < 1000; ++i) {
    for (const std::string &t: encode_value(u(rng)))
      EXPECT_TRUE(is_numeric_token(t));
  }
  EXPECT_FALSE(is_numeric_token("10"));
  EXPECT_FALSE(is_numeric_token("E"));
}

}  // namespace
}  // namespace metamol::lang
