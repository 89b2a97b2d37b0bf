// Copyright 2026 The wdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wdepth/kv_file.h"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wdepth {
namespace {

KeyValueFile parse_text(const std::string& text) {
  std::istringstream in(text);
  return KeyValueFile::parse(in, "t");
}

TEST(kv_file, parses_comments_and_whitespace) {
  const KeyValueFile f = parse_text("# header\n  a = 1.5  # trailing\n\nb=x y\nlist = 1, 2,3\n");
  EXPECT_EQ(f.get("b"), "x y");
  EXPECT_EQ(f.get_double("a"), 1.5);
  EXPECT_EQ(f.get_list("list"), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(f.unread_keys().empty());
}

TEST(kv_file, rejects_malformed_lines) {
  EXPECT_THROW(parse_text("a 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_text(" = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("a = 1\na = 2\n"), std::invalid_argument);
  try {
    parse_text("a = 1\n\nbad\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("t:3"), std::string::npos);
  }
}

TEST(kv_file, typed_getters_validate) {
  const KeyValueFile f =
      parse_text("n = 9\ne = 1e8\nf = 2.5\nneg = -3\ns = abc\ninf = inf\nl = 1,x\n");
  EXPECT_EQ(f.get_int("n"), 9);
  EXPECT_EQ(f.get_int("e"), 100000000);
  EXPECT_EQ(f.get_uint("n"), 9u);
  EXPECT_THROW(f.get_int("f"), std::invalid_argument);
  EXPECT_THROW(f.get_uint("neg"), std::invalid_argument);
  EXPECT_THROW(f.get_double("s"), std::invalid_argument);
  EXPECT_THROW(f.get_double("inf"), std::invalid_argument);
  EXPECT_THROW(f.get_list("l"), std::invalid_argument);
  EXPECT_THROW(f.get("missing"), std::invalid_argument);
  EXPECT_EQ(f.get_int_or("missing", 4), 4);
  EXPECT_EQ(f.get_double_or("missing", 0.5), 0.5);
  EXPECT_EQ(f.get_or("missing", "d"), "d");
}

TEST(kv_file, tracks_unread_keys) {
  const KeyValueFile f = parse_text("a = 1\nb = 2\nc = 3\n");
  f.get("b");
  EXPECT_EQ(f.unread_keys(), (std::vector<std::string>{"a", "c"}));
}

TEST(kv_file, numbers_round_trip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> values{0.0, -0.0, 1e-300, std::numeric_limits<double>::max(),
                             std::numeric_limits<double>::denorm_min()};
  for (int i = 0; i < 1000; ++i) values.push_back(u(rng) * std::pow(10.0, i % 30 - 15));
  std::ostringstream out;
  write_key_values(out, {{"v", format_list(values)}});
  const std::vector<double> back = parse_text(out.str()).get_list("v");
  ASSERT_EQ(back.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_EQ(back[i], values[i]) << i;
}

TEST(kv_file, write_preserves_order) {
  std::ostringstream out;
  write_key_values(out, {{"z", "1"}, {"a", "2"}});
  EXPECT_EQ(out.str(), "z = 1\na = 2\n");
}

}  // namespace
}  // namespace wdepth
