//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "param_tables.h"

#include <charconv>
#include <string>

#include "metamol/desc/descriptors.h"

namespace metamol::desc::internal {

std::vector<std::vector<std::string_view>> split_table(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  while (!text.empty()) {
    std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    std::vector<std::string_view> fields;
    for (;;) {
      std::size_t tab = line.find('\t');
      fields.push_back(line.substr(0, tab));
      if (tab == std::string_view::npos)
        break;
      line.remove_prefix(tab + 1);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double table_number(std::string_view field, std::string_view table) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw DescriptorError("bad number '" + std::string(field) + "' in "
                          + std::string(table) + " table");
  return v;
}

}  // namespace metamol::desc::internal
