//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string_view>
#include <vector>

namespace metamol::desc::internal {

// Contents of data/params/*.tsv, embedded at build time.
std::string_view crippen_table_text();
std::string_view tpsa_table_text();
std::string_view fcfp_feature_table_text();

// Splits tab-separated text into rows of fields, skipping blank lines and
// lines starting with '#'.
std::vector<std::vector<std::string_view>> split_table(std::string_view text);

// Parses a numeric field; throws DescriptorError naming the table on error.
double table_number(std::string_view field, std::string_view table);

}  // namespace metamol::desc::internal
