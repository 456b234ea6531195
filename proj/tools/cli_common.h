//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace metamol::cli {

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kCheckFailed = 5,
  kTrainingFailed = 6,
};

class IoError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FormatError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Runner = std::function<int()>;

std::ifstream open_in(const std::string &path);
std::ofstream open_out(const std::string &path);
std::vector<std::string> read_lines(const std::string &path);

// METAMOL_SEED, when set, replaces `seed`.
std::uint64_t effective_seed(std::uint64_t seed);

bool ends_with(const std::string &s, const std::string &suffix);

Runner add_corpus(CLI::App &root);
Runner add_train(CLI::App &root);
Runner add_finetune(CLI::App &root);
Runner add_generate(CLI::App &root);
Runner add_predict(CLI::App &root);
Runner add_embed(CLI::App &root);
Runner add_eval(CLI::App &root);
Runner add_conf_encode(CLI::App &root);
Runner add_conf_decode(CLI::App &root);
Runner add_golden_check(CLI::App &root);

}  // namespace metamol::cli
