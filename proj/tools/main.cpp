//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <map>

#include <nlohmann/json.hpp>

#include "cli_common.h"
#include "metamol/chem/smiles.h"
#include "metamol/conf/conformer.h"
#include "metamol/desc/descriptors.h"
#include "metamol/eval/metrics.h"
#include "metamol/lang/corpus.h"
#include "metamol/lang/value_codec.h"
#include "metamol/model/checkpoint.h"
#include "metamol/model/config.h"
#include "metamol/train/trainer.h"

namespace metamol::cli {

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char *env = std::getenv("METAMOL_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      throw CLI::ValidationError("METAMOL_SEED", "not an unsigned integer");
    }
  }
  return seed;
}

bool ends_with(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace metamol::cli

int main(int argc, char **argv) {
  using namespace metamol;
  CLI::App app("Molecular meta-language toolkit");
  app.require_subcommand(1);
  std::map<CLI::App *, cli::Runner> runners;
  for (auto add: { cli::add_corpus, cli::add_train, cli::add_finetune, cli::add_generate,
                   cli::add_predict, cli::add_embed, cli::add_eval, cli::add_conf_encode,
                   cli::add_conf_decode, cli::add_golden_check }) {
    cli::Runner r = add(app);
    runners[app.get_subcommands({}).back()] = std::move(r);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return cli::kUsage;
  }
  cli::Runner &run = runners.at(app.get_subcommands().front());
  try {
    return run();
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const cli::IoError &e) {
    std::cerr << "io error: " << e.what() << '\n';
    return cli::kIo;
  } catch (const model::CheckpointError &e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const train::TrainError &e) {
    std::cerr << "training failed: " << e.what() << '\n';
    return cli::kTrainingFailed;
  } catch (const eval::MetricError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const cli::FormatError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const lang::VocabError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const lang::ValueError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const chem::SmilesError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const conf::ConformerError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const model::ConfigError &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormat;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return cli::kInternal;
  }
}
