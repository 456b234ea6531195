//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "metamol/conf/conformer.h"
#include "metamol/conf/conformer_io.h"
#include "test_util.h"

namespace fs = std::filesystem;

namespace {

const std::string kData = METAMOL_TEST_DATA_DIR;

class Cli: public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("metamol_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream smi(path("mols.smi"));
    const auto lines = metamol::test::sample_smiles();
    for (int i = 0; i < 24; ++i)
      smi << lines[i] << '\n';
  }

  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string &name) { return (dir_ / name).string(); }

  static int run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + " " + METAMOL_CLI + " " + args + " > " + path("stdout.txt")
                            + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // A few steps of the tiny preset; enough for plumbing checks.
  static const std::string &tiny_checkpoint() {
    static const std::string ck = [] {
      const std::string p = path("tiny.ckpt");
      EXPECT_EQ(run("train --corpus " + path("mols.smi") + " --config tiny --steps 5 --batch 4 --out "
                    + p + " --log " + path("train_log.jsonl")),
                0)
        << slurp(path("stderr.txt"));
      return p;
    }();
    return ck;
  }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, EvalToyOutputs) {
  std::ofstream(path("toy.txt")) << "CCO\nOCC\nxyz\n";
  ASSERT_EQ(run("eval --outputs " + path("toy.txt") + " --report " + path("toy.json")), 0);
  const auto j = nlohmann::json::parse(slurp(path("toy.json")));
  EXPECT_EQ(j["n_total"], 3);
  EXPECT_EQ(j["n_valid"], 2);
  EXPECT_EQ(j["n_unique"], 1);
  EXPECT_FALSE(j.contains("n_success"));
}

TEST_F(Cli, EvalConditionPlot) {
  std::ofstream(path("cond_out.txt")) << "CCO\nCCCO\nCCCCO\nbad(\n";
  std::ofstream(path("cond.txt")) << "MolWt=46.07\nMolWt=60.1\n[GLM_prop_smi] MolWt=74.12,TPSA=20\n80\n";
  ASSERT_EQ(run("eval --outputs " + path("cond_out.txt") + " --report " + path("cond.json")
                + " --property MolWt --conditions " + path("cond.txt") + " --plot " + path("plot.csv")),
            0)
    << slurp(path("stderr.txt"));
  const auto j = nlohmann::json::parse(slurp(path("cond.json")));
  EXPECT_EQ(j["condition"]["points"], 3);
  EXPECT_GT(j["condition"]["pearsonr"].get<double>(), 0.999);
  EXPECT_EQ(slurp(path("plot.csv")).substr(0, 18), "condition,achieved");
}

TEST_F(Cli, GoldenCheckPasses) {
  EXPECT_EQ(run("golden-check --golden " + kData + "/golden/descriptors.jsonl --fingerprints " + kData
                + "/golden/fingerprints_regression.jsonl"),
            0)
    << slurp(path("stdout.txt"));
  EXPECT_NE(slurp(path("stdout.txt")).find("golden-check: pass"), std::string::npos);
}

TEST_F(Cli, GoldenCheckFailsOnPerturbedValue) {
  std::ifstream in(kData + "/golden/descriptors.jsonl");
  std::ofstream out(path("perturbed.jsonl"));
  std::string line;
  for (int i = 0; std::getline(in, line); ++i) {
    auto j = nlohmann::json::parse(line);
    if (i == 3)
      j["properties"]["MolWt"] = j["properties"]["MolWt"].get<double>() + 0.5;
    out << j.dump() << '\n';
  }
  out.close();
  EXPECT_EQ(run("golden-check --golden " + path("perturbed.jsonl")), 5);
  EXPECT_NE(slurp(path("stdout.txt")).find("1 mismatches"), std::string::npos);
}

TEST_F(Cli, ExitCategories) {
  EXPECT_EQ(run("eval --outputs " + path("missing.txt") + " --report " + path("r.json")), 3);
  EXPECT_EQ(run("eval --no-such-flag"), 2);
  EXPECT_EQ(run(""), 2);
  std::ofstream(path("garbage.jsonl")) << "{not json\n";
  EXPECT_EQ(run("golden-check --golden " + path("garbage.jsonl")), 4);
  EXPECT_EQ(run("conf-decode --in " + path("garbage.jsonl") + " --out " + path("x.xyz")), 4);
  std::ofstream(path("cond_bad.txt")) << "TPSA=3\n";
  std::ofstream(path("one.txt")) << "CCO\n";
  EXPECT_EQ(run("eval --outputs " + path("one.txt") + " --report " + path("r.json")
                + " --property MolWt --conditions " + path("cond_bad.txt")),
            4);
}

TEST_F(Cli, CorpusIsDeterministicAndSeedOverridable) {
  const std::string base = "corpus --smiles " + path("mols.smi") + " --vocab-out " + path("vocab.txt");
  ASSERT_EQ(run(base + " --seed 3 --out " + path("c1.jsonl")), 0) << slurp(path("stderr.txt"));
  ASSERT_EQ(run(base + " --seed 3 --out " + path("c2.jsonl")), 0);
  ASSERT_EQ(run(base + " --seed 4 --out " + path("c3.jsonl")), 0);
  ASSERT_EQ(run(base + " --seed 4 --out " + path("c4.jsonl"), "METAMOL_SEED=3"), 0);
  const std::string c1 = slurp(path("c1.jsonl"));
  EXPECT_FALSE(c1.empty());
  EXPECT_EQ(c1, slurp(path("c2.jsonl")));
  EXPECT_NE(c1, slurp(path("c3.jsonl")));
  EXPECT_EQ(c1, slurp(path("c4.jsonl")));
  // A pair corpus trains with its vocabulary.
  EXPECT_EQ(run("train --corpus " + path("c1.jsonl") + " --vocab " + path("vocab.txt")
                + " --config tiny --steps 2 --batch 4 --out " + path("pairs.ckpt")),
            0)
    << slurp(path("stderr.txt"));
  EXPECT_EQ(run("train --corpus " + path("c1.jsonl") + " --config tiny --steps 2 --out " + path("p.ckpt")), 2);
}

TEST_F(Cli, TrainWritesLogAndResumes) {
  const std::string &ck = tiny_checkpoint();
  std::istringstream log(slurp(path("train_log.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("tokens_per_sec"));
    EXPECT_EQ(j["step"], ++n);
  }
  EXPECT_EQ(n, 5);
  EXPECT_EQ(run("train --corpus " + path("mols.smi") + " --resume " + ck + " --steps 7 --batch 4 --out "
                + path("resumed.ckpt")),
            0)
    << slurp(path("stderr.txt"));
  EXPECT_NE(slurp(path("stderr.txt")).find("resuming at step 5"), std::string::npos);
}

TEST_F(Cli, GreedyGenerationIsRepeatable) {
  const std::string &ck = tiny_checkpoint();
  const std::string args = "generate --checkpoint " + ck + " --condition MolWt=250 --condition "
                           + "'[GLM_prop_smi]' --num 3 --max-new-tokens 12 --mode greedy";
  ASSERT_EQ(run(args + " --out " + path("g1.txt") + " --details " + path("g1.jsonl")), 0)
    << slurp(path("stderr.txt"));
  ASSERT_EQ(run(args + " --out " + path("g2.txt")), 0);
  EXPECT_EQ(slurp(path("g1.txt")), slurp(path("g2.txt")));
  std::istringstream details(slurp(path("g1.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(details, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["truncated"].get<bool>() || j["hit_eos"].get<bool>());
    ++n;
  }
  EXPECT_EQ(n, 6);
  EXPECT_EQ(run("generate --checkpoint " + ck + " --condition Bogus=1 --out " + path("g3.txt")), 4);
  EXPECT_EQ(run("generate --checkpoint " + ck + " --temperature 0 --mode temperature --out " + path("g3.txt")), 2);
}

TEST_F(Cli, FinetunePredictEmbed) {
  const std::string &ck = tiny_checkpoint();
  std::ofstream data(path("reg.csv"));
  data << "smiles,value\n";
  const auto lines = metamol::test::sample_smiles();
  for (int i = 0; i < 8; ++i)
    data << lines[i] << ',' << i * 1.5 << '\n';
  data.close();
  ASSERT_EQ(run("finetune --checkpoint " + ck + " --data " + path("reg.csv") + " --steps 5 --out "
                + path("head.ckpt")),
            0)
    << slurp(path("stderr.txt"));
  ASSERT_EQ(run("predict --checkpoint " + path("head.ckpt") + " --smiles " + path("mols.smi")
                + " --out " + path("pred.tsv")),
            0);
  std::istringstream pred(slurp(path("pred.tsv")));
  std::string line;
  int n = 0;
  while (std::getline(pred, line)) {
    EXPECT_NE(line.find('\t'), std::string::npos);
    ++n;
  }
  EXPECT_EQ(n, 24);
  EXPECT_EQ(run("predict --checkpoint " + ck + " --smiles " + path("mols.smi") + " --out " + path("p.tsv")), 4);
  ASSERT_EQ(run("embed --checkpoint " + ck + " --smiles " + path("mols.smi") + " --out " + path("emb.jsonl")), 0);
  const auto first = nlohmann::json::parse(slurp(path("emb.jsonl")).substr(0, slurp(path("emb.jsonl")).find('\n')));
  EXPECT_EQ(first["shape"][1], 16);
  EXPECT_EQ(first["data"].size(), first["shape"][0].get<std::size_t>());
}

TEST_F(Cli, ConformerRoundTrip) {
  const std::string src = kData + "/conformers_sample.jsonl";
  ASSERT_EQ(run("conf-encode --in " + src + " --out " + path("internal.jsonl")), 0) << slurp(path("stderr.txt"));
  ASSERT_EQ(run("conf-decode --in " + path("internal.jsonl") + " --out " + path("back.jsonl")), 0);
  ASSERT_EQ(run("conf-decode --in " + path("internal.jsonl") + " --out " + path("back.xyz")), 0);
  std::ifstream a(src), b(path("back.jsonl")), x(path("back.xyz"));
  const auto orig = metamol::conf::read_conformer_jsonl(a);
  const auto back = metamol::conf::read_conformer_jsonl(b);
  const auto xyz = metamol::conf::read_xyz(x);
  ASSERT_EQ(orig.size(), back.size());
  ASSERT_EQ(orig.size(), xyz.size());
  for (std::size_t i = 0; i < orig.size(); ++i) {
    EXPECT_LT(metamol::conf::rmsd_aligned(orig[i].conformer, back[i].conformer), 1e-6);
    EXPECT_EQ(xyz[i].symbols.size(), orig[i].conformer.size());
    EXPECT_NE(xyz[i].symbols.front(), "X");
  }
  ASSERT_EQ(run("conf-encode --quantize --in " + src + " --out " + path("q.jsonl")), 0);
}

}  // namespace
