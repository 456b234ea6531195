//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_common.h"
#include "metamol/chem/smiles.h"
#include "metamol/lang/corpus.h"
#include "metamol/lang/value_codec.h"
#include "metamol/model/checkpoint.h"
#include "metamol/model/config.h"
#include "metamol/model/transformer.h"
#include "metamol/train/finetune.h"
#include "metamol/train/generate.h"
#include "metamol/train/trainer.h"
#include "metamol/util/random.h"

namespace metamol::cli {
namespace {

model::ModelConfig config_from(const std::string &name) {
  for (const char *p: { "tiny", "small", "full" }) {
    if (name == p)
      return model::preset(name);
  }
  std::ifstream in = open_in(name);
  return model::parse_config(in);
}

lang::Vocab vocab_of(const model::Checkpoint &c) {
  std::ostringstream os;
  for (const auto &t: c.vocab)
    os << t << '\n';
  std::istringstream is(os.str());
  return lang::Vocab::load(is);
}

model::Checkpoint read_checkpoint_file(const std::string &path) {
  open_in(path);
  return model::load_checkpoint(path);
}

struct TrainOptions {
  std::string corpus, conformers, vocab, config = "small", out, log, resume, mix = "uniform";
  std::string precision = "float";
  int steps = 1000, batch = 16, warmup = -1, save_every = 0, min_k = 1, max_k = 10;
  double lr = 1e-3, clip = 1.0, mask_rate = 0.15;
  std::uint64_t seed = 1;
};

template <class T>
int run_train(const TrainOptions &o) {
  lang::CorpusStats stats;
  std::vector<lang::Molecule> molecules;
  std::vector<lang::TrainingPair> pairs;
  std::optional<lang::Vocab> vocab;
  std::optional<model::Checkpoint> resume;
  if (!o.resume.empty()) {
    resume = read_checkpoint_file(o.resume);
    vocab = vocab_of(*resume);
  } else if (!o.vocab.empty()) {
    vocab = lang::Vocab::load_file(o.vocab);
  }

  const bool pair_corpus = ends_with(o.corpus, ".jsonl");
  if (pair_corpus) {
    if (!vocab)
      throw CLI::ValidationError("--vocab", "required with a JSON-lines pair corpus");
    std::ifstream in = open_in(o.corpus);
    pairs = lang::read_records(in, *vocab);
    if (pairs.empty())
      throw FormatError("no training pairs in '" + o.corpus + "'");
  } else {
    open_in(o.corpus);
    std::optional<std::string> conf;
    if (!o.conformers.empty()) {
      open_in(o.conformers);
      conf = o.conformers;
    }
    molecules = lang::load_molecules(o.corpus, conf, stats);
    if (molecules.empty())
      throw FormatError("no parseable molecules in '" + o.corpus + "'");
    if (!vocab) {
      std::vector<std::string> smiles;
      for (const auto &m: molecules)
        smiles.push_back(m.smiles);
      vocab = lang::Vocab::from_smiles(smiles);
    }
    std::cerr << "molecules " << molecules.size() << " (parse failures " << stats.parse_failures
              << ", conformers " << stats.conformers << ")\n";
  }

  train::TrainHyper h;
  h.lr = o.lr;
  h.warmup_steps = o.warmup;
  h.total_steps = o.steps;
  h.clip_norm = o.clip;
  h.batch_size = o.batch;
  h.seed = effective_seed(o.seed);

  train::TrainState<T> state;
  if (resume) {
    state = train::TrainState<T>::from_checkpoint(*resume);
    std::cerr << "resuming at step " << state.step << '\n';
  } else {
    model::ModelConfig cfg = config_from(o.config);
    cfg.vocab_size = vocab->size();
    cfg.validate();
    state = train::TrainState<T>::init(cfg, h.seed);
  }
  const model::ModelConfig &cfg = state.params.config();
  if (cfg.vocab_size != vocab->size())
    throw FormatError("vocabulary size differs from the model");

  std::unique_ptr<train::BatchSource> source;
  if (pair_corpus) {
    for (const auto &p: pairs) {
      if (static_cast<int>(p.stream().size()) > cfg.max_len)
        throw FormatError("a corpus pair is longer than max_len");
    }
    source = std::make_unique<train::PairListSource>(pairs);
  } else {
    lang::SampleOptions so;
    so.min_k = o.min_k;
    so.max_k = o.max_k;
    so.mask_rate = o.mask_rate;
    so.max_len = cfg.max_len;
    const bool with_conf = stats.conformers > 0;
    lang::TaskMix mix = lang::TaskMix::parse(o.mix, with_conf);
    mix.validate(with_conf);
    source = std::make_unique<train::MoleculeSource>(*vocab, molecules, mix, so);
  }

  nlohmann::json train_meta;
  train_meta["lr"] = h.lr;
  train_meta["warmup"] = h.warmup();
  train_meta["total_steps"] = h.total_steps;
  train_meta["batch_size"] = h.batch_size;
  train_meta["clip"] = h.clip_norm;
  train_meta["mix"] = o.mix;
  train_meta["min_k"] = o.min_k;
  train_meta["max_k"] = o.max_k;
  train_meta["corpus"] = o.corpus;
  auto save = [&](const std::string &path) {
    model::Checkpoint c = state.to_checkpoint(vocab->tokens());
    nlohmann::json meta = nlohmann::json::parse(c.metadata);
    meta["train"] = train_meta;
    c.metadata = meta.dump();
    model::save_checkpoint(path, c);
  };

  std::ofstream log_file;
  train::TrainCallbacks cb;
  if (!o.log.empty()) {
    log_file.open(o.log, resume ? std::ios::app : std::ios::trunc);
    if (!log_file)
      throw IoError("cannot open '" + o.log + "' for writing");
    cb.log = &log_file;
  }
  cb.vocab = vocab->tokens();
  cb.snapshot_path = o.out + ".abort";
  cb.on_step = [&](std::int64_t step, const train::StepResult &r) {
    if (step % 100 == 0 || step == h.total_steps)
      std::cerr << "step " << step << " loss " << r.loss << " ema " << state.ema_loss << '\n';
    if (o.save_every > 0 && step % o.save_every == 0)
      save(o.out);
    return true;
  };
  train::train(state, *source, h, cb);
  save(o.out);
  std::cerr << "saved " << o.out << " at step " << state.step << '\n';
  return kOk;
}

}  // namespace

Runner add_train(CLI::App &root) {
  auto o = std::make_shared<TrainOptions>();
  CLI::App *c = root.add_subcommand("train", "Train a model on SMILES or a pair corpus");
  c->add_option("--corpus", o->corpus, "SMILES file, or training-pair JSON lines (.jsonl)")
    ->required();
  c->add_option("--conformers", o->conformers, "Conformer JSON lines matched by SMILES");
  c->add_option("--vocab", o->vocab, "Vocabulary file (derived from the SMILES when absent)");
  c->add_option("--config", o->config, "Preset name (tiny, small, full) or key=value file");
  c->add_option("--out", o->out, "Checkpoint to write")->required();
  c->add_option("--log", o->log, "JSON-lines training log");
  c->add_option("--resume", o->resume, "Continue from this checkpoint");
  c->add_option("--steps", o->steps, "Total optimizer steps")->check(CLI::PositiveNumber);
  c->add_option("--batch", o->batch, "Pairs per step")->check(CLI::PositiveNumber);
  c->add_option("--lr", o->lr, "Peak learning rate")->check(CLI::PositiveNumber);
  c->add_option("--warmup", o->warmup, "Warmup steps (default 1% of --steps)");
  c->add_option("--clip", o->clip, "Gradient norm limit");
  c->add_option("--seed", o->seed, "Seed (METAMOL_SEED overrides)");
  c->add_option("--mix", o->mix, "Task mixture: uniform or tag=weight,...");
  c->add_option("--min-k", o->min_k, "Fewest properties per property sample")->check(CLI::NonNegativeNumber);
  c->add_option("--max-k", o->max_k, "Most properties per property sample")->check(CLI::NonNegativeNumber);
  c->add_option("--mask-rate", o->mask_rate, "Token noise rate")->check(CLI::Range(0.0, 1.0));
  c->add_option("--save-every", o->save_every, "Checkpoint interval in steps");
  c->add_option("--precision", o->precision, "float or double")
    ->check(CLI::IsMember({ "float", "double" }));
  return [o] {
    if (o->min_k > o->max_k)
      throw CLI::ValidationError("--min-k", "larger than --max-k");
    return o->precision == "double" ? run_train<double>(*o) : run_train<float>(*o);
  };
}

namespace {

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
    ++i;
  return s.substr(i);
}

struct Prompt {
  std::string text;
  std::vector<int> tokens;
};

// "MolWt=300,TPSA=40", "[GLM_prop_smi]" or "[GLM_prop_smi] MolWt=300".
Prompt parse_condition(const lang::Vocab &vocab, const std::string &spec) {
  std::string rest = trim(spec);
  Prompt p { rest, {} };
  int tag = -1;
  // CLI11 strips brackets from vector option values.
  if (rest.rfind("GLM_", 0) == 0) {
    const std::size_t end = rest.find_first_of(" \t");
    rest = "[" + rest.substr(0, end) + "]" + (end == std::string::npos ? "" : rest.substr(end));
  }
  if (!rest.empty() && rest.front() == '[') {
    const std::size_t close = rest.find(']');
    if (close == std::string::npos)
      throw FormatError("unterminated task tag in '" + spec + "'");
    const auto t = lang::TaskSpec::from_tag(rest.substr(0, close + 1));
    if (!t || t->noise != lang::Noise::kSequence || t->direction != lang::Direction::kSubject)
      throw FormatError("'" + rest.substr(0, close + 1)
                        + "' is not a SMILES-generation task tag (GLM_*_smi)");
    if (t->knowledge != lang::Knowledge::kProperty)
      tag = vocab.id(t->tag());
    rest = trim(rest.substr(close + 1));
  }
  std::vector<desc::PropertyValue> conds;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw FormatError("condition '" + item + "' is not property=value");
    conds.push_back({ trim(item.substr(0, eq)), lang::parse_value(trim(item.substr(eq + 1))) });
  }
  if (tag >= 0) {
    if (!conds.empty())
      throw FormatError("property conditions need the [GLM_prop_smi] tag");
    p.tokens = { tag, lang::kSpan, lang::kSep, lang::kEos };
  } else {
    p.tokens = lang::property_prompt(vocab, conds);
  }
  return p;
}

std::string join_tokens(const lang::Vocab &vocab, const std::vector<int> &ids) {
  std::string s;
  for (int id: ids)
    s += vocab.token(id);
  return s;
}

struct GenerateOptions {
  std::string checkpoint, out, details, conditions_file, mode = "greedy";
  std::vector<std::string> conditions;
  int num = 1, top_k = 10, max_new_tokens = 256;
  double temperature = 1.0, penalty = 1.0;
  std::uint64_t seed = 1;
};

int run_generate(const GenerateOptions &o) {
  const model::Checkpoint ck = read_checkpoint_file(o.checkpoint);
  const lang::Vocab vocab = vocab_of(ck);
  const model::Params<float> params = ck.params<float>();
  train::DecodeParams dp;
  dp.mode = train::parse_decode_mode(o.mode);
  dp.top_k = o.top_k;
  dp.temperature = o.temperature;
  dp.repetition_penalty = o.penalty;
  dp.max_new_tokens = o.max_new_tokens;
  dp.eos_id = lang::kEos;
  if (!(dp.temperature > 0))
    throw CLI::ValidationError("--temperature", "must be positive");
  if (dp.repetition_penalty < 1)
    throw CLI::ValidationError("--repetition-penalty", "must be at least 1");

  std::vector<std::string> specs = o.conditions;
  if (!o.conditions_file.empty()) {
    for (const std::string &l: read_lines(o.conditions_file)) {
      if (!trim(l).empty())
        specs.push_back(l);
    }
  }
  if (specs.empty())
    specs.push_back("[GLM_prop_smi]");
  std::vector<Prompt> prompts;
  for (const auto &s: specs)
    prompts.push_back(parse_condition(vocab, s));

  const std::uint64_t seed = effective_seed(o.seed);
  std::ofstream out = open_out(o.out);
  std::ofstream details;
  if (!o.details.empty())
    details = open_out(o.details);
  std::size_t index = 0, truncated = 0;
  for (const Prompt &p: prompts) {
    for (int i = 0; i < o.num; ++i, ++index) {
      Rng rng(mix_seed(seed, index));
      const train::Generation g = train::generate(params, p.tokens, dp, rng);
      const std::string text = join_tokens(vocab, g.tokens);
      out << text << '\n';
      truncated += g.truncated ? 1 : 0;
      if (details) {
        nlohmann::ordered_json j;
        j["condition"] = p.text;
        j["output"] = text;
        j["tokens"] = vocab.decode(g.tokens);
        j["hit_eos"] = g.hit_eos;
        j["truncated"] = g.truncated;
        details << j.dump() << '\n';
      }
    }
  }
  std::cerr << "generated " << index << " (" << truncated << " truncated)\n";
  return kOk;
}

}  // namespace

Runner add_generate(CLI::App &root) {
  auto o = std::make_shared<GenerateOptions>();
  CLI::App *c = root.add_subcommand("generate", "Generate SMILES from conditions");
  c->add_option("--checkpoint", o->checkpoint, "Trained checkpoint")->required();
  c->add_option("--out", o->out, "Output file, one generation per line")->required();
  c->add_option("--details", o->details, "JSON-lines file with per-sample details");
  c->add_option("--condition", o->conditions,
                "property=value list or a GLM_*_smi task tag; repeatable");
  c->add_option("--conditions-file", o->conditions_file, "One condition spec per line");
  c->add_option("--num", o->num, "Samples per condition")->check(CLI::PositiveNumber);
  c->add_option("--mode", o->mode, "greedy, top-k or temperature")
    ->check(CLI::IsMember({ "greedy", "top-k", "temperature" }));
  c->add_option("--top-k", o->top_k, "k for top-k")->check(CLI::PositiveNumber);
  c->add_option("--temperature", o->temperature, "Sampling temperature");
  c->add_option("--repetition-penalty", o->penalty, "Penalty >= 1 on emitted tokens");
  c->add_option("--max-new-tokens", o->max_new_tokens, "Generation limit")
    ->check(CLI::PositiveNumber);
  c->add_option("--seed", o->seed, "Seed (METAMOL_SEED overrides)");
  return [o] { return run_generate(*o); };
}

namespace {

struct RegressionData {
  std::vector<std::string> smiles;
  std::vector<double> values;
};

// "smiles<TAB or comma>value" lines; a non-numeric first line is a header.
RegressionData read_regression(const std::string &path) {
  RegressionData d;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty())
      continue;
    const std::size_t sep = line.find_last_of("\t,");
    if (sep == std::string::npos)
      throw FormatError(path + ":" + std::to_string(i + 1) + ": expected smiles and value");
    try {
      std::size_t used = 0;
      const std::string v = trim(line.substr(sep + 1));
      const double y = std::stod(v, &used);
      if (used != v.size())
        throw std::invalid_argument(v);
      d.smiles.push_back(trim(line.substr(0, sep)));
      d.values.push_back(y);
    } catch (const std::exception &) {
      if (i == 0)
        continue;
      throw FormatError(path + ":" + std::to_string(i + 1) + ": bad value");
    }
  }
  if (d.smiles.empty())
    throw FormatError("no examples in '" + path + "'");
  return d;
}

struct FinetuneOptions {
  std::string checkpoint, data, out;
  int steps = 500, batch = 16;
  double lr = 1e-3;
  std::uint64_t seed = 1;
};

int run_finetune(const FinetuneOptions &o) {
  const model::Checkpoint ck = read_checkpoint_file(o.checkpoint);
  const lang::Vocab vocab = vocab_of(ck);
  const RegressionData data = read_regression(o.data);
  std::vector<train::RegressionExample> examples;
  for (std::size_t i = 0; i < data.smiles.size(); ++i)
    examples.push_back({ train::property_input(vocab, data.smiles[i]), data.values[i] });
  const std::uint64_t seed = effective_seed(o.seed);
  auto state = train::FineTuneState<float>::init(ck.params<float>(), examples, seed);
  train::TrainHyper h;
  h.lr = o.lr;
  h.total_steps = o.steps;
  for (int s = 0; s < o.steps; ++s) {
    std::vector<train::RegressionExample> batch;
    if (static_cast<std::size_t>(o.batch) >= examples.size()) {
      batch = examples;
    } else {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
      for (int i = 0; i < o.batch; ++i)
        batch.push_back(examples[uniform_index(rng, examples.size())]);
    }
    const double loss = train::finetune_step(state, batch, h);
    if ((s + 1) % 50 == 0 || s + 1 == o.steps)
      std::cerr << "step " << s + 1 << " mse(standardized) " << loss << '\n';
  }
  model::save_checkpoint(o.out, state.to_checkpoint(vocab.tokens()));
  return kOk;
}

struct PredictOptions {
  std::string checkpoint, smiles, out;
};

int run_predict(const PredictOptions &o) {
  const model::Checkpoint ck = read_checkpoint_file(o.checkpoint);
  const lang::Vocab vocab = vocab_of(ck);
  const auto state = train::FineTuneState<float>::from_checkpoint(ck);
  std::ofstream out = open_out(o.out);
  out << std::setprecision(10);
  std::size_t failed = 0;
  for (const std::string &line: read_lines(o.smiles)) {
    const std::string smi = trim(line);
    if (smi.empty())
      continue;
    try {
      out << smi << '\t' << state.predict(train::property_input(vocab, smi)) << '\n';
    } catch (const std::exception &e) {
      out << smi << "\tnan\n";
      ++failed;
    }
  }
  if (failed)
    std::cerr << failed << " inputs could not be encoded\n";
  return kOk;
}

struct EmbedOptions {
  std::string checkpoint, smiles, out;
  bool pooled = false;
};

int run_embed(const EmbedOptions &o) {
  const model::Checkpoint ck = read_checkpoint_file(o.checkpoint);
  const lang::Vocab vocab = vocab_of(ck);
  const auto params = ck.params<float>();
  std::ofstream out = open_out(o.out);
  for (const std::string &line: read_lines(o.smiles)) {
    const std::string smi = trim(line);
    if (smi.empty())
      continue;
    const std::vector<int> tokens = train::property_input(vocab, smi);
    const model::Mat<float> h = train::embed_sequence(params, tokens);
    nlohmann::ordered_json j;
    j["smiles"] = smi;
    if (o.pooled) {
      const auto f = train::pool_features<float>(h, tokens);
      j["shape"] = { 1, f.size() };
      j["data"] = std::vector<float>(f.data(), f.data() + f.size());
    } else {
      j["tokens"] = vocab.decode(tokens);
      j["shape"] = { h.rows(), h.cols() };
      auto rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < h.rows(); ++r)
        rows.push_back(std::vector<float>(h.row(r).data(), h.row(r).data() + h.cols()));
      j["data"] = rows;
    }
    out << j.dump() << '\n';
  }
  return kOk;
}

}  // namespace

Runner add_finetune(CLI::App &root) {
  auto o = std::make_shared<FinetuneOptions>();
  CLI::App *c = root.add_subcommand("finetune", "Fit a regression head on (SMILES, value) pairs");
  c->add_option("--checkpoint", o->checkpoint, "Pre-trained checkpoint")->required();
  c->add_option("--data", o->data, "smiles,value lines (TSV or CSV)")->required();
  c->add_option("--out", o->out, "Checkpoint with head")->required();
  c->add_option("--steps", o->steps, "Optimizer steps")->check(CLI::PositiveNumber);
  c->add_option("--batch", o->batch, "Examples per step")->check(CLI::PositiveNumber);
  c->add_option("--lr", o->lr, "Learning rate")->check(CLI::PositiveNumber);
  c->add_option("--seed", o->seed, "Seed (METAMOL_SEED overrides)");
  return [o] { return run_finetune(*o); };
}

Runner add_predict(CLI::App &root) {
  auto o = std::make_shared<PredictOptions>();
  CLI::App *c = root.add_subcommand("predict", "Predict a property with a fine-tuned head");
  c->add_option("--checkpoint", o->checkpoint, "Checkpoint written by finetune")->required();
  c->add_option("--smiles", o->smiles, "One SMILES per line")->required();
  c->add_option("--out", o->out, "smiles<TAB>prediction lines")->required();
  return [o] { return run_predict(*o); };
}

Runner add_embed(CLI::App &root) {
  auto o = std::make_shared<EmbedOptions>();
  CLI::App *c = root.add_subcommand("embed", "Export final hidden states");
  c->add_option("--checkpoint", o->checkpoint, "Checkpoint")->required();
  c->add_option("--smiles", o->smiles, "One SMILES per line")->required();
  c->add_option("--out", o->out, "JSON lines {smiles, shape, data}")->required();
  c->add_flag("--pooled", o->pooled, "Write the max|mean pooled vector instead");
  return [o] { return run_embed(*o); };
}

}  // namespace metamol::cli
