//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_common.h"
#include "metamol/chem/smiles.h"
#include "metamol/conf/conformer.h"
#include "metamol/conf/conformer_io.h"
#include "metamol/desc/golden.h"
#include "metamol/eval/metrics.h"
#include "metamol/eval/report.h"
#include "metamol/fp/fingerprint.h"
#include "metamol/lang/corpus.h"
#include "metamol/lang/value_codec.h"

namespace metamol::cli {
namespace {

struct CorpusOptions {
  std::string smiles, conformers, out, vocab_in, vocab_out, mix = "uniform";
  int epochs = 1, min_k = 1, max_k = 10, max_len = 512;
  double mask_rate = 0.15;
  std::uint64_t seed = 1;
  bool no_shuffle = false;
};

int run_corpus(const CorpusOptions &o) {
  lang::CorpusStats stats;
  open_in(o.smiles);
  std::optional<std::string> conf;
  if (!o.conformers.empty()) {
    open_in(o.conformers);
    conf = o.conformers;
  }
  const std::vector<lang::Molecule> molecules = lang::load_molecules(o.smiles, conf, stats);
  std::vector<std::string> smiles;
  for (const auto &m: molecules)
    smiles.push_back(m.smiles);
  const lang::Vocab vocab =
    o.vocab_in.empty() ? lang::Vocab::from_smiles(smiles) : lang::Vocab::load_file(o.vocab_in);
  const bool with_conf = stats.conformers > 0;
  lang::TaskMix mix = lang::TaskMix::parse(o.mix, with_conf);
  mix.validate(with_conf);
  lang::SampleOptions so;
  so.min_k = o.min_k;
  so.max_k = o.max_k;
  so.mask_rate = o.mask_rate;
  so.max_len = o.max_len;
  lang::CorpusStream stream(vocab, molecules, mix, effective_seed(o.seed), so, !o.no_shuffle);
  stream.stats() = stats;
  std::ofstream out = open_out(o.out);
  while (auto pair = stream.next(o.epochs))
    lang::write_record(out, vocab, *pair);
  if (!o.vocab_out.empty()) {
    std::ofstream v = open_out(o.vocab_out);
    vocab.save(v);
  }
  const auto &s = stream.stats();
  std::cerr << "lines " << s.lines << ", molecules " << s.molecules << ", parse failures "
            << s.parse_failures << ", conformers " << s.conformers << ", emitted " << s.emitted
            << ", skipped too long " << s.skipped_too_long << ", vocab misses "
            << s.skipped_vocab << ", other skips " << s.skipped_other << '\n';
  return kOk;
}

struct EvalOptions {
  std::string outputs, report, plot, property, conditions;
  bool lipinski = false;
};

// A bare number, or a condition spec holding `property`.
double condition_value(const std::string &line, const std::string &property) {
  std::string s = line;
  if (const std::size_t close = s.find(']'); !s.empty() && s.front() == '[' && close != std::string::npos)
    s = s.substr(close + 1);
  std::stringstream ss(s);
  std::string item;
  std::vector<std::string> items;
  while (std::getline(ss, item, ','))
    items.push_back(item);
  auto strip = [](std::string t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  if (items.size() == 1 && items[0].find('=') == std::string::npos)
    return lang::parse_value(strip(items[0]));
  for (const auto &it: items) {
    const std::size_t eq = it.find('=');
    if (eq != std::string::npos && strip(it.substr(0, eq)) == property)
      return lang::parse_value(strip(it.substr(eq + 1)));
  }
  throw FormatError("no " + property + " value in condition '" + line + "'");
}

int run_eval(const EvalOptions &o) {
  const std::vector<std::string> outputs = read_lines(o.outputs);
  const eval::GenerationReport report = eval::eval_generation(outputs, o.lipinski);
  std::optional<eval::ConditionReport> cond;
  if (!o.property.empty()) {
    if (o.conditions.empty())
      throw CLI::ValidationError("--conditions", "required with --property");
    std::vector<double> values;
    for (const std::string &l: read_lines(o.conditions)) {
      if (!l.empty())
        values.push_back(condition_value(l, o.property));
    }
    // One condition line may stand for a block of samples.
    if (!values.empty() && outputs.size() % values.size() == 0 && values.size() != outputs.size()) {
      const std::size_t per = outputs.size() / values.size();
      std::vector<double> expanded;
      for (double v: values)
        expanded.insert(expanded.end(), per, v);
      values = std::move(expanded);
    }
    cond = eval::condition_report(report, o.property, values);
  }
  std::ofstream r = open_out(o.report);
  r << eval::report_json(report, cond) << '\n';
  if (!o.plot.empty()) {
    if (!cond)
      throw CLI::ValidationError("--plot", "needs --property and --conditions");
    std::ofstream p = open_out(o.plot);
    eval::write_plot_csv(p, *cond);
  }
  std::cerr << "total " << report.n_total << ", valid " << report.n_valid << ", unique "
            << report.n_unique;
  if (report.n_success)
    std::cerr << ", success " << *report.n_success;
  if (cond && cond->pearson)
    std::cerr << ", pearsonr " << *cond->pearson;
  std::cerr << '\n';
  return kOk;
}

}  // namespace

Runner add_corpus(CLI::App &root) {
  auto o = std::make_shared<CorpusOptions>();
  CLI::App *c = root.add_subcommand("corpus", "Write training pairs as JSON lines");
  c->add_option("--smiles", o->smiles, "One SMILES per line")->required();
  c->add_option("--conformers", o->conformers, "Conformer JSON lines matched by SMILES");
  c->add_option("--out", o->out, "Pair JSON-lines output")->required();
  c->add_option("--vocab", o->vocab_in, "Use this vocabulary instead of deriving one");
  c->add_option("--vocab-out", o->vocab_out, "Write the vocabulary here");
  c->add_option("--mix", o->mix, "Task mixture: uniform or tag=weight,...");
  c->add_option("--epochs", o->epochs, "Passes over the molecules")->check(CLI::PositiveNumber);
  c->add_option("--seed", o->seed, "Seed (METAMOL_SEED overrides)");
  c->add_option("--min-k", o->min_k, "Fewest properties per sample")->check(CLI::NonNegativeNumber);
  c->add_option("--max-k", o->max_k, "Most properties per sample")->check(CLI::NonNegativeNumber);
  c->add_option("--mask-rate", o->mask_rate, "Token noise rate")->check(CLI::Range(0.0, 1.0));
  c->add_option("--max-len", o->max_len, "Longest pair kept")->check(CLI::PositiveNumber);
  c->add_flag("--no-shuffle", o->no_shuffle, "Keep input order");
  return [o] { return run_corpus(*o); };
}

Runner add_eval(CLI::App &root) {
  auto o = std::make_shared<EvalOptions>();
  CLI::App *c = root.add_subcommand("eval", "Score generated SMILES");
  c->add_option("--outputs", o->outputs, "One generation per line")->required();
  c->add_option("--report", o->report, "Report JSON")->required();
  c->add_option("--plot", o->plot, "condition,achieved CSV");
  c->add_option("--property", o->property, "Property the generations were conditioned on");
  c->add_option("--conditions", o->conditions,
                "Condition per output (number or property=value spec); a shorter list is "
                "spread over equal blocks");
  c->add_flag("--lipinski", o->lipinski, "Count Lipinski successes");
  return [o] { return run_eval(*o); };
}

namespace {

struct ConfOptions {
  std::string in, out;
  bool quantize = false;
};

std::vector<conf::LabelledConformer> read_coordinates(const std::string &path) {
  std::ifstream in = open_in(path);
  try {
    return ends_with(path, ".xyz") ? conf::read_xyz(in) : conf::read_conformer_jsonl(in);
  } catch (const conf::ConformerError &) {
    throw;
  } catch (const std::exception &e) {
    throw FormatError(path + ": " + e.what());
  }
}

int run_conf_encode(const ConfOptions &o) {
  const auto items = read_coordinates(o.in);
  std::ofstream out = open_out(o.out);
  for (const auto &item: items) {
    conf::LabelledInternal li { item.smiles, conf::encode_conformer(item.conformer) };
    if (o.quantize)
      li.internal = conf::dequantize_internal(conf::quantize_internal(li.internal));
    conf::write_internal_jsonl(out, li);
  }
  std::cerr << "encoded " << items.size() << " conformers\n";
  return kOk;
}

std::vector<std::string> atom_symbols(const std::string &smiles, std::size_t n) {
  std::vector<std::string> out;
  if (!smiles.empty()) {
    if (auto g = chem::try_parse_smiles(smiles); g && static_cast<std::size_t>(g->atom_count()) == n) {
      for (int i = 0; i < g->atom_count(); ++i)
        out.emplace_back(g->atom(i).elem().symbol);
      return out;
    }
  }
  return std::vector<std::string>(n, "X");
}

int run_conf_decode(const ConfOptions &o) {
  std::ifstream in = open_in(o.in);
  std::vector<conf::LabelledInternal> items;
  try {
    items = conf::read_internal_jsonl(in);
  } catch (const conf::ConformerError &) {
    throw;
  } catch (const std::exception &e) {
    throw FormatError(o.in + ": " + e.what());
  }
  std::ofstream out = open_out(o.out);
  const bool xyz = ends_with(o.out, ".xyz");
  for (const auto &item: items) {
    conf::LabelledConformer lc;
    lc.smiles = item.smiles;
    lc.conformer = conf::decode_conformer(item.internal);
    lc.symbols = atom_symbols(item.smiles, lc.conformer.size());
    if (xyz)
      conf::write_xyz(out, lc);
    else
      conf::write_conformer_jsonl(out, lc);
  }
  std::cerr << "decoded " << items.size() << " conformers\n";
  return kOk;
}

}  // namespace

Runner add_conf_encode(CLI::App &root) {
  auto o = std::make_shared<ConfOptions>();
  CLI::App *c = root.add_subcommand("conf-encode", "Coordinates to internal coordinates");
  c->add_option("--in", o->in, "XYZ (.xyz) or conformer JSON lines")->required();
  c->add_option("--out", o->out, "Internal-coordinate JSON lines")->required();
  c->add_flag("--quantize", o->quantize, "Round to the sequence precision");
  return [o] { return run_conf_encode(*o); };
}

Runner add_conf_decode(CLI::App &root) {
  auto o = std::make_shared<ConfOptions>();
  CLI::App *c = root.add_subcommand("conf-decode", "Internal coordinates to coordinates");
  c->add_option("--in", o->in, "Internal-coordinate JSON lines")->required();
  c->add_option("--out", o->out, "XYZ (.xyz) or conformer JSON lines")->required();
  return [o] { return run_conf_decode(*o); };
}

namespace {

struct GoldenOptions {
  std::string golden, fingerprints, emit;
  double min_spearman = 0.8;
};

constexpr fp::FingerprintKind kKinds[] = { fp::FingerprintKind::kECFP, fp::FingerprintKind::kFCFP,
                                           fp::FingerprintKind::kPath };

int kind_parameter(fp::FingerprintKind k) {
  return k == fp::FingerprintKind::kPath ? 7 : 2;
}

double tanimoto_hex(const std::string &a, const std::string &b) {
  if (a.size() != b.size())
    throw FormatError("reference fingerprints differ in length");
  int both = 0, any = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int x = std::stoi(a.substr(k, 1), nullptr, 16);
    const int y = std::stoi(b.substr(k, 1), nullptr, 16);
    both += __builtin_popcount(x & y);
    any += __builtin_popcount(x | y);
  }
  return any ? static_cast<double>(both) / any : 1.0;
}

int run_golden_check(const GoldenOptions &o) {
  open_in(o.golden);
  std::vector<desc::GoldenRecord> records;
  try {
    records = desc::read_golden_file(o.golden);
  } catch (const std::exception &e) {
    throw FormatError(e.what());
  }
  bool ok = true;
  const desc::ParityReport parity = desc::check_descriptor_parity(records);
  std::cout << "descriptors: " << parity.records << " records, " << parity.values_checked
            << " values, " << parity.mismatches.size() << " mismatches\n";
  for (const auto &m: parity.mismatches)
    std::cout << "  " << m.smiles << ' ' << m.field << ": " << m.actual << " vs " << m.expected
              << '\n';
  ok = ok && parity.ok();

  std::vector<chem::MolGraph> graphs;
  for (const auto &r: records)
    graphs.push_back(chem::parse_smiles(r.smiles));
  for (fp::FingerprintKind kind: kKinds) {
    const std::string name = fp::to_string(kind);
    std::vector<fp::Fingerprint> ours;
    for (const auto &g: graphs)
      ours.push_back(fp::compute_fingerprint(kind, g, kind_parameter(kind)));
    std::vector<double> x, y;
    for (std::size_t i = 0; i < records.size(); ++i) {
      for (std::size_t j = i + 1; j < records.size(); ++j) {
        const auto a = records[i].fingerprints.find(name), b = records[j].fingerprints.find(name);
        if (a == records[i].fingerprints.end() || b == records[j].fingerprints.end())
          continue;
        x.push_back(fp::tanimoto(ours[i], ours[j]));
        y.push_back(tanimoto_hex(a->second, b->second));
      }
    }
    if (x.size() < 2) {
      std::cout << name << ": no reference fingerprints\n";
      ok = false;
      continue;
    }
    const auto rho = eval::spearman(x, y);
    const bool pass = rho && *rho >= o.min_spearman;
    std::cout << name << ": similarity rank correlation " << (rho ? *rho : 0.0) << " over "
              << x.size() << " pairs " << (pass ? "ok" : "FAIL") << '\n';
    ok = ok && pass;
  }

  if (!o.emit.empty()) {
    std::ofstream out = open_out(o.emit);
    for (std::size_t i = 0; i < records.size(); ++i) {
      nlohmann::ordered_json j;
      j["smiles"] = records[i].smiles;
      for (fp::FingerprintKind kind: kKinds)
        j[fp::to_string(kind)] = fp::compute_fingerprint(kind, graphs[i], kind_parameter(kind)).hex();
      out << j.dump() << '\n';
    }
  }
  if (!o.fingerprints.empty()) {
    int checked = 0, differ = 0;
    for (const std::string &line: read_lines(o.fingerprints)) {
      if (line.empty())
        continue;
      const auto j = nlohmann::json::parse(line);
      const chem::MolGraph g = chem::parse_smiles(j.at("smiles").get<std::string>());
      for (fp::FingerprintKind kind: kKinds) {
        const std::string name = fp::to_string(kind);
        if (!j.contains(name))
          continue;
        ++checked;
        if (fp::compute_fingerprint(kind, g, kind_parameter(kind)).hex() != j.at(name).get<std::string>()) {
          ++differ;
          std::cout << "  " << j.at("smiles").get<std::string>() << ' ' << name << " differs\n";
        }
      }
    }
    std::cout << "fingerprint regression: " << checked << " checked, " << differ << " differ\n";
    ok = ok && checked > 0 && differ == 0;
  }
  std::cout << (ok ? "golden-check: pass" : "golden-check: FAIL") << '\n';
  return ok ? kOk : kCheckFailed;
}

}  // namespace

Runner add_golden_check(CLI::App &root) {
  auto o = std::make_shared<GoldenOptions>();
  CLI::App *c = root.add_subcommand("golden-check", "Compare against reference files");
  c->add_option("--golden", o->golden, "Reference descriptor JSON lines")->required();
  c->add_option("--fingerprints", o->fingerprints, "Fingerprint regression JSON lines");
  c->add_option("--emit-fingerprints", o->emit, "Write our fingerprints for the golden SMILES");
  c->add_option("--min-spearman", o->min_spearman, "Similarity rank-correlation floor");
  return [o] { return run_golden_check(*o); };
}

}  // namespace metamol::cli
