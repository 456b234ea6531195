//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/corpus.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metamol/chem/smiles.h"
#include "metamol/conf/conformer_io.h"
#include "metamol/fp/fingerprint.h"
#include "metamol/lang/value_codec.h"

namespace metamol::lang {
namespace {

using SK = SampleError::Kind;

std::vector<Triple> property_triples(const Molecule &mol, const SampleOptions &opt, Rng &rng) {
  const auto entries = desc::PropertyRegistry::instance().entries();
  const int n = static_cast<int>(entries.size());
  const int k = std::min(uniform_int(rng, opt.min_k, opt.max_k), n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first k slots are a random ordered subset.
  for (int i = 0; i < k; ++i)
    std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
  std::vector<Triple> out;
  for (int i = 0; i < k; ++i)
    out.push_back({ std::string(entries[idx[i]].name), encode_value(mol.properties[idx[i]]) });
  return out;
}

std::vector<Triple> fingerprint_triples(const Molecule &mol, const SampleOptions &opt, Rng &rng) {
  const auto kind = static_cast<fp::FingerprintKind>(uniform_index(rng, 3));
  const int param = kind == fp::FingerprintKind::kECFP   ? opt.ecfp_radius
                    : kind == fp::FingerprintKind::kFCFP ? opt.fcfp_radius
                                                         : opt.path_length;
  const fp::Fingerprint f = fp::compute_fingerprint(kind, mol.graph, param);
  Triple t { fp::to_string(kind), {} };
  for (int b = 0; b < fp::kFingerprintBits; ++b)
    t.value.emplace_back(f.bits[b] ? "1" : "0");
  return { t };
}

std::vector<Triple> conformer_triples(const Molecule &mol) {
  if (!mol.conformer)
    throw SampleError(SK::kMissingConformer, "no conformer for " + mol.smiles);
  if (static_cast<int>(mol.conformer->size()) != mol.graph.atom_count())
    throw SampleError(SK::kMissingConformer, "conformer size mismatch for " + mol.smiles);
  std::vector<std::string> atoms;
  for (const chem::SmilesToken &t: chem::lex_smiles(mol.smiles)) {
    if (t.kind == chem::SmilesTokenKind::kAtom || t.kind == chem::SmilesTokenKind::kBracketAtom)
      atoms.emplace_back(t.text);
  }
  const auto fields = conf::quantize_internal(conf::encode_conformer(*mol.conformer));
  std::vector<Triple> out;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    Triple t { atoms[i], {} };
    for (std::size_t f = 0; f < fields[i].size(); ++f) {
      if (f > 0)
        t.value.emplace_back(kFieldSeparator);
      for (char c: fields[i][f])
        t.value.emplace_back(1, c);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

Molecule make_molecule(std::string_view smiles) {
  Molecule m;
  m.smiles = std::string(smiles);
  m.graph = chem::parse_smiles(smiles);
  for (const desc::PropertyValue &p: desc::compute_all(m.graph)) {
    if (!std::isfinite(p.value))
      throw desc::DescriptorError("non-finite " + p.name + " for " + m.smiles);
    m.properties.push_back(p.value);
  }
  return m;
}

TrainingPair make_sample(const Vocab &vocab, const Molecule &mol, const TaskSpec &spec, Rng &rng,
                         const SampleOptions &options) {
  std::vector<Triple> triples;
  switch (spec.knowledge) {
  case Knowledge::kProperty:
    triples = property_triples(mol, options, rng);
    break;
  case Knowledge::kFingerprint:
    triples = fingerprint_triples(mol, options, rng);
    break;
  case Knowledge::kConformation:
    triples = conformer_triples(mol);
    break;
  }
  MetaSequence seq;
  try {
    seq = build_meta_sequence(vocab, chem::tokenize_smiles(mol.smiles), triples,
                              vocab.id(spec.tag()));
  } catch (const VocabError &e) {
    throw SampleError(SK::kVocabMiss, e.what());
  }
  TrainingPair pair;
  try {
    pair = apply_noise(seq, spec, options.mask_rate, rng);
  } catch (const NoiseError &e) {
    throw SampleError(SK::kEmptyRegion, e.what());
  }
  if (static_cast<int>(pair.source.size() + pair.target.size() + 1) > options.max_len)
    throw SampleError(SK::kTooLong, "sample longer than " + std::to_string(options.max_len));
  return pair;
}

TaskMix TaskMix::uniform(bool with_conformers) {
  TaskMix mix;
  int n = 0;
  for (const TaskSpec &s: all_tasks())
    n += with_conformers || s.knowledge != Knowledge::kConformation;
  for (const TaskSpec &s: all_tasks()) {
    if (with_conformers || s.knowledge != Knowledge::kConformation)
      mix.weights[s.index()] = 1.0 / n;
  }
  return mix;
}

TaskMix TaskMix::parse(std::string_view text, bool with_conformers) {
  if (text.empty() || text == "uniform")
    return uniform(with_conformers);
  TaskMix mix;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos)
      end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("task weight needs tag=weight: " + std::string(item));
    std::string tag(item.substr(0, eq));
    if (tag.empty() || tag.front() != '[')
      tag = "[" + tag + "]";
    const auto spec = TaskSpec::from_tag(tag);
    if (!spec)
      throw std::invalid_argument("unknown task tag " + tag);
    try {
      mix.weights[spec->index()] = std::stod(std::string(item.substr(eq + 1)));
    } catch (const std::exception &) {
      throw std::invalid_argument("bad weight in " + std::string(item));
    }
    pos = end + 1;
  }
  mix.validate(with_conformers);
  return mix;
}

void TaskMix::validate(bool with_conformers) const {
  double sum = 0;
  for (const TaskSpec &s: all_tasks()) {
    const double w = weights[s.index()];
    if (!(w >= 0) || !std::isfinite(w))
      throw std::invalid_argument("negative or non-finite weight for " + s.tag());
    if (w > 0 && !with_conformers && s.knowledge == Knowledge::kConformation)
      throw std::invalid_argument(s.tag() + " needs a conformer file");
    sum += w;
  }
  if (std::fabs(sum - 1) > 1e-6)
    throw std::invalid_argument("task weights must sum to 1");
}

int TaskMix::sample(Rng &rng) const {
  const double u = uniform01(rng);
  double acc = 0;
  int last = 0;
  for (int i = 0; i < kTaskCount; ++i) {
    if (weights[i] <= 0)
      continue;
    acc += weights[i];
    last = i;
    if (u < acc)
      return i;
  }
  return last;
}

std::vector<Molecule> load_molecules(std::istream &in, CorpusStats &stats) {
  std::vector<Molecule> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string smiles;
    if (!(fields >> smiles) || smiles[0] == '#')
      continue;
    ++stats.lines;
    try {
      out.push_back(make_molecule(smiles));
      ++stats.molecules;
    } catch (const std::exception &) {
      ++stats.parse_failures;
    }
  }
  return out;
}

std::vector<Molecule> load_molecules(const std::string &smiles_path,
                                     const std::optional<std::string> &conformer_path,
                                     CorpusStats &stats) {
  std::ifstream in(smiles_path);
  if (!in)
    throw std::runtime_error("cannot open " + smiles_path);
  std::vector<Molecule> mols = load_molecules(in, stats);
  if (!conformer_path)
    return mols;
  std::ifstream cin(*conformer_path);
  if (!cin)
    throw std::runtime_error("cannot open " + *conformer_path);
  std::map<std::string, conf::Conformer> by_smiles;
  for (conf::LabelledConformer &c: conf::read_conformer_jsonl(cin))
    by_smiles.emplace(c.smiles, std::move(c.conformer));
  for (Molecule &m: mols) {
    auto it = by_smiles.find(m.smiles);
    if (it != by_smiles.end() && static_cast<int>(it->second.size()) == m.graph.atom_count()) {
      m.conformer = it->second;
      ++stats.conformers;
    }
  }
  return mols;
}

CorpusStream::CorpusStream(const Vocab &vocab, const std::vector<Molecule> &molecules, TaskMix mix,
                           std::uint64_t seed, SampleOptions options, bool shuffle)
  : vocab_(vocab), molecules_(molecules), mix_(mix), rng_(seed), options_(options),
    shuffle_(shuffle), order_(molecules.size()) {
  std::iota(order_.begin(), order_.end(), 0);
  if (shuffle_)
    metamol::shuffle(order_, rng_);
}

std::optional<TrainingPair> CorpusStream::next(int epochs) {
  if (molecules_.empty())
    return std::nullopt;
  std::size_t failures = 0;
  while (true) {
    if (cursor_ == order_.size()) {
      ++epoch_;
      cursor_ = 0;
      if (epochs > 0 && epoch_ >= epochs)
        return std::nullopt;
      if (shuffle_)
        metamol::shuffle(order_, rng_);
    }
    if (epochs > 0 && epoch_ >= epochs)
      return std::nullopt;
    const Molecule &mol = molecules_[order_[cursor_++]];
    const TaskSpec spec = TaskSpec::from_index(mix_.sample(rng_));
    try {
      TrainingPair pair = make_sample(vocab_, mol, spec, rng_, options_);
      ++stats_.emitted;
      return pair;
    } catch (const SampleError &e) {
      switch (e.kind()) {
      case SK::kTooLong:
        ++stats_.skipped_too_long;
        break;
      case SK::kVocabMiss:
        ++stats_.skipped_vocab;
        break;
      default:
        ++stats_.skipped_other;
      }
    }
    if (++failures > 4 * molecules_.size() + 100)
      throw std::runtime_error("corpus stream cannot produce any sample");
  }
}

std::string record_json(const Vocab &vocab, const TrainingPair &pair) {
  nlohmann::ordered_json j;
  j["task"] = vocab.token(pair.tag);
  j["source"] = vocab.decode(pair.source);
  j["target"] = vocab.decode(pair.target);
  return j.dump();
}

std::vector<int> property_prompt(const Vocab &vocab,
                                 const std::vector<desc::PropertyValue> &conditions) {
  std::vector<Triple> triples;
  for (const desc::PropertyValue &c: conditions) {
    if (!desc::PropertyRegistry::instance().find(c.name))
      throw VocabError("unknown property '" + c.name + "'");
    triples.push_back({ c.name, encode_value(c.value) });
  }
  const TaskSpec spec { Knowledge::kProperty, Noise::kSequence, Direction::kSubject };
  // The subject is replaced by SPAN, so any placeholder SMILES works.
  const MetaSequence seq = build_meta_sequence(vocab, { "C" }, triples, vocab.id(spec.tag()));
  return apply_sequence_noise(seq, Direction::kSubject).source;
}

void write_record(std::ostream &out, const Vocab &vocab, const TrainingPair &pair) {
  out << record_json(vocab, pair) << '\n';
}

TrainingPair parse_record(const Vocab &vocab, std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("bad corpus record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("task") || !j.contains("source") || !j.contains("target"))
    throw std::runtime_error("corpus record needs task, source and target");
  TrainingPair pair;
  const std::string tag = j["task"].get<std::string>();
  if (!TaskSpec::from_tag(tag))
    throw std::runtime_error("unknown task tag " + tag);
  pair.tag = vocab.id(tag);
  pair.source = vocab.encode(j["source"].get<std::vector<std::string>>());
  pair.target = vocab.encode(j["target"].get<std::vector<std::string>>());
  if (pair.source.empty() || pair.source.front() != pair.tag)
    throw std::runtime_error("corpus record source must start with its task tag");
  return pair;
}

std::vector<TrainingPair> read_records(std::istream &in, const Vocab &vocab) {
  std::vector<TrainingPair> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty())
      out.push_back(parse_record(vocab, line));
  }
  return out;
}

}  // namespace metamol::lang
