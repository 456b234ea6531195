//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metamol/chem/mol_graph.h"
#include "metamol/conf/conformer.h"
#include "metamol/lang/meta_sequence.h"

namespace metamol::lang {

class SampleError: public std::runtime_error {
public:
  enum class Kind { kMissingConformer, kTooLong, kVocabMiss, kEmptyRegion };

  SampleError(Kind kind, const std::string &msg): std::runtime_error(msg), kind_(kind) { }
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct SampleOptions {
  int min_k = 1;
  int max_k = 10;
  double mask_rate = 0.15;
  // Limit on source + target + EOS.
  int max_len = 512;
  int ecfp_radius = 2;
  int fcfp_radius = 2;
  int path_length = 7;
};

struct Molecule {
  std::string smiles;
  chem::MolGraph graph;
  // Registry order.
  std::vector<double> properties;
  std::optional<conf::Conformer> conformer;
};

// Parses and computes the registry; throws SmilesError or DescriptorError.
Molecule make_molecule(std::string_view smiles);

/// One denoising example for `spec`. Properties draw k ~ U{min_k..max_k}
/// distinct registry entries in random order; fingerprints pick one kind
/// uniformly; conformers list every atom after the first with its
/// quantized record.
TrainingPair make_sample(const Vocab &vocab, const Molecule &mol, const TaskSpec &spec, Rng &rng,
                         const SampleOptions &options = {});

struct TaskMix {
  std::array<double, kTaskCount> weights {};

  // Uniform over all specs, or over the non-conformation ones.
  static TaskMix uniform(bool with_conformers);
  // "uniform", or comma-separated tag=weight pairs; missing tags get 0.
  static TaskMix parse(std::string_view text, bool with_conformers);
  void validate(bool with_conformers) const;
  int sample(Rng &rng) const;
};

struct CorpusStats {
  std::size_t lines = 0;
  std::size_t molecules = 0;
  std::size_t parse_failures = 0;
  std::size_t conformers = 0;
  std::size_t emitted = 0;
  std::size_t skipped_too_long = 0;
  std::size_t skipped_vocab = 0;
  std::size_t skipped_other = 0;
};

/// Reads the first field of each non-blank line. Conformers, when given,
/// are matched by SMILES text and must have one point per atom.
std::vector<Molecule> load_molecules(const std::string &smiles_path,
                                     const std::optional<std::string> &conformer_path,
                                     CorpusStats &stats);
std::vector<Molecule> load_molecules(std::istream &smiles, CorpusStats &stats);

/// Walks the molecules (reshuffled each epoch) drawing one task per
/// molecule. Deterministic for a given seed.
class CorpusStream {
public:
  CorpusStream(const Vocab &vocab, const std::vector<Molecule> &molecules, TaskMix mix,
               std::uint64_t seed, SampleOptions options = {}, bool shuffle = true);

  // nullopt once `epochs` passes are done; epochs == 0 never ends.
  std::optional<TrainingPair> next(int epochs = 1);

  const CorpusStats &stats() const { return stats_; }
  CorpusStats &stats() { return stats_; }

private:
  const Vocab &vocab_;
  const std::vector<Molecule> &molecules_;
  TaskMix mix_;
  Rng rng_;
  SampleOptions options_;
  bool shuffle_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  int epoch_ = 0;
  CorpusStats stats_;
};

/// {"task": tag, "source": [...], "target": [...]}
/// Source of a [GLM_prop_smi] pair for the given conditions, i.e. the
/// prompt for conditional generation. No conditions gives the
/// unconditional prompt. Throws VocabError on an unknown property.
std::vector<int> property_prompt(const Vocab &vocab,
                                 const std::vector<desc::PropertyValue> &conditions);

void write_record(std::ostream &out, const Vocab &vocab, const TrainingPair &pair);
std::string record_json(const Vocab &vocab, const TrainingPair &pair);
TrainingPair parse_record(const Vocab &vocab, std::string_view line);
std::vector<TrainingPair> read_records(std::istream &in, const Vocab &vocab);

}  // namespace metamol::lang
