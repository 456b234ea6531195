//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/meta_sequence.h"

#include <algorithm>

#include "metamol/chem/smiles.h"
#include "metamol/lang/value_codec.h"

namespace metamol::lang {
namespace {

std::vector<int> slice(const std::vector<int> &v, TokenSpan span) {
  return { v.begin() + span.begin, v.begin() + span.end };
}

// Subject units are single tokens; object units alternate predicate, value.
std::vector<TokenSpan> region_units(const MetaSequence &seq, Direction region) {
  std::vector<TokenSpan> units;
  if (region == Direction::kSubject) {
    for (int i = seq.subject().begin; i < seq.subject().end; ++i)
      units.push_back({ i, i + 1 });
    return units;
  }
  for (std::size_t i = 0; i < seq.predicates.size(); ++i) {
    units.push_back(seq.predicates[i]);
    if (seq.values[i].size() > 0)
      units.push_back(seq.values[i]);
  }
  return units;
}

}  // namespace

std::vector<int> TrainingPair::stream() const {
  std::vector<int> out = source;
  out.insert(out.end(), target.begin(), target.end());
  out.push_back(kEos);
  return out;
}

std::vector<bool> TrainingPair::loss_mask() const {
  std::vector<bool> mask(source.size() + target.size() + 1, false);
  for (std::size_t i = source.size(); i < mask.size(); ++i)
    mask[i] = true;
  return mask;
}

MetaSequence build_meta_sequence(const Vocab &vocab, const std::vector<std::string> &smiles_tokens,
                                 const std::vector<Triple> &triples, int tag_id) {
  MetaSequence seq;
  seq.tokens.push_back(tag_id);
  for (const std::string &t: smiles_tokens)
    seq.tokens.push_back(vocab.id(t));
  seq.sep = static_cast<int>(seq.tokens.size());
  seq.tokens.push_back(kSep);
  for (const Triple &tr: triples) {
    const int p = static_cast<int>(seq.tokens.size());
    seq.tokens.push_back(vocab.id(tr.predicate));
    seq.predicates.push_back({ p, p + 1 });
    for (const std::string &t: tr.value)
      seq.tokens.push_back(vocab.id(t));
    seq.values.push_back({ p + 1, static_cast<int>(seq.tokens.size()) });
  }
  seq.tokens.push_back(kEos);
  return seq;
}

MetaSequence build_meta_sequence(const Vocab &vocab, std::string_view smiles,
                                 const std::vector<desc::PropertyValue> &properties,
                                 std::string_view tag) {
  std::vector<Triple> triples;
  for (const desc::PropertyValue &p: properties) {
    if (!desc::PropertyRegistry::instance().find(p.name))
      throw VocabError("unknown property " + p.name);
    triples.push_back({ p.name, encode_value(p.value) });
  }
  return build_meta_sequence(vocab, chem::tokenize_smiles(smiles), triples, vocab.id(tag));
}

TrainingPair apply_token_noise(const MetaSequence &seq, double rate, Direction region, Rng &rng) {
  if (!(rate > 0 && rate <= 1))
    throw NoiseError("mask rate must be in (0, 1]");
  std::vector<int> positions;
  if (region == Direction::kSubject) {
    for (int i = seq.subject().begin; i < seq.subject().end; ++i)
      positions.push_back(i);
  } else {
    for (const TokenSpan &v: seq.values) {
      for (int i = v.begin; i < v.end; ++i)
        positions.push_back(i);
    }
  }
  if (positions.empty())
    throw NoiseError("empty noise region");

  std::vector<bool> masked(positions.size());
  bool any = false;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    masked[i] = uniform01(rng) < rate;
    any = any || masked[i];
  }
  if (!any)
    masked[uniform_index(rng, positions.size())] = true;

  TrainingPair pair;
  pair.tag = seq.tag();
  pair.source = seq.tokens;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (masked[i]) {
      pair.target.push_back(seq.tokens[positions[i]]);
      pair.source[positions[i]] = kMask;
    }
  }
  return pair;
}

TrainingPair apply_sequence_noise(const MetaSequence &seq, Direction region) {
  TrainingPair pair;
  pair.tag = seq.tag();
  if (region == Direction::kSubject) {
    if (seq.subject().size() == 0)
      throw NoiseError("empty subject");
    pair.source = { seq.tag(), kSpan };
    pair.source.insert(pair.source.end(), seq.tokens.begin() + seq.sep, seq.tokens.end());
    pair.target = slice(seq.tokens, seq.subject());
    return pair;
  }
  if (seq.predicates.empty())
    throw NoiseError("no values to remove");
  pair.source.assign(seq.tokens.begin(), seq.tokens.begin() + seq.sep + 1);
  for (std::size_t i = 0; i < seq.predicates.size(); ++i) {
    pair.source.push_back(seq.tokens[seq.predicates[i].begin]);
    pair.source.push_back(kValue);
    if (i > 0)
      pair.target.push_back(kSep);
    const std::vector<int> v = slice(seq.tokens, seq.values[i]);
    pair.target.insert(pair.target.end(), v.begin(), v.end());
  }
  pair.source.push_back(kEos);
  return pair;
}

TrainingPair apply_order_noise(const MetaSequence &seq, Direction region, Rng &rng) {
  const TokenSpan span = region == Direction::kSubject ? seq.subject() : seq.object();
  if (span.size() < 2)
    throw NoiseError("region too short to shuffle");
  const std::vector<TokenSpan> units = region_units(seq, region);
  const std::vector<int> original = slice(seq.tokens, span);

  std::vector<int> shuffled;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<TokenSpan> order = units;
    shuffle(order, rng);
    shuffled.clear();
    for (const TokenSpan &u: order) {
      for (int i = u.begin; i < u.end; ++i)
        shuffled.push_back(seq.tokens[i]);
    }
    if (shuffled != original)
      break;
  }

  TrainingPair pair;
  pair.tag = seq.tag();
  pair.source = seq.tokens;
  std::copy(shuffled.begin(), shuffled.end(), pair.source.begin() + span.begin);
  pair.target = original;
  return pair;
}

std::vector<int> restore_sequence(const TrainingPair &pair, const TaskSpec &spec) {
  const std::vector<int> &src = pair.source;
  const auto sep = std::find(src.begin(), src.end(), static_cast<int>(kSep));
  if (src.empty() || src.back() != kEos || sep == src.end())
    throw NoiseError("source is not a meta sequence");
  const int sep_pos = static_cast<int>(sep - src.begin());
  std::vector<int> out;
  switch (spec.noise) {
  case Noise::kToken: {
    out = src;
    std::size_t next = 0;
    for (int &t: out) {
      if (t != kMask)
        continue;
      if (next == pair.target.size())
        throw NoiseError("more MASK tokens than targets");
      t = pair.target[next++];
    }
    if (next != pair.target.size())
      throw NoiseError("unused target tokens");
    return out;
  }
  case Noise::kSequence:
    if (spec.direction == Direction::kSubject) {
      if (src.size() < 3 || src[1] != kSpan || sep_pos != 2)
        throw NoiseError("expected tag, SPAN, SEP");
      out = { src[0] };
      out.insert(out.end(), pair.target.begin(), pair.target.end());
      out.insert(out.end(), src.begin() + 2, src.end());
      return out;
    } else {
      std::vector<std::vector<int>> values(1);
      for (int t: pair.target) {
        if (t == kSep)
          values.emplace_back();
        else
          values.back().push_back(t);
      }
      out.assign(src.begin(), src.begin() + sep_pos + 1);
      std::size_t next = 0;
      for (int i = sep_pos + 1; i + 1 < static_cast<int>(src.size()); ++i) {
        if (src[i] != kValue) {
          out.push_back(src[i]);
          continue;
        }
        if (next == values.size())
          throw NoiseError("fewer values than VALUE slots");
        out.insert(out.end(), values[next].begin(), values[next].end());
        ++next;
      }
      if (next != values.size())
        throw NoiseError("value count differs from VALUE slots");
      out.push_back(kEos);
      return out;
    }
  case Noise::kOrder: {
    const int begin = spec.direction == Direction::kSubject ? 1 : sep_pos + 1;
    const int end = spec.direction == Direction::kSubject ? sep_pos
                                                          : static_cast<int>(src.size()) - 1;
    if (end - begin != static_cast<int>(pair.target.size()))
      throw NoiseError("target length differs from the shuffled region");
    out = src;
    std::copy(pair.target.begin(), pair.target.end(), out.begin() + begin);
    return out;
  }
  }
  throw NoiseError("unknown noise kind");
}

TrainingPair apply_noise(const MetaSequence &seq, const TaskSpec &spec, double mask_rate,
                         Rng &rng) {
  switch (spec.noise) {
  case Noise::kToken:
    return apply_token_noise(seq, mask_rate, spec.direction, rng);
  case Noise::kSequence:
    return apply_sequence_noise(seq, spec.direction);
  case Noise::kOrder:
    return apply_order_noise(seq, spec.direction, rng);
  }
  throw NoiseError("unknown noise kind");
}

}  // namespace metamol::lang
