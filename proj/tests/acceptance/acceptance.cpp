//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//
// One PASS/FAIL line per acceptance criterion. Each check carries its own
// oracle and runtime budget; exit status is the number of failures.
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "metamol/chem/smiles.h"
#include "metamol/conf/conformer.h"
#include "metamol/desc/descriptors.h"
#include "metamol/eval/metrics.h"
#include "metamol/eval/report.h"
#include "metamol/lang/corpus.h"
#include "metamol/lang/meta_sequence.h"
#include "metamol/model/checkpoint.h"
#include "metamol/model/transformer.h"
#include "metamol/train/generate.h"
#include "metamol/train/trainer.h"

namespace {

using namespace metamol;
using Eigen::Vector3d;

const std::string kTestData = METAMOL_TEST_DATA_DIR;
const std::string kData = METAMOL_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::vector<std::string> lines_of(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) {
    if (!l.empty())
      out.push_back(l);
  }
  return out;
}

lang::Vocab vocab_from_tokens(const std::vector<std::string> &tokens) {
  std::ostringstream os;
  for (const auto &t: tokens)
    os << t << '\n';
  std::istringstream is(os.str());
  return lang::Vocab::load(is);
}

// ---------------------------------------------------------------- descriptors

Outcome descriptor_parity() {
  int checked = 0, records = 0;
  std::vector<std::string> bad;
  const std::set<std::string> integral { "HeavyAtomCount", "NAR", "NHA", "NHD", "NRB", "RingCount" };
  for (const std::string &line: lines_of(kTestData + "/golden/descriptors.jsonl")) {
    const auto j = nlohmann::json::parse(line);
    const std::string smiles = j["smiles"];
    const chem::MolGraph g = chem::parse_smiles(smiles);
    ++records;
    std::map<std::string, double> got;
    for (const auto &p: desc::compute_all(g))
      got[p.name] = p.value;
    for (const auto &[name, want_j]: j["properties"].items()) {
      const double want = want_j.get<double>();
      const double have = got.at(name);
      bool ok;
      if (integral.count(name))
        ok = have == want;
      else if (name == "Ipc")
        ok = std::fabs(have - want) <= 1e-6 * std::max(1.0, std::fabs(want));
      else if (name == "Kappa1" || name.rfind("Chi", 0) == 0)
        ok = std::fabs(have - want) <= 1e-3;
      else if (name == "MolWt" || name == "TPSA" || name == "MolLogP" || name == "MolMR")
        ok = std::fabs(have - want) <= 0.02;
      else
        ok = std::fabs(have - want) <= 1e-9;
      ++checked;
      if (!ok)
        bad.push_back(smiles + ":" + name);
    }
    ++checked;
    if (desc::ring_count(g) != j["ring_count"].get<int>())
      bad.push_back(smiles + ":ring_count");
    ++checked;
    if (desc::num_aromatic_rings(g) != j["aromatic_ring_count"].get<int>())
      bad.push_back(smiles + ":aromatic_ring_count");
  }
  Outcome o;
  o.pass = records == 200 && bad.empty();
  o.detail = std::to_string(records) + " molecules, " + std::to_string(checked) + " values, "
             + std::to_string(bad.size()) + " mismatches";
  if (!bad.empty())
    o.detail += " (first " + bad.front() + ")";
  return o;
}

// ---------------------------------------------------------------- conformers

conf::Conformer random_walk(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> step(1.0, 2.0);
  std::normal_distribution<double> gauss;
  conf::Conformer c;
  c.coords.push_back(Vector3d(gauss(rng), gauss(rng), gauss(rng)));
  while (static_cast<int>(c.size()) < n) {
    const Vector3d p = c.coords.back() + step(rng) * Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
    if (c.size() >= 2) {
      const Vector3d u = (c.coords[c.size() - 2] - c.coords.back()).normalized();
      if (u.cross((p - c.coords.back()).normalized()).norm() < 0.05)
        continue;
    }
    c.coords.push_back(p);
  }
  return c;
}

// Kabsch superposition, proper rotations only.
double kabsch_rmsd(const conf::Conformer &a, const conf::Conformer &b) {
  const int n = static_cast<int>(a.size());
  Eigen::Matrix3Xd pa(3, n), pb(3, n);
  for (int i = 0; i < n; ++i) {
    pa.col(i) = a.coords[i];
    pb.col(i) = b.coords[i];
  }
  const Vector3d ca = pa.rowwise().mean(), cb = pb.rowwise().mean();
  pa.colwise() -= ca;
  pb.colwise() -= cb;
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(pa * pb.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1 : 1;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  return std::sqrt((r * pa - pb).squaredNorm() / n);
}

double angle_gap(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360 - d);
}

Outcome conformer_codec() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> shift(-20, 20);
  double worst_rt = 0, worst_rigid = 0, worst_q = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 3 + static_cast<int>(rng() % 62);
    const conf::Conformer c = random_walk(rng, n);
    const conf::InternalConformer ic = conf::encode_conformer(c);
    worst_rt = std::max(worst_rt, kabsch_rmsd(conf::decode_conformer(ic), c));

    const Eigen::Matrix3d rot =
      Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng)).normalized().toRotationMatrix();
    const Vector3d t(shift(rng), shift(rng), shift(rng));
    conf::Conformer moved;
    for (const Vector3d &p: c.coords)
      moved.coords.push_back(rot * p + t);
    const conf::InternalConformer im = conf::encode_conformer(moved);
    for (std::size_t i = 0; i < ic.size(); ++i) {
      worst_rigid = std::max({ worst_rigid, std::fabs(im.records[i].d - ic.records[i].d),
                               std::fabs(im.records[i].alpha - ic.records[i].alpha),
                               angle_gap(im.records[i].beta, ic.records[i].beta) });
    }
  }
  for (int k = 0; k < 1000; ++k) {
    const conf::Conformer c = random_walk(rng, 10);
    const auto q = conf::quantize_internal(conf::encode_conformer(c));
    worst_q = std::max(worst_q, kabsch_rmsd(conf::decode_conformer(conf::dequantize_internal(q)), c));
  }
  Outcome o;
  o.pass = worst_rt < 1e-6 && worst_rigid <= 1e-9 && worst_q <= 0.05;
  o.detail = "round-trip rmsd " + fmt(worst_rt, 3) + ", rigid " + fmt(worst_rigid, 3) + ", quantized "
             + fmt(worst_q, 3);
  return o;
}

// ---------------------------------------------------------------- model

model::Params<double> tiny_model(std::uint64_t seed) {
  model::Params<double> p(model::preset("tiny"));
  p.init(seed);
  // Gains away from 1 so their gradients are not degenerate.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 0.05);
  for (double &v: p.data())
    v += g(rng);
  return p;
}

Outcome gradient_fidelity() {
  model::Params<double> p = tiny_model(31);
  const int vocab = p.config().vocab_size;
  std::mt19937_64 rng(31);
  std::vector<std::vector<int>> seqs(2);
  for (int n: { 11, 7 }) {
    auto &s = seqs[seqs[0].empty() ? 0 : 1];
    for (int i = 0; i < n; ++i)
      s.push_back(static_cast<int>(rng() % vocab));
  }
  const std::vector<std::vector<bool>> masks { { false, false, false, false, true, true, true, true, true, true, true },
                                               { false, false, true, true, true, true, true } };
  model::Params<double> grad(p.config());
  grad.set_zero();
  model::loss_and_grad<double>(p, seqs, masks, &grad);

  const double h = 1e-5;
  double worst = 0;
  std::string worst_block;
  for (const model::BlockInfo &b: p.blocks()) {
    double max_diff = 0, max_num = 0;
    for (std::size_t i = b.offset; i < b.offset + b.size(); ++i) {
      const double keep = p.data()[i];
      p.data()[i] = keep + h;
      const double up = model::loss_and_grad<double>(p, seqs, masks, nullptr).sum;
      p.data()[i] = keep - h;
      const double down = model::loss_and_grad<double>(p, seqs, masks, nullptr).sum;
      p.data()[i] = keep;
      const double numeric = (up - down) / (2 * h);
      max_diff = std::max(max_diff, std::fabs(numeric - grad.data()[i]));
      max_num = std::max(max_num, std::fabs(numeric));
    }
    if (max_num == 0)
      continue;
    const double rel = max_diff / max_num;
    if (rel >= worst) {
      worst = rel;
      worst_block = b.name;
    }
  }
  Outcome o;
  o.pass = vocab == 50 && p.config().layers == 2 && p.config().d_model == 16 && worst < 1e-4;
  o.detail = std::to_string(p.blocks().size()) + " blocks, " + std::to_string(p.size())
             + " parameters, worst relative error " + fmt(worst, 3) + " (" + worst_block + ")";
  return o;
}

struct SampleCorpus {
  std::vector<lang::Molecule> molecules;
  lang::Vocab vocab;
};

const SampleCorpus &sample_corpus() {
  static const SampleCorpus c = [] {
    lang::CorpusStats stats;
    auto mols = lang::load_molecules(kTestData + "/moses_sample.smi", kTestData + "/conformers_sample.jsonl", stats);
    std::vector<std::string> smiles;
    for (const auto &m: mols)
      smiles.push_back(m.smiles);
    return SampleCorpus { std::move(mols), lang::Vocab::from_smiles(smiles) };
  }();
  return c;
}

Outcome init_loss() {
  const SampleCorpus &c = sample_corpus();
  lang::CorpusStream stream(c.vocab, c.molecules, lang::TaskMix::uniform(true), 5);
  std::vector<std::vector<int>> seqs;
  std::vector<std::vector<bool>> masks;
  for (int i = 0; i < 64; ++i) {
    const auto p = stream.next(0);
    seqs.push_back(p->stream());
    masks.push_back(p->loss_mask());
  }
  Outcome o;
  o.pass = true;
  const double ln_v = std::log(static_cast<double>(c.vocab.size()));
  for (const char *name: { "tiny", "small" }) {
    model::ModelConfig cfg = model::preset(name);
    cfg.vocab_size = c.vocab.size();
    model::Params<double> p(cfg);
    p.init(5);
    const double per_token = model::loss_and_grad<double>(p, seqs, masks, nullptr).mean();
    const double ratio = per_token / ln_v;
    o.pass = o.pass && std::fabs(ratio - 1) <= 0.05;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + name + " " + fmt(per_token) + "/ln " + std::to_string(cfg.vocab_size)
                + " = " + fmt(ratio);
  }
  return o;
}

Outcome memorization() {
  const SampleCorpus &c = sample_corpus();
  std::vector<lang::Molecule> mols(c.molecules.begin(), c.molecules.begin() + 32);
  std::vector<std::string> smiles;
  for (const auto &m: mols)
    smiles.push_back(m.smiles);
  const lang::Vocab vocab = lang::Vocab::from_smiles(smiles);
  lang::CorpusStream stream(vocab, mols, lang::TaskMix::uniform(false), 7);
  std::vector<lang::TrainingPair> pairs;
  while (auto p = stream.next())
    pairs.push_back(*p);

  model::ModelConfig cfg = model::preset("tiny");
  cfg.vocab_size = vocab.size();
  auto state = train::TrainState<float>::init(cfg, 1);
  train::PairListSource source(pairs);
  train::TrainHyper h;
  h.lr = 1e-2;
  h.total_steps = 2000;
  h.batch_size = 32;
  train::TrainCallbacks cb;
  cb.on_step = [](std::int64_t, const train::StepResult &r) { return r.loss >= 0.1; };
  const auto losses = train::train(state, source, h, cb);

  // Independent re-evaluation of the final weights over all pairs.
  std::vector<std::vector<int>> seqs;
  std::vector<std::vector<bool>> masks;
  for (const auto &p: pairs) {
    seqs.push_back(p.stream());
    masks.push_back(p.loss_mask());
  }
  const double final_loss = model::loss_and_grad<double>(state.params.cast<double>(), seqs, masks, nullptr).mean();
  Outcome o;
  o.pass = pairs.size() == 32 && losses.size() <= 2000 && final_loss < 0.1;
  o.detail = std::to_string(pairs.size()) + " pairs, " + std::to_string(losses.size()) + " steps, per-token loss "
             + fmt(final_loss, 3);
  return o;
}

// ---------------------------------------------------------------- generation

// Decoding for the generation criterion, chosen on targets and seeds
// disjoint from the ones below: sampling for the unconditional runs, where
// uniqueness is measured, and greedy for the conditional runs.
train::DecodeParams unconditional_decoding() {
  train::DecodeParams dp;
  dp.mode = train::DecodeMode::kTopK;
  dp.top_k = 10;
  dp.temperature = 0.7;
  dp.max_new_tokens = 128;
  dp.eos_id = lang::kEos;
  return dp;
}

train::DecodeParams conditional_decoding() {
  train::DecodeParams dp;
  dp.mode = train::DecodeMode::kGreedy;
  dp.max_new_tokens = 128;
  dp.eos_id = lang::kEos;
  return dp;
}

std::string decode_text(const lang::Vocab &vocab, const std::vector<int> &ids) {
  std::string s;
  for (int id: ids)
    s += vocab.token(id);
  return s;
}

long double direct_pearson(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Outcome desk_generation(const std::string &checkpoint) {
  Outcome o;
  if (!std::filesystem::exists(checkpoint)) {
    o.detail = "checkpoint " + checkpoint + " not found";
    return o;
  }
  const model::Checkpoint ck = model::load_checkpoint(checkpoint);
  const lang::Vocab vocab = vocab_from_tokens(ck.vocab);
  const model::Params<float> params = ck.params<float>();

  std::vector<std::string> outputs;
  const std::vector<int> unconditional = lang::property_prompt(vocab, {});
  for (int i = 0; i < 1000; ++i) {
    Rng rng(mix_seed(1, static_cast<std::uint64_t>(i)));
    outputs.push_back(decode_text(vocab, train::generate(params, unconditional, unconditional_decoding(), rng).tokens));
  }
  std::size_t valid = 0;
  std::set<std::string> seen;
  for (const std::string &s: outputs) {
    const auto g = chem::try_parse_smiles(s);
    if (!g)
      continue;
    ++valid;
    seen.insert(chem::write_smiles(*g));
  }
  const double valid_ratio = valid / 1000.0;
  const double unique_ratio = valid ? static_cast<double>(seen.size()) / valid : 0.0;

  // MolWt targets spread over the middle 90% of the training distribution.
  std::vector<double> weights;
  for (const std::string &s: lines_of(kData + "/corpus/moses_small_50k.smi")) {
    if (weights.size() == 5000)
      break;
    if (const auto g = chem::try_parse_smiles(s))
      weights.push_back(desc::mol_wt(*g));
  }
  std::sort(weights.begin(), weights.end());
  const double lo = weights[weights.size() / 20], hi = weights[weights.size() * 19 / 20];
  std::vector<double> cond, achieved;
  const std::size_t issued = 200;
  for (std::size_t k = 0; k < issued; ++k) {
    const double target = std::round((lo + (hi - lo) * k / (issued - 1.0)) * 100) / 100;
    const std::vector<int> prompt = lang::property_prompt(vocab, { { "MolWt", target } });
    Rng rng(mix_seed(2, k));
    const std::string s = decode_text(vocab, train::generate(params, prompt, conditional_decoding(), rng).tokens);
    if (const auto g = chem::try_parse_smiles(s)) {
      cond.push_back(target);
      achieved.push_back(desc::mol_wt(*g));
    }
  }
  const double r = cond.size() >= 2 ? static_cast<double>(direct_pearson(cond, achieved)) : 0.0;
  o.pass = valid_ratio >= 0.8 && unique_ratio >= 0.9 && r >= 0.8;
  o.detail = "valid " + fmt(valid_ratio, 3) + ", unique " + fmt(unique_ratio, 3) + ", MolWt pearsonr "
             + fmt(r, 3) + " over " + std::to_string(cond.size()) + "/" + std::to_string(issued) + " valid";
  return o;
}

// ---------------------------------------------------------------- metrics

Outcome metric_oracles() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  const std::size_t n = 100000;
  std::vector<double> x(n), y(n), p(n), t(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 250 + 60 * g(rng);
    y[i] = 0.8 * x[i] + 25 * g(rng);
    t[i] = 10 * g(rng);
    p[i] = i % 97 == 0 ? 0.0 : t[i] + 3 * g(rng);
    if (i % 1013 == 0)
      t[i] = p[i] = 0;
  }
  const double r_lib = *eval::pearsonr(x, y);
  const double r_err = std::fabs(r_lib - static_cast<double>(direct_pearson(x, y)));

  long double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double den = std::fabs(static_cast<long double>(p[i])) + std::fabs(static_cast<long double>(t[i]));
    if (den > 0)
      acc += std::fabs(static_cast<long double>(p[i]) - t[i]) / den;
  }
  const double pct_err = std::fabs(eval::pct_difference(p, t) - static_cast<double>(acc / n));

  double fit_err = 0;
  for (int k = 0; k < 100; ++k) {
    const double slope = 4 * g(rng), icept = 100 * g(rng);
    std::vector<double> xs(50 + k), ys(50 + k);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = 100 + 300 * (i / static_cast<double>(xs.size())) + g(rng);
      ys[i] = slope * xs[i] + icept;
    }
    const eval::LineFit f = eval::fit_degree_one(xs, ys);
    fit_err = std::max({ fit_err, std::fabs(f.slope - slope), std::fabs(f.intercept - icept) / std::max(1.0, std::fabs(icept)) });
  }
  Outcome o;
  o.pass = r_err <= 1e-12 && pct_err <= 1e-12 && fit_err <= 1e-9;
  o.detail = "pearsonr err " + fmt(r_err, 3) + ", %diff err " + fmt(pct_err, 3) + ", slope err " + fmt(fit_err, 3);
  return o;
}

// ---------------------------------------------------------------- noise

std::map<int, int> content_tokens(const std::vector<int> &a, const std::vector<int> &b = {}) {
  std::map<int, int> m;
  for (const auto *v: { &a, &b }) {
    for (int t: *v) {
      if (t >= lang::kFirstTaskTag)
        ++m[t];
    }
  }
  return m;
}

Outcome noise_statistics() {
  const SampleCorpus &c = sample_corpus();
  Rng rng(11);
  // Mask rate on one long subject.
  const lang::MetaSequence long_seq =
    lang::build_meta_sequence(c.vocab, "CC(C)Cc1ccc(cc1)C(C)C(=O)O", {}, "[MLM_prop_smi]");
  double masked = 0, total = 0;
  for (int i = 0; i < 10000; ++i) {
    masked += static_cast<double>(lang::apply_token_noise(long_seq, 0.15, lang::Direction::kSubject, rng).target.size());
    total += long_seq.subject().size();
  }
  const double rate = masked / total;

  // Conservation for every property task on every sample molecule.
  std::size_t pairs = 0, broken = 0;
  for (const lang::Molecule &m: c.molecules) {
    std::vector<desc::PropertyValue> props;
    const auto &entries = desc::PropertyRegistry::instance().entries();
    for (std::size_t i = 0; i < entries.size(); i += 3)
      props.push_back({ std::string(entries[i].name), m.properties[i] });
    for (const lang::TaskSpec &spec: lang::all_tasks()) {
      if (spec.knowledge != lang::Knowledge::kProperty)
        continue;
      lang::MetaSequence seq;
      try {
        seq = lang::build_meta_sequence(c.vocab, m.smiles, props, spec.tag());
      } catch (const lang::VocabError &) {
        continue;
      }
      const lang::TrainingPair p = lang::apply_noise(seq, spec, 0.15, rng);
      ++pairs;
      // Masking moves tokens from source to target; reordering permutes the
      // source and repeats one region in the target.
      bool ok;
      if (spec.noise == lang::Noise::kOrder) {
        const lang::TokenSpan region = spec.direction == lang::Direction::kSubject ? seq.subject() : seq.object();
        const std::vector<int> original(seq.tokens.begin() + region.begin, seq.tokens.begin() + region.end);
        ok = content_tokens(p.source) == content_tokens(seq.tokens)
             && content_tokens(p.target) == content_tokens(original);
      } else {
        ok = content_tokens(p.source, p.target) == content_tokens(seq.tokens);
      }
      broken += ok ? 0 : 1;
    }
  }
  // Whole-corpus determinism.
  auto render = [&](std::uint64_t seed) {
    std::ostringstream os;
    lang::CorpusStream stream(c.vocab, c.molecules, lang::TaskMix::uniform(true), seed);
    while (auto p = stream.next(2))
      lang::write_record(os, c.vocab, *p);
    return os.str();
  };
  const std::string a = render(42), b = render(42);
  Outcome o;
  o.pass = std::fabs(rate - 0.15) <= 0.02 && broken == 0 && pairs > 0 && a == b && !a.empty();
  o.detail = "mask rate " + fmt(rate, 4) + ", " + std::to_string(broken) + "/" + std::to_string(pairs)
             + " pairs break conservation, corpus rerun " + (a == b ? "identical" : "differs") + " ("
             + std::to_string(a.size()) + " bytes)";
  return o;
}

// ---------------------------------------------------------------- report

Outcome report_ordering() {
  const SampleCorpus &c = sample_corpus();
  std::mt19937_64 rng(3);
  const std::string junk = "()[]=#@+-123456789%cnoCNOSFl/\\.";
  std::size_t trials = 0, violations = 0, malformed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> outputs;
    const int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      std::string s = c.molecules[rng() % 40].smiles;
      switch (rng() % 4) {
      case 0:
        break;
      case 1:
        s.insert(rng() % (s.size() + 1), 1, junk[rng() % junk.size()]);
        break;
      case 2:
        s.erase(rng() % s.size(), 1);
        break;
      default:
        s = s.substr(0, rng() % (s.size() + 1));
      }
      if (!chem::try_parse_smiles(s))
        ++malformed;
      outputs.push_back(s);
    }
    const eval::GenerationReport r = eval::eval_generation(outputs, true);
    ++trials;
    const bool ok = r.n_success && *r.n_success <= r.n_unique && r.n_unique <= r.n_valid && r.n_valid <= r.n_total
                    && r.n_total == outputs.size();
    violations += ok ? 0 : 1;
  }
  Outcome o;
  o.pass = violations == 0 && malformed > 0;
  o.detail = std::to_string(trials) + " reports, " + std::to_string(malformed) + " malformed outputs, "
             + std::to_string(violations) + " violations";
  return o;
}

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app("Acceptance checks");
  std::string checkpoint = kData + "/models/small_50k.ckpt";
  std::vector<std::string> only;
  app.add_option("--checkpoint", checkpoint, "Trained small-preset checkpoint for the generation check");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria {
    { "descriptor-parity", 5, descriptor_parity },
    { "conformer-codec", 30, conformer_codec },
    { "gradient-fidelity", 120, gradient_fidelity },
    { "init-loss", 10, init_loss },
    { "memorization", 600, memorization },
    { "desk-generation", 1800, [&] { return desk_generation(checkpoint); } },
    { "metric-oracles", 10, metric_oracles },
    { "noise-statistics", 30, noise_statistics },
    { "report-ordering", 10, report_ordering },
  };

  int failures = 0;
  for (const Criterion &c: criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over budget";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << std::left << std::setw(20) << c.name << o.detail << " ["
              << std::fixed << std::setprecision(1) << secs << " s / " << c.budget_s << " s]"
              << std::defaultfloat << std::endl;
  }
  return failures;
}
