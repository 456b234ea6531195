//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/eval/report.h"

#include <iomanip>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "metamol/chem/canonical.h"
#include "metamol/chem/smiles.h"
#include "metamol/desc/descriptors.h"

namespace metamol::eval {

double GenerationReport::valid_ratio() const {
  return n_total ? static_cast<double>(n_valid) / n_total : 0.0;
}

double GenerationReport::unique_ratio() const {
  return n_total ? static_cast<double>(n_unique) / n_total : 0.0;
}

GenerationReport eval_generation(const std::vector<std::string> &outputs, bool lipinski) {
  GenerationReport r;
  std::unordered_set<std::string> seen;
  if (lipinski)
    r.n_success = 0;
  for (const std::string &raw: outputs) {
    GenerationRecord rec;
    rec.raw = raw;
    chem::SmilesError err(chem::SmilesErrorKind::kEmpty, 0, "");
    std::optional<chem::MolGraph> g;
    try {
      g = chem::try_parse_smiles(raw, &err);
    } catch (const std::exception &e) {
      rec.error = e.what();
    }
    if (g) {
      try {
        for (const auto &p: desc::compute_all(*g))
          rec.properties.push_back(p.value);
        rec.canonical = chem::canonical_key(*g);
        rec.valid = true;
      } catch (const std::exception &e) {
        rec.error = e.what();
        rec.properties.clear();
      }
    } else if (rec.error.empty()) {
      rec.error = chem::to_string(err.kind());
    }
    ++r.n_total;
    if (rec.valid) {
      ++r.n_valid;
      rec.unique = seen.insert(rec.canonical).second;
      if (rec.unique) {
        ++r.n_unique;
        if (lipinski) {
          rec.lipinski = desc::lipinski_pass(*g);
          if (*rec.lipinski)
            ++*r.n_success;
        }
      }
    }
    r.records.push_back(std::move(rec));
  }
  return r;
}

ConditionReport condition_report(const GenerationReport &report, const std::string &property,
                                 const std::vector<double> &conditions) {
  if (conditions.size() != report.records.size())
    throw MetricError("one condition per output required");
  const auto &reg = desc::PropertyRegistry::instance();
  if (!reg.find(property))
    throw MetricError("unknown property '" + property + "'");
  const std::size_t idx = reg.index_of(property);
  ConditionReport c;
  c.property = property;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto &rec = report.records[i];
    if (!rec.valid)
      continue;
    c.conditions.push_back(conditions[i]);
    c.achieved.push_back(rec.properties[idx]);
  }
  c.pct_difference = pct_difference(c.achieved, c.conditions);
  if (c.conditions.size() >= 2) {
    c.pearson = pearsonr(c.conditions, c.achieved);
    try {
      c.fit = fit_degree_one(c.conditions, c.achieved);
    } catch (const MetricError &) {
    }
  }
  return c;
}

std::string report_json(const GenerationReport &r, const std::optional<ConditionReport> &c) {
  nlohmann::ordered_json j;
  j["n_total"] = r.n_total;
  j["n_valid"] = r.n_valid;
  j["n_unique"] = r.n_unique;
  if (r.n_success)
    j["n_success"] = *r.n_success;
  j["valid_ratio"] = r.valid_ratio();
  j["unique_ratio"] = r.unique_ratio();
  if (r.n_success)
    j["success_ratio"] = r.n_unique ? static_cast<double>(*r.n_success) / r.n_unique : 0.0;
  if (c) {
    nlohmann::ordered_json cj;
    cj["property"] = c->property;
    cj["points"] = c->conditions.size();
    if (c->pearson)
      cj["pearsonr"] = *c->pearson;
    else
      cj["pearsonr"] = nullptr;
    cj["pct_difference"] = c->pct_difference;
    if (c->fit) {
      cj["slope"] = c->fit->slope;
      cj["intercept"] = c->fit->intercept;
    } else {
      cj["slope"] = nullptr;
      cj["intercept"] = nullptr;
    }
    j["condition"] = cj;
  }
  auto &records = j["records"] = nlohmann::ordered_json::array();
  for (const auto &rec: r.records) {
    nlohmann::ordered_json rj;
    rj["raw"] = rec.raw;
    rj["valid"] = rec.valid;
    if (rec.valid) {
      rj["canonical"] = rec.canonical;
      rj["unique"] = rec.unique;
      if (rec.lipinski)
        rj["lipinski"] = *rec.lipinski;
      nlohmann::ordered_json props;
      const auto entries = desc::PropertyRegistry::instance().entries();
      for (std::size_t i = 0; i < rec.properties.size(); ++i)
        props[std::string(entries[i].name)] = rec.properties[i];
      rj["properties"] = props;
    } else {
      rj["error"] = rec.error;
    }
    records.push_back(rj);
  }
  return j.dump(2);
}

void write_plot_csv(std::ostream &out, const ConditionReport &c) {
  out << "condition,achieved\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.conditions.size(); ++i)
    out << c.conditions[i] << ',' << c.achieved[i] << '\n';
}

}  // namespace metamol::eval
