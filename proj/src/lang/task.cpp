//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "metamol/lang/task.h"

#include <stdexcept>

namespace metamol::lang {
namespace {

const char *noise_prefix(Noise n) {
  switch (n) {
  case Noise::kToken:
    return "MLM";
  case Noise::kSequence:
    return "GLM";
  case Noise::kOrder:
    return "PLM";
  }
  return "?";
}

const char *knowledge_infix(Knowledge k) {
  switch (k) {
  case Knowledge::kProperty:
    return "prop";
  case Knowledge::kFingerprint:
    return "fp";
  case Knowledge::kConformation:
    return "conf";
  }
  return "?";
}

}  // namespace

int TaskSpec::index() const {
  return static_cast<int>(knowledge) * 6 + static_cast<int>(noise) * 2
         + static_cast<int>(direction);
}

TaskSpec TaskSpec::from_index(int index) {
  if (index < 0 || index >= kTaskCount)
    throw std::out_of_range("task index " + std::to_string(index));
  return { static_cast<Knowledge>(index / 6), static_cast<Noise>(index / 2 % 3),
           static_cast<Direction>(index % 2) };
}

std::string TaskSpec::tag() const {
  return std::string("[") + noise_prefix(noise) + "_" + knowledge_infix(knowledge) + "_"
         + (direction == Direction::kSubject ? "smi" : "val") + "]";
}

std::optional<TaskSpec> TaskSpec::from_tag(std::string_view tag) {
  for (const TaskSpec &spec: all_tasks()) {
    if (spec.tag() == tag)
      return spec;
  }
  return std::nullopt;
}

const std::array<TaskSpec, kTaskCount> &all_tasks() {
  static const std::array<TaskSpec, kTaskCount> tasks = [] {
    std::array<TaskSpec, kTaskCount> out {};
    for (int i = 0; i < kTaskCount; ++i)
      out[i] = TaskSpec::from_index(i);
    return out;
  }();
  return tasks;
}

const char *to_string(Knowledge k) {
  switch (k) {
  case Knowledge::kProperty:
    return "property";
  case Knowledge::kFingerprint:
    return "fingerprint";
  case Knowledge::kConformation:
    return "conformation";
  }
  return "?";
}

const char *to_string(Noise n) {
  switch (n) {
  case Noise::kToken:
    return "token";
  case Noise::kSequence:
    return "sequence";
  case Noise::kOrder:
    return "order";
  }
  return "?";
}

const char *to_string(Direction d) {
  return d == Direction::kSubject ? "subject" : "object";
}

}  // namespace metamol::lang
