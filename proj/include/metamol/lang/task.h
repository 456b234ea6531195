//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace metamol::lang {

enum class Knowledge { kProperty, kFingerprint, kConformation };
enum class Noise { kToken, kSequence, kOrder };
// Which side of the triple is corrupted: the SMILES or the values.
enum class Direction { kSubject, kObject };

struct TaskSpec {
  Knowledge knowledge;
  Noise noise;
  Direction direction;

  // 0..17, knowledge-major.
  int index() const;
  static TaskSpec from_index(int index);

  // e.g. "[GLM_prop_smi]": MLM/GLM/PLM for token/sequence/order noise,
  // prop/fp/conf, smi/val for the corrupted side.
  std::string tag() const;
  static std::optional<TaskSpec> from_tag(std::string_view tag);

  bool operator==(const TaskSpec &) const = default;
};

inline constexpr int kTaskCount = 18;

const std::array<TaskSpec, kTaskCount> &all_tasks();

const char *to_string(Knowledge k);
const char *to_string(Noise n);
const char *to_string(Direction d);

}  // namespace metamol::lang
