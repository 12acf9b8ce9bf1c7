// Copyright 2026 The qecopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qecopt/channel.hpp"
#include "qecopt/design.hpp"
#include "qecopt/matrix.hpp"
#include "qecopt/numeric_policy.hpp"

namespace qecopt {

using json = nlohmann::json;

/// Matrices serialize as {"rows", "cols", "data"} with complex entries as
/// [re, im] pairs in row-major order.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json channel_to_json(const QuantumChannel& ch);
/// Shape validation only; callers decide on trace-preservation checks.
QuantumChannel channel_from_json(const json& j);

struct LoadedChannel {
  QuantumChannel channel;
  json provenance;  ///< optional block carried through from the file
};

/// Channel file format: schema_version, dims, Kraus matrices, provenance.
void save_channel(const QuantumChannel& ch, const json& provenance,
                  const std::string& path);
LoadedChannel load_channel(const std::string& path);

json policy_to_json(const NumericPolicy& p);
/// Partial overrides: unknown keys are rejected, missing keys keep their
/// current values.
NumericPolicy policy_from_json(const json& j, NumericPolicy base);

json design_result_to_json(const DesignResult& r);

/// FNV-1a 64-bit hash of a file's bytes, as a hex string. Used to embed
/// input provenance in result files.
std::string file_hash_hex(const std::string& path);

json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace qecopt
