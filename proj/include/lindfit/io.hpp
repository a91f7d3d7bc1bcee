// Copyright 2026 lindfit contributors
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

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "lindfit/tomosim.hpp"
#include "lindfit/types.hpp"

namespace lindfit::io {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kLibraryVersion = "0.1.0";

// Text matrix container: complex entries as [re, im] pairs; round-trips
// doubles exactly.
struct MatrixFile {
  std::string schema_version = kSchemaVersion;
  int dim = 0;
  std::string role;  // transfer | lindbladian | prep | meas | prob | gram
  CMat data;
  std::map<std::string, std::string> metadata;
};

nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

void write_matrix_file(const std::filesystem::path& path, const MatrixFile& mf);
MatrixFile read_matrix_file(const std::filesystem::path& path);

void write_bundle(const std::filesystem::path& path, const TomographyBundle& bundle);
TomographyBundle read_bundle(const std::filesystem::path& path);

// Every tunable that affects a run; serialized into reports so reruns are
// reproducible.
struct RunConfig {
  std::string fitter = "auto";  // convex | ap | auto
  double beta = -1.0;
  int m_max = 1;
  int depth = 8;
  int starts = 100;
  std::uint64_t shots = 10000;
  std::uint64_t gram_shots = 100000;
  double t = 50.0;
  double slack = 0.001;
  std::string order = "lindblad-first";
  int iterations = 3;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace lindfit::io
