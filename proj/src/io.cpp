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

#include "lindfit/io.hpp"

#include <fstream>

namespace lindfit::io {

using nlohmann::json;

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix_from_json: expected array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  CMat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw ParseError("matrix_from_json: ragged rows");
    for (size_t k = 0; k < cols; ++k) {
      const auto& e = j.at(i).at(k);
      if (!e.is_array() || e.size() != 2)
        throw ParseError("matrix_from_json: entry is not an [re, im] pair");
      m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  out << j.dump(1) << "\n";
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("JSON parse error in " + path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path, const MatrixFile& mf) {
  const int side = mf.dim * mf.dim;
  if (mf.data.rows() != side || mf.data.cols() != side)
    throw ParseError("write_matrix_file: data shape does not match dim");
  json j;
  j["schema_version"] = mf.schema_version;
  j["dim"] = mf.dim;
  j["role"] = mf.role;
  j["data"] = matrix_to_json(mf.data);
  j["metadata"] = mf.metadata;
  write_json(path, j);
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  const json j = read_json(path);
  MatrixFile mf;
  try {
    mf.schema_version = j.at("schema_version").get<std::string>();
    mf.dim = j.at("dim").get<int>();
    mf.role = j.at("role").get<std::string>();
    mf.data = matrix_from_json(j.at("data"));
    if (j.contains("metadata"))
      mf.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ParseError("malformed matrix file " + path.string() + ": " + e.what());
  }
  const int side = mf.dim * mf.dim;
  if (mf.data.rows() != side || mf.data.cols() != side)
    throw ParseError("matrix file " + path.string() + ": data shape does not match dim");
  return mf;
}

namespace {

json shots_to_json(std::uint64_t shots) {
  if (shots == kInfiniteShots) return nullptr;
  return shots;
}

std::uint64_t shots_from_json(const json& j) {
  if (j.is_null()) return kInfiniteShots;
  return j.get<std::uint64_t>();
}

}  // namespace

void write_bundle(const std::filesystem::path& path, const TomographyBundle& bundle) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["dim"] = bundle.dim;
  j["shots_per_setting"] = shots_to_json(bundle.shots_per_setting);
  j["gram_shots"] = shots_to_json(bundle.gram_shots);
  j["seed"] = bundle.seed;
  j["gram"] = matrix_to_json(bundle.gram);
  json gates = json::array();
  for (size_t i = 0; i < bundle.probs.size(); ++i) {
    json g;
    g["label"] = bundle.gate_labels[i];
    g["prob"] = matrix_to_json(bundle.probs[i].cast<Complex>());
    gates.push_back(std::move(g));
  }
  j["gates"] = std::move(gates);
  if (bundle.truth) {
    json t;
    t["a_star"] = matrix_to_json(bundle.truth->a_star);
    t["b_star"] = matrix_to_json(bundle.truth->b_star);
    json es = json::array();
    for (const auto& e : bundle.truth->e_star) es.push_back(matrix_to_json(e));
    t["e_star"] = std::move(es);
    json lsj = json::array();
    for (const auto& l : bundle.truth->l_star) lsj.push_back(matrix_to_json(l));
    t["l_star"] = std::move(lsj);
    j["truth"] = std::move(t);
  }
  write_json(path, j);
}

TomographyBundle read_bundle(const std::filesystem::path& path) {
  const json j = read_json(path);
  TomographyBundle bundle;
  try {
    bundle.dim = j.at("dim").get<int>();
    bundle.shots_per_setting = shots_from_json(j.at("shots_per_setting"));
    bundle.gram_shots = shots_from_json(j.at("gram_shots"));
    bundle.seed = j.at("seed").get<std::uint64_t>();
    bundle.gram = matrix_from_json(j.at("gram"));
    for (const auto& g : j.at("gates")) {
      bundle.gate_labels.push_back(g.at("label").get<std::string>());
      bundle.probs.push_back(matrix_from_json(g.at("prob")).real());
    }
    if (j.contains("truth")) {
      TomographyBundle::Truth t;
      t.a_star = matrix_from_json(j["truth"].at("a_star"));
      t.b_star = matrix_from_json(j["truth"].at("b_star"));
      for (const auto& e : j["truth"].at("e_star")) t.e_star.push_back(matrix_from_json(e));
      for (const auto& l : j["truth"].at("l_star")) t.l_star.push_back(matrix_from_json(l));
      bundle.truth = std::move(t);
    }
  } catch (const json::exception& e) {
    throw ParseError("malformed bundle " + path.string() + ": " + e.what());
  }
  return bundle;
}

json to_json(const RunConfig& c) {
  json j;
  j["fitter"] = c.fitter;
  j["beta"] = c.beta;
  j["m_max"] = c.m_max;
  j["depth"] = c.depth;
  j["starts"] = c.starts;
  j["shots"] = shots_to_json(c.shots);
  j["gram_shots"] = shots_to_json(c.gram_shots);
  j["t"] = c.t;
  j["slack"] = c.slack;
  j["order"] = c.order;
  j["iterations"] = c.iterations;
  j["seed"] = c.seed;
  j["library_version"] = kLibraryVersion;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.fitter = j.value("fitter", c.fitter);
  c.beta = j.value("beta", c.beta);
  c.m_max = j.value("m_max", c.m_max);
  c.depth = j.value("depth", c.depth);
  c.starts = j.value("starts", c.starts);
  if (j.contains("shots")) c.shots = shots_from_json(j["shots"]);
  if (j.contains("gram_shots")) c.gram_shots = shots_from_json(j["gram_shots"]);
  c.t = j.value("t", c.t);
  c.slack = j.value("slack", c.slack);
  c.order = j.value("order", c.order);
  c.iterations = j.value("iterations", c.iterations);
  c.seed = j.value("seed", c.seed);
  return c;
}

}  // namespace lindfit::io
