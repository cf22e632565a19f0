#pragma once

// Versioned JSON model checkpoints. Parameters are stored as doubles with
// round-trip-exact serialization, so load(save(state)) == state bitwise.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hmldm/errors.hpp"
#include "hmldm/model.hpp"

namespace hmldm {

inline constexpr int kCheckpointSchemaVersion = 1;

struct CheckpointMeta {
  int iterations = 0;
  int restarts = 1;
  std::uint64_t seed = 0;
  double final_ll = 0.0;
  double best_ll = 0.0;
};

namespace detail {

template <class Scalar>
nlohmann::json matrix_to_json(const MatrixX<Scalar>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index d = 0; d < m.cols(); ++d) row.push_back(static_cast<double>(m(i, d)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar>
nlohmann::json vector_to_json(const VectorX<Scalar>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(static_cast<double>(v(i)));
  return out;
}

inline MatrixX<double> matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  const auto cols = rows > 0 ? j.at(0).size() : 0;
  MatrixX<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw ParseError("ragged checkpoint matrix");
    for (std::size_t d = 0; d < cols; ++d)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = j.at(i).at(d).get<double>();
  }
  return m;
}

inline VectorX<double> vector_from_json(const nlohmann::json& j) {
  VectorX<double> v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

}  // namespace detail

template <class Scalar>
void save_checkpoint(const ModelState<Scalar>& state, const CheckpointMeta& meta,
                     std::ostream& out) {
  nlohmann::json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  j["kind"] = "hmldm_checkpoint";
  j["config"] = {{"dimension", state.config.dimension},
                 {"norm_power", state.config.norm_power},
                 {"delta", state.config.delta},
                 {"seed", state.config.seed}};
  j["bipartite"] = state.bipartite;
  j["logits"] = detail::matrix_to_json(state.logits);
  j["gamma"] = detail::vector_to_json(state.gamma);
  if (state.bipartite) {
    j["logits_cols"] = detail::matrix_to_json(state.logits_cols);
    j["gamma_cols"] = detail::vector_to_json(state.gamma_cols);
  }
  j["meta"] = {{"iterations", meta.iterations},
               {"restarts", meta.restarts},
               {"seed", meta.seed},
               {"final_ll", meta.final_ll},
               {"best_ll", meta.best_ll}};
  out << j.dump(2) << '\n';
}

struct Checkpoint {
  ModelState<double> state;
  CheckpointMeta meta;
};

inline Checkpoint load_checkpoint(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid checkpoint JSON: ") + e.what());
  }
  try {
    if (j.at("kind").get<std::string>() != "hmldm_checkpoint")
      throw ParseError("not an hmldm checkpoint");
    if (j.at("schema_version").get<int>() != kCheckpointSchemaVersion)
      throw ParseError("unsupported checkpoint schema version");
    Checkpoint cp;
    const auto& cfg = j.at("config");
    cp.state.config.dimension = cfg.at("dimension").get<int>();
    cp.state.config.norm_power = cfg.at("norm_power").get<int>();
    cp.state.config.delta = cfg.at("delta").get<double>();
    cp.state.config.seed = cfg.at("seed").get<std::uint64_t>();
    cp.state.bipartite = j.at("bipartite").get<bool>();
    cp.state.logits = detail::matrix_from_json(j.at("logits"));
    cp.state.gamma = detail::vector_from_json(j.at("gamma"));
    if (cp.state.bipartite) {
      cp.state.logits_cols = detail::matrix_from_json(j.at("logits_cols"));
      cp.state.gamma_cols = detail::vector_from_json(j.at("gamma_cols"));
    }
    const auto& meta = j.at("meta");
    cp.meta.iterations = meta.at("iterations").get<int>();
    cp.meta.restarts = meta.at("restarts").get<int>();
    cp.meta.seed = meta.at("seed").get<std::uint64_t>();
    cp.meta.final_ll = meta.at("final_ll").get<double>();
    cp.meta.best_ll = meta.at("best_ll").get<double>();
    cp.state.config.validate();
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace hmldm
