#pragma once

#include <string>

#include <json.hpp>

#include "jm/povm.hpp"
#include "jm/wmeasure.hpp"

namespace jm {

// measurement files hold either a dense effect list
//   {"dim": 2, "effects": [[[[re, im], ...], ...], ...]}
// or a bloch description
//   {"bloch": {"outcomes": 2, "bias": 0.1, "vector": [x, y, z]}}
//   {"bloch": {"outcomes": 3, "mu": 0.9, "phi": 0.5}}
//   {"bloch": {"outcomes": 3, "vectors": [[...], [...], [...]]}}
Povm povm_from_json(const nlohmann::json& j);
nlohmann::json povm_to_json(const Povm& p);

// states hold {"bloch_vector": [x, y, z]} or {"matrix": [[[re, im], ...], ...]}
DensityMatrix state_from_json(const nlohmann::json& j);

struct MeasuredStatistics {
  Eigen::VectorXd pa;
  Eigen::VectorXd pb;
  Eigen::MatrixXd pc;
};

// statistics hold {"pA": [...], "pB": [...], "pC": [[...], ...]}
MeasuredStatistics statistics_from_json(const nlohmann::json& j);

ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

// operator grid dump for inspection: row-major entries plus the negativity
nlohmann::json wmeasure_to_json(const WMeasure& w);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace jm
