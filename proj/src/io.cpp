#include "jm/io.hpp"

#include <fstream>

#include "jm/linalg.hpp"

namespace jm {

namespace {

using nlohmann::json;

double number_at(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ValidationError(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

Eigen::Vector3d vector3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError(std::string(what) + " must be an array of three numbers");
  }
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    v[k] = number_at(j[k], what);
  }
  return v;
}

Eigen::VectorXd distribution_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string(what) + " must be a non-empty array of numbers");
  }
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int k = 0; k < v.size(); ++k) {
    v[k] = number_at(j[k], what);
  }
  return v;
}

Povm povm_from_bloch_json(const json& b) {
  if (!b.contains("outcomes")) {
    throw ValidationError("bloch measurement needs an \"outcomes\" count");
  }
  const int outcomes = b.at("outcomes").get<int>();
  if (outcomes == 2) {
    const double bias = b.contains("bias") ? number_at(b.at("bias"), "bias") : 0.0;
    const Eigen::Vector3d vec = vector3_from_json(b.at("vector"), "vector");
    return dichotomic_from_spec(bias, vec);
  }
  if (outcomes == 3) {
    if (b.contains("vectors")) {
      const json& arr = b.at("vectors");
      if (!arr.is_array() || arr.size() != 3) {
        throw ValidationError("vectors must hold three bloch vectors");
      }
      std::array<Eigen::Vector3d, 3> vecs;
      for (int k = 0; k < 3; ++k) {
        vecs[static_cast<std::size_t>(k)] = vector3_from_json(arr[k], "vectors entry");
      }
      return to_povm(BlochPovmSpec::trichotomic(vecs));
    }
    const double mu = number_at(b.at("mu"), "mu");
    const double phi = number_at(b.at("phi"), "phi");
    return trichotomic_from_spec(mu, phi);
  }
  throw ValidationError("bloch measurements support 2 or 3 outcomes");
}

} // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError("matrix must be a non-empty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  ComplexMatrix m(rows, rows);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != rows) {
      throw ValidationError("matrix rows must all match the matrix dimension");
    }
    for (int c = 0; c < rows; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2) {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = std::complex<double>(number_at(cell[0], "matrix entry"),
                                     number_at(cell[1], "matrix entry"));
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Povm povm_from_json(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("measurement file must hold a JSON object");
  }
  if (j.contains("bloch")) {
    return povm_from_bloch_json(j.at("bloch"));
  }
  if (!j.contains("dim") || !j.contains("effects")) {
    throw ValidationError("measurement needs either a \"bloch\" block or \"dim\" plus \"effects\"");
  }
  const int dim = j.at("dim").get<int>();
  const json& arr = j.at("effects");
  if (!arr.is_array() || arr.empty()) {
    throw ValidationError("effects must be a non-empty array of matrices");
  }
  Povm p;
  p.dim = dim;
  for (const json& e : arr) {
    ComplexMatrix m = matrix_from_json(e);
    if (m.rows() != dim) {
      throw ValidationError("effect dimension does not match \"dim\"");
    }
    p.effects.push_back(std::move(m));
  }
  return p;
}

nlohmann::json povm_to_json(const Povm& p) {
  json effects = json::array();
  for (const ComplexMatrix& e : p.effects) {
    effects.push_back(matrix_to_json(e));
  }
  return json{{"dim", p.dim}, {"effects", std::move(effects)}};
}

nlohmann::json wmeasure_to_json(const WMeasure& w) {
  json grid = json::array();
  for (const ComplexMatrix& entry : w.grid) {
    grid.push_back(matrix_to_json(entry));
  }
  return json{{"d", w.d},
              {"dim", w.dim},
              {"negativity", negativity(w)},
              {"grid", std::move(grid)}};
}

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("state file must hold a JSON object");
  }
  if (j.contains("bloch_vector")) {
    return density_from_bloch(vector3_from_json(j.at("bloch_vector"), "bloch_vector"));
  }
  if (j.contains("matrix")) {
    return DensityMatrix{matrix_from_json(j.at("matrix"))};
  }
  throw ValidationError("state needs a \"bloch_vector\" or a \"matrix\"");
}

MeasuredStatistics statistics_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pA") || !j.contains("pB") || !j.contains("pC")) {
    throw ValidationError("statistics need \"pA\", \"pB\", and \"pC\"");
  }
  MeasuredStatistics s;
  s.pa = distribution_from_json(j.at("pA"), "pA");
  s.pb = distribution_from_json(j.at("pB"), "pB");
  const json& table = j.at("pC");
  if (!table.is_array() || static_cast<int>(table.size()) != s.pa.size()) {
    throw ValidationError("pC must hold one row per pA outcome");
  }
  s.pc.resize(s.pa.size(), s.pb.size());
  for (int r = 0; r < s.pc.rows(); ++r) {
    const json& row = table[r];
    if (!row.is_array() || static_cast<int>(row.size()) != s.pb.size()) {
      throw ValidationError("pC rows must hold one entry per pB outcome");
    }
    for (int c = 0; c < s.pc.cols(); ++c) {
      s.pc(r, c) = number_at(row[c], "pC entry");
    }
  }
  return s;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open " + path + " for writing");
  }
  out << content;
  if (!out) {
    throw ValidationError("failed to write " + path);
  }
}

} // namespace jm
