#include "detpp/json_io.hpp"

#include <fstream>

namespace detpp {

json complex_to_json(cd v) {
  if (v.imag() == 0.0) return v.real();
  return json{{"re", v.real()}, {"im", v.imag()}};
}

cd complex_from_json(const json& j) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_object())
    return cd(j.value("re", 0.0), j.value("im", 0.0));
  throw Error("MalformedInput", "complex entry must be a number or {re,im}",
              2);
}

RVec rvec_from_json(const json& j) {
  if (!j.is_array())
    throw Error("MalformedInput", "expected a numeric array", 2);
  RVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw Error("MalformedInput", "expected a numeric array", 2);
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

RMat rmat_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error("MalformedInput", "expected a nonempty matrix", 2);
  const std::size_t cols = j[0].size();
  RMat m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error("MalformedInput", "ragged matrix rows", 2);
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<int>(i), static_cast<int>(c)) = j[i][c].get<double>();
  }
  return m;
}

CMat cmat_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error("MalformedInput", "expected a nonempty matrix", 2);
  const std::size_t cols = j[0].size();
  CMat m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error("MalformedInput", "ragged matrix rows", 2);
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<int>(i), static_cast<int>(c)) = complex_from_json(j[i][c]);
  }
  return m;
}

json cmat_to_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(i, c)));
    rows.push_back(row);
  }
  return rows;
}

GroundSet ground_from_json(const json& j) {
  if (!j.contains("points") || !j["points"].is_array())
    throw Error("MalformedInput", "missing points array", 2);
  std::vector<std::string> labels;
  for (const auto& p : j["points"]) {
    if (p.is_string())
      labels.push_back(p.get<std::string>());
    else if (p.is_number())
      labels.push_back(p.dump());
    else
      throw Error("MalformedInput", "points must be strings or numbers", 2);
  }
  GroundSet gs;
  if (j.contains("mu")) {
    gs = GroundSet(labels, rvec_from_json(j["mu"]));
  } else {
    gs = GroundSet(labels);
  }
  return gs;
}

json kernel_to_json(const KernelMatrix& k) {
  json out;
  out["detpp_schema"] = kSchemaVersion;
  out["points"] = k.gs.labels;
  out["mu"] = std::vector<double>(k.gs.mu.data(), k.gs.mu.data() + k.gs.size());
  out["kernel"] = cmat_to_json(k.k);
  return out;
}

KernelMatrix kernel_from_json(const json& j) {
  check_schema(j);
  GroundSet gs = ground_from_json(j);
  if (!j.contains("kernel"))
    throw Error("MalformedInput", "missing kernel entry matrix", 2);
  CMat m = cmat_from_json(j["kernel"]);
  if (m.rows() != gs.size() || m.cols() != gs.size())
    throw Error("DimensionMismatch", "kernel shape does not match points", 2);
  return KernelMatrix(std::move(gs), std::move(m));
}

json process_to_json(const ExplicitProcess& p) {
  json out;
  out["detpp_schema"] = kSchemaVersion;
  out["points"] = p.gs.labels;
  out["mu"] = std::vector<double>(p.gs.mu.data(), p.gs.mu.data() + p.gs.size());
  json weights = json::array();
  for (const auto& [idx, w] : p.weights)
    weights.push_back(json{{"pts", idx}, {"w", complex_to_json(w)}});
  out["weights"] = weights;
  return out;
}

ExplicitProcess process_from_json(const json& j) {
  check_schema(j);
  ExplicitProcess p(ground_from_json(j));
  if (!j.contains("weights") || !j["weights"].is_array())
    throw Error("MalformedInput", "missing weights array", 2);
  for (const auto& entry : j["weights"]) {
    if (!entry.contains("pts") || !entry.contains("w"))
      throw Error("MalformedInput", "weight entries need pts and w", 2);
    Configuration c(entry["pts"].get<std::vector<int>>());
    c.validate(p.gs.size());
    p.add_weight(c, complex_from_json(entry["w"]));
  }
  p.finalize();
  return p;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("MalformedInput", "cannot open " + path, 2);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("MalformedInput", path + ": " + e.what(), 2);
  }
  return j;
}

void check_schema(const json& j, bool required) {
  if (!j.is_object())
    throw Error("MalformedInput", "expected a JSON object", 2);
  if (j.contains("detpp_schema")) {
    if (!j["detpp_schema"].is_number_integer() ||
        j["detpp_schema"].get<int>() != kSchemaVersion)
      throw Error("MalformedInput", "unsupported detpp_schema version", 2);
  } else if (required) {
    throw Error("MalformedInput", "missing detpp_schema field", 2);
  }
}

}  // namespace detpp
