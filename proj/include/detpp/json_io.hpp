#pragma once

#include <json.hpp>

#include "detpp/types.hpp"

namespace detpp {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Complex values serialize as plain numbers when real, else {"re":..,"im":..}.
json complex_to_json(cd v);
cd complex_from_json(const json& j);

RVec rvec_from_json(const json& j);
RMat rmat_from_json(const json& j);
CMat cmat_from_json(const json& j);
json cmat_to_json(const CMat& m);

// Ground set from "points" (strings or numbers) and optional "mu".
GroundSet ground_from_json(const json& j);

// {"detpp_schema":1, "points":[...], "mu":[...], "kernel":[[...]]}
json kernel_to_json(const KernelMatrix& k);
KernelMatrix kernel_from_json(const json& j);

// {"detpp_schema":1, "points":[...], "mu":[...],
//  "weights":[{"pts":[...], "w":...}, ...]}
json process_to_json(const ExplicitProcess& p);
ExplicitProcess process_from_json(const json& j);

// Parse a file; throws MalformedInput (exit 2) on IO or syntax trouble.
json load_json_file(const std::string& path);

// Enforces "detpp_schema": 1 when the field is present or required.
void check_schema(const json& j, bool required = false);

}  // namespace detpp
