#pragma once

#include "detpp/dimer.hpp"
#include "detpp/json_io.hpp"
#include "detpp/types.hpp"
#include "detpp/ust.hpp"

namespace detpp {

// Graph documents accept either explicit lists or a generator field
// ("grid", "hexagon_strip", "complete", "path", "multi_edge_pair").
PlanarBipartiteGraph dimer_graph_from_spec(const json& spec);
OrientedGraph ust_graph_from_spec(const json& spec);

// One bundled instance: a kernel plus the brute-force process it must match.
struct MechanismInstance {
  std::string mechanism;
  std::string description;
  KernelMatrix kernel;
  ExplicitProcess process;
  int n_max = 4;
  double tol = kDefaultVerifyTol;
};

// Builds kernel and oracle from a mechanism spec document (see README for
// the per-mechanism fields). Plancherel specs are handled by run_spec_json
// directly because their oracle is a truncated sum, not a finite process.
MechanismInstance instance_from_json(const json& spec, int max_enum);

// Kernel only, no oracle enumeration (the build-kernel path). Accepts every
// mechanism including plancherel windows.
KernelMatrix kernel_from_spec_json(const json& spec);

struct RunReport {
  std::string mechanism;
  std::string instance;
  int checks = 0;
  double max_deviation = 0.0;
  double tol = kDefaultVerifyTol;
  bool pass = false;
  double wall_ms = 0.0;
  std::vector<std::string> notes;
};

json report_to_json(const RunReport& r);

RunReport run_instance(const MechanismInstance& inst, int max_enum);
RunReport run_spec_json(const json& spec, double tol, int max_enum);
RunReport run_spec_file(const std::string& path, double tol, int max_enum);

// Every *.json under corpus_dir, sorted by filename.
std::vector<RunReport> run_suite(const std::string& corpus_dir, double tol,
                                 int max_enum);

}  // namespace detpp
