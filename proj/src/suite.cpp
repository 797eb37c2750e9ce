#include "detpp/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "detpp/core.hpp"
#include "detpp/detproducts.hpp"
#include "detpp/dimer.hpp"
#include "detpp/lensemble.hpp"
#include "detpp/markov.hpp"
#include "detpp/onedep.hpp"
#include "detpp/plancherel.hpp"
#include "detpp/ust.hpp"

namespace detpp {

namespace {

MarkovChainSpec markov_from_json(const json& spec) {
  if (!spec.contains("P") || !spec.contains("pi"))
    throw Error("MalformedInput", "markov spec needs P and pi", 2);
  MarkovChainSpec mc;
  mc.gs = ground_from_json(spec);
  mc.p = rmat_from_json(spec["P"]);
  mc.pi = rvec_from_json(spec["pi"]);
  return mc;
}

BiorthogonalSpec bi_from_json(const json& spec) {
  if (spec.contains("w")) {  // orthogonal polynomial shorthand
    if (!spec.contains("points") || !spec.contains("n"))
      throw Error("MalformedInput", "ope spec needs points, w, n", 2);
    return ope_spec(
        std::vector<double>(spec["points"].begin(), spec["points"].end()),
        std::vector<double>(spec["w"].begin(), spec["w"].end()),
        spec["n"].get<int>());
  }
  if (!spec.contains("phi") || !spec.contains("psi"))
    throw Error("MalformedInput", "biorthogonal spec needs phi and psi", 2);
  return BiorthogonalSpec(ground_from_json(spec), cmat_from_json(spec["phi"]),
                          cmat_from_json(spec["psi"]));
}

LayeredSpec em_from_json(const json& spec) {
  if (!spec.contains("layers") || !spec.contains("phi") ||
      !spec.contains("psi") || !spec.contains("t"))
    throw Error("MalformedInput", "layered spec needs layers, phi, psi, t", 2);
  std::vector<GroundSet> layers;
  for (const auto& layer : spec["layers"])
    layers.push_back(ground_from_json(layer));
  std::vector<CMat> trans;
  for (const auto& t : spec["t"]) trans.push_back(cmat_from_json(t));
  return LayeredSpec(std::move(layers), cmat_from_json(spec["phi"]),
                     cmat_from_json(spec["psi"]), std::move(trans));
}

VaryingSpec varying_from_json(const json& spec) {
  for (const char* key : {"site_points", "c", "phi_virt", "phi", "ev", "psi"})
    if (!spec.contains(key))
      throw Error("MalformedInput", std::string("varying spec needs ") + key,
                  2);
  VaryingSpec vs;
  vs.site = ground_from_json(json{{"points", spec["site_points"]}});
  vs.c = spec["c"].get<std::vector<int>>();
  vs.phi_virt = cmat_from_json(spec["phi_virt"]);
  // JSON lists the two-point functions for levels 2..N; slot 0 is unused
  vs.phi.emplace_back();
  for (const auto& m : spec["phi"]) vs.phi.push_back(cmat_from_json(m));
  for (const auto& level : spec["ev"]) {
    std::vector<CMat> steps;
    for (const auto& m : level) steps.push_back(cmat_from_json(m));
    vs.ev.push_back(std::move(steps));
  }
  vs.psi = cmat_from_json(spec["psi"]);
  return vs;
}

LMatrix l_from_json(const json& spec) {
  if (!spec.contains("L"))
    throw Error("MalformedInput", "L-ensemble spec needs L", 2);
  return LMatrix(ground_from_json(spec), cmat_from_json(spec["L"]));
}

BlockCorrelations onedep_blocks_from_json(const json& spec,
                                          ExplicitProcess* process_out) {
  const std::string kind = spec.value("kind", "");
  if (kind == "bernoulli") {
    return BlockCorrelations::bernoulli(spec.at("n").get<int>(),
                                        spec.at("p").get<double>());
  }
  if (kind == "descents") {
    return BlockCorrelations::descents(spec.at("n").get<int>());
  }
  if (spec.contains("weights")) {
    ExplicitProcess process = process_from_json(spec);
    if (!check_one_dependent(process, 1e-9))
      throw Error("NotOneDependent",
                  "process correlations do not factorize over gaps", 3);
    BlockCorrelations blocks = blocks_from_process(process);
    if (process_out) *process_out = std::move(process);
    return blocks;
  }
  throw Error("MalformedInput",
              "onedep spec needs kind=bernoulli|descents or weights", 2);
}

}  // namespace

PlanarBipartiteGraph dimer_graph_from_spec(const json& spec) {
  if (spec.contains("grid")) {
    const auto dims = spec["grid"].get<std::vector<int>>();
    if (dims.size() != 2)
      throw Error("MalformedInput", "grid takes [rows, cols]", 2);
    return PlanarBipartiteGraph::grid(dims[0], dims[1]);
  }
  if (spec.contains("hexagon_strip"))
    return PlanarBipartiteGraph::hexagon_strip(
        spec["hexagon_strip"].get<int>());
  PlanarBipartiteGraph g;
  g.n_black = spec.at("n_black").get<int>();
  g.n_white = spec.at("n_white").get<int>();
  for (const auto& e : spec.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  for (const auto& f : spec.at("faces")) {
    PlanarBipartiteGraph::Face face;
    face.edge_ids = f.at("edges").get<std::vector<int>>();
    face.outer = f.value("outer", false);
    g.faces.push_back(std::move(face));
  }
  g.validate();
  return g;
}

OrientedGraph ust_graph_from_spec(const json& spec) {
  if (spec.contains("complete"))
    return OrientedGraph::complete(spec["complete"].get<int>());
  if (spec.contains("grid")) {
    const auto dims = spec["grid"].get<std::vector<int>>();
    if (dims.size() != 2)
      throw Error("MalformedInput", "grid takes [rows, cols]", 2);
    return OrientedGraph::grid(dims[0], dims[1]);
  }
  if (spec.contains("path"))
    return OrientedGraph::path(spec["path"].get<int>());
  if (spec.contains("multi_edge_pair"))
    return OrientedGraph::multi_edge_pair(spec["multi_edge_pair"].get<int>());
  OrientedGraph g;
  g.n_vertices = spec.at("n_vertices").get<int>();
  for (const auto& e : spec.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  g.validate();
  return g;
}

namespace {

Window condition_from_json(const json& spec) {
  return Window(spec.at("condition").get<std::vector<int>>());
}

// exact descent-set law of a uniformly random ordering of n+1 slots
ExplicitProcess descents_process(const GroundSet& gs) {
  const int n = gs.size();
  if (n > 9)
    throw Error("EnumerationTooLarge", "descents oracle capped at 9 points",
                2);
  std::vector<long> counts(std::size_t{1} << n, 0);
  std::vector<int> perm(n + 1);
  std::iota(perm.begin(), perm.end(), 0);
  long total = 0;
  do {
    unsigned mask = 0;
    for (int i = 0; i < n; ++i)
      if (perm[i] > perm[i + 1]) mask |= 1u << i;
    ++counts[mask];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  ExplicitProcess process(gs);
  for (unsigned mask = 0; mask < counts.size(); ++mask) {
    if (counts[mask] == 0) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    process.add_weight(Configuration(idx),
                       static_cast<double>(counts[mask]) / total);
  }
  process.finalize();
  return process;
}

ExplicitProcess bernoulli_process(const GroundSet& gs, double p) {
  ExplicitProcess process(gs);
  const int n = gs.size();
  for_each_subset(n, [&](const std::vector<int>& idx) {
    const double w = std::pow(p, static_cast<double>(idx.size())) *
                     std::pow(1.0 - p, static_cast<double>(n - idx.size()));
    process.add_weight(Configuration(idx), w);
  });
  process.finalize();
  return process;
}

ExplicitProcess conditional_process(const LMatrix& lm,
                                    const ConditionalSplit& split,
                                    int max_enum) {
  ExplicitProcess process(sub_ground(lm.gs, split.y.indices));
  for_each_subset(
      split.y.size(),
      [&](const std::vector<int>& local) {
        std::vector<int> global;
        for (int i : local) global.push_back(split.y.indices[i]);
        process.add_weight(
            Configuration(local),
            conditional_probability(lm, split, Configuration(global)));
      },
      max_enum);
  process.finalize();
  return process;
}

RunReport run_plancherel(const json& spec, double tol) {
  const double theta = spec.at("theta").get<double>();
  const auto window = spec.at("window").get<std::vector<int>>();
  if (window.size() != 2)
    throw Error("MalformedInput", "plancherel window is [lo, hi] doubled", 2);
  const int cutoff = spec.value("cutoff", 18);

  RunReport r;
  r.mechanism = "plancherel";
  r.instance = spec.value("description", "plancherel");
  r.tol = spec.value("tol", std::max(tol, 1e-7));
  const auto t0 = std::chrono::steady_clock::now();

  const KernelMatrix kernel =
      bessel_window_kernel(theta, window[0], window[1]);
  const int n = kernel.size();
  double worst_tail = 0.0;
  auto check = [&](const std::vector<int>& local) {
    std::vector<int> doubled;
    for (int i : local) doubled.push_back(window[0] + 2 * i);
    const TruncatedCorrelation direct =
        plancherel_correlation(doubled, theta, cutoff);
    const cd det = kernel_correlation(kernel, Configuration(local));
    r.max_deviation =
        std::max(r.max_deviation, std::abs(det - cd(direct.value)));
    worst_tail = std::max(worst_tail, direct.tail_bound);
    ++r.checks;
  };
  for (int i = 0; i < n; ++i) check({i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) check({i, j});

  r.pass = r.max_deviation <= r.tol;
  r.notes.push_back("poisson tail bound " + std::to_string(worst_tail));
  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

std::string mechanism_of(const json& spec) {
  check_schema(spec);
  if (!spec.contains("mechanism"))
    throw Error("MalformedInput", "spec needs a mechanism field", 2);
  return spec["mechanism"].get<std::string>();
}

}  // namespace

KernelMatrix kernel_from_spec_json(const json& spec) {
  const std::string mech = mechanism_of(spec);
  if (mech == "explicit") return kernel_from_json(spec.at("kernel"));
  if (mech == "markov") return markov_kernel(markov_from_json(spec));
  if (mech == "bi" || mech == "ope") return bi_kernel(bi_from_json(spec));
  if (mech == "em") return em_kernel(em_from_json(spec));
  if (mech == "varying") return varying_kernel(varying_from_json(spec));
  if (mech == "l") {
    const LMatrix lm = l_from_json(spec);
    if (spec.contains("condition"))
      return conditional_k(lm, ConditionalSplit{condition_from_json(spec)});
    return l_to_k(lm);
  }
  if (mech == "onedep")
    return onedep_kernel(onedep_blocks_from_json(spec, nullptr));
  if (mech == "dimer") {
    const PlanarBipartiteGraph g = dimer_graph_from_spec(spec);
    return dimer_kernel(g, kasteleyn_weighting(g));
  }
  if (mech == "ust") return transfer_current(ust_graph_from_spec(spec));
  if (mech == "plancherel") {
    const auto window = spec.at("window").get<std::vector<int>>();
    if (window.size() != 2)
      throw Error("MalformedInput", "plancherel window is [lo, hi] doubled",
                  2);
    return bessel_window_kernel(spec.at("theta").get<double>(), window[0],
                                window[1]);
  }
  throw Error("MalformedInput", "unknown mechanism " + mech, 2);
}

MechanismInstance instance_from_json(const json& spec, int max_enum) {
  const std::string mech = mechanism_of(spec);
  MechanismInstance inst;
  if (mech == "explicit") {
    // given kernel against given weights, the fault-injection path
    inst.kernel = kernel_from_json(spec.at("kernel"));
    inst.process = process_from_json(spec.at("process"));
  } else if (mech == "markov") {
    const MarkovChainSpec mc = markov_from_json(spec);
    inst.kernel = markov_kernel(mc);
    inst.process = trajectory_process(mc);
  } else if (mech == "bi" || mech == "ope") {
    const BiorthogonalSpec bs = bi_from_json(spec);
    inst.kernel = bi_kernel(bs);
    inst.process = weights_from_spec(bs);
  } else if (mech == "em") {
    const LayeredSpec ls = em_from_json(spec);
    inst.kernel = em_kernel(ls);
    inst.process = weights_from_spec(ls);
  } else if (mech == "varying") {
    const VaryingSpec vs = varying_from_json(spec);
    inst.kernel = varying_kernel(vs);
    inst.process = weights_from_spec(vs);
  } else if (mech == "l") {
    const LMatrix lm = l_from_json(spec);
    if (spec.contains("condition")) {
      const ConditionalSplit split{condition_from_json(spec)};
      inst.kernel = conditional_k(lm, split);
      inst.process = conditional_process(lm, split, max_enum);
    } else {
      inst.kernel = l_to_k(lm);
      inst.process = l_process(lm, max_enum);
    }
  } else if (mech == "onedep") {
    ExplicitProcess given;
    const BlockCorrelations blocks = onedep_blocks_from_json(spec, &given);
    inst.kernel = onedep_kernel(blocks);
    const std::string kind = spec.value("kind", "");
    if (kind == "bernoulli")
      inst.process = bernoulli_process(inst.kernel.gs, spec.at("p").get<double>());
    else if (kind == "descents")
      inst.process = descents_process(inst.kernel.gs);
    else
      inst.process = std::move(given);
  } else if (mech == "dimer") {
    const PlanarBipartiteGraph g = dimer_graph_from_spec(spec);
    inst.kernel = dimer_kernel(g, kasteleyn_weighting(g));
    inst.process = enumerate_matchings(g, max_enum);
  } else if (mech == "ust") {
    const OrientedGraph g = ust_graph_from_spec(spec);
    inst.kernel = transfer_current(g);
    inst.process = enumerate_spanning_trees(g);
  } else {
    throw Error("MalformedInput", "unknown mechanism " + mech, 2);
  }
  inst.mechanism = mech;
  inst.description = spec.value("description", mech);
  inst.n_max = spec.value("n_max", 4);
  inst.tol = spec.value("tol", kDefaultVerifyTol);
  return inst;
}

RunReport run_instance(const MechanismInstance& inst, int max_enum) {
  RunReport r;
  r.mechanism = inst.mechanism;
  r.instance = inst.description;
  r.tol = inst.tol;
  const auto t0 = std::chrono::steady_clock::now();

  const VerifyReport vr = verify_determinantal(inst.process, inst.kernel,
                                               inst.n_max, inst.tol, max_enum);
  r.checks = vr.checked;
  r.max_deviation = vr.max_deviation;
  r.pass = vr.pass;
  for (std::size_t i = 0; i < vr.failures.size() && i < 3; ++i) {
    const auto& f = vr.failures[i];
    std::string pts = "rho(";
    for (std::size_t k = 0; k < f.pts.size(); ++k)
      pts += (k ? "," : "") + std::to_string(f.pts[k]);
    r.notes.push_back(pts + "): oracle " + std::to_string(f.oracle.real()) +
                      " vs kernel " + std::to_string(f.kernel.real()));
  }

  // mean point count must match the kernel trace
  const cd mean = expected_size(inst.process);
  const cd trace = inst.kernel.counting().trace();
  const double dev = std::abs(mean - trace) / std::max(1.0, std::abs(trace));
  r.max_deviation = std::max(r.max_deviation, dev);
  ++r.checks;
  if (dev > inst.tol) {
    r.pass = false;
    r.notes.push_back("mean size " + std::to_string(mean.real()) +
                      " vs kernel trace " + std::to_string(trace.real()));
  }

  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

RunReport run_spec_json(const json& spec, double tol, int max_enum) {
  if (mechanism_of(spec) == "plancherel") return run_plancherel(spec, tol);
  MechanismInstance inst = instance_from_json(spec, max_enum);
  if (!spec.contains("tol")) inst.tol = tol;
  return run_instance(inst, max_enum);
}

RunReport run_spec_file(const std::string& path, double tol, int max_enum) {
  RunReport r = run_spec_json(load_json_file(path), tol, max_enum);
  if (r.instance.empty() || r.instance == r.mechanism)
    r.instance = std::filesystem::path(path).filename().string();
  return r;
}

std::vector<RunReport> run_suite(const std::string& corpus_dir, double tol,
                                 int max_enum) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry :
       std::filesystem::directory_iterator(corpus_dir, ec)) {
    if (entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  }
  if (ec || files.empty())
    throw Error("MalformedInput", "no spec files under " + corpus_dir, 2);
  std::sort(files.begin(), files.end());
  std::vector<RunReport> reports;
  for (const auto& f : files)
    reports.push_back(run_spec_file(f, tol, max_enum));
  return reports;
}

json report_to_json(const RunReport& r) {
  json out;
  out["detpp_schema"] = kSchemaVersion;
  out["mechanism"] = r.mechanism;
  out["instance"] = r.instance;
  out["checks"] = r.checks;
  out["max_deviation"] = r.max_deviation;
  out["tol"] = r.tol;
  out["pass"] = r.pass;
  out["wall_ms"] = r.wall_ms;
  out["notes"] = r.notes;
  return out;
}

}  // namespace detpp
