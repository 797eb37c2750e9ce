#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "detpp/continuum.hpp"
#include "detpp/core.hpp"
#include "detpp/dimer.hpp"
#include "detpp/json_io.hpp"
#include "detpp/observables.hpp"
#include "detpp/plancherel.hpp"
#include "detpp/sampler.hpp"
#include "detpp/suite.hpp"
#include "detpp/ust.hpp"

namespace {

using detpp::json;

int env_max_enum() {
  if (const char* v = std::getenv("DETPP_MAX_ENUM")) {
    try {
      const int n = std::stoi(v);
      if (n > 0) return n;
    } catch (...) {
    }
    throw detpp::Error("MalformedInput", "DETPP_MAX_ENUM must be a positive integer", 2);
  }
  return detpp::kDefaultMaxEnum;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    const std::string tok = s.substr(pos, next - pos);
    if (!tok.empty()) {
      try {
        out.push_back(std::stoi(tok));
      } catch (...) {
        throw detpp::Error("MalformedInput", "bad index '" + tok + "'", 2);
      }
    }
    pos = next + 1;
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out)
      throw detpp::Error("MalformedInput", "cannot write " + out_path, 2);
    out << j.dump(2) << "\n";
  }
}

// doubled odd int, accepting "-5/2" style or the doubled integer itself
int parse_half_integer(const std::string& s) {
  std::string head = s;
  const std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    if (s.substr(slash) != "/2")
      throw detpp::Error("MalformedInput", "half-integers end in /2", 2);
    head = s.substr(0, slash);
  }
  int v = 0;
  try {
    v = std::stoi(head);
  } catch (...) {
    throw detpp::Error("MalformedInput", "bad half-integer '" + s + "'", 2);
  }
  if (v % 2 == 0)
    throw detpp::Error("MalformedInput",
                       "half-integers have odd numerator: '" + s + "'", 2);
  return v;
}

struct GapArgs {
  std::string json_path;
  std::string kernel_name;
  std::string window;
  std::vector<double> interval;
  int order = 40;
};

int cmd_gap(const GapArgs& a) {
  if (!a.json_path.empty()) {
    const detpp::KernelMatrix k =
        detpp::kernel_from_json(detpp::load_json_file(a.json_path));
    detpp::Window w(parse_int_list(a.window));
    const detpp::cd gap = detpp::gap_probability(k, w);
    emit(json{{"detpp_schema", detpp::kSchemaVersion},
              {"gap", detpp::complex_to_json(gap)}},
         "");
    return 0;
  }
  if (a.kernel_name != "sine" && a.kernel_name != "airy")
    throw detpp::Error("MalformedInput", "continuum kernel is sine or airy", 2);
  if (a.interval.size() != 2)
    throw detpp::Error("MalformedInput", "--interval takes two endpoints", 2);
  const detpp::ScalarKernel kfn =
      a.kernel_name == "sine" ? detpp::ScalarKernel(detpp::sine_kernel)
                              : detpp::ScalarKernel(detpp::airy_kernel);
  const auto grid =
      detpp::NystromGrid::on_interval(a.interval[0], a.interval[1], a.order);
  const auto grid2 = detpp::NystromGrid::on_interval(a.interval[0],
                                                     a.interval[1], 2 * a.order);
  const double value = detpp::fredholm_det(kfn, grid);
  const double value2 = detpp::fredholm_det(kfn, grid2);
  const auto spectrum = detpp::discretized_validity(kfn, grid);
  emit(json{{"detpp_schema", detpp::kSchemaVersion},
            {"kernel", a.kernel_name},
            {"interval", a.interval},
            {"order", a.order},
            {"gap", value},
            {"gap_refined", value2},
            {"refinement_delta", std::abs(value - value2)},
            {"spectrum", {{"min", spectrum.min_eig}, {"max", spectrum.max_eig}}}},
       "");
  return 0;
}

int cmd_sample(const std::string& path, long n, unsigned long long seed) {
  const detpp::KernelMatrix k =
      detpp::kernel_from_json(detpp::load_json_file(path));
  std::mt19937_64 rng(seed);
  for (long i = 0; i < n; ++i) {
    const detpp::Configuration cfg = detpp::sample(k, rng);
    std::cout << json(cfg.idx).dump() << "\n";
  }
  return 0;
}

int cmd_plancherel(double theta, const std::vector<std::string>& window,
                   int cutoff) {
  if (window.size() != 2)
    throw detpp::Error("MalformedInput", "--window takes lo hi", 2);
  const int lo = parse_half_integer(window[0]);
  const int hi = parse_half_integer(window[1]);
  const detpp::KernelMatrix k = detpp::bessel_window_kernel(theta, lo, hi);
  json out = detpp::kernel_to_json(k);
  out["theta"] = theta;
  json rho1 = json::array();
  double tail = 0.0;
  for (int i = 0; i < k.size(); ++i) {
    const auto direct = detpp::plancherel_correlation({lo + 2 * i}, theta, cutoff);
    tail = std::max(tail, direct.tail_bound);
    rho1.push_back(json{{"point", k.gs.labels[i]},
                        {"kernel", k.k(i, i).real()},
                        {"direct_sum", direct.value}});
  }
  out["rho1"] = rho1;
  out["truncation"] = json{{"cutoff", cutoff}, {"poisson_tail_bound", tail}};
  emit(out, "");
  return 0;
}

json graph_spec_json(const std::string& graph_path,
                     const std::vector<int>& grid, int hexagon, int complete,
                     const std::string& mechanism) {
  json spec;
  if (!graph_path.empty()) {
    spec = detpp::load_json_file(graph_path);
  } else if (grid.size() == 2) {
    spec["grid"] = grid;
  } else if (hexagon > 0) {
    spec["hexagon_strip"] = hexagon;
  } else if (complete > 0) {
    spec["complete"] = complete;
  } else {
    throw detpp::Error("MalformedInput", "need --graph or a generator flag", 2);
  }
  spec["mechanism"] = mechanism;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"determinantal point process toolkit"};
  app.require_subcommand(1);

  // build-kernel
  auto* build = app.add_subcommand("build-kernel", "construct a correlation kernel from a mechanism spec");
  std::string build_mech, build_json, build_out, build_condition;
  build->add_option("--mechanism", build_mech, "markov|bi|ope|em|varying|l|onedep|dimer|ust|plancherel");
  build->add_option("--json", build_json, "mechanism spec file")->required();
  build->add_option("--out", build_out, "output path (default stdout)");
  build->add_option("--condition", build_condition, "L-ensemble conditioning indices Y=i,j,...");

  // verify
  auto* verify = app.add_subcommand("verify", "check kernels against brute-force oracles");
  std::string verify_json, verify_suite, verify_corpus = "corpus";
  double verify_tol = detpp::kDefaultVerifyTol;
  verify->add_option("--json", verify_json, "one mechanism spec file");
  verify->add_option("--suite", verify_suite, "'all' runs every bundled instance");
  verify->add_option("--corpus", verify_corpus, "bundled instance directory");
  verify->add_option("--tol", verify_tol, "verification tolerance");

  // gap
  auto* gap = app.add_subcommand("gap", "gap probability (finite window or continuum interval)");
  GapArgs gap_args;
  gap->add_option("--json", gap_args.json_path, "kernel file (finite mode)");
  gap->add_option("--kernel", gap_args.kernel_name, "sine|airy (continuum mode)");
  gap->add_option("--window", gap_args.window, "finite window indices i,j,...");
  gap->add_option("--interval", gap_args.interval, "continuum interval endpoints")->expected(2);
  gap->add_option("--order", gap_args.order, "quadrature order per interval");

  // count-dist
  auto* count = app.add_subcommand("count-dist", "distribution of the point count in a window");
  std::string count_json, count_window;
  count->add_option("--json", count_json, "kernel file")->required();
  count->add_option("--window", count_window, "window indices i,j,...")->required();

  // janossy
  auto* jan = app.add_subcommand("janossy", "probability of an exact configuration in a window");
  std::string jan_json, jan_window, jan_pts;
  jan->add_option("--json", jan_json, "kernel file")->required();
  jan->add_option("--window", jan_window, "window indices i,j,...")->required();
  jan->add_option("--pts", jan_pts, "configuration indices (subset of the window)");

  // sample
  auto* samp = app.add_subcommand("sample", "draw configurations, one JSON line each");
  std::string samp_json, samp_kernel;
  long samp_n = 1;
  unsigned long long samp_seed = 0;
  samp->add_option("--json", samp_json, "kernel file");
  samp->add_option("--kernel", samp_kernel, "kernel file (alias)");
  samp->add_option("--n", samp_n, "number of draws");
  samp->add_option("--seed", samp_seed, "RNG seed (fixes output bit-for-bit)");

  // plancherel
  auto* plan = app.add_subcommand("plancherel", "discrete Bessel kernel on a half-integer window");
  double plan_theta = 1.0;
  std::vector<std::string> plan_window;
  int plan_cutoff = 18;
  plan->add_option("--theta", plan_theta, "poissonization parameter")->required();
  plan->add_option("--window", plan_window, "half-integer bounds lo hi, e.g. -5/2 5/2")->expected(2);
  plan->add_option("--cutoff", plan_cutoff, "partition size cutoff for the direct sum");

  // dimer
  auto* dimer = app.add_subcommand("dimer", "uniform perfect matchings of a planar bipartite graph");
  std::string dimer_graph, dimer_action = "count";
  std::vector<int> dimer_grid;
  int dimer_hex = 0;
  dimer->add_option("action", dimer_action, "count|kernel|verify");
  dimer->add_option("--graph", dimer_graph, "graph file");
  dimer->add_option("--grid", dimer_grid, "rows cols generator")->expected(2);
  dimer->add_option("--hexagon", dimer_hex, "hexagon strip generator, number of cells");

  // ust
  auto* ust = app.add_subcommand("ust", "uniform spanning trees of a connected graph");
  std::string ust_graph, ust_action = "count";
  std::vector<int> ust_grid;
  int ust_complete = 0;
  ust->add_option("action", ust_action, "count|kernel|verify");
  ust->add_option("--graph", ust_graph, "graph file");
  ust->add_option("--grid", ust_grid, "rows cols generator")->expected(2);
  ust->add_option("--complete", ust_complete, "complete graph generator, vertex count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const int max_enum = env_max_enum();

    if (build->parsed()) {
      json spec = detpp::load_json_file(build_json);
      if (!build_mech.empty()) spec["mechanism"] = build_mech;
      if (!build_condition.empty()) {
        std::string cond = build_condition;
        if (cond.rfind("Y=", 0) == 0) cond = cond.substr(2);
        spec["condition"] = parse_int_list(cond);
      }
      emit(detpp::kernel_to_json(detpp::kernel_from_spec_json(spec)), build_out);
      return 0;
    }

    if (verify->parsed()) {
      if (!verify_suite.empty()) {
        if (verify_suite != "all")
          throw detpp::Error("MalformedInput", "only --suite all is defined", 2);
        const auto reports = detpp::run_suite(verify_corpus, verify_tol, max_enum);
        json arr = json::array();
        bool all_pass = true;
        for (const auto& r : reports) {
          arr.push_back(detpp::report_to_json(r));
          all_pass = all_pass && r.pass;
        }
        emit(arr, "");
        return all_pass ? 0 : 1;
      }
      if (verify_json.empty())
        throw detpp::Error("MalformedInput", "verify needs --json or --suite", 2);
      const auto report = detpp::run_spec_file(verify_json, verify_tol, max_enum);
      emit(detpp::report_to_json(report), "");
      return report.pass ? 0 : 1;
    }

    if (gap->parsed()) return cmd_gap(gap_args);

    if (count->parsed()) {
      const detpp::KernelMatrix k =
          detpp::kernel_from_json(detpp::load_json_file(count_json));
      const detpp::Window w(parse_int_list(count_window));
      const auto dist = detpp::counting_distribution(k, w);
      json values = json::array();
      for (const auto& v : dist) values.push_back(detpp::complex_to_json(v));
      emit(json{{"detpp_schema", detpp::kSchemaVersion},
                {"window", w.indices},
                {"distribution", values}},
           "");
      return 0;
    }

    if (jan->parsed()) {
      const detpp::KernelMatrix k =
          detpp::kernel_from_json(detpp::load_json_file(jan_json));
      const detpp::Window w(parse_int_list(jan_window));
      const detpp::Configuration pts(parse_int_list(jan_pts));
      const detpp::cd v = detpp::janossy(k, w, pts);
      emit(json{{"detpp_schema", detpp::kSchemaVersion},
                {"window", w.indices},
                {"pts", pts.idx},
                {"janossy", detpp::complex_to_json(v)}},
           "");
      return 0;
    }

    if (samp->parsed()) {
      const std::string path = samp_json.empty() ? samp_kernel : samp_json;
      if (path.empty())
        throw detpp::Error("MalformedInput", "sample needs a kernel file", 2);
      return cmd_sample(path, samp_n, samp_seed);
    }

    if (plan->parsed()) return cmd_plancherel(plan_theta, plan_window, plan_cutoff);

    if (dimer->parsed()) {
      const json spec = graph_spec_json(dimer_graph, dimer_grid, dimer_hex, 0, "dimer");
      if (dimer_action == "count") {
        emit(json{{"detpp_schema", detpp::kSchemaVersion},
                  {"count", detpp::count_dimer_covers(
                                detpp::dimer_graph_from_spec(spec))}},
             "");
        return 0;
      }
      if (dimer_action == "kernel") {
        emit(detpp::kernel_to_json(detpp::kernel_from_spec_json(spec)), "");
        return 0;
      }
      if (dimer_action == "verify") {
        const auto report = detpp::run_spec_json(spec, detpp::kDefaultVerifyTol, max_enum);
        emit(detpp::report_to_json(report), "");
        return report.pass ? 0 : 1;
      }
      throw detpp::Error("MalformedInput", "dimer action is count|kernel|verify", 2);
    }

    if (ust->parsed()) {
      const json spec = graph_spec_json(ust_graph, ust_grid, 0, ust_complete, "ust");
      if (ust_action == "count") {
        emit(json{{"detpp_schema", detpp::kSchemaVersion},
                  {"count", detpp::count_spanning_trees(
                                detpp::ust_graph_from_spec(spec))}},
             "");
        return 0;
      }
      if (ust_action == "kernel") {
        emit(detpp::kernel_to_json(detpp::kernel_from_spec_json(spec)), "");
        return 0;
      }
      if (ust_action == "verify") {
        const auto report = detpp::run_spec_json(spec, detpp::kDefaultVerifyTol, max_enum);
        emit(detpp::report_to_json(report), "");
        return report.pass ? 0 : 1;
      }
      throw detpp::Error("MalformedInput", "ust action is count|kernel|verify", 2);
    }

    throw detpp::Error("MalformedInput", "no subcommand", 2);
  } catch (const detpp::Error& e) {
    std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}
