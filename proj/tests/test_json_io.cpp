#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "detpp/json_io.hpp"
#include "detpp/lensemble.hpp"
#include "detpp/suite.hpp"
#include "helpers.hpp"

using namespace detpp;

TEST_CASE("complex values round-trip") {
  const json real = complex_to_json(cd(2.5, 0.0));
  CHECK(real.is_number());
  CHECK(complex_from_json(real) == cd(2.5, 0.0));
  CHECK(complex_from_json(json(3)) == cd(3.0, 0.0));

  const json mixed = complex_to_json(cd(1.0, -2.0));
  CHECK(mixed.is_object());
  CHECK(mixed.at("re") == 1.0);
  CHECK(mixed.at("im") == -2.0);
  CHECK(complex_from_json(mixed) == cd(1.0, -2.0));
}

TEST_CASE("matrix and vector parsing") {
  const RMat m = rmat_from_json(json::parse("[[1,2],[3,4]]"));
  CHECK(m(0, 1) == 2.0);
  CHECK(m(1, 0) == 3.0);

  const RVec v = rvec_from_json(json::parse("[0.5, 1.5]"));
  CHECK(v.size() == 2);
  CHECK(v(1) == 1.5);

  const CMat c = cmat_from_json(json::parse(R"([[1, {"re":0,"im":1}],[0, 2]])"));
  CHECK(c(0, 1) == cd(0.0, 1.0));
  CHECK((cmat_from_json(cmat_to_json(c)) - c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ground sets from documents") {
  const GroundSet named = ground_from_json(
      json::parse(R"({"points":["a","b"], "mu":[2.0, 0.5]})"));
  CHECK(named.labels == std::vector<std::string>{"a", "b"});
  CHECK(named.mu(0) == 2.0);

  const GroundSet numeric =
      ground_from_json(json::parse(R"({"points":[0, 1, 2]})"));
  CHECK(numeric.size() == 3);
  CHECK(numeric.counting_measure());
}

TEST_CASE("kernel documents round-trip") {
  KernelMatrix k = kernel_of({{0.5, 0.25}, {0.25, 0.5}});
  k.gs.labels = {"u", "v"};
  const json doc = kernel_to_json(k);
  CHECK(doc.at("detpp_schema") == kSchemaVersion);

  const KernelMatrix back = kernel_from_json(doc);
  CHECK(back.gs.labels == k.gs.labels);
  CHECK((back.k - k.k).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.gs.mu - k.gs.mu).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("process documents round-trip") {
  ExplicitProcess p(GroundSet::of_size(2));
  p.add_weight(Configuration(std::vector<int>{}), cd(1.0, 0.0));
  p.add_weight(Configuration({0, 1}), cd(0.0, 3.0));
  p.finalize();

  const ExplicitProcess back = process_from_json(process_to_json(p));
  CHECK(back.weights == p.weights);
  CHECK(back.z == p.z);
}

TEST_CASE("schema enforcement") {
  CHECK_NOTHROW(check_schema(json::parse(R"({"detpp_schema":1})")));
  CHECK_NOTHROW(check_schema(json::object()));
  CHECK_THROWS_WITH_AS(check_schema(json::object(), true),
                       doctest::Contains("MalformedInput"), Error);
  CHECK_THROWS_WITH_AS(check_schema(json::parse(R"({"detpp_schema":2})")),
                       doctest::Contains("MalformedInput"), Error);
}

TEST_CASE("file loading failures carry exit code 2") {
  try {
    load_json_file("/nonexistent/definitely_missing.json");
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == "MalformedInput");
    CHECK(e.exit_code() == 2);
  }

  const std::string path = "/tmp/detpp_bad_syntax.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_WITH_AS(load_json_file(path),
                       doctest::Contains("MalformedInput"), Error);
  std::remove(path.c_str());
}

TEST_CASE("mechanism specs build runnable instances") {
  const json spec = json::parse(R"({
    "detpp_schema": 1,
    "mechanism": "markov",
    "description": "inline chain",
    "points": ["a", "b", "c"],
    "pi": [0.5, 0.5, 0.0],
    "P": [[0.0, 0.2, 0.3], [0.0, 0.0, 0.6], [0.0, 0.0, 0.0]]
  })");

  const MechanismInstance inst = instance_from_json(spec, kDefaultMaxEnum);
  CHECK(inst.mechanism == "markov");
  CHECK(inst.kernel.size() == 3);

  const RunReport report = run_instance(inst, kDefaultMaxEnum);
  CHECK(report.pass);
  CHECK(report.checks > 0);
  CHECK(report.max_deviation < 1e-12);
}

TEST_CASE("kernel-only path agrees with the library builders") {
  const json spec = json::parse(R"({
    "mechanism": "l",
    "points": ["0", "1"],
    "L": [[1.0, 0.5], [0.5, 1.0]]
  })");
  const KernelMatrix k = kernel_from_spec_json(spec);

  const LMatrix l{GroundSet({"0", "1"}), cmat_of({{1.0, 0.5}, {0.5, 1.0}})};
  CHECK((k.k - l_to_k(l).k).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("explicit mechanism checks a given kernel against given weights") {
  json spec = json::parse(R"({
    "detpp_schema": 1,
    "mechanism": "explicit",
    "kernel": {"points": ["0"], "kernel": [[0.5]]},
    "process": {"points": ["0"],
                "weights": [{"pts": [], "w": 1.0}, {"pts": [0], "w": 1.0}]}
  })");
  CHECK(run_spec_json(spec, kDefaultVerifyTol, kDefaultMaxEnum).pass);

  spec["kernel"]["kernel"][0][0] = 0.7;  // corrupt one entry
  const RunReport bad = run_spec_json(spec, kDefaultVerifyTol, kDefaultMaxEnum);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_deviation > 0.1);
}

TEST_CASE("bundled corpus files run") {
  const RunReport r = run_spec_file(DETPP_CORPUS_DIR "/markov_2state.json",
                                    kDefaultVerifyTol, kDefaultMaxEnum);
  CHECK(r.pass);
  CHECK(r.mechanism == "markov");

  CHECK_THROWS_WITH_AS(run_suite("/nonexistent_corpus", 1e-10, 24),
                       doctest::Contains("MalformedInput"), Error);
}
