#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace detpp {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Library error with a stable symbolic code. exit_code follows the CLI
// contract: 2 = malformed/oversized input, 3 = mathematical precondition.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what, int exit_code = 3)
      : std::runtime_error(code + ": " + what),
        code_(std::move(code)),
        exit_code_(exit_code) {}

  const std::string& code() const { return code_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string code_;
  int exit_code_;
};

// Finite state space: distinct point labels plus a strictly positive
// reference weight mu(x) per point (mu == 1 is the counting measure).
struct GroundSet {
  std::vector<std::string> labels;
  RVec mu;

  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> pts);
  GroundSet(std::vector<std::string> pts, RVec weights);

  int size() const { return static_cast<int>(labels.size()); }
  bool counting_measure() const;

  static GroundSet of_size(int n, const std::string& prefix = "x");

  void validate() const;
};

// Finite subset of ground-set indices, stored strictly increasing.
struct Configuration {
  std::vector<int> idx;

  Configuration() = default;
  explicit Configuration(std::vector<int> indices);

  int size() const { return static_cast<int>(idx.size()); }
  bool empty() const { return idx.empty(); }
  bool contains(int i) const;

  void validate(int ground_size) const;
};

// Correlation kernel K on a finite ground set.
struct KernelMatrix {
  GroundSet gs;
  CMat k;

  KernelMatrix() = default;
  KernelMatrix(GroundSet ground, CMat entries);

  int size() const { return gs.size(); }

  // K * diag(mu): the kernel of the same process w.r.t. counting measure.
  // Principal minors of this matrix are the plain point-inclusion
  // probabilities Pr{pts subset X}.
  CMat counting() const;
};

// Explicitly weighted process: configuration -> complex weight, with the
// partition function Z = sum of weights. Normalized weights form a
// (possibly complex) measure of total mass 1.
struct ExplicitProcess {
  GroundSet gs;
  std::map<std::vector<int>, cd> weights;
  cd z{0.0, 0.0};

  ExplicitProcess() = default;
  explicit ExplicitProcess(GroundSet ground) : gs(std::move(ground)) {}

  void add_weight(const Configuration& c, cd w);
  void finalize();  // recompute Z, drop exact-zero weights

  cd weight(const Configuration& c) const;
};

// Ground set restricted to the given indices (labels and mu carried over).
GroundSet sub_ground(const GroundSet& gs, const std::vector<int>& indices);

// Subset of ground-set indices used to restrict a kernel.
struct Window {
  std::vector<int> indices;

  Window() = default;
  explicit Window(std::vector<int> which);

  int size() const { return static_cast<int>(indices.size()); }
  void validate(int ground_size) const;
};

inline constexpr double kDefaultVerifyTol = 1e-10;
inline constexpr double kDefaultHermitianTol = 1e-9;
inline constexpr double kRcondFloor = 1e-12;
inline constexpr int kDefaultMaxEnum = 24;

}  // namespace detpp
