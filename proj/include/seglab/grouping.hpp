#pragma once

#include <vector>

#include "seglab/errors.hpp"

namespace seglab {

// Component and group indices are 1-based everywhere in the public API and in
// serialized output; internal storage is 0-based.

enum class PairClass { Diagonal, SameGroup, CrossGroup };

// Partition of components {1..d} into m consecutive groups given by
// breakpoints 0 = a_0 < a_1 < ... < a_m = d; group h = {a_{h-1}+1, ..., a_h}.
class Decomposition {
public:
  Decomposition(int d, std::vector<int> breakpoints);

  int d() const { return d_; }
  int m() const { return static_cast<int>(breakpoints_.size()) - 1; }
  const std::vector<int>& breakpoints() const { return breakpoints_; }

  int group_of(int i) const;                  // component 1..d -> group 1..m
  std::vector<int> group_members(int h) const;  // group 1..m -> components
  PairClass classify(int i, int j) const;

private:
  int d_;
  std::vector<int> breakpoints_;
  std::vector<int> group_of_;  // per component, 0-based storage
};

Decomposition make_decomposition(int d, const std::vector<int>& breakpoints);
PairClass classify_pair(const Decomposition& dec, int i, int j);

// Dense d x d matrix, 0-based storage with 1-based accessors to match the
// component indexing convention.
struct Mat {
  int n = 0;
  std::vector<double> v;

  Mat() = default;
  explicit Mat(int n_, double fill = 0.0) : n(n_), v(n_ * n_, fill) {}
  double& at(int i, int j) { return v[(i - 1) * n + (j - 1)]; }
  double at(int i, int j) const { return v[(i - 1) * n + (j - 1)]; }
};

// Validated symmetric coupling matrix: zero on the diagonal and on
// same-group pairs, strictly positive on cross-group pairs.
class CouplingMatrix {
public:
  int d() const { return a_.n; }
  double operator()(int i, int j) const { return a_.at(i, j); }
  const Mat& raw() const { return a_; }

private:
  friend CouplingMatrix validate_coupling(const Decomposition&, const Mat&);
  explicit CouplingMatrix(Mat a) : a_(std::move(a)) {}
  Mat a_;
};

CouplingMatrix validate_coupling(const Decomposition& dec, const Mat& a);

}  // namespace seglab
