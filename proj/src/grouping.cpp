#include "seglab/grouping.hpp"

#include <cmath>
#include <string>

namespace seglab {

Decomposition::Decomposition(int d, std::vector<int> breakpoints)
    : d_(d), breakpoints_(std::move(breakpoints)) {
  require(d_ >= 1, ErrorKind::EndpointMismatch, "component count must be positive");
  require(breakpoints_.size() >= 2, ErrorKind::EndpointMismatch,
          "need at least breakpoints [0, d]");
  require(breakpoints_.front() == 0, ErrorKind::EndpointMismatch,
          "first breakpoint must be 0, got " + std::to_string(breakpoints_.front()));
  require(breakpoints_.back() == d_, ErrorKind::EndpointMismatch,
          "last breakpoint must equal d=" + std::to_string(d_) + ", got " +
              std::to_string(breakpoints_.back()));
  for (size_t k = 1; k < breakpoints_.size(); ++k)
    require(breakpoints_[k] > breakpoints_[k - 1], ErrorKind::NonMonotoneBreakpoints,
            "breakpoints must be strictly increasing at position " + std::to_string(k));

  group_of_.resize(d_);
  for (int h = 1; h <= m(); ++h)
    for (int i = breakpoints_[h - 1] + 1; i <= breakpoints_[h]; ++i)
      group_of_[i - 1] = h;
}

int Decomposition::group_of(int i) const {
  require(i >= 1 && i <= d_, ErrorKind::IndexOutOfRange,
          "component index " + std::to_string(i) + " not in 1.." + std::to_string(d_));
  return group_of_[i - 1];
}

std::vector<int> Decomposition::group_members(int h) const {
  require(h >= 1 && h <= m(), ErrorKind::IndexOutOfRange,
          "group index " + std::to_string(h) + " not in 1.." + std::to_string(m()));
  std::vector<int> out;
  for (int i = breakpoints_[h - 1] + 1; i <= breakpoints_[h]; ++i) out.push_back(i);
  return out;
}

PairClass Decomposition::classify(int i, int j) const {
  int gi = group_of(i), gj = group_of(j);
  if (i == j) return PairClass::Diagonal;
  return gi == gj ? PairClass::SameGroup : PairClass::CrossGroup;
}

Decomposition make_decomposition(int d, const std::vector<int>& breakpoints) {
  return Decomposition(d, breakpoints);
}

PairClass classify_pair(const Decomposition& dec, int i, int j) {
  return dec.classify(i, j);
}

CouplingMatrix validate_coupling(const Decomposition& dec, const Mat& a) {
  const int d = dec.d();
  require(a.n == d, ErrorKind::ShapeMismatch,
          "coupling matrix is " + std::to_string(a.n) + "x" + std::to_string(a.n) +
              ", decomposition has d=" + std::to_string(d));
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      const double aij = a.at(i, j);
      require(std::isfinite(aij), ErrorKind::NegativeEntry,
              "non-finite entry a(" + std::to_string(i) + "," + std::to_string(j) + ")");
      require(aij >= 0.0, ErrorKind::NegativeEntry,
              "a(" + std::to_string(i) + "," + std::to_string(j) + ") < 0");
      require(aij == a.at(j, i), ErrorKind::NotSymmetric,
              "a(" + std::to_string(i) + "," + std::to_string(j) + ") != a(" +
                  std::to_string(j) + "," + std::to_string(i) + ")");
      switch (dec.classify(i, j)) {
        case PairClass::Diagonal:
        case PairClass::SameGroup:
          require(aij == 0.0, ErrorKind::NonzeroIntraGroup,
                  "a(" + std::to_string(i) + "," + std::to_string(j) +
                      ") must vanish inside a group");
          break;
        case PairClass::CrossGroup:
          require(aij > 0.0, ErrorKind::ZeroCrossGroup,
                  "a(" + std::to_string(i) + "," + std::to_string(j) +
                      ") must be positive across groups");
          break;
      }
    }
  }
  return CouplingMatrix(a);
}

}  // namespace seglab
