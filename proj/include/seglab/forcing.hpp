#pragma once

#include <cmath>
#include <vector>

#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"

namespace seglab {

// sgn(u)|u|^p and |u|^q with fast paths for the common exponents.
inline double signed_pow(double u, double p) {
  if (p == 1.0) return u;
  if (p == 2.0) return u * std::fabs(u);
  if (u == 0.0) return 0.0;
  return u < 0.0 ? -std::pow(-u, p) : std::pow(u, p);
}

inline double abs_pow(double u, double q) {
  if (q == 1.0) return std::fabs(u);
  if (q == 2.0) return u * u;
  return std::pow(std::fabs(u), q);
}

enum class ForcingFamily { Zero, Linear, GroupedPower };

// Declarative forcing f_i(x,s), x-independent built-in families:
//   Zero:          f_i = 0
//   Linear:        f_i = -lambda_i s_i
//   GroupedPower:  f_i = s_i|s_i|^{p-1} sum_j b_ij |s_j|^{p+1} - lambda_i s_i
// with b symmetric, nonnegative, and zero across groups.
class ForcingSpec {
public:
  static ForcingSpec zero(int d);
  static ForcingSpec linear(std::vector<double> lambda);
  static ForcingSpec grouped_power(const Decomposition& dec,
                                   std::vector<double> lambda, Mat b);

  ForcingFamily family() const { return family_; }
  int d() const { return d_; }
  bool is_zero() const { return family_ == ForcingFamily::Zero; }
  const std::vector<double>& lambda() const { return lambda_; }
  const Mat& b() const { return b_; }

  // f_i for all i at state s (s has d entries, 0-based array).
  void eval(double p, const Pt& x, const double* s, double* out) const;

  // Frozen-coefficient factor G_i with f_i(s) ~ G_i * s_i, used by the
  // semi-implicit node update; eps regularizes |s_i|^{p-1} for p < 1.
  double implicit_coeff(int i, double p, const double* s, double eps) const;

  // Bound for |f_i(x,s)| / sum_{j in group(i)} |s_j| over [-S,S]^d, the
  // (L)-style quotient entering the Almgren drift constant.
  double quotient_bound(double p, double S) const;

private:
  ForcingSpec(ForcingFamily fam, int d) : family_(fam), d_(d) {}
  ForcingFamily family_;
  int d_;
  std::vector<double> lambda_;
  Mat b_;
};

std::vector<double> evaluate_forcing(const ForcingSpec& forcing, double p,
                                     const Pt& x, const std::vector<double>& s);

}  // namespace seglab
