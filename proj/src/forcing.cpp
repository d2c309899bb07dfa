#include "seglab/forcing.hpp"

#include <algorithm>
#include <string>

namespace seglab {

ForcingSpec ForcingSpec::zero(int d) {
  require(d >= 1, ErrorKind::InvalidForcing, "d must be positive");
  return ForcingSpec(ForcingFamily::Zero, d);
}

ForcingSpec ForcingSpec::linear(std::vector<double> lambda) {
  require(!lambda.empty(), ErrorKind::InvalidForcing, "lambda empty");
  for (double l : lambda)
    require(std::isfinite(l), ErrorKind::InvalidForcing, "non-finite lambda");
  ForcingSpec f(ForcingFamily::Linear, static_cast<int>(lambda.size()));
  f.lambda_ = std::move(lambda);
  return f;
}

ForcingSpec ForcingSpec::grouped_power(const Decomposition& dec,
                                       std::vector<double> lambda, Mat b) {
  const int d = dec.d();
  require(static_cast<int>(lambda.size()) == d, ErrorKind::InvalidForcing,
          "lambda size must equal d");
  require(b.n == d, ErrorKind::InvalidForcing, "b must be d x d");
  for (double l : lambda)
    require(std::isfinite(l), ErrorKind::InvalidForcing, "non-finite lambda");
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      const double bij = b.at(i, j);
      require(std::isfinite(bij) && bij >= 0.0, ErrorKind::InvalidForcing,
              "b(" + std::to_string(i) + "," + std::to_string(j) +
                  ") must be finite and nonnegative");
      require(bij == b.at(j, i), ErrorKind::InvalidForcing, "b must be symmetric");
      if (dec.classify(i, j) == PairClass::CrossGroup)
        require(bij == 0.0, ErrorKind::InvalidForcing,
                "b must vanish across groups at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
    }
  ForcingSpec f(ForcingFamily::GroupedPower, d);
  f.lambda_ = std::move(lambda);
  f.b_ = std::move(b);
  return f;
}

void ForcingSpec::eval(double p, const Pt& /*x*/, const double* s, double* out) const {
  switch (family_) {
    case ForcingFamily::Zero:
      std::fill(out, out + d_, 0.0);
      return;
    case ForcingFamily::Linear:
      for (int i = 0; i < d_; ++i) out[i] = -lambda_[i] * s[i];
      return;
    case ForcingFamily::GroupedPower:
      for (int i = 0; i < d_; ++i) {
        double bsum = 0.0;
        for (int j = 0; j < d_; ++j) {
          const double bij = b_.at(i + 1, j + 1);
          if (bij != 0.0) bsum += bij * abs_pow(s[j], p + 1.0);
        }
        out[i] = signed_pow(s[i], p) * bsum - lambda_[i] * s[i];
      }
      return;
  }
}

double ForcingSpec::implicit_coeff(int i, double p, const double* s, double eps) const {
  switch (family_) {
    case ForcingFamily::Zero:
      return 0.0;
    case ForcingFamily::Linear:
      return -lambda_[i - 1];
    case ForcingFamily::GroupedPower: {
      double bsum = 0.0;
      for (int j = 0; j < d_; ++j) {
        const double bij = b_.at(i, j + 1);
        if (bij != 0.0) bsum += bij * abs_pow(s[j], p + 1.0);
      }
      const double si = s[i - 1];
      const double reg = std::pow(si * si + eps * eps, 0.5 * (p - 1.0));
      return reg * bsum - lambda_[i - 1];
    }
  }
  return 0.0;
}

double ForcingSpec::quotient_bound(double p, double S) const {
  switch (family_) {
    case ForcingFamily::Zero:
      return 0.0;
    case ForcingFamily::Linear: {
      double m = 0.0;
      for (double l : lambda_) m = std::max(m, std::fabs(l));
      return m;
    }
    case ForcingFamily::GroupedPower: {
      double m = 0.0;
      for (int i = 1; i <= d_; ++i) {
        double bs = 0.0;
        for (int j = 1; j <= d_; ++j) bs += b_.at(i, j);
        m = std::max(m, std::pow(std::max(S, 1e-300), 2.0 * p) * bs +
                            std::fabs(lambda_[i - 1]));
      }
      return m;
    }
  }
  return 0.0;
}

std::vector<double> evaluate_forcing(const ForcingSpec& forcing, double p,
                                     const Pt& x, const std::vector<double>& s) {
  require(static_cast<int>(s.size()) == forcing.d(), ErrorKind::ShapeMismatch,
          "state size must equal d");
  std::vector<double> out(s.size(), 0.0);
  forcing.eval(p, x, s.data(), out.data());
  return out;
}

}  // namespace seglab
