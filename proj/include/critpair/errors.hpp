#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace critpair {

using cplx = std::complex<double>;

/// Evaluation point lies on (or numerically on) the support of a measure.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation point coincides with a root of the polynomial.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Sherman-Morrison denominator of the reduced outlier function vanished.
class NearSingularError : public SingularError {
 public:
  using SingularError::SingularError;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver hit its sweep cap. Carries the iterates that did not
/// meet the stopping rule together with their normalized residuals.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<cplx> unconverged,
                   std::vector<double> residuals)
      : std::runtime_error(what),
        unconverged_(std::move(unconverged)),
        residuals_(std::move(residuals)) {}

  const std::vector<cplx>& unconverged() const noexcept { return unconverged_; }
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<cplx> unconverged_;
  std::vector<double> residuals_;
};

}  // namespace critpair
