#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"
#include "ncjulia/realization.h"

namespace ncjulia {

struct DerivativeOptions {
  double t_start = 0.5;    // first candidate for t0, halved until admissible
  int ladder_length = 14;  // t_k = t0 2^-k, k < ladder_length
  double t_min = 1e-8;     // no step below this is evaluated
  double convergence_tol = 1e-6;
  bool require_gamma = true;  // reject H outside Gamma(T)
  double gamma_beta = 1e-12;
};

struct DirectionalDerivativeResult {
  explicit DirectionalDerivativeResult(MatrixTuple direction) : h(std::move(direction)) {}

  MatrixTuple h;
  ComplexMatrix eta;
  std::vector<double> steps;
  // ||D(t_{k+1}) - D(t_k)|| for the difference quotients D(t).
  std::vector<double> increments;
  bool in_gamma = false;
  double beta = 0.0;  // -lambda_max of Re[delta(T)* grad delta(T)[H]]
  double t0 = 0.0;
  bool converged = false;
  bool partial = false;  // the ladder was cut short by t_min
};

/// eta(H) = lim_{t -> 0+} (phi(T + tH) - W) / t, Richardson-extrapolated
/// over t_k = t0 2^-k. t0 is halved from options.t_start until the whole
/// ladder lies in G_delta. Throws PreconditionError when H is not in
/// Gamma(T) (if required) or no admissible t0 >= t_min exists.
DirectionalDerivativeResult EtaNumeric(const NcFunctionHandle& h, const MatrixTuple& t,
                                       const ComplexMatrix& w, const MatrixTuple& direction,
                                       const DerivativeOptions& options = {});

/// ||eta(sH) - s eta(H)||, with eta(sH) from a fresh run.
double HomogeneityCheck(const NcFunctionHandle& h, const MatrixTuple& t, const ComplexMatrix& w,
                        const DirectionalDerivativeResult& result, double s,
                        const DerivativeOptions& options = {});

/// ||eta_{t0}(H) - eta_{t0/3}(H)|| for two ladders that share no points.
double LadderIndependence(const NcFunctionHandle& h, const MatrixTuple& t, const ComplexMatrix& w,
                          const MatrixTuple& direction, const DerivativeOptions& options = {});

struct ScalarDerivative {
  Complex value;
  std::vector<double> steps;
  std::vector<double> increments;
  bool converged = false;
};

/// Derivative at 0+ of f(t) = <phi(T + tK) v, W v>, where K must lie in the
/// transverse cone Delta(T) and v defaults to e_1.
ScalarDerivative ScalarAngularDerivative(const NcFunctionHandle& h, const MatrixTuple& t,
                                         const ComplexMatrix& w, const MatrixTuple& direction,
                                         std::optional<ComplexVector> v = std::nullopt,
                                         const DerivativeOptions& options = {});

/// <eta v, W v>.
Complex EtaPairing(const ComplexMatrix& eta, const ComplexMatrix& w, const ComplexVector& v);

}  // namespace ncjulia
