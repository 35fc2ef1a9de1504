#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncjulia/domain.h"
#include "ncjulia/matrix_tuple.h"
#include "ncjulia/realization.h"

namespace ncjulia {

/// Diagonal delta with the coordinates on the diagonal; G_delta is the
/// noncommutative polydisk.
DeltaMatrix PolydiskDelta(int d);

/// Column (x0, ..., x{d-1})^T, zero-padded to d x d; G_delta is the set of
/// column contractions.
DeltaMatrix BallDelta(int d);

/// Symmetric J x J embedding of d = J(J+1)/2 variables, upper triangle
/// row-major: for J = 2, [[x0, x1], [x1, x2]].
DeltaMatrix CartanDelta(int j);

/// Unitary colligation A = 0, B = (1/sqrt2, 1/sqrt2), C = B^T,
/// D = [[1/2, -1/2], [-1/2, 1/2]] over the bidisk (dim E = 1, J = 2).
Realization ExampleH1Realization();
NcFunctionHandle ExampleH1();

/// phi(x) = x on the unit disk: colligation [[0, 1], [1, 0]].
NcFunctionHandle DiskIdentity();

/// f(z, w) = (z + w - 2wz) / (2 - z - w). Throws PreconditionError at the
/// pole z + w = 2.
Complex ExampleF(Complex z, Complex w);

/// 1/2 (Z1 + Z2) + 1/2 (Z1 - Z2)(2 - Z1 - Z2)^{-1}(Z1 - Z2).
ComplexMatrix ExamplePhiClosed(const MatrixTuple& z);

/// (Z1 + Z2 - Z1 Z2 - Z2 Z1)(2I - Z1 - Z2)^{-1}: another nc extension of f
/// that is not in the Schur class.
ComplexMatrix ExamplePsi(const MatrixTuple& z);

/// Closed-form directional derivative of ExamplePhiClosed at (I, I):
/// 1/2 (H1 + H2) - 1/2 (H1 - H2)(H1 + H2)^{-1}(H1 - H2).
ComplexMatrix ExampleEta(const MatrixTuple& h);

struct Fixture {
  std::string name;
  std::string description;
  DeltaMatrix delta;
  std::optional<Realization> realization;
  std::vector<std::string> closed_forms;
};

/// Names understood by GetFixture; parameterized families are listed with
/// a placeholder (e.g. "polydisk:<d>").
std::vector<std::string> FixtureNames();

/// Resolves "example-h1", "disk-identity", "polydisk:<d>", "ball:<d>",
/// "cartan:<J>". Throws ParseError for unknown names.
Fixture GetFixture(const std::string& name);

/// Delta by built-in name ("polydisk:<d>", "ball:<d>", "cartan:<J>").
DeltaMatrix DeltaByName(const std::string& name);

/// Random distinguished-boundary points at level n: a tuple of Haar
/// unitaries for the polydisk; a Haar column isometry split into d blocks
/// for the ball; (U_ab Q) with U a symmetric unitary and Q a Haar unitary
/// for the Cartan domain.
MatrixTuple RandomPolydiskBoundaryPoint(int d, int n, Rng& rng);
MatrixTuple RandomBallBoundaryPoint(int d, int n, Rng& rng);
MatrixTuple RandomCartanBoundaryPoint(int j, int n, Rng& rng);

/// Dispatches on a built-in delta name. Throws ParseError for names
/// without a boundary sampler.
MatrixTuple RandomBoundaryPoint(const std::string& delta_name, int n, Rng& rng);

}  // namespace ncjulia
