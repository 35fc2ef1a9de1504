#include "ncjulia/fixtures.h"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "ncjulia/errors.h"

namespace ncjulia {
namespace {

void RequirePair(const MatrixTuple& z, const char* op) {
  if (z.d() != 2) {
    throw DimensionError(std::string(op) + ": expected a pair, got " + std::to_string(z.d()) +
                         " components");
  }
}

std::vector<std::vector<FreePolynomial>> ZeroGrid(int d, int rows, int cols) {
  return std::vector<std::vector<FreePolynomial>>(
      static_cast<std::size_t>(rows),
      std::vector<FreePolynomial>(static_cast<std::size_t>(cols), FreePolynomial(d)));
}

int ParseParameter(const std::string& name, std::size_t colon) {
  int value = 0;
  const char* first = name.data() + colon + 1;
  const char* last = name.data() + name.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 1 || value > 64) {
    throw ParseError("bad fixture parameter in '" + name + "'", colon + 1);
  }
  return value;
}

}  // namespace

DeltaMatrix PolydiskDelta(int d) {
  if (d < 1) throw DimensionError("PolydiskDelta: d must be >= 1");
  auto grid = ZeroGrid(d, d, d);
  for (int r = 0; r < d; ++r) grid[r][r] = FreePolynomial::Variable(d, r);
  return DeltaMatrix(d, std::move(grid));
}

DeltaMatrix BallDelta(int d) {
  if (d < 1) throw DimensionError("BallDelta: d must be >= 1");
  auto grid = ZeroGrid(d, d, 1);
  for (int r = 0; r < d; ++r) grid[r][0] = FreePolynomial::Variable(d, r);
  return DeltaMatrix(d, std::move(grid));
}

DeltaMatrix CartanDelta(int j) {
  if (j < 1) throw DimensionError("CartanDelta: J must be >= 1");
  const int d = j * (j + 1) / 2;
  auto grid = ZeroGrid(d, j, j);
  int var = 0;
  for (int a = 0; a < j; ++a) {
    for (int b = a; b < j; ++b, ++var) {
      grid[a][b] = FreePolynomial::Variable(d, var);
      grid[b][a] = FreePolynomial::Variable(d, var);
    }
  }
  return DeltaMatrix(d, std::move(grid));
}

Realization ExampleH1Realization() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix a = ComplexMatrix::Zero(1, 1);
  ComplexMatrix b(1, 2);
  b << s, s;
  ComplexMatrix c(2, 1);
  c << s, s;
  ComplexMatrix d(2, 2);
  d << 0.5, -0.5, -0.5, 0.5;
  return Realization(1, 2, a, b, c, d);
}

NcFunctionHandle ExampleH1() { return NcFunctionHandle(ExampleH1Realization(), PolydiskDelta(2)); }

NcFunctionHandle DiskIdentity() {
  ComplexMatrix one = ComplexMatrix::Ones(1, 1);
  ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
  return NcFunctionHandle(Realization(1, 1, zero, one, one, zero), PolydiskDelta(1));
}

Complex ExampleF(Complex z, Complex w) {
  const Complex denom = 2.0 - z - w;
  if (std::abs(denom) < 1e-300) throw PreconditionError("ExampleF: pole at z + w = 2");
  return (z + w - 2.0 * w * z) / denom;
}

ComplexMatrix ExamplePhiClosed(const MatrixTuple& z) {
  RequirePair(z, "ExamplePhiClosed");
  const int n = z.n();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix diff = z[0] - z[1];
  const ComplexMatrix inv = CheckedInverse(2.0 * id - z[0] - z[1]);
  return 0.5 * (z[0] + z[1]) + 0.5 * diff * inv * diff;
}

ComplexMatrix ExamplePsi(const MatrixTuple& z) {
  RequirePair(z, "ExamplePsi");
  const int n = z.n();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix numer = z[0] + z[1] - z[0] * z[1] - z[1] * z[0];
  return numer * CheckedInverse(2.0 * id - z[0] - z[1]);
}

ComplexMatrix ExampleEta(const MatrixTuple& h) {
  RequirePair(h, "ExampleEta");
  const ComplexMatrix diff = h[0] - h[1];
  const ComplexMatrix inv = CheckedInverse(h[0] + h[1]);
  return 0.5 * (h[0] + h[1]) - 0.5 * diff * inv * diff;
}

std::vector<std::string> FixtureNames() {
  return {"example-h1", "disk-identity", "polydisk:<d>", "ball:<d>", "cartan:<J>"};
}

DeltaMatrix DeltaByName(const std::string& name) {
  const std::size_t colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string family = name.substr(0, colon);
    if (family == "polydisk") return PolydiskDelta(ParseParameter(name, colon));
    if (family == "ball") return BallDelta(ParseParameter(name, colon));
    if (family == "cartan") return CartanDelta(ParseParameter(name, colon));
  }
  throw ParseError("unknown delta '" + name + "'");
}

MatrixTuple RandomPolydiskBoundaryPoint(int d, int n, Rng& rng) {
  std::vector<ComplexMatrix> components;
  for (int r = 0; r < d; ++r) components.push_back(RandomUnitary(n, rng));
  return MatrixTuple(std::move(components));
}

MatrixTuple RandomBallBoundaryPoint(int d, int n, Rng& rng) {
  const ComplexMatrix column = RandomUnitary(d * n, rng).leftCols(n);
  std::vector<ComplexMatrix> components;
  for (int r = 0; r < d; ++r) components.push_back(column.middleRows(r * n, n));
  return MatrixTuple(std::move(components));
}

MatrixTuple RandomCartanBoundaryPoint(int j, int n, Rng& rng) {
  const ComplexMatrix v = RandomUnitary(j, rng);
  const ComplexMatrix symmetric = v * v.transpose();
  const ComplexMatrix q = RandomUnitary(n, rng);
  std::vector<ComplexMatrix> components;
  for (int a = 0; a < j; ++a) {
    for (int b = a; b < j; ++b) components.push_back(symmetric(a, b) * q);
  }
  return MatrixTuple(std::move(components));
}

MatrixTuple RandomBoundaryPoint(const std::string& delta_name, int n, Rng& rng) {
  const std::size_t colon = delta_name.find(':');
  if (colon != std::string::npos) {
    const std::string family = delta_name.substr(0, colon);
    if (family == "polydisk")
      return RandomPolydiskBoundaryPoint(ParseParameter(delta_name, colon), n, rng);
    if (family == "ball") return RandomBallBoundaryPoint(ParseParameter(delta_name, colon), n, rng);
    if (family == "cartan")
      return RandomCartanBoundaryPoint(ParseParameter(delta_name, colon), n, rng);
  }
  throw ParseError("no boundary sampler for delta '" + delta_name + "'");
}

Fixture GetFixture(const std::string& name) {
  if (name == "example-h1") {
    return {name,
            "rational inner function (z+w-2wz)/(2-z-w) on the bidisk, extended to the nc "
            "polydisk by a 3x3 unitary colligation",
            PolydiskDelta(2),
            ExampleH1Realization(),
            {"example-f", "example-phi", "example-psi", "example-eta"}};
  }
  if (name == "disk-identity") {
    const NcFunctionHandle h = DiskIdentity();
    return {name, "phi(x) = x on the noncommutative unit disk", h.delta(), h.realization(), {}};
  }
  const std::size_t colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string family = name.substr(0, colon);
    if (family == "polydisk" || family == "ball" || family == "cartan") {
      return {name, family + " domain (delta only)", DeltaByName(name), std::nullopt, {}};
    }
  }
  throw ParseError("unknown fixture '" + name + "'");
}

}  // namespace ncjulia
