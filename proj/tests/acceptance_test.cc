// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ncjulia/boundary.h"
#include "ncjulia/cli.h"
#include "ncjulia/derivative.h"
#include "ncjulia/domain.h"
#include "ncjulia/errors.h"
#include "ncjulia/fixtures.h"
#include "ncjulia/free_polynomial.h"
#include "ncjulia/realization.h"
#include "test_util.h"

namespace ncjulia {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Millis(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string Format(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

void Append(Outcome& o, const std::string& part) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += part;
}

void Require(Outcome& o, bool condition, const std::string& part) {
  Append(o, part);
  if (!condition) o.pass = false;
}

ComplexMatrix Identity(int n) { return ComplexMatrix::Identity(n, n); }

MatrixTuple IdentityPair(int n) { return MatrixTuple::ScalarMultiplesOfIdentity({1.0, 1.0}, n); }

// ---------------------------------------------------------------- 1

Outcome PsiCounterexample() {
  Outcome o;
  ComplexMatrix z1 = ComplexMatrix::Zero(2, 2), z2 = ComplexMatrix::Zero(2, 2);
  z1(0, 0) = 1.0;
  z1(1, 1) = -1.0;
  z2(0, 1) = 1.0;
  z2(1, 0) = 1.0;
  const MatrixTuple z({z1, z2});
  ComplexMatrix expected(2, 2);
  expected << 2.0, 1.0, 1.0, 0.0;

  const auto start = Clock::now();
  const ComplexMatrix psi = ExamplePsi(z);
  const double norm = OperatorNorm(psi);
  const double ms = Millis(start);

  Require(o, psi == expected,
          psi == expected ? "psi(Z) == [[2,1],[1,0]] exactly" : "psi(Z) differs");
  const double err = std::abs(norm - (1.0 + std::sqrt(2.0)));
  Require(o, err <= 1e-12, Format("| ||psi|| - (1+sqrt2) | = %.2e", err));
  Require(o, ms < 1.0, Format("%.3f ms", ms));
  return o;
}

// ---------------------------------------------------------------- 2

Outcome ExampleAlpha() {
  Outcome o;
  const NcFunctionHandle h = ExampleH1();
  const auto start = Clock::now();
  double worst = 0.0;
  bool converged = true;
  for (int n = 1; n <= 3; ++n) {
    const AlphaEstimate a = EstimateAlpha(h, RadialSequence(IdentityPair(n)));
    worst = std::max(worst, std::abs(a.alpha - 1.0));
    converged = converged && a.converged;
  }
  const double ms = Millis(start);
  Require(o, worst <= 1e-8, Format("max |alpha - 1| = %.2e over n = 1, 2, 3", worst));
  Require(o, converged, converged ? "converged" : "not converged");
  Require(o, ms < 100.0, Format("%.1f ms", ms));
  return o;
}

// ---------------------------------------------------------------- 3

Outcome ThreeWayOracle() {
  Outcome o;
  const NcFunctionHandle h = ExampleH1();
  Rng rng(303);
  const auto start = Clock::now();
  double worst_neumann_excess = -std::numeric_limits<double>::infinity();
  double worst_closed = 0.0;
  int count = 0;
  for (int n : {1, 2, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      const MatrixTuple z = testing::RandomContractiveTuple(2, n, rng);
      const ComplexMatrix direct = EvalPhi(h, z);
      const int terms = NeumannTermsFor(h, z, 1e-13);
      const NeumannEvaluation ne = EvalPhiNeumann(h, z, terms);
      worst_neumann_excess =
          std::max(worst_neumann_excess, OperatorNorm(direct - ne.phi) - ne.truncation_bound);
      worst_closed = std::max(worst_closed, OperatorNorm(direct - ExamplePhiClosed(z)));
      ++count;
    }
  }
  const double ms = Millis(start);
  Require(o, worst_neumann_excess <= 1e-10,
          Format("max (direct - neumann) - truncation bound = %.2e", worst_neumann_excess));
  Require(o, worst_closed <= 1e-9, Format("max |direct - closed form| = %.2e", worst_closed));
  Append(o, std::to_string(count) + " pairs");
  Require(o, ms < 10000.0, Format("%.0f ms", ms));
  return o;
}

// ---------------------------------------------------------------- 4

Outcome ModelIdentity() {
  Outcome o;
  const std::vector<std::string> domains{"polydisk:1", "polydisk:2", "polydisk:3",
                                         "ball:2",     "ball:3",     "cartan:2"};
  Rng rng(404);
  const auto start = Clock::now();
  double worst = 0.0;
  double control_min = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string& name = domains[static_cast<std::size_t>(trial) % domains.size()];
    const DeltaMatrix delta = DeltaByName(name);
    const int dim_e = testing::UniformInt(rng, 1, 3);
    const int n = testing::UniformInt(rng, 1, 3);
    const Realization r = RandomRealization(dim_e, delta.J(), 4000 + trial);
    const NcFunctionHandle h(r, delta);
    const auto x = RandomInteriorPoint(delta, n, rng, 0.05);
    const auto y = RandomInteriorPoint(delta, n, rng, 0.05);
    if (!x || !y) {
      o.pass = false;
      Append(o, "no interior point for " + name);
      return o;
    }
    worst = std::max(worst, ModelResidual(h, *x, *y));
    ++checked;

    // Negative control on every tenth specimen: D scaled by 0.5 breaks
    // the isometry. D only acts through delta(x), so the control point is
    // x rescaled to ||delta(x)|| = 0.9 (every delta here is linear).
    if (trial % 10 == 0) {
      const Realization bad =
          Realization::Unchecked(dim_e, delta.J(), r.A(), r.B(), r.C(), 0.5 * r.D());
      const NcFunctionHandle hb(bad, delta);
      const MatrixTuple xc = *x * Complex(0.9 / OperatorNorm(EvalDelta(delta, *x)));
      control_min = std::min(control_min, ModelResidual(hb, xc, xc));
    }
  }
  const double ms = Millis(start);
  Require(o, worst <= 1e-9,
          Format("max residual %.2e", worst) + " over " + std::to_string(checked) + " pairs");
  Require(o, control_min > 1e-3,
          Format("perturbed-colligation min residual %.2e at ||delta(x)|| = 0.9", control_min));
  Require(o, ms < 30000.0, Format("%.0f ms", ms));
  return o;
}

// ---------------------------------------------------------------- 5

Outcome JuliaInequality() {
  Outcome o;
  const NcFunctionHandle h = ExampleH1();
  Rng rng(505);
  int violations = 0, skipped = 0;
  double worst_ratio = 0.0;
  const MatrixTuple t = IdentityPair(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const MatrixTuple z = testing::RandomContractiveTuple(2, 2, rng, 0.999);
    const JuliaCheck c = JuliaInequalityCheck(h, t, Identity(2), 1.0, z);
    if (c.skipped) {
      ++skipped;
      continue;
    }
    if (!c.holds) ++violations;
    worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
  }
  Require(o, violations == 0,
          std::to_string(violations) + " violations in 1000 (n = 2, skipped " +
              std::to_string(skipped) + Format(", max lhs/rhs %.6f)", worst_ratio));
  // Equality for Z1 = Z2 holds at the scalar level, where
  // ||I - Z* Z|| = 1 - ||Z||^2.
  double worst_gap = 0.0;
  const MatrixTuple t1 = IdentityPair(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex z = testing::RandomDiskPoint(rng, 0.999);
    const JuliaCheck c =
        JuliaInequalityCheck(h, t1, Identity(1), 1.0, MatrixTuple::Scalars({z, z}));
    worst_gap = std::max(worst_gap, std::abs(c.lhs - c.rhs));
  }
  Require(o, worst_gap <= 1e-10,
          Format("equality case max |lhs - rhs| = %.2e on 50 points", worst_gap));
  return o;
}

// ---------------------------------------------------------------- 6

Outcome UTIdentities() {
  Outcome o;
  const NcFunctionHandle h = ExampleH1();
  const MatrixTuple t = MatrixTuple::Scalars({1.0, 1.0});
  const UTSolution s = SolveUT(h, t);
  ComplexMatrix expected(2, 1);
  expected << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const double u_err = OperatorNorm(s.u_t - expected);
  Require(o, u_err <= 1e-10, Format("|u_T - (1/sqrt2, 1/sqrt2)| = %.2e", u_err));
  Require(o, s.range_residual <= 1e-10, Format("range residual %.2e", s.range_residual));
  const AlphaEstimate a = EstimateAlpha(h, RadialSequence(t));
  const double gap = std::abs(s.u_t.squaredNorm() - a.alpha);
  Require(o, gap <= 1e-6, Format("| ||u_T||^2 - alpha | = %.2e", gap));
  Rng rng(606);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixTuple z = testing::RandomContractiveTuple(2, 1, rng, 0.999);
    worst = std::max(worst, BoundaryModelResidual(h, t, Identity(1), s.u_t, z));
  }
  Require(o, worst <= 1e-8, Format("max boundary-model residual %.2e on 100 Z", worst));
  return o;
}

// ---------------------------------------------------------------- 7

Outcome DirectionalDerivative() {
  Outcome o;
  const NcFunctionHandle h = ExampleH1();
  Rng rng(707);
  double worst_rel = 0.0, worst_hom = 0.0, worst_ladder = 0.0;
  int not_converged = 0;
  for (int n = 1; n <= 3; ++n) {
    const MatrixTuple t = IdentityPair(n);
    const ComplexMatrix w = Identity(n);
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixTuple dir = testing::RandomInwardDirection(2, n, rng);
      const DirectionalDerivativeResult r = EtaNumeric(h, t, w, dir);
      if (!r.converged) ++not_converged;
      worst_rel = std::max(worst_rel, testing::RelativeError(r.eta, ExampleEta(dir)));
      for (double s : {0.3, 0.5, 1.0}) {
        worst_hom = std::max(worst_hom, HomogeneityCheck(h, t, w, r, s));
      }
      worst_ladder = std::max(worst_ladder, LadderIndependence(h, t, w, dir));
    }
  }
  Require(o, worst_rel <= 1e-6, Format("max relative error vs closed form %.2e", worst_rel));
  Require(o, worst_hom <= 1e-6, Format("max homogeneity defect %.2e", worst_hom));
  Require(o, worst_ladder <= 1e-6, Format("max ladder defect %.2e", worst_ladder));
  Append(o, std::to_string(not_converged) + " of 300 ladders flagged unconverged");
  return o;
}

// ---------------------------------------------------------------- 8

double Relative(const ComplexMatrix& a, const ComplexMatrix& b) {
  return OperatorNorm(a - b) / std::max(1.0, OperatorNorm(b));
}

Outcome NcAxioms() {
  Outcome o;
  Rng rng(808);
  double poly_sum = 0.0, poly_sim = 0.0;
  double delta_sum = 0.0, delta_sim = 0.0, delta_norm_sim = 0.0;
  double phi_sum = 0.0, phi_sim = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = testing::UniformInt(rng, 1, 3);
    const int n = testing::UniformInt(rng, 1, 3);
    const int m = testing::UniformInt(rng, 1, 3);
    const MatrixTuple x = testing::RandomTuple(d, n, rng, 0.5);
    const MatrixTuple y = testing::RandomTuple(d, m, rng, 0.5);
    const ComplexMatrix s = testing::RandomInvertible(n, rng);
    const ComplexMatrix s_inv = s.inverse();

    const FreePolynomial p = testing::RandomPolynomial(d, 4, 6, rng);
    poly_sum = std::max(poly_sum, Relative(EvalPoly(p, DirectSum(x, y)),
                                           BlockDiagonal(EvalPoly(p, x), EvalPoly(p, y))));
    poly_sim =
        std::max(poly_sim, Relative(EvalPoly(p, Similarity(x, s)), s_inv * EvalPoly(p, x) * s));

    const DeltaMatrix delta = testing::RandomDelta(d, testing::UniformInt(rng, 1, 3),
                                                   testing::UniformInt(rng, 1, 3), 3, rng);
    const double nx = OperatorNorm(EvalDelta(delta, x));
    const double ny = OperatorNorm(EvalDelta(delta, y));
    const double nxy = OperatorNorm(EvalDelta(delta, DirectSum(x, y)));
    delta_sum = std::max(delta_sum, std::abs(nxy - std::max(nx, ny)) / std::max(1.0, nxy));
    const ComplexMatrix lift = Kron(Identity(delta.J()), s);
    delta_sim = std::max(delta_sim, Relative(EvalDelta(delta, Similarity(x, s)),
                                             lift.inverse() * EvalDelta(delta, x) * lift));
    const ComplexMatrix u = RandomUnitary(n, rng);
    delta_norm_sim =
        std::max(delta_norm_sim, std::abs(OperatorNorm(EvalDelta(delta, Similarity(x, u))) - nx) /
                                     std::max(1.0, nx));

    // phi needs points of G_delta: polydisk at margin 0.3, similarity by a
    // near-unitary keeps s^-1 x s inside.
    const NcFunctionHandle h(RandomRealization(testing::UniformInt(rng, 1, 2), d, 8000 + trial),
                             PolydiskDelta(d));
    const MatrixTuple px = testing::RandomContractiveTuple(d, n, rng, 0.7);
    const MatrixTuple py = testing::RandomContractiveTuple(d, m, rng, 0.7);
    phi_sum = std::max(phi_sum, Relative(EvalPhi(h, DirectSum(px, py)),
                                         BlockDiagonal(EvalPhi(h, px), EvalPhi(h, py))));
    const ComplexMatrix near_unitary = testing::RandomInvertible(n, rng, 0.1);
    const MatrixTuple spx = Similarity(px, near_unitary);
    if (InGDelta(PolydiskDelta(d), spx).inside) {
      phi_sim = std::max(phi_sim, Relative(EvalPhi(h, spx),
                                           near_unitary.inverse() * EvalPhi(h, px) * near_unitary));
    }
  }
  const double worst =
      std::max({poly_sum, poly_sim, delta_sum, delta_sim, delta_norm_sim, phi_sum, phi_sim});
  Require(o, worst <= 1e-8,
          Format("poly %.1e", std::max(poly_sum, poly_sim)) +
              Format(", delta %.1e", std::max({delta_sum, delta_sim, delta_norm_sim})) +
              Format(", phi %.1e", std::max(phi_sum, phi_sim)) + " (max over 200 instances each)");
  return o;
}

// ---------------------------------------------------------------- 9

Outcome GradientVsFiniteDifference() {
  Outcome o;
  Rng rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = testing::UniformInt(rng, 1, 3);
    const int n = testing::UniformInt(rng, 1, 3);
    const DeltaMatrix delta = testing::RandomDelta(d, testing::UniformInt(rng, 1, 3),
                                                   testing::UniformInt(rng, 1, 3), 4, rng);
    const MatrixTuple t = testing::RandomTuple(d, n, rng, 0.5);
    const MatrixTuple dir = testing::RandomTuple(d, n, rng, 0.5);
    // Fourth-order central stencil.
    const double step = 1e-3;
    const auto at = [&](double s) { return EvalDeltaRect(delta, t + s * dir); };
    const ComplexMatrix fd =
        (-at(2 * step) + 8.0 * at(step) - 8.0 * at(-step) + at(-2 * step)) / (12.0 * step);
    const ComplexMatrix exact = DeltaDerivativeRect(delta, t, dir);
    worst = std::max(worst, OperatorNorm(exact - fd) / std::max(OperatorNorm(exact), 1e-12));
  }
  Require(o, worst <= 1e-6,
          Format("max relative error %.2e on 200 (delta, T, H), degree <= 4", worst));
  return o;
}

// ---------------------------------------------------------------- 10

Outcome Parser() {
  Outcome o;
  Rng rng(1010);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = testing::UniformInt(rng, 1, 4);
    const FreePolynomial p = testing::RandomPolynomial(d, 5, 6, rng);
    try {
      if (!(ParsePoly(FormatPoly(p), d) == p)) ++mismatches;
    } catch (const ParseError&) {
      ++mismatches;
    }
  }
  Require(o, mismatches == 0, std::to_string(mismatches) + " round-trip mismatches in 1000");
  for (const char* text : {"x5", "x0 + * x1", "x0^-1"}) {
    std::ostringstream out, err;
    const int code =
        RunCli({"eval", "--point", R"({"scalars": [0.1, 0.2]})", "--poly", text}, out, err);
    Require(o, code == 2, std::string("'") + text + "' exit " + std::to_string(code));
  }
  return o;
}

// ---------------------------------------------------------------- 11

struct TfaeInstance {
  std::string label;
  NcFunctionHandle handle;
  MatrixTuple t;
};

Outcome TfaeComparability() {
  Outcome o;
  std::vector<TfaeInstance> instances;
  instances.push_back({"example (1,1)", ExampleH1(), MatrixTuple::Scalars({1.0, 1.0})});
  instances.push_back({"example (1,-1)", ExampleH1(), MatrixTuple::Scalars({1.0, -1.0})});
  instances.push_back({"example (I2,I2)", ExampleH1(), IdentityPair(2)});
  Rng rng(1111);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    instances.push_back({"polydisk",
                         NcFunctionHandle(RandomRealization(2, 2, 11000 + trial), PolydiskDelta(2)),
                         RandomPolydiskBoundaryPoint(2, n, rng)});
    instances.push_back({"cartan",
                         NcFunctionHandle(RandomRealization(1, 2, 12000 + trial), CartanDelta(2)),
                         RandomCartanBoundaryPoint(2, n, rng)});
  }
  int bpoints = 0, comparable = 0, equivalent = 0, failures = 0;
  for (const TfaeInstance& inst : instances) {
    if (!IsBPointRangeTest(inst.handle, inst.t).bpoint) continue;
    ++bpoints;
    try {
      const TfaeReport r = ComputeTfae(inst.handle, RadialSequence(inst.t));
      if (r.comparable_within_2c) ++comparable;
      const bool gram_bounded = std::isfinite(r.sup_gram_ratio);
      const bool u_bounded = std::isfinite(r.sup_u_norm_sq);
      if (gram_bounded == u_bounded && r.u_bound_implies_gram_bound &&
          r.gram_bound_implies_u_bound) {
        ++equivalent;
      }
    } catch (const Error& e) {
      ++failures;
      Append(o, inst.label + ": " + e.what());
    }
  }
  Require(
      o, bpoints == static_cast<int>(instances.size()),
      std::to_string(bpoints) + "/" + std::to_string(instances.size()) + " instances are B-points");
  Require(o, comparable == bpoints && failures == 0, std::to_string(comparable) + " within 2c");
  Require(o, equivalent == bpoints,
          std::to_string(equivalent) + " with (iii) bounded <=> (i) bounded");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace ncjulia

int main() {
  using ncjulia::Criterion;
  using ncjulia::Outcome;
  const std::vector<Criterion> criteria{
      {1, "psi counterexample", ncjulia::PsiCounterexample},
      {2, "example Julia quotient alpha = 1", ncjulia::ExampleAlpha},
      {3, "three-way phi oracle agreement", ncjulia::ThreeWayOracle},
      {4, "model identity", ncjulia::ModelIdentity},
      {5, "nc Julia inequality", ncjulia::JuliaInequality},
      {6, "u_T identities", ncjulia::UTIdentities},
      {7, "directional derivative", ncjulia::DirectionalDerivative},
      {8, "nc-axiom suite", ncjulia::NcAxioms},
      {9, "analytic vs finite-difference gradient of delta", ncjulia::GradientVsFiniteDifference},
      {10, "parser round trip and error exits", ncjulia::Parser},
      {11, "TFAE comparability", ncjulia::TfaeComparability},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
