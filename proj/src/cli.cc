#include "ncjulia/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ncjulia/boundary.h"
#include "ncjulia/derivative.h"
#include "ncjulia/domain.h"
#include "ncjulia/errors.h"
#include "ncjulia/fixtures.h"
#include "ncjulia/json_io.h"
#include "ncjulia/realization.h"

namespace ncjulia {
namespace {

struct RunConfig {
  std::string format = "json";
  std::uint64_t seed = 1;
  double isometry_tol = 1e-8;
  double residual_tol = 1e-9;
  double rank_tol = 1e-10;
};

struct FunctionSource {
  std::string fixture;
  std::string delta;
  std::string realization;
};

// Inline JSON when the argument starts like JSON, a file when one exists
// at that path, otherwise a built-in name.
Json LoadArgument(const std::string& arg) {
  const std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty argument");
  const char c = arg[first];
  if (c == '{' || c == '[' || c == '"') return ParseJsonText(arg);
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return ReadJsonFile(arg);
  return Json(arg);
}

NcFunctionHandle LoadHandle(const FunctionSource& source, double isometry_tol) {
  if (!source.fixture.empty()) {
    Fixture fixture = GetFixture(source.fixture);
    if (!fixture.realization) {
      throw ParseError("fixture '" + source.fixture + "' has no realization; pass --realization");
    }
    return NcFunctionHandle(std::move(*fixture.realization), std::move(fixture.delta));
  }
  if (source.delta.empty() || source.realization.empty()) {
    throw ParseError("give --fixture or both --delta and --realization");
  }
  const DeltaMatrix delta = DeltaFromJson(LoadArgument(source.delta));
  const Json rj = LoadArgument(source.realization);
  Realization r = RealizationFromJson(rj);
  if (r.IsometryDefect() > isometry_tol) {
    throw PreconditionError("realization: colligation is not an isometry within " +
                            std::to_string(isometry_tol));
  }
  return NcFunctionHandle(std::move(r), delta);
}

void AddSourceOptions(CLI::App* cmd, FunctionSource* source) {
  cmd->add_option("--fixture", source->fixture, "built-in fixture (see `fixtures`)");
  cmd->add_option("--delta", source->delta, "delta: JSON file, inline JSON or built-in name");
  cmd->add_option("--realization", source->realization,
                  "realization: JSON file, inline JSON or built-in name");
}

std::string FormatReal(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bool IsMatrixJson(const Json& j) {
  return j.is_object() && j.size() == 3 && j.contains("rows") && j.contains("cols") &&
         j.contains("data");
}

void WriteText(const Json& j, const std::string& key, std::ostream& out) {
  if (IsMatrixJson(j)) {
    const int rows = j["rows"].get<int>();
    const int cols = j["cols"].get<int>();
    out << key << " = " << rows << "x" << cols << " matrix\n";
    for (int r = 0; r < rows; ++r) {
      out << "  ";
      for (int c = 0; c < cols; ++c) {
        const Complex z = ComplexFromJson(j["data"][static_cast<std::size_t>(r * cols + c)]);
        out << (c > 0 ? "  " : "") << FormatReal(z.real()) << (z.imag() < 0 ? " - " : " + ")
            << FormatReal(std::abs(z.imag())) << "i";
      }
      out << "\n";
    }
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) WriteText(v, key.empty() ? k : key + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      WriteText(j[i], key + "[" + std::to_string(i) + "]", out);
    }
  } else if (j.is_number_float()) {
    out << key << " = " << FormatReal(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    out << key << " = " << j.get<std::string>() << "\n";
  } else {
    out << key << " = " << j.dump() << "\n";
  }
}

void Emit(const Json& report, const RunConfig& config, std::ostream& out) {
  if (config.format == "text") {
    WriteText(report, "", out);
  } else {
    out << report.dump(2) << "\n";
  }
}

std::uint64_t SeedFromEnvironment(std::uint64_t fallback) {
  const char* env = std::getenv("NCJULIA_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t seed = 0;
  const char* last = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, last, seed);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(std::string("NCJULIA_SEED is not an unsigned integer: '") + env + "'");
  }
  return seed;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  FunctionSource source;
  std::string point;
  std::string other_point;
  std::string poly;
};

int RunEval(const EvalArgs& args, const RunConfig& config, std::ostream& out) {
  const MatrixTuple x = TupleFromJson(LoadArgument(args.point));
  Json report;
  if (!args.poly.empty()) {
    const FreePolynomial p = ParsePoly(args.poly, x.d());
    report["polynomial"] = FormatPoly(p);
    report["value"] = MatrixToJson(EvalPoly(p, x));
    Emit(report, config, out);
    return kExitOk;
  }
  const NcFunctionHandle h = LoadHandle(args.source, config.isometry_tol);
  const PointEvaluation e = Evaluate(h, x);
  report["phi"] = MatrixToJson(e.phi);
  report["u"] = MatrixToJson(e.u);
  report["delta_norm"] = RealToJson(e.delta_norm);
  report["condition"] = RealToJson(e.condition);
  report["near_singular"] = e.near_singular;
  const MatrixTuple y =
      args.other_point.empty() ? x : TupleFromJson(LoadArgument(args.other_point));
  report["model_residual"] = RealToJson(ModelResidual(h, x, y));
  Emit(report, config, out);
  return kExitOk;
}

// -------------------------------------------------------------- bpoint

struct BPointArgs {
  FunctionSource source;
  std::string t;
  std::string ray;
  bool radial = false;
  int steps = 20;
  int samples = 50;
  double range_tol = 1e-8;
};

int RunBPoint(const BPointArgs& args, const RunConfig& config, std::ostream& out) {
  const NcFunctionHandle h = LoadHandle(args.source, config.isometry_tol);
  const MatrixTuple t = TupleFromJson(LoadArgument(args.t));
  BPointOptions options;
  if (!args.ray.empty()) options.ray_direction = TupleFromJson(LoadArgument(args.ray));
  options.force_radial = args.radial;
  options.steps = args.steps;
  options.samples = args.samples;
  options.seed = config.seed;
  options.range_tol = args.range_tol;
  options.assumption.seed = config.seed;
  options.assumption.rank_tol = config.rank_tol;
  const BPointReport report = AnalyzeBPoint(h, t, options);
  Emit(BPointReportToJson(report), config, out);
  return report.bpoint ? kExitOk : kExitVerdictFalse;
}

// ---------------------------------------------------------------- fuzz

struct FuzzArgs {
  std::string delta = "polydisk:2";
  int dim_e = 1;
  int n = 2;
  int samples = 1000;
  int threads = 0;
  bool no_isometry = false;
};

struct FuzzSample {
  double model_residual = 0.0;
  bool model_checked = false;
  bool julia_checked = false;
  bool julia_skipped = false;
  bool julia_violation = false;
  bool not_bpoint = false;
  double julia_ratio = 0.0;  // lhs / rhs
  std::string error;
};

Realization FuzzRealization(int dim_e, int j, bool no_isometry, Rng& rng) {
  const ComplexMatrix colligation = RandomUnitary(1 + dim_e * j, rng);
  const Eigen::Index mj = dim_e * j;
  if (!no_isometry) {
    return Realization::FromColligation(dim_e, j, colligation, 1e-8);
  }
  ComplexMatrix d = colligation.bottomRightCorner(mj, mj);
  d += 0.5 * RandomGaussian(static_cast<int>(mj), static_cast<int>(mj), rng);
  return Realization::Unchecked(dim_e, j, colligation.topLeftCorner(1, 1),
                                colligation.topRightCorner(1, mj),
                                colligation.bottomLeftCorner(mj, 1), d);
}

FuzzSample RunFuzzSample(const FuzzArgs& args, const DeltaMatrix& delta, bool builtin,
                         const RunConfig& config, std::uint64_t index) {
  FuzzSample sample;
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  Rng rng(seq);
  try {
    const NcFunctionHandle h(FuzzRealization(args.dim_e, delta.J(), args.no_isometry, rng), delta);
    const std::optional<MatrixTuple> x = RandomInteriorPoint(delta, args.n, rng, 0.05);
    const std::optional<MatrixTuple> y = RandomInteriorPoint(delta, args.n, rng, 0.05);
    if (x && y) {
      sample.model_residual = ModelResidual(h, *x, *y);
      sample.model_checked = true;
    }
    if (!builtin || args.no_isometry) return sample;

    const MatrixTuple t = RandomBoundaryPoint(args.delta, args.n, rng);
    const ApproachSequence radial = RadialSequence(t);
    const AlphaEstimate alpha = EstimateAlpha(h, radial);
    if (!alpha.converged) {
      sample.not_bpoint = true;
      return sample;
    }
    WExtraction w;
    try {
      w = ExtractW(h, radial);
    } catch (const InconsistencyError&) {
      sample.not_bpoint = true;
      return sample;
    }
    const std::optional<MatrixTuple> z = RandomInteriorPoint(delta, args.n, rng);
    if (!z) return sample;
    const JuliaCheck check = JuliaInequalityCheck(h, t, w.W, alpha.alpha, *z);
    if (check.skipped) {
      sample.julia_skipped = true;
    } else {
      sample.julia_checked = true;
      sample.julia_violation = !check.holds;
      sample.julia_ratio = check.rhs > 0.0 ? check.lhs / check.rhs : 0.0;
    }
  } catch (const Error& e) {
    sample.error = e.what();
  }
  return sample;
}

int RunFuzz(const FuzzArgs& args, const RunConfig& config, std::ostream& out) {
  const Json delta_json = LoadArgument(args.delta);
  const DeltaMatrix delta = DeltaFromJson(delta_json);
  const bool builtin = delta_json.is_string();

  std::vector<FuzzSample> results(static_cast<std::size_t>(args.samples));
  int workers = args.threads > 0
                    ? args.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, args.samples);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < args.samples; i += workers) {
        results[static_cast<std::size_t>(i)] =
            RunFuzzSample(args, delta, builtin, config, static_cast<std::uint64_t>(i));
      }
    });
  }
  for (std::thread& thread : pool) thread.join();

  int model_checked = 0, model_failures = 0, julia_checked = 0, julia_violations = 0;
  int julia_skipped = 0, not_bpoint = 0, errors = 0;
  double max_residual = 0.0, max_ratio = 0.0;
  std::string first_error;
  for (const FuzzSample& s : results) {
    if (s.model_checked) {
      ++model_checked;
      max_residual = std::max(max_residual, s.model_residual);
      if (!(s.model_residual <= config.residual_tol)) ++model_failures;
    }
    julia_checked += s.julia_checked;
    julia_violations += s.julia_violation;
    julia_skipped += s.julia_skipped;
    not_bpoint += s.not_bpoint;
    max_ratio = std::max(max_ratio, s.julia_ratio);
    if (!s.error.empty()) {
      ++errors;
      if (first_error.empty()) first_error = s.error;
    }
  }
  Json report = {{"samples", args.samples},
                 {"seed", config.seed},
                 {"delta", builtin ? delta_json.get<std::string>() : std::string("custom")},
                 {"dim_E", args.dim_e},
                 {"J", delta.J()},
                 {"n", args.n},
                 {"negative_control", args.no_isometry},
                 {"model_checked", model_checked},
                 {"model_failures", model_failures},
                 {"max_model_residual", RealToJson(max_residual)},
                 {"julia_checked", julia_checked},
                 {"julia_violations", julia_violations},
                 {"julia_skipped", julia_skipped},
                 {"max_julia_ratio", RealToJson(max_ratio)},
                 {"not_bpoint", not_bpoint},
                 {"errors", errors}};
  if (!first_error.empty()) report["first_error"] = first_error;
  Emit(report, config, out);
  return model_failures + julia_violations > 0 ? kExitVerdictFalse : kExitOk;
}

// ---------------------------------------------------------- derivative

struct DerivativeArgs {
  FunctionSource source;
  std::string t;
  std::string h;
  double t0 = 0.5;
  int ladder = 14;
  bool closed_form = false;
  std::vector<double> homogeneity;
  bool ladder_check = false;
};

int RunDerivative(const DerivativeArgs& args, const RunConfig& config, std::ostream& out) {
  const NcFunctionHandle h = LoadHandle(args.source, config.isometry_tol);
  const MatrixTuple t = TupleFromJson(LoadArgument(args.t));
  const MatrixTuple dir = TupleFromJson(LoadArgument(args.h));
  if (!InGamma(h.delta(), t, dir)) throw PreconditionError("H is not in Gamma(T)");

  DerivativeOptions options;
  options.t_start = args.t0;
  options.ladder_length = args.ladder;
  const std::optional<double> ray_t0 =
      FindInwardStep(h.delta(), t, dir, args.t0, 20, options.t_min);
  if (!ray_t0) throw PreconditionError("no admissible step along H");
  const WExtraction w = ExtractW(h, RaySequence(t, dir, *ray_t0, 20));
  const DirectionalDerivativeResult result = EtaNumeric(h, t, w.W, dir, options);

  Json report = DerivativeToJson(result);
  report["W"] = MatrixToJson(w.W);
  int code = kExitOk;
  if (args.closed_form) {
    if (args.source.fixture != "example-h1") {
      throw PreconditionError("--closed-form needs --fixture example-h1");
    }
    const int n = t.n();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    if (OperatorNorm(t[0] - id) > 1e-12 || OperatorNorm(t[1] - id) > 1e-12) {
      throw PreconditionError("--closed-form needs T = (I, I)");
    }
    const ComplexMatrix exact = ExampleEta(dir);
    const double error = OperatorNorm(result.eta - exact) / std::max(OperatorNorm(exact), 1e-300);
    report["closed_form"] = "example-eta";
    report["closed_form_eta"] = MatrixToJson(exact);
    report["closed_form_relative_error"] = RealToJson(error);
    if (!(error <= 1e-6)) code = kExitVerdictFalse;
  }
  if (!args.homogeneity.empty()) {
    Json defects = Json::array();
    for (double s : args.homogeneity) {
      defects.push_back(
          {{"s", s}, {"defect", RealToJson(HomogeneityCheck(h, t, w.W, result, s, options))}});
    }
    report["homogeneity"] = std::move(defects);
  }
  if (args.ladder_check) {
    report["ladder_independence"] = RealToJson(LadderIndependence(h, t, w.W, dir, options));
  }
  Emit(report, config, out);
  return code;
}

// ------------------------------------------------------------ fixtures

int RunFixtures(const std::string& show, const RunConfig& config, std::ostream& out) {
  if (!show.empty()) {
    const Fixture f = GetFixture(show);
    Json report = {{"name", f.name},
                   {"description", f.description},
                   {"delta", DeltaToJson(f.delta)},
                   {"closed_forms", f.closed_forms}};
    report["realization"] = f.realization ? RealizationToJson(*f.realization) : Json(nullptr);
    Emit(report, config, out);
    return kExitOk;
  }
  Json list = Json::array();
  for (const std::string& name : FixtureNames()) {
    Json entry = {{"name", name}};
    if (name.find('<') == std::string::npos) {
      const Fixture f = GetFixture(name);
      entry["description"] = f.description;
      entry["closed_forms"] = f.closed_forms;
    } else {
      entry["description"] = "parameterized delta family";
    }
    list.push_back(std::move(entry));
  }
  Emit({{"fixtures", std::move(list)}}, config, out);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical workbench for boundary behavior of nc Schur-class functions", "ncjulia"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig config;
  app.add_option("--format", config.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", config.seed, "random seed (NCJULIA_SEED overrides)");
  app.add_option("--isometry-tol", config.isometry_tol)->check(CLI::PositiveNumber);
  app.add_option("--residual-tol", config.residual_tol)->check(CLI::PositiveNumber);
  app.add_option("--rank-tol", config.rank_tol)->check(CLI::PositiveNumber);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate phi, u and the model residual at a point");
  AddSourceOptions(eval, &eval_args.source);
  eval->add_option("--point", eval_args.point, "point x: JSON file or inline JSON")->required();
  eval->add_option("--other-point", eval_args.other_point, "second point y for the model residual");
  eval->add_option("--poly", eval_args.poly, "evaluate this polynomial text instead of phi");

  BPointArgs bpoint_args;
  CLI::App* bpoint = app.add_subcommand("bpoint", "B-point report at a boundary point T");
  AddSourceOptions(bpoint, &bpoint_args.source);
  bpoint->add_option("--T", bpoint_args.t, "boundary point T")->required();
  CLI::Option* ray = bpoint->add_option("--ray", bpoint_args.ray, "approach along T + tK");
  bpoint->add_flag("--radial", bpoint_args.radial, "approach along rT")->excludes(ray);
  bpoint->add_option("--steps", bpoint_args.steps)->check(CLI::Range(2, 60));
  bpoint->add_option("--samples", bpoint_args.samples)->check(CLI::PositiveNumber);
  bpoint->add_option("--range-tol", bpoint_args.range_tol)->check(CLI::PositiveNumber);

  FuzzArgs fuzz_args;
  CLI::App* fuzz = app.add_subcommand("fuzz", "Monte Carlo model-identity and Julia sweep");
  fuzz->add_option("--delta", fuzz_args.delta, "built-in delta name or delta JSON");
  fuzz->add_option("--dim-E", fuzz_args.dim_e)->check(CLI::Range(1, 16));
  fuzz->add_option("--n", fuzz_args.n)->check(CLI::Range(1, 16));
  fuzz->add_option("--samples", fuzz_args.samples)->check(CLI::PositiveNumber);
  fuzz->add_option("--threads", fuzz_args.threads, "0 = hardware concurrency")
      ->check(CLI::NonNegativeNumber);
  fuzz->add_flag("--no-isometry", fuzz_args.no_isometry, "perturb D (negative control)");

  DerivativeArgs derivative_args;
  CLI::App* derivative = app.add_subcommand("derivative", "directional derivative eta(H) at T");
  AddSourceOptions(derivative, &derivative_args.source);
  derivative->add_option("--T", derivative_args.t, "boundary point T")->required();
  derivative->add_option("--H", derivative_args.h, "direction H in Gamma(T)")->required();
  derivative->add_option("--t0", derivative_args.t0)->check(CLI::PositiveNumber);
  derivative->add_option("--ladder", derivative_args.ladder)->check(CLI::Range(3, 40));
  derivative->add_flag("--closed-form", derivative_args.closed_form,
                       "compare against example-eta (example-h1 at (I, I))");
  derivative->add_option("--homogeneity", derivative_args.homogeneity, "scales s in (0, 1]");
  derivative->add_flag("--ladder-check", derivative_args.ladder_check,
                       "compare ladders starting at t0 and t0/3");

  std::string show;
  CLI::App* fixtures = app.add_subcommand("fixtures", "list built-in fixtures");
  fixtures->add_option("--show", show, "print one fixture as JSON");

  CLI::App* schema = app.add_subcommand("schema", "print the JSON formats");

  std::vector<const char*> argv{"ncjulia"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    config.seed = SeedFromEnvironment(config.seed);
    if (eval->parsed()) return RunEval(eval_args, config, out);
    if (bpoint->parsed()) return RunBPoint(bpoint_args, config, out);
    if (fuzz->parsed()) return RunFuzz(fuzz_args, config, out);
    if (derivative->parsed()) return RunDerivative(derivative_args, config, out);
    if (fixtures->parsed()) return RunFixtures(show, config, out);
    if (schema->parsed()) {
      Emit(Schemas(), config, out);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const InconsistencyError& e) {
    err << "inconsistent: " << e.what() << "\n";
    return kExitVerdictFalse;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DimensionError& e) {
    err << "dimension: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace ncjulia
