#include "ncjulia/json_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "ncjulia/errors.h"
#include "ncjulia/fixtures.h"

namespace ncjulia {
namespace {

const Json& Field(const Json& j, const char* key, const char* context) {
  if (!j.is_object()) throw ParseError(std::string(context) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(context) + ": missing field '" + key + "'");
  }
  return *it;
}

int IntField(const Json& j, const char* key, const char* context) {
  const Json& v = Field(j, key, context);
  if (!v.is_number_integer()) {
    throw ParseError(std::string(context) + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

double RealFromJson(const Json& j, const char* context) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError(std::string(context) + ": expected a number");
}

const Json& ArrayField(const Json& j, const char* key, const char* context) {
  const Json& v = Field(j, key, context);
  if (!v.is_array()) {
    throw ParseError(std::string(context) + ": field '" + key + "' must be an array");
  }
  return v;
}

Json OptionalReal(const std::optional<double>& v) { return v ? RealToJson(*v) : Json(nullptr); }

Json RealsToJson(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(RealToJson(v));
  return out;
}

}  // namespace

Json ParseJsonText(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports the 1-based index of the offending byte.
    const std::size_t position = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("malformed JSON", position);
  }
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseJsonText(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json RealToJson(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json ComplexToJson(Complex value) {
  return Json::array({RealToJson(value.real()), RealToJson(value.imag())});
}

Complex ComplexFromJson(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {RealFromJson(j[0], "complex"), RealFromJson(j[1], "complex")};
  }
  throw ParseError("complex: expected a number or [re, im]");
}

Json MatrixToJson(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(ComplexToJson(m(r, c)));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix MatrixFromJson(const Json& j) {
  const int rows = IntField(j, "rows", "matrix");
  const int cols = IntField(j, "cols", "matrix");
  if (rows < 0 || cols < 0) throw ParseError("matrix: negative size");
  const Json& data = ArrayField(j, "data", "matrix");
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ParseError("matrix: data has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = ComplexFromJson(data[k++]);
  }
  return m;
}

Json PolyToJson(const FreePolynomial& p) {
  Json terms = Json::array();
  for (const Term& t : p.terms()) {
    terms.push_back({{"coeff", ComplexToJson(t.coeff)}, {"word", t.word}});
  }
  return {{"d", p.d()}, {"terms", std::move(terms)}};
}

FreePolynomial PolyFromJson(const Json& j, int d) {
  if (j.is_string()) {
    if (d < 1) throw ParseError("polynomial: text form needs the variable count d");
    return ParsePoly(j.get<std::string>(), d);
  }
  if (j.is_number() || j.is_array()) {
    if (d < 1) throw ParseError("polynomial: constant form needs the variable count d");
    return FreePolynomial::Constant(d, ComplexFromJson(j));
  }
  const int own_d = IntField(j, "d", "polynomial");
  if (d >= 1 && own_d != d) {
    throw ParseError("polynomial: d=" + std::to_string(own_d) +
                     " but context has d=" + std::to_string(d));
  }
  std::vector<Term> terms;
  for (const Json& t : ArrayField(j, "terms", "polynomial")) {
    const Json& word = ArrayField(t, "word", "polynomial term");
    FreeWord letters;
    for (const Json& letter : word) {
      if (!letter.is_number_integer())
        throw ParseError("polynomial term: letters must be integers");
      letters.push_back(letter.get<int>());
    }
    terms.push_back({ComplexFromJson(Field(t, "coeff", "polynomial term")), std::move(letters)});
  }
  try {
    return FreePolynomial(own_d, std::move(terms));
  } catch (const DimensionError& e) {
    throw ParseError(std::string("polynomial: ") + e.what());
  }
}

Json DeltaToJson(const DeltaMatrix& delta) {
  Json entries = Json::array();
  for (int r = 0; r < delta.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < delta.cols(); ++c) row.push_back(PolyToJson(delta.entry(r, c)));
    entries.push_back(std::move(row));
  }
  return {{"d", delta.d()}, {"J", delta.J()}, {"entries", std::move(entries)}};
}

DeltaMatrix DeltaFromJson(const Json& j) {
  if (j.is_string()) return DeltaByName(j.get<std::string>());
  const int d = IntField(j, "d", "delta");
  if (d < 1) throw ParseError("delta: d must be >= 1");
  std::vector<std::vector<FreePolynomial>> grid;
  for (const Json& row : ArrayField(j, "entries", "delta")) {
    if (!row.is_array()) throw ParseError("delta: entries must be an array of rows");
    std::vector<FreePolynomial> polys;
    for (const Json& entry : row) polys.push_back(PolyFromJson(entry, d));
    grid.push_back(std::move(polys));
  }
  try {
    DeltaMatrix delta(d, std::move(grid));
    if (j.contains("J") && IntField(j, "J", "delta") != delta.J()) {
      throw ParseError("delta: field 'J' does not match the entries");
    }
    return delta;
  } catch (const DimensionError& e) {
    throw ParseError(std::string("delta: ") + e.what());
  }
}

Json RealizationToJson(const Realization& r) {
  return {{"dim_E", r.dim_e()},       {"J", r.J()},
          {"A", MatrixToJson(r.A())}, {"B", MatrixToJson(r.B())},
          {"C", MatrixToJson(r.C())}, {"D", MatrixToJson(r.D())}};
}

Realization RealizationFromJson(const Json& j, bool checked) {
  if (j.is_string()) {
    const Fixture fixture = GetFixture(j.get<std::string>());
    if (!fixture.realization) {
      throw ParseError("fixture '" + fixture.name + "' has no realization");
    }
    return *fixture.realization;
  }
  const int m = IntField(j, "dim_E", "realization");
  const int jj = IntField(j, "J", "realization");
  ComplexMatrix a = MatrixFromJson(Field(j, "A", "realization"));
  ComplexMatrix b = MatrixFromJson(Field(j, "B", "realization"));
  ComplexMatrix c = MatrixFromJson(Field(j, "C", "realization"));
  ComplexMatrix d = MatrixFromJson(Field(j, "D", "realization"));
  try {
    if (!checked) return Realization::Unchecked(m, jj, a, b, c, d);
    return Realization(m, jj, a, b, c, d);
  } catch (const DimensionError& e) {
    throw ParseError(std::string("realization: ") + e.what());
  }
}

Json TupleToJson(const MatrixTuple& x) {
  Json components = Json::array();
  for (const ComplexMatrix& m : x.components()) components.push_back(MatrixToJson(m));
  return {{"d", x.d()}, {"n", x.n()}, {"components", std::move(components)}};
}

MatrixTuple TupleFromJson(const Json& j) {
  if (j.is_object() && j.contains("scalars")) {
    std::vector<Complex> values;
    for (const Json& v : ArrayField(j, "scalars", "tuple")) values.push_back(ComplexFromJson(v));
    if (values.empty()) throw ParseError("tuple: 'scalars' is empty");
    const int n = j.contains("n") ? IntField(j, "n", "tuple") : 1;
    if (n < 1) throw ParseError("tuple: n must be >= 1");
    return MatrixTuple::ScalarMultiplesOfIdentity(values, n);
  }
  std::vector<ComplexMatrix> components;
  for (const Json& m : ArrayField(j, "components", "tuple"))
    components.push_back(MatrixFromJson(m));
  try {
    MatrixTuple x(std::move(components));
    if (j.contains("d") && IntField(j, "d", "tuple") != x.d()) {
      throw ParseError("tuple: field 'd' does not match the components");
    }
    if (j.contains("n") && IntField(j, "n", "tuple") != x.n()) {
      throw ParseError("tuple: field 'n' does not match the components");
    }
    return x;
  } catch (const DimensionError& e) {
    throw ParseError(std::string("tuple: ") + e.what());
  }
}

Json AssumptionToJson(const AssumptionReport& report) {
  Json out = {{"a1", report.a1},
              {"a1_inconclusive", report.a1_inconclusive},
              {"beta", RealToJson(report.beta)},
              {"a2", report.a2},
              {"span_dimension", report.span_dimension},
              {"full_dimension", report.full_dimension},
              {"a", report.a}};
  out["witness"] = report.witness ? TupleToJson(*report.witness) : Json(nullptr);
  return out;
}

Json AlphaToJson(const AlphaEstimate& alpha) {
  return {{"alpha", RealToJson(alpha.alpha)},
          {"label", alpha.is_liminf ? "liminf" : "sequence estimate"},
          {"converged", alpha.converged},
          {"diverged", alpha.diverged},
          {"steps", RealsToJson(alpha.steps)},
          {"quotients", RealsToJson(alpha.quotients)},
          {"increments", RealsToJson(alpha.increments)},
          {"dropped", alpha.dropped}};
}

Json TfaeToJson(const TfaeReport& tfae) {
  Json points = Json::array();
  for (const TfaePoint& p : tfae.points) {
    points.push_back({{"step", RealToJson(p.step)},
                      {"gram_ratio", RealToJson(p.gram_ratio)},
                      {"julia_ratio", RealToJson(p.julia_ratio)},
                      {"u_norm_sq", RealToJson(p.u_norm_sq)},
                      {"aperture", RealToJson(p.aperture)}});
  }
  return {{"sup_gram_ratio", RealToJson(tfae.sup_gram_ratio)},
          {"sup_julia_ratio", RealToJson(tfae.sup_julia_ratio)},
          {"sup_u_norm_sq", RealToJson(tfae.sup_u_norm_sq)},
          {"sup_aperture", RealToJson(tfae.sup_aperture)},
          {"comparable_within_2c", tfae.comparable_within_2c},
          {"u_bound_implies_gram_bound", tfae.u_bound_implies_gram_bound},
          {"gram_bound_implies_u_bound", tfae.gram_bound_implies_u_bound},
          {"points", std::move(points)}};
}

Json BPointReportToJson(const BPointReport& report) {
  Json out;
  out["T"] = TupleToJson(report.t);
  out["on_distinguished_boundary"] = report.on_distinguished_boundary;
  out["boundary_defect"] = RealToJson(report.boundary_defect);
  out["sequence"] = {{"rule", report.sequence_rule},
                     {"steps", RealsToJson(report.sequence_steps)},
                     {"dropped", report.sequence_dropped}};
  out["alpha_estimate"] = RealToJson(report.alpha.alpha);
  out["alpha"] = AlphaToJson(report.alpha);
  if (report.w) {
    out["W"] = MatrixToJson(report.w->W);
    out["W_distance"] = RealToJson(report.w->distance);
  } else {
    out["W"] = nullptr;
    if (!report.w_error.empty()) out["W_error"] = report.w_error;
  }
  out["assumption"] = report.assumption ? AssumptionToJson(*report.assumption) : Json(nullptr);
  if (report.u_t) {
    out["u_T"] = MatrixToJson(report.u_t->u_t);
    out["u_T_norm_sq"] = RealToJson(report.u_t_norm_sq);
    out["range_residual"] = RealToJson(report.u_t->range_residual);
    out["kernel_orthogonality"] = RealToJson(report.u_t->kernel_orthogonality);
    out["kernel_dimension"] = report.u_t->kernel_dimension;
    out["kernel_range_overlap"] = RealToJson(report.u_t->kernel_range_overlap);
  } else {
    out["u_T"] = nullptr;
    out["range_residual"] = nullptr;
  }
  out["u_T_alpha_gap"] = OptionalReal(report.u_t_alpha_gap);
  out["boundary_model_residual"] = RealToJson(report.boundary_model_residual);
  out["julia"] = {{"checked", report.julia_checked},
                  {"violations", report.julia_violations},
                  {"skipped", report.julia_skipped}};
  out["julia_violations"] = report.julia_violations;
  if (report.tfae) {
    out["tfae"] = TfaeToJson(*report.tfae);
  } else {
    out["tfae"] = nullptr;
    if (!report.tfae_error.empty()) out["tfae_error"] = report.tfae_error;
  }
  out["approach_bound_holds"] =
      report.approach_bound_holds ? Json(*report.approach_bound_holds) : Json(nullptr);
  out["bpoint"] = report.bpoint;
  out["conditional"] = report.conditional;
  return out;
}

Json DerivativeToJson(const DirectionalDerivativeResult& result) {
  return {{"H", TupleToJson(result.h)},
          {"eta", MatrixToJson(result.eta)},
          {"steps", RealsToJson(result.steps)},
          {"convergence_increments", RealsToJson(result.increments)},
          {"in_Gamma", result.in_gamma},
          {"beta", RealToJson(result.beta)},
          {"t0", RealToJson(result.t0)},
          {"converged", result.converged},
          {"partial", result.partial}};
}

Json Schemas() {
  const Json cmat = {{"rows", "int"}, {"cols", "int"}, {"data", "[[re, im], ...] row-major"}};
  const Json poly = {{"d", "int"},
                     {"terms", "[{\"coeff\": [re, im], \"word\": [int, ...]}, ...]"},
                     {"text_form", "string such as \"x0*x1 - 2i*x1^2\""}};
  return {{"matrix", cmat},
          {"polynomial", poly},
          {"delta",
           {{"d", "int"},
            {"J", "int (optional, checked)"},
            {"entries", "rows x cols array of polynomials (objects or text)"},
            {"builtin", "\"polydisk:<d>\" | \"ball:<d>\" | \"cartan:<J>\""}}},
          {"realization",
           {{"dim_E", "int"},
            {"J", "int"},
            {"A", "matrix 1x1"},
            {"B", "matrix 1x(dim_E*J)"},
            {"C", "matrix (dim_E*J)x1"},
            {"D", "matrix (dim_E*J)x(dim_E*J)"},
            {"builtin", "\"example-h1\" | \"disk-identity\""}}},
          {"tuple",
           {{"d", "int"},
            {"n", "int"},
            {"components", "array of d n x n matrices"},
            {"shorthand", "{\"scalars\": [c, ...], \"n\": n} for (c_1 I_n, ..., c_d I_n)"}}},
          {"eval_report",
           {{"phi", "matrix"},
            {"u", "matrix"},
            {"delta_norm", "real"},
            {"condition", "real"},
            {"near_singular", "bool"},
            {"model_residual", "real"}}},
          {"bpoint_report",
           {{"T", "tuple"},
            {"on_distinguished_boundary", "bool"},
            {"alpha_estimate", "real or \"inf\""},
            {"alpha", "{alpha, label, converged, diverged, steps, quotients, increments, dropped}"},
            {"W", "matrix or null"},
            {"u_T", "matrix or null"},
            {"range_residual", "real or null"},
            {"boundary_model_residual", "real"},
            {"julia_violations", "int"},
            {"tfae", "{sup_gram_ratio, sup_julia_ratio, sup_u_norm_sq, sup_aperture, ...}"},
            {"bpoint", "bool"},
            {"conditional", "bool"}}},
          {"derivative_report",
           {{"H", "tuple"},
            {"eta", "matrix"},
            {"convergence_increments", "array of reals"},
            {"in_Gamma", "bool"},
            {"beta", "real"},
            {"converged", "bool"},
            {"closed_form_relative_error", "real (with --closed-form)"}}},
          {"fuzz_report",
           {{"samples", "int"},
            {"model_failures", "int"},
            {"julia_violations", "int"},
            {"max_model_residual", "real"}}},
          {"reals",
           "finite values are JSON numbers; infinities and NaN are \"inf\", \"-inf\", \"nan\""}};
}

}  // namespace ncjulia
