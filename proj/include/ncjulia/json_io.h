#pragma once

#include <string>

#include "json.hpp"
#include "ncjulia/boundary.h"
#include "ncjulia/derivative.h"
#include "ncjulia/domain.h"
#include "ncjulia/free_polynomial.h"
#include "ncjulia/matrix_tuple.h"
#include "ncjulia/numerics.h"
#include "ncjulia/realization.h"

namespace ncjulia {

using Json = nlohmann::json;

/// Parses JSON text. Throws ParseError carrying the byte offset of the
/// first malformed character.
Json ParseJsonText(const std::string& text);

/// Reads and parses a JSON file. Throws ParseError when the file cannot be
/// read or is malformed.
Json ReadJsonFile(const std::string& path);

/// Finite doubles as numbers; infinities and NaN as the strings "inf",
/// "-inf", "nan".
Json RealToJson(double value);

/// Complex numbers as [re, im]; a plain number is accepted on input.
Json ComplexToJson(Complex value);
Complex ComplexFromJson(const Json& j);

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
Json MatrixToJson(const ComplexMatrix& m);
ComplexMatrix MatrixFromJson(const Json& j);

/// {"d": 2, "terms": [{"coeff": [re, im], "word": [0, 1]}]}. On input a
/// string is parsed with the text grammar; `d` must then come from context.
Json PolyToJson(const FreePolynomial& p);
FreePolynomial PolyFromJson(const Json& j, int d = -1);

/// {"d": d, "J": J, "entries": [[poly, ...], ...]}; the rows x cols grid
/// may be rectangular. A string names a built-in ("polydisk:2").
Json DeltaToJson(const DeltaMatrix& delta);
DeltaMatrix DeltaFromJson(const Json& j);

/// {"dim_E": m, "J": J, "A": cmat, "B": cmat, "C": cmat, "D": cmat}. A
/// string names a built-in fixture ("example-h1"). The colligation must be
/// an isometry unless `checked` is false.
Json RealizationToJson(const Realization& r);
Realization RealizationFromJson(const Json& j, bool checked = true);

/// {"d": d, "n": n, "components": [cmat, ...]}. Shorthand on input:
/// {"scalars": [c, ...]} for n = 1, or {"scalars": [c, ...], "n": n} for
/// scalar multiples of the identity.
Json TupleToJson(const MatrixTuple& x);
MatrixTuple TupleFromJson(const Json& j);

Json AssumptionToJson(const AssumptionReport& report);
Json AlphaToJson(const AlphaEstimate& alpha);
Json TfaeToJson(const TfaeReport& tfae);
Json BPointReportToJson(const BPointReport& report);
Json DerivativeToJson(const DirectionalDerivativeResult& result);

/// Descriptions of every input and output format.
Json Schemas();

}  // namespace ncjulia
