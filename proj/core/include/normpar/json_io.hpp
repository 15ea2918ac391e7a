#pragma once

// JSON encodings. Complex numbers are always two-element arrays [re, im].
//
//   grid:        {"space": "<id>", "points": [{"label": "a", "value": [re, im]}, ...]}
//   sequence:    {"rule": "<expression in n>", "truncation": N}
//   measure:     {"atoms": [{"point": "a", "weight": w}, ...]}
//   certificate: {"verdict": b, "lambda": [re, im], "witness_point": "a",
//                 "witness_measure": {...}, "dual": {"atoms": [...]},
//                 "residuals": {"norm": r1, "pairing": r2}, "gap": g}
//   ball:        {"space": {"dim": n, "p": "two", "field": "real"},
//                 "matrix": [[...], ...]}  or  "rule": ["<expr in x1..xn>", ...]
//
// Decoders throw InvalidInput with a path to the offending field.

#include <nlohmann/json.hpp>

#include "normpar/gateaux.hpp"
#include "normpar/numradius.hpp"
#include "normpar/parallelism.hpp"
#include "normpar/space.hpp"

namespace normpar {

using json = nlohmann::json;

json complex_to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& where = "value");

json to_json(const GridFunction& f);
GridFunction grid_from_json(const json& j);

json to_json(const SequenceFunction& f);
SequenceFunction sequence_from_json(const json& j);

// Either kind of function, dispatched on the keys present.
bool is_sequence_json(const json& j);

json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const json& j);

json to_json(const DualFunctional& phi);
DualFunctional dual_from_json(const json& j);

json to_json(const ParallelCertificate& cert);
ParallelCertificate certificate_from_json(const json& j);

json to_json(const FiniteDimSpace& space);
FiniteDimSpace space_from_json(const json& j);

json to_json(const BallFunction& f);
BallFunction ball_from_json(const json& j);

json vector_to_json(const Vec& v);

json to_json(const DerivativeReport& r);
json to_json(const AsymptoticResult& r);
json to_json(const VerificationReport& r);
json to_json(const HalfplaneReport& r);

}  // namespace normpar
