#include "normpar/json_io.hpp"

#include <cmath>

#include "normpar/error.hpp"

namespace normpar {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidInput(where + ": expected a number");
  return j.get<double>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) throw InvalidInput(where + ": expected a string");
  return j.get<std::string>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }  // no "-0.0" in output

Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidInput(where + ": complex numbers are [re, im] arrays");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

json to_json(const GridFunction& f) {
  json pts = json::array();
  for (const auto& p : f.points()) pts.push_back({{"label", p.label}, {"value", complex_to_json(p.value)}});
  return {{"space", f.space_id()}, {"points", pts}};
}

GridFunction grid_from_json(const json& j) {
  const std::string space = string(field(j, "space", "grid"), "grid.space");
  const json& pts = field(j, "points", "grid");
  if (!pts.is_array()) throw InvalidInput("grid.points: expected an array");
  std::vector<GridPoint> points;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::string where = "grid.points[" + std::to_string(k) + "]";
    points.push_back({string(field(pts[k], "label", where), where + ".label"),
                      complex_from_json(field(pts[k], "value", where), where + ".value")});
  }
  return GridFunction(space, std::move(points));
}

json to_json(const SequenceFunction& f) { return {{"rule", f.rule().source()}, {"truncation", f.truncation()}}; }

SequenceFunction sequence_from_json(const json& j) {
  const std::string rule = string(field(j, "rule", "sequence"), "sequence.rule");
  const json& t = field(j, "truncation", "sequence");
  if (!t.is_number_integer() || t.get<long long>() < 1) throw InvalidInput("sequence.truncation: expected a positive integer");
  return SequenceFunction::from_source(rule, t.get<std::size_t>());
}

bool is_sequence_json(const json& j) { return j.is_object() && j.contains("rule") && j.contains("truncation"); }

json to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"point", a.point}, {"weight", a.weight}});
  return {{"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const json& j) {
  const json& atoms = field(j, "atoms", "measure");
  if (!atoms.is_array()) throw InvalidInput("measure.atoms: expected an array");
  std::vector<Atom> out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string where = "measure.atoms[" + std::to_string(k) + "]";
    out.push_back({string(field(atoms[k], "point", where), where + ".point"),
                   number(field(atoms[k], "weight", where), where + ".weight")});
  }
  return DiscreteMeasure(std::move(out));
}

json to_json(const DualFunctional& phi) {
  json atoms = json::array();
  for (const auto& a : phi.atoms()) {
    atoms.push_back({{"point", a.point}, {"coefficient", complex_to_json(a.coefficient)}, {"weight", a.weight}});
  }
  return {{"atoms", atoms}};
}

DualFunctional dual_from_json(const json& j) {
  const json& atoms = field(j, "atoms", "dual");
  if (!atoms.is_array()) throw InvalidInput("dual.atoms: expected an array");
  std::vector<DualAtom> out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string where = "dual.atoms[" + std::to_string(k) + "]";
    out.push_back({string(field(atoms[k], "point", where), where + ".point"),
                   complex_from_json(field(atoms[k], "coefficient", where), where + ".coefficient"),
                   number(field(atoms[k], "weight", where), where + ".weight")});
  }
  return DualFunctional(std::move(out));
}

json to_json(const ParallelCertificate& cert) {
  json j;
  j["verdict"] = cert.verdict;
  j["lambda"] = cert.lambda ? complex_to_json(*cert.lambda) : json(nullptr);
  j["witness_point"] = cert.witness_point ? json(*cert.witness_point) : json(nullptr);
  j["witness_measure"] = cert.witness_measure ? to_json(*cert.witness_measure) : json(nullptr);
  j["dual"] = cert.dual ? to_json(*cert.dual) : json(nullptr);
  j["residuals"] = {{"norm", cert.residual_norm}, {"pairing", cert.residual_pairing}};
  j["gap"] = cert.gap ? json(*cert.gap) : json(nullptr);
  return j;
}

ParallelCertificate certificate_from_json(const json& j) {
  ParallelCertificate cert;
  const json& verdict = field(j, "verdict", "certificate");
  if (!verdict.is_boolean()) throw InvalidInput("certificate.verdict: expected a boolean");
  cert.verdict = verdict.get<bool>();
  auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
  if (present("lambda")) cert.lambda = complex_from_json(j.at("lambda"), "certificate.lambda");
  if (present("witness_point")) cert.witness_point = string(j.at("witness_point"), "certificate.witness_point");
  if (present("witness_measure")) cert.witness_measure = measure_from_json(j.at("witness_measure"));
  if (present("dual")) cert.dual = dual_from_json(j.at("dual"));
  if (present("gap")) cert.gap = number(j.at("gap"), "certificate.gap");
  if (present("residuals")) {
    const json& r = j.at("residuals");
    cert.residual_norm = number(field(r, "norm", "certificate.residuals"), "certificate.residuals.norm");
    cert.residual_pairing = number(field(r, "pairing", "certificate.residuals"), "certificate.residuals.pairing");
  }
  return cert;
}

json to_json(const FiniteDimSpace& space) {
  return {{"dim", space.dim},
          {"p", pnorm_name(space.p)},
          {"field", space.field == ScalarField::real ? "real" : "complex"}};
}

FiniteDimSpace space_from_json(const json& j) {
  FiniteDimSpace s;
  const json& dim = field(j, "dim", "space");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw InvalidInput("space.dim: expected a positive integer");
  s.dim = dim.get<std::size_t>();
  const std::string p = string(field(j, "p", "space"), "space.p");
  if (p == "one" || p == "1") s.p = PNorm::one;
  else if (p == "two" || p == "2") s.p = PNorm::two;
  else if (p == "infinity" || p == "inf") s.p = PNorm::infinity;
  else throw InvalidInput("space.p: expected one of \"one\", \"two\", \"infinity\"");
  const std::string fld = j.contains("field") ? string(j.at("field"), "space.field") : "real";
  if (fld == "real") s.field = ScalarField::real;
  else if (fld == "complex") s.field = ScalarField::complex;
  else throw InvalidInput("space.field: expected \"real\" or \"complex\"");
  return s;
}

json vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

json to_json(const BallFunction& f) {
  json j;
  j["space"] = to_json(f.space());
  if (f.is_matrix()) {
    json rows = json::array();
    const Mat& m = f.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
      rows.push_back(row);
    }
    j["matrix"] = rows;
  } else {
    json rules = json::array();
    for (const auto& e : f.components()) rules.push_back(e.source());
    j["rule"] = rules;
  }
  return j;
}

BallFunction ball_from_json(const json& j) {
  const FiniteDimSpace space = space_from_json(field(j, "space", "ball"));
  const std::size_t n = space.dim;
  if (j.contains("matrix")) {
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != n) throw InvalidInput("ball.matrix: expected " + std::to_string(n) + " rows");
    Mat m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (!rows[r].is_array() || rows[r].size() != n) {
        throw InvalidInput("ball.matrix[" + std::to_string(r) + "]: expected " + std::to_string(n) + " entries");
      }
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) = complex_from_json(rows[r][c], "ball.matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return BallFunction(space, std::move(m));
  }
  const json& rule = field(j, "rule", "ball");
  std::vector<std::string> sources;
  if (rule.is_string() && n == 1) {
    sources.push_back(rule.get<std::string>());
  } else if (rule.is_array()) {
    for (std::size_t k = 0; k < rule.size(); ++k) sources.push_back(string(rule[k], "ball.rule[" + std::to_string(k) + "]"));
  } else {
    throw InvalidInput("ball.rule: expected an array with one expression per coordinate");
  }
  const auto vars = coordinate_variables(n);
  std::vector<Expression> comps;
  for (const auto& s : sources) comps.push_back(Expression::parse(s, vars));
  return BallFunction(space, std::move(comps));
}

json to_json(const DerivativeReport& r) {
  json sched = json::array();
  for (const auto& p : r.schedule) sched.push_back({{"parameter", p.parameter}, {"value", p.value}});
  return {{"method", method_name(r.method)},
          {"value", r.value},
          {"schedule", sched},
          {"converged", r.converged},
          {"note", r.note}};
}

json to_json(const AsymptoticResult& r) {
  json recipe = json::array();
  for (const auto& s : r.recipe) {
    recipe.push_back({{"eps", s.eps},
                      {"index", s.index},
                      {"level_set_size", s.level_set_size},
                      {"residual", s.residual},
                      {"limit_residual", s.limit_residual}});
  }
  return {{"outcome", outcome_name(r.outcome)},
          {"lambda", complex_to_json(r.lambda)},
          {"norms", {{"f", r.norm_f}, {"g", r.norm_g}}},
          {"recipe", recipe},
          {"final_residual", r.final_residual},
          {"limit_residual", r.limit_residual},
          {"converged", r.converged},
          {"direct", {{"best", r.direct_best}, {"slack", r.direct_slack}, {"verdict", r.direct_verdict}}},
          {"note", r.note}};
}

json to_json(const VerificationReport& r) {
  return {{"passed", r.passed},
          {"residuals",
           {{"norm", r.residual_norm},
            {"pairing", r.residual_pairing},
            {"dual_value", r.dual_value_error},
            {"dual_modulus", r.dual_modulus_error},
            {"dual_norm", r.dual_norm_error},
            {"gap", r.gap}}},
          {"failures", r.failures}};
}

json to_json(const HalfplaneReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(complex_to_json(p));
  return {{"contains_origin", r.contains_origin},
          {"dual_contains_origin", r.dual_contains_origin},
          {"spectral_gap", finite_or_null(r.spectral_gap)},
          {"eps", r.eps},
          {"labels", r.labels},
          {"points", pts},
          {"measure", r.measure ? to_json(*r.measure) : json(nullptr)}};
}

}  // namespace normpar
