#include "normpar/parallelism.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numbers>

#include "normpar/error.hpp"
#include "normpar/lp.hpp"

namespace normpar {

DualFunctional::DualFunctional(std::vector<DualAtom> atoms) : atoms_(std::move(atoms)) {
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0)) throw InvalidInput("dual functional weight must be >= 0");
    if (std::abs(std::abs(a.coefficient) - 1.0) > 1e-12) throw InvalidInput("dual functional coefficient must be unimodular");
    total += a.weight;
  }
  if (total > 1.0 + 1e-12) throw InvalidInput("dual functional weights sum above 1");
}

Complex DualFunctional::apply(const GridFunction& h) const {
  Complex acc{};
  for (const auto& a : atoms_) acc += a.weight * a.coefficient * h.value_at(a.point);
  return acc;
}

double DualFunctional::norm() const {
  std::map<std::string, Complex> merged;
  for (const auto& a : atoms_) merged[a.point] += a.weight * a.coefficient;
  double n = 0.0;
  for (const auto& [point, c] : merged) n += std::abs(c);
  return n;
}

DirectResult parallel_direct(const GridFunction& f, const GridFunction& g, double tol) {
  require_pairable(f, g);
  if (!(tol >= 0.0)) throw PreconditionError("tolerance must be >= 0");
  DirectResult r;
  r.norm_f = sup_norm(f);
  r.norm_g = sup_norm(g);

  // max_lambda max_x |f(x) + lambda g(x)| = max_x (|f(x)| + |g(x)|); ties go to
  // the lexicographically smallest label.
  std::size_t best = 0;
  r.best_sum = -1.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double s = std::abs(f[k].value) + std::abs(g[k].value);
    if (s > r.best_sum || (s == r.best_sum && f[k].label < f[best].label)) {
      r.best_sum = s;
      best = k;
    }
  }
  r.best_point = f[best].label;
  r.best_lambda = phase(f[best].value) * std::conj(phase(g[best].value));
  r.gap = r.norm_f + r.norm_g - r.best_sum;

  double sum_norm = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sum_norm = std::max(sum_norm, std::abs(f[k].value + r.best_lambda * g[k].value));
  r.sum_norm = sum_norm;

  r.verdict = r.gap <= tol && sum_norm >= r.norm_f + r.norm_g - tol;
  if (r.verdict) {
    r.lambda = r.best_lambda;
    r.witness_point = r.best_point;
  }
  return r;
}

bool parallel_attain(const GridFunction& f, const GridFunction& g, double tol) {
  require_pairable(f, g);
  const auto mf = attain_set(f, tol);
  const auto mg = attain_set(g, tol);
  return std::any_of(mf.begin(), mf.end(), [&](const std::string& x) { return std::find(mg.begin(), mg.end(), x) != mg.end(); });
}

WitnessResult witness_measure(const GridFunction& f, const GridFunction& g, double tol) {
  require_pairable(f, g);
  WitnessResult r;
  r.target = sup_norm(f) * sup_norm(g);
  // The modulus of a convex combination is maximized at a vertex of the
  // simplex, so only point masses on M_f need to be examined.
  bool first = true;
  for (const auto& x : attain_set(f, tol)) {
    const std::size_t k = f.index_of(x);
    const double m = std::abs(std::conj(f[k].value) * g[k].value);
    if (first || m > r.best_modulus || (m == r.best_modulus && x < r.best_point)) {
      r.best_modulus = m;
      r.best_point = x;
      first = false;
    }
  }
  if (r.best_modulus >= r.target - tol) r.measure = DiscreteMeasure::dirac(r.best_point);
  return r;
}

double witness_value_lp(const GridFunction& f, const GridFunction& g, double tol, int angles) {
  require_pairable(f, g);
  if (angles < 1) throw PreconditionError("witness_value_lp needs at least one angle");
  const auto support = attain_set(f, tol);
  const int n = static_cast<int>(support.size());
  std::vector<Complex> c(n);
  for (int j = 0; j < n; ++j) {
    const std::size_t k = f.index_of(support[j]);
    c[j] = std::conj(f[k].value) * g[k].value;
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(1, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);

  auto solve_at = [&](double theta, Complex& combo) {
    const Complex rot = std::polar(1.0, -theta);
    Eigen::VectorXd obj(n);
    for (int j = 0; j < n; ++j) obj(j) = (rot * c[j]).real();
    const LpResult lp = solve_lp(A, b, obj);
    if (lp.status != LpStatus::optimal) throw Error("witness LP did not reach an optimum");
    combo = Complex{};
    for (int j = 0; j < n; ++j) combo += lp.x(j) * c[j];
    return lp.objective;
  };

  double best = -std::numeric_limits<double>::infinity();
  Complex best_combo{};
  for (int a = 0; a < angles; ++a) {
    Complex combo;
    const double v = solve_at(2.0 * std::numbers::pi * a / angles, combo);
    if (v > best) {
      best = v;
      best_combo = combo;
    }
  }
  // Re-aim at the current optimum; each step can only increase |combo|.
  double modulus = std::abs(best_combo);
  for (int it = 0; it < 64 && modulus > 0.0; ++it) {
    Complex combo;
    solve_at(std::arg(best_combo), combo);
    const double m = std::abs(combo);
    if (m <= modulus) break;
    modulus = m;
    best_combo = combo;
  }
  return std::max(modulus, 0.0);
}

DualFunctional dual_certificate(const GridFunction& f, const GridFunction& g, const std::string& witness_point, double tol) {
  require_pairable(f, g);
  const std::size_t k = f.index_of(witness_point);
  if (k == f.size()) throw PreconditionError("witness point '" + witness_point + "' is not a grid label");
  if (std::abs(f[k].value) < sup_norm(f) - tol || std::abs(g[k].value) < sup_norm(g) - tol) {
    throw PreconditionError("witness point '" + witness_point + "' does not attain both norms");
  }
  return DualFunctional({{witness_point, std::conj(phase(f[k].value)), 1.0}});
}

ParallelCertificate certify(const GridFunction& f, const GridFunction& g, double tol) {
  const DirectResult direct = parallel_direct(f, g, tol);
  const WitnessResult witness = witness_measure(f, g, tol);
  ParallelCertificate cert;
  cert.verdict = direct.verdict;
  if (direct.verdict) {
    cert.lambda = direct.lambda;
    cert.witness_point = direct.witness_point;
    cert.witness_measure = DiscreteMeasure::dirac(*direct.witness_point);
    cert.dual = dual_certificate(f, g, *direct.witness_point, tol);
    cert.residual_norm = direct.norm_f + direct.norm_g - direct.sum_norm;
    cert.residual_pairing = witness.target - std::abs(pairing(f, g, *cert.witness_measure));
  } else {
    cert.residual_norm = direct.gap;
    cert.residual_pairing = witness.target - witness.best_modulus;
    cert.gap = direct.gap;
  }
  return cert;
}

namespace {

double norm_of_combination(const GridFunction& f, const GridFunction& g, Complex lambda) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Complex v = f[k].value + lambda * g[k].value;
    m = std::max(m, std::hypot(v.real(), v.imag()));
  }
  return m;
}

double max_modulus(const GridFunction& h) {
  double m = 0.0;
  for (const auto& p : h.points()) m = std::max(m, std::hypot(p.value.real(), p.value.imag()));
  return m;
}

}  // namespace

VerificationReport verify_certificate(const GridFunction& f, const GridFunction& g, const ParallelCertificate& cert,
                                      double tol) {
  require_pairable(f, g);
  VerificationReport rep;
  const double nf = max_modulus(f);
  const double ng = max_modulus(g);
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) rep.failures.push_back(what);
  };

  if (!cert.verdict) {
    if (cert.lambda || cert.witness_point || cert.witness_measure || cert.dual) {
      throw MalformedCertificate("negative certificate carries witness fields");
    }
    if (!cert.gap) throw MalformedCertificate("negative certificate has no gap report");
    double best = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      best = std::max(best, std::hypot(f[k].value.real(), f[k].value.imag()) + std::hypot(g[k].value.real(), g[k].value.imag()));
    }
    rep.gap = nf + ng - best;
    rep.residual_norm = rep.gap;
    check(rep.gap > tol, "gap does not exceed tolerance; instance is parallel");
    check(std::abs(rep.gap - *cert.gap) <= tol, "reported gap disagrees with recomputed gap");
    rep.passed = rep.failures.empty();
    return rep;
  }

  if (!cert.lambda) throw MalformedCertificate("positive certificate has no lambda");
  if (!cert.witness_measure) throw MalformedCertificate("positive certificate has no witness measure");
  if (!cert.dual) throw MalformedCertificate("positive certificate has no dual functional");
  if (std::abs(std::abs(*cert.lambda) - 1.0) > 1e-12) throw MalformedCertificate("lambda is not unimodular");
  for (const auto& a : cert.witness_measure->atoms()) {
    if (f.index_of(a.point) == f.size()) throw MalformedCertificate("measure atom '" + a.point + "' not in grid");
  }
  for (const auto& a : cert.dual->atoms()) {
    if (f.index_of(a.point) == f.size()) throw MalformedCertificate("dual atom '" + a.point + "' not in grid");
  }

  rep.residual_norm = nf + ng - norm_of_combination(f, g, *cert.lambda);
  check(std::abs(rep.residual_norm) <= tol, "||f|| + ||g|| - ||f + lambda g|| exceeds tolerance");

  Complex integral{};
  for (const auto& a : cert.witness_measure->atoms()) {
    const std::size_t k = f.index_of(a.point);
    integral += a.weight * std::conj(f[k].value) * g[k].value;
    check(std::hypot(f[k].value.real(), f[k].value.imag()) >= nf - tol, "measure atom '" + a.point + "' outside M_f");
  }
  rep.residual_pairing = nf * ng - std::abs(integral);
  check(std::abs(rep.residual_pairing) <= tol, "||f|| ||g|| - |pairing| exceeds tolerance");

  rep.dual_value_error = std::abs(cert.dual->apply(f) - nf);
  rep.dual_modulus_error = std::abs(std::abs(cert.dual->apply(g)) - ng);
  rep.dual_norm_error = std::abs(cert.dual->norm() - 1.0);
  check(rep.dual_value_error <= tol, "phi(f) differs from ||f||");
  // 0 || g holds for every g, so with f = 0 the dual only has to be a norm-one
  // functional; any choice of atoms is an acceptable witness.
  if (nf > 0.0) check(rep.dual_modulus_error <= tol, "|phi(g)| differs from ||g||");
  check(rep.dual_norm_error <= tol, "||phi|| differs from 1");

  rep.passed = rep.failures.empty();
  return rep;
}

bool singleton_check(const GridFunction& f, const GridFunction& g, double tol) {
  require_pairable(f, g);
  const auto mf = attain_set(f, 0.0);
  if (mf.size() != 1) throw PreconditionError("singleton_check needs a unique maximizer of |f|");
  const auto mg = attain_set(g, tol);
  return std::find(mg.begin(), mg.end(), mf.front()) != mg.end();
}

}  // namespace normpar
