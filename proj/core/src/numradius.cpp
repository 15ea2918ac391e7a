#include "normpar/numradius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "normpar/error.hpp"

namespace normpar {

const char* pnorm_name(PNorm p) {
  switch (p) {
    case PNorm::one: return "one";
    case PNorm::two: return "two";
    case PNorm::infinity: return "infinity";
  }
  return "?";
}

PNorm dual_exponent(PNorm p) {
  switch (p) {
    case PNorm::one: return PNorm::infinity;
    case PNorm::two: return PNorm::two;
    case PNorm::infinity: return PNorm::one;
  }
  return PNorm::two;
}

void FiniteDimSpace::validate() const {
  if (dim < 1) throw InvalidInput("space dimension must be at least 1");
}

namespace {

double pnorm(PNorm p, const Vec& x) {
  switch (p) {
    case PNorm::one: return x.cwiseAbs().sum();
    case PNorm::two: return x.norm();
    case PNorm::infinity: return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  }
  return 0.0;
}

void require_dim(const FiniteDimSpace& space, const Vec& x) {
  if (static_cast<std::size_t>(x.size()) != space.dim) throw InvalidInput("vector dimension does not match the space");
}

}  // namespace

double norm(const FiniteDimSpace& space, const Vec& x) {
  require_dim(space, x);
  return pnorm(space.p, x);
}

double dual_norm(const FiniteDimSpace& space, const Vec& functional) {
  require_dim(space, functional);
  return pnorm(dual_exponent(space.p), functional);
}

Complex apply_functional(const Vec& functional, const Vec& x) { return (functional.transpose() * x)(0); }

double operator_norm(const FiniteDimSpace& space, const Mat& a) {
  if (static_cast<std::size_t>(a.rows()) != space.dim || static_cast<std::size_t>(a.cols()) != space.dim) {
    throw InvalidInput("matrix shape does not match the space");
  }
  switch (space.p) {
    case PNorm::infinity: return a.cwiseAbs().rowwise().sum().maxCoeff();
    case PNorm::one: return a.cwiseAbs().colwise().sum().maxCoeff();
    case PNorm::two: {
      Eigen::JacobiSVD<Mat> svd(a);
      return svd.singularValues()(0);
    }
  }
  return 0.0;
}

BallFunction::BallFunction(FiniteDimSpace space, Mat matrix) : space_(space), body_(MatrixBody{std::move(matrix)}) {
  space_.validate();
  const Mat& m = std::get<MatrixBody>(body_).matrix;
  if (static_cast<std::size_t>(m.rows()) != space_.dim || static_cast<std::size_t>(m.cols()) != space_.dim) {
    throw InvalidInput("matrix body must be dim x dim");
  }
  if (!m.allFinite()) throw InvalidInput("matrix body has non-finite entries");
  if (space_.field == ScalarField::real && m.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw InvalidInput("real space with a non-real matrix body");
  }
}

BallFunction::BallFunction(FiniteDimSpace space, std::vector<Expression> components)
    : space_(space), body_(RuleBody{std::move(components)}) {
  space_.validate();
  const auto& comps = std::get<RuleBody>(body_).components;
  if (comps.size() != space_.dim) throw InvalidInput("rule body needs one expression per coordinate");
  const auto allowed = coordinate_variables(space_.dim);
  for (const auto& e : comps) {
    for (const auto& v : e.variables()) {
      if (allowed.count(v) == 0) throw InvalidInput("rule body uses undeclared variable '" + v + "'");
    }
  }
  // Admissibility probe on the centre and the coordinate vertices.
  (*this)(Vec::Zero(space_.dim));
  for (std::size_t k = 0; k < space_.dim; ++k) (*this)(Vec::Unit(space_.dim, k));
}

BallFunction BallFunction::identity(const FiniteDimSpace& space) {
  return BallFunction(space, Mat::Identity(space.dim, space.dim));
}

const Mat& BallFunction::matrix() const {
  if (!is_matrix()) throw PreconditionError("ball function is rule-based");
  return std::get<MatrixBody>(body_).matrix;
}

const std::vector<Expression>& BallFunction::components() const {
  if (is_matrix()) throw PreconditionError("ball function is matrix-based");
  return std::get<RuleBody>(body_).components;
}

Vec BallFunction::operator()(const Vec& x) const {
  require_dim(space_, x);
  if (is_matrix()) return matrix() * x;
  Bindings b;
  for (std::size_t k = 0; k < space_.dim; ++k) b.emplace("x" + std::to_string(k + 1), x(k));
  const auto& comps = components();
  Vec out(space_.dim);
  for (std::size_t k = 0; k < space_.dim; ++k) {
    out(k) = comps[k].evaluate(b);
    if (space_.field == ScalarField::real) {
      if (std::abs(out(k).imag()) > 1e-12 * (1.0 + std::abs(out(k).real()))) {
        throw InvalidInput("rule component " + std::to_string(k + 1) + " is not real-valued");
      }
      out(k) = out(k).real();
    }
  }
  return out;
}

std::vector<Vec> norming_functionals(const FiniteDimSpace& space, const Vec& x, double tol, int phase_samples) {
  space.validate();
  if (std::abs(norm(space, x) - 1.0) > tol) throw PreconditionError("norming_functionals needs a unit vector");
  const std::size_t n = space.dim;
  std::vector<Vec> out;
  switch (space.p) {
    case PNorm::two:
      out.push_back(x.conjugate());
      break;
    case PNorm::infinity:
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x(j)) >= 1.0 - tol) {
          Vec c = Vec::Zero(n);
          c(j) = std::conj(phase(x(j)));
          out.push_back(c);
        }
      }
      break;
    case PNorm::one: {
      std::vector<Complex> choices;
      if (space.field == ScalarField::real) {
        choices = {1.0, -1.0};
      } else {
        for (int k = 0; k < phase_samples; ++k) choices.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / phase_samples));
      }
      std::vector<std::size_t> free;
      Vec base(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x(j)) > tol) {
          base(j) = std::conj(phase(x(j)));
        } else {
          base(j) = 1.0;
          free.push_back(j);
        }
      }
      double count = std::pow(static_cast<double>(choices.size()), static_cast<double>(free.size()));
      if (count > 1e6) throw PreconditionError("too many l_1 norming functionals to enumerate");
      const auto total = static_cast<std::size_t>(count);
      for (std::size_t code = 0; code < total; ++code) {
        Vec c = base;
        std::size_t rest = code;
        for (std::size_t j : free) {
          c(j) = choices[rest % choices.size()];
          rest /= choices.size();
        }
        out.push_back(c);
      }
      break;
    }
  }
  return out;
}

std::pair<double, Vec> best_norming_value(const FiniteDimSpace& space, const Vec& x, const Vec& y, double tol) {
  const std::size_t n = space.dim;
  switch (space.p) {
    case PNorm::two: {
      Vec c = x.conjugate();
      return {std::abs(apply_functional(c, y)), c};
    }
    case PNorm::infinity: {
      double best = -1.0;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x(j)) >= 1.0 - tol && std::abs(y(j)) > best) {
          best = std::abs(y(j));
          arg = j;
        }
      }
      Vec c = Vec::Zero(n);
      c(arg) = std::conj(phase(x(arg)));
      return {std::max(best, 0.0), c};
    }
    case PNorm::one: {
      // Fixed coordinates contribute a sum S; each free coordinate is aligned
      // with S, adding |y_j|.
      Vec c(n);
      Complex fixed{};
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x(j)) > tol) {
          c(j) = std::conj(phase(x(j)));
          fixed += c(j) * y(j);
        }
      }
      const Complex align = phase(fixed);
      double value = std::abs(fixed);
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x(j)) <= tol) {
          c(j) = space.field == ScalarField::real ? align * phase(y(j).real()) : align * std::conj(phase(y(j)));
          value += std::abs(y(j));
        }
      }
      return {value, c};
    }
  }
  return {0.0, Vec::Zero(n)};
}

namespace {

constexpr std::size_t kAscentStarts = 8;

// Coordinate pattern search on the Euclidean unit sphere: perturb each real
// degree of freedom, renormalize, keep improvements, halve the step when a
// sweep stalls.
template <class Objective>
Vec sphere_ascent(const FiniteDimSpace& space, Vec x, Objective&& objective, double& best) {
  const bool complex = space.field == ScalarField::complex;
  const std::size_t dofs = complex ? 2 * space.dim : space.dim;
  double step = 0.05;
  for (int guard = 0; guard < 200000 && step > 1e-12; ++guard) {
    bool improved = false;
    for (std::size_t k = 0; k < dofs; ++k) {
      for (double s : {1.0, -1.0}) {
        Vec y = x;
        if (k < space.dim) y(k) += s * step;
        else y(k - space.dim) += Complex{0.0, s * step};
        y /= y.norm();
        const double v = objective(y);
        if (v > best) {
          best = v;
          x = y;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

std::vector<Complex> lambda_grid(ScalarField field, int count) {
  if (field == ScalarField::real) return {1.0, -1.0};
  std::vector<Complex> out;
  for (int k = 0; k < count; ++k) out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / count));
  return out;
}

// max over lambda of h(lambda): grid, then golden section around the best
// grid angle (complex field only).
template <class H>
std::pair<double, Complex> maximize_over_circle(ScalarField field, int count, H&& h) {
  double best = -std::numeric_limits<double>::infinity();
  Complex arg{1.0, 0.0};
  for (const Complex& l : lambda_grid(field, count)) {
    const double v = h(l);
    if (v > best) {
      best = v;
      arg = l;
    }
  }
  if (field == ScalarField::real) return {best, arg};
  const double step = 2.0 * std::numbers::pi / count;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::arg(arg) - step;
  double b = std::arg(arg) + step;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double hc = h(std::polar(1.0, c));
  double hd = h(std::polar(1.0, d));
  for (int it = 0; it < 60; ++it) {
    if (hc > hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - phi * (b - a);
      hc = h(std::polar(1.0, c));
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + phi * (b - a);
      hd = h(std::polar(1.0, d));
    }
  }
  if (hc > best) return {hc, std::polar(1.0, c)};
  if (hd > best) return {hd, std::polar(1.0, d)};
  return {best, arg};
}

double sampled_sup(const BallFunction& f, const std::vector<Vec>& xs, Vec* at = nullptr) {
  double best = 0.0;
  for (const auto& x : xs) {
    const double v = norm(f.space(), f(x));
    if (v > best) {
      best = v;
      if (at) *at = x;
    }
  }
  return best;
}

}  // namespace

RadiusReport numerical_radius(const BallFunction& f, const SamplingSpec& spec) {
  const FiniteDimSpace& space = f.space();
  RadiusReport r;
  const auto xs = sphere_samples(space, spec);
  r.samples = xs.size();
  r.value = -1.0;
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    auto [v, c] = best_norming_value(space, xs[k], f(xs[k]));
    ranked.emplace_back(v, k);
    if (v > r.value) {
      r.value = v;
      r.pair = {xs[k], c};
    }
  }
  if (spec.refine && f.is_matrix() && space.p == PNorm::two) {
    // |<Ax, x>| can have several local maxima on the sphere (for Hermitian A,
    // the extreme eigenvectors of both signs), so ascend from the best few
    // samples that are not phase multiples of one another.
    const Mat& a = f.matrix();
    auto objective = [&](const Vec& y) { return std::abs(y.dot(a * y)); };
    std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    std::vector<Vec> starts;
    for (const auto& [v, k] : ranked) {
      if (starts.size() == kAscentStarts) break;
      const bool distinct = std::all_of(starts.begin(), starts.end(), [&](const Vec& s) {
        return std::abs(s.dot(xs[k])) < 0.9;
      });
      if (distinct) starts.push_back(xs[k]);
    }
    double best = r.value;
    for (const auto& s : starts) {
      double local = objective(s);
      const Vec x = sphere_ascent(space, s, objective, local);
      if (local > best) {
        best = local;
        r.pair = {x, x.conjugate()};
      }
    }
    if (best > r.value) r.value = best;
    r.refined = true;
  }
  return r;
}

FunctionNorm function_norm(const BallFunction& f, const SamplingSpec& spec) {
  FunctionNorm out;
  if (f.is_matrix()) {
    out.value = operator_norm(f.space(), f.matrix());
    out.exact = true;
    return out;
  }
  out.point = Vec::Zero(f.space().dim);
  out.value = sampled_sup(f, ball_samples(f.space(), spec), &out.point);
  return out;
}

double id_plus_lambda_norm(const BallFunction& f, Complex lambda, const SamplingSpec& spec) {
  if (f.is_matrix()) {
    const Mat m = Mat::Identity(f.space().dim, f.space().dim) + lambda * f.matrix();
    return operator_norm(f.space(), m);
  }
  double best = 0.0;
  for (const auto& x : ball_samples(f.space(), spec)) best = std::max(best, norm(f.space(), x + lambda * f(x)));
  return best;
}

ParallelToIdReport parallel_to_id(const BallFunction& f, double tol, const SamplingSpec& spec) {
  const FiniteDimSpace& space = f.space();
  ParallelToIdReport r;
  const RadiusReport radius = numerical_radius(f, spec);
  r.v_hat = radius.value;
  r.pair = radius.pair;
  r.lambda = std::conj(phase(apply_functional(radius.pair.functional, f(radius.pair.point))));
  if (space.field == ScalarField::real) r.lambda = r.lambda.real() < 0.0 ? -1.0 : 1.0;
  r.norm_hat = function_norm(f, spec).value;
  r.verdict_v = std::abs(r.v_hat - r.norm_hat) <= tol;

  if (f.is_matrix()) {
    const Mat& a = f.matrix();
    const Mat id = Mat::Identity(space.dim, space.dim);
    auto [value, lambda] =
        maximize_over_circle(space.field, 3600, [&](Complex l) { return operator_norm(space, id + l * a); });
    r.direct_norm = value;
    r.direct_lambda = lambda;
  } else {
    const auto xs = ball_samples(space, spec);
    std::vector<Vec> fx;
    fx.reserve(xs.size());
    for (const auto& x : xs) fx.push_back(f(x));
    auto [value, lambda] = maximize_over_circle(space.field, 360, [&](Complex l) {
      double best = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) best = std::max(best, norm(space, xs[k] + l * fx[k]));
      return best;
    });
    r.direct_norm = value;
    r.direct_lambda = lambda;

    // Uniform continuity is assumed; estimate a Lipschitz constant from
    // short coordinate steps and warn when it is large.
    const double h = 1e-5;
    double lip = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / 2000);
    for (std::size_t k = 0; k < xs.size(); k += stride) {
      Vec step = Vec::Zero(space.dim);
      step((k / stride) % space.dim) = h;
      Vec y = xs[k] + step;
      if (norm(space, y) > 1.0) y = xs[k] - step;
      const double dx = norm(space, y - xs[k]);
      if (dx > 0.0 && norm(space, y) <= 1.0) lip = std::max(lip, norm(space, f(y) - fx[k]) / dx);
    }
    r.lipschitz_estimate = lip;
    r.lipschitz_warning = lip > kLipschitzWarning;
  }
  r.verdict_direct = r.direct_norm >= 1.0 + r.norm_hat - tol;
  r.agree = r.verdict_v == r.verdict_direct;
  if (!r.agree) {
    r.diagnostic = "numerical radius route says " + std::string(r.verdict_v ? "parallel" : "not parallel") +
                   " but ||Id + lambda f|| route says " + (r.verdict_direct ? "parallel" : "not parallel") +
                   "; sampling may be too coarse";
  }
  return r;
}

BpbResult bpb_correct(const FiniteDimSpace& space, const Vec& y, const Vec& y_functional, double theta) {
  space.validate();
  if (space.p != PNorm::two) throw PreconditionError("bpb_correct is implemented for the Euclidean norm only");
  if (!(theta > 0.0 && theta < 2.0)) throw PreconditionError("theta must lie in (0, 2)");
  require_dim(space, y);
  require_dim(space, y_functional);
  if (y.norm() > 1.0 + 1e-12) throw PreconditionError("y is outside the unit ball");
  if (y_functional.norm() > 1.0 + 1e-12) throw PreconditionError("y* is outside the dual unit ball");
  const double pairing_value = apply_functional(y_functional, y).real();
  if (!(pairing_value > 1.0 - theta)) throw PreconditionError("hypothesis Re y*(y) > 1 - theta fails");

  // Riesz representer: y*(w) = <w, u> with u = conj(coefficients).
  const Vec u = y_functional.conjugate();
  const double bound = std::sqrt(2.0 * theta);
  auto margin = [&](const Vec& z) { return std::min(bound - (y - z).norm(), bound - (u - z).norm()); };

  const std::size_t n = space.dim;
  std::vector<Vec> anchors;
  if (y.norm() > 0.0) anchors.push_back(y / y.norm());
  if (u.norm() > 0.0) anchors.push_back(u / u.norm());
  if (anchors.empty()) anchors.push_back(Vec::Unit(n, 0));

  Vec best_z = anchors.front();
  double best_margin = margin(best_z);
  auto consider = [&](const Vec& w) {
    const double len = w.norm();
    if (len < 1e-12) return;
    const Vec z = w / len;
    const double m = margin(z);
    if (m > best_margin) {
      best_margin = m;
      best_z = z;
    }
  };
  for (const auto& a : anchors) consider(a);
  consider(y + u);
  if (anchors.size() == 2) {
    // The optimum lies on the arc from y/|y| to u/|u| in their real span.
    const Vec& a = anchors[0];
    const Vec& b = anchors[1];
    for (int k = 0; k <= 256; ++k) {
      const double s = k / 256.0;
      consider((1.0 - s) * a + s * b);
    }
    // Nearly antipodal anchors: also try directions orthogonal to a.
    for (std::size_t k = 0; k < n; ++k) {
      const Vec e = Vec::Unit(n, k);
      consider(e - a.dot(e) * a);
    }
  }

  BpbResult r;
  r.z = best_z;
  r.z_functional = best_z.conjugate();
  r.point_distance = (y - r.z).norm();
  r.functional_distance = (y_functional - r.z_functional).norm();
  r.pairing_error = std::abs(apply_functional(r.z_functional, r.z) - 1.0);
  r.bound = bound;
  if (!(r.point_distance < bound && r.functional_distance < bound && r.pairing_error <= 1e-12)) {
    throw Error("bpb_correct: postconditions not met");
  }
  return r;
}

DaugavetReport daugavet_check(const FiniteDimSpace& space, const Mat& a, double tol) {
  space.validate();
  DaugavetReport r;
  r.norm_a = operator_norm(space, a);
  r.norm_a_plus_id = operator_norm(space, a + Mat::Identity(space.dim, space.dim));
  r.verdict = r.norm_a_plus_id >= r.norm_a + 1.0 - tol;
  return r;
}

SphereSupReport sphere_sup_check(const BallFunction& f, double tol, const SamplingSpec& spec) {
  SphereSupReport r;
  r.sphere_sup = sampled_sup(f, sphere_samples(f.space(), spec));
  r.ball_sup = sampled_sup(f, ball_samples(f.space(), spec));
  r.equal = r.ball_sup - r.sphere_sup <= tol;
  return r;
}

}  // namespace normpar
