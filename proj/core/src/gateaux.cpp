#include "normpar/gateaux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normpar/error.hpp"

namespace normpar {

const char* method_name(DerivativeMethod m) {
  switch (m) {
    case DerivativeMethod::grid_exact: return "grid_exact";
    case DerivativeMethod::seq_infsup: return "seq_infsup";
    case DerivativeMethod::finite_difference: return "finite_difference";
  }
  return "?";
}

double dplus_grid(const GridFunction& f, const GridFunction& g) {
  require_pairable(f, g);
  if (f.is_zero()) return sup_norm(g);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : attain_set(f, 0.0)) {
    const std::size_t k = f.index_of(x);
    best = std::max(best, (std::conj(phase(f[k].value)) * g[k].value).real());
  }
  return best;
}

DerivativeReport dplus_grid_report(const GridFunction& f, const GridFunction& g) {
  DerivativeReport r;
  r.method = DerivativeMethod::grid_exact;
  r.value = dplus_grid(f, g);
  if (f.is_zero()) r.note = "f is identically zero; derivative is ||g||";
  return r;
}

DerivativeReport dplus_seq(const SequenceFunction& f, const SequenceFunction& g, const std::vector<double>& eps_schedule,
                           double tol) {
  if (f.truncation() != g.truncation()) throw PairingMismatch("sequence truncations differ");
  if (eps_schedule.empty()) throw PreconditionError("eps schedule is empty");
  DerivativeReport r;
  r.method = DerivativeMethod::seq_infsup;
  const auto fv = f.values();
  const auto gv = g.values();
  if (sup_norm_seq(f).estimate == 0.0) {
    r.value = sup_norm_seq(g).estimate;
    r.note = "f vanishes on the truncated range; derivative is ||g||";
    return r;
  }
  for (double eps : eps_schedule) {
    const auto level = level_set(f, eps);
    if (level.empty()) {
      throw PreconditionError("empty truncated level set at eps = " + std::to_string(eps) + "; increase the truncation");
    }
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t n : level) sup = std::max(sup, (std::conj(phase(fv[n])) * gv[n]).real());
    r.schedule.push_back({eps, sup});
  }
  r.value = r.schedule.back().value;
  if (r.schedule.size() > 1) {
    const double diff = std::abs(r.schedule.back().value - r.schedule[r.schedule.size() - 2].value);
    r.converged = diff <= tol;
    if (!r.converged) r.note = "partial sups still moving at the end of the eps schedule";
  }
  return r;
}

std::vector<double> default_t_schedule() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

namespace {

double quotient_from_values(std::span<const Complex> f, std::span<const Complex> g, double t) {
  if (!(t > 0.0)) throw PreconditionError("finite-difference step must be positive");
  double nf = 0.0;
  for (const auto& v : f) nf = std::max(nf, std::abs(v));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Complex s = f[k] + t * g[k];
    const double ms = std::abs(s);
    const double denom = ms + nf;
    if (denom == 0.0) {
      best = std::max(best, 0.0);
      continue;
    }
    // |s|^2 - nf^2 expanded so the O(t) part is not lost to cancellation.
    const double mf = std::abs(f[k]);
    const double num = (mf - nf) * (mf + nf) + 2.0 * t * (std::conj(f[k]) * g[k]).real() + t * t * std::norm(g[k]);
    best = std::max(best, num / (t * denom));
  }
  return best;
}

std::vector<Complex> values_of(const GridFunction& h) {
  std::vector<Complex> v;
  v.reserve(h.size());
  for (const auto& p : h.points()) v.push_back(p.value);
  return v;
}

DerivativeReport fd_report(std::span<const Complex> f, std::span<const Complex> g, const std::vector<double>& ts) {
  if (ts.empty()) throw PreconditionError("t schedule is empty");
  DerivativeReport r;
  r.method = DerivativeMethod::finite_difference;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (k > 0 && !(ts[k] < ts[k - 1])) throw PreconditionError("t schedule must be strictly decreasing");
    r.schedule.push_back({ts[k], quotient_from_values(f, g, ts[k])});
  }
  r.value = r.schedule.back().value;
  return r;
}

}  // namespace

double fd_quotient(const GridFunction& f, const GridFunction& g, double t) {
  require_pairable(f, g);
  const auto fv = values_of(f);
  const auto gv = values_of(g);
  return quotient_from_values(fv, gv, t);
}

double fd_quotient(const SequenceFunction& f, const SequenceFunction& g, double t) {
  if (f.truncation() != g.truncation()) throw PairingMismatch("sequence truncations differ");
  return quotient_from_values(f.values(), g.values(), t);
}

DerivativeReport dplus_fd(const GridFunction& f, const GridFunction& g, const std::vector<double>& t_schedule) {
  require_pairable(f, g);
  const auto fv = values_of(f);
  const auto gv = values_of(g);
  return fd_report(fv, gv, t_schedule);
}

DerivativeReport dplus_fd(const SequenceFunction& f, const SequenceFunction& g, const std::vector<double>& t_schedule) {
  if (f.truncation() != g.truncation()) throw PairingMismatch("sequence truncations differ");
  return fd_report(f.values(), g.values(), t_schedule);
}

}  // namespace normpar
