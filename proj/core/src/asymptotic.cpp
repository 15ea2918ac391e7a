#include <algorithm>
#include <cmath>

#include "normpar/error.hpp"
#include "normpar/parallelism.hpp"

namespace normpar {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::parallel: return "parallel";
    case Outcome::not_parallel: return "not_parallel";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<double> default_eps_schedule() {
  std::vector<double> s;
  for (int k = 1; k <= 12; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

namespace {

void require_schedule(const std::vector<double>& s) {
  if (s.empty()) throw PreconditionError("eps schedule is empty");
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(s[k] > 0.0)) throw PreconditionError("eps schedule must be positive");
    if (k > 0 && !(s[k] < s[k - 1])) throw PreconditionError("eps schedule must be strictly decreasing");
  }
}

}  // namespace

AsymptoticResult asymptotic_parallel(const SequenceFunction& f, const SequenceFunction& g,
                                     const std::vector<double>& eps_schedule, double tol) {
  if (f.truncation() != g.truncation()) throw PairingMismatch("sequence truncations differ");
  require_schedule(eps_schedule);
  AsymptoticResult r;
  r.norm_f = sup_norm_seq(f).estimate;
  r.norm_g = sup_norm_seq(g).estimate;
  const double F = r.norm_f;
  const double G = r.norm_g;
  const auto fv = f.values();
  const auto gv = g.values();

  r.direct_slack = std::max(tol, eps_schedule.back());
  for (std::size_t n = 0; n < fv.size(); ++n) r.direct_best = std::max(r.direct_best, std::abs(fv[n]) + std::abs(gv[n]));
  r.direct_verdict = r.direct_best >= F + G - r.direct_slack;

  if (F == 0.0) {
    r.outcome = Outcome::parallel;
    r.converged = true;
    r.note = "f vanishes on the truncated range; 0 is parallel to every g";
    return r;
  }

  // lambda is fixed once, from the point of the finest level set where
  // |f g| is largest (latest index on ties); the recipe then tracks
  // conj(f)(||g|| f - lambda ||f|| g) -> 0 so that the pairing has a limit.
  {
    const auto finest = level_set(f, eps_schedule.back());
    std::size_t best = finest.front();
    double best_val = -1.0;
    for (std::size_t n : finest) {
      const double v = std::abs(fv[n] * gv[n]);
      if (v >= best_val) {
        best_val = v;
        best = n;
      }
    }
    r.lambda = phase(fv[best]) * std::conj(phase(gv[best]));
  }

  for (double eps : eps_schedule) {
    const auto level = level_set(f, eps);
    RecipeStep step;
    step.eps = eps;
    step.level_set_size = level.size();
    step.residual = std::numeric_limits<double>::infinity();
    for (std::size_t n : level) {
      const double res = std::abs(std::conj(fv[n]) * (G * fv[n] - r.lambda * F * gv[n]));
      if (res <= step.residual) {
        step.residual = res;
        step.index = n;
      }
    }
    const Complex fx = fv[step.index];
    const Complex gx = gv[step.index];
    step.limit_residual = std::abs(G * std::norm(fx) - F * std::abs(std::conj(fx) * gx));
    r.recipe.push_back(step);
  }

  r.final_residual = r.recipe.back().residual;
  r.limit_residual = r.recipe.back().limit_residual;
  const double last_step =
      r.recipe.size() > 1 ? std::abs(r.recipe.back().residual - r.recipe[r.recipe.size() - 2].residual) : 0.0;
  r.converged = last_step < tol;

  const bool limit_zero = r.converged && r.final_residual < tol;
  const bool limit_positive = r.converged && r.final_residual >= tol;
  if (limit_zero && r.direct_verdict) {
    r.outcome = Outcome::parallel;
  } else if (limit_positive && !r.direct_verdict) {
    r.outcome = Outcome::not_parallel;
  } else {
    r.outcome = Outcome::inconclusive;
    r.note = r.converged ? "recipe residual and truncated direct test disagree at truncation " + std::to_string(f.truncation())
                         : "recipe residual has not settled at truncation " + std::to_string(f.truncation());
  }
  return r;
}

}  // namespace normpar
