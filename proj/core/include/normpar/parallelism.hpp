#pragma once

// Deciders and certificates for norm-parallelism under the sup-norm:
// f || g  iff  ||f + lambda g|| = ||f|| + ||g|| for some unimodular lambda.

#include <optional>
#include <string>
#include <vector>

#include "normpar/space.hpp"

namespace normpar {

inline constexpr double kGridTolerance = 1e-9;

struct DualAtom {
  std::string point;
  Complex coefficient;  // unimodular
  double weight;        // >= 0
};

// phi(h) = sum_j weight_j * coefficient_j * h(point_j). The total weight is at
// most 1, so ||phi|| <= 1 on C(K).
class DualFunctional {
 public:
  explicit DualFunctional(std::vector<DualAtom> atoms);

  std::span<const DualAtom> atoms() const noexcept { return atoms_; }
  Complex apply(const GridFunction& h) const;
  // Total variation norm: atoms at the same point are merged first.
  double norm() const;

 private:
  std::vector<DualAtom> atoms_;
};

struct DirectResult {
  bool verdict = false;
  double norm_f = 0.0;
  double norm_g = 0.0;
  // max over the grid of |f(x)| + |g(x)|, which equals max over lambda of ||f + lambda g||.
  double best_sum = 0.0;
  double gap = 0.0;  // norm_f + norm_g - best_sum
  std::string best_point;
  Complex best_lambda{1.0, 0.0};  // phase-aligns lambda g with f at best_point
  std::optional<Complex> lambda;
  std::optional<std::string> witness_point;
  double sum_norm = 0.0;  // ||f + best_lambda g|| evaluated pointwise
};

DirectResult parallel_direct(const GridFunction& f, const GridFunction& g, double tol = kGridTolerance);

// True iff attain_set(f, tol) and attain_set(g, tol) intersect.
bool parallel_attain(const GridFunction& f, const GridFunction& g, double tol = kGridTolerance);

struct WitnessResult {
  std::optional<DiscreteMeasure> measure;  // empty means "not parallel"
  std::string best_point;
  double best_modulus = 0.0;  // max over point masses on M_f of |pairing|
  double target = 0.0;        // ||f|| * ||g||
};

// Point-mass witness on M_f maximizing |conj(f) g|.
WitnessResult witness_measure(const GridFunction& f, const GridFunction& g, double tol = kGridTolerance);

// Cross-check of the witness value: maximizes Re(e^{-i theta} sum_x w_x c_x)
// over the probability simplex on attain_set(f, tol) with a linear program on
// a grid of `angles` directions, then re-aims theta at the LP optimum until
// the value stops increasing. Returns the maximal |pairing|.
double witness_value_lp(const GridFunction& f, const GridFunction& g, double tol = kGridTolerance, int angles = 360);

// phi(h) = conj(phase(f(x0))) h(x0). Requires x0 in attain_set(f, tol) and in
// attain_set(g, tol).
DualFunctional dual_certificate(const GridFunction& f, const GridFunction& g, const std::string& witness_point,
                                double tol = 0.0);

struct ParallelCertificate {
  bool verdict = false;
  std::optional<Complex> lambda;
  std::optional<std::string> witness_point;
  std::optional<DiscreteMeasure> witness_measure;
  std::optional<DualFunctional> dual;
  double residual_norm = 0.0;     // ||f|| + ||g|| - ||f + lambda g||
  double residual_pairing = 0.0;  // ||f|| ||g|| - |pairing(f, g, mu)|
  std::optional<double> gap;      // present when verdict is false
};

ParallelCertificate certify(const GridFunction& f, const GridFunction& g, double tol = kGridTolerance);

struct VerificationReport {
  bool passed = false;
  double residual_norm = 0.0;
  double residual_pairing = 0.0;
  double dual_value_error = 0.0;    // |phi(f) - ||f|||
  double dual_modulus_error = 0.0;  // ||phi(g)| - ||g|||
  double dual_norm_error = 0.0;     // |||phi|| - 1|
  double gap = 0.0;                 // recomputed for negative certificates
  std::vector<std::string> failures;
};

// Recomputes every residual from the raw grid values. Throws
// MalformedCertificate when required fields are missing or inconsistent.
VerificationReport verify_certificate(const GridFunction& f, const GridFunction& g, const ParallelCertificate& cert,
                                      double tol = kGridTolerance);

// Requires attain_set(f, 0) = {x0}; returns whether x0 is in attain_set(g, tol).
bool singleton_check(const GridFunction& f, const GridFunction& g, double tol = 0.0);

// ---- sequence model ----------------------------------------------------

enum class Outcome { parallel, not_parallel, inconclusive };
const char* outcome_name(Outcome o);

struct RecipeStep {
  double eps = 0.0;
  std::size_t index = 0;           // chosen point mass in the truncated level set
  std::size_t level_set_size = 0;
  double residual = 0.0;           // |conj(f)(||g|| f - lambda ||f|| g)| at index
  double limit_residual = 0.0;     // | ||g|| |f|^2 - ||f|| |conj(f) g| | at index
};

struct AsymptoticResult {
  Outcome outcome = Outcome::inconclusive;
  Complex lambda{1.0, 0.0};
  double norm_f = 0.0;
  double norm_g = 0.0;
  std::vector<RecipeStep> recipe;
  double final_residual = 0.0;
  double limit_residual = 0.0;
  bool converged = false;
  // Truncated direct test: max_n |f(n)| + |g(n)| >= ||f|| + ||g|| - direct_slack.
  double direct_best = 0.0;
  double direct_slack = 0.0;
  bool direct_verdict = false;
  std::string note;
};

std::vector<double> default_eps_schedule();

AsymptoticResult asymptotic_parallel(const SequenceFunction& f, const SequenceFunction& g,
                                     const std::vector<double>& eps_schedule = default_eps_schedule(),
                                     double tol = 1e-3);

}  // namespace normpar
