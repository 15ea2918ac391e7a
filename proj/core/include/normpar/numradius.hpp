#pragma once

// Finite-dimensional model of uniformly continuous maps f : B_X -> X for
// X = l_p^n (p in {1, 2, inf}), real or complex. Provides the numerical radius
//   v(f) = sup { |x*(f(x))| : ||x*|| = x*(x) = 1 },
// the test f || Id via v(f) = ||f||, a Euclidean Bishop-Phelps-Bollobas
// correction and the Daugavet check ||A + I|| = ||A|| + 1.
//
// Functionals are stored as coefficient vectors c acting by x*(y) = sum_j c_j y_j.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "normpar/expr.hpp"
#include "normpar/space.hpp"

namespace normpar {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

enum class PNorm { one, two, infinity };
const char* pnorm_name(PNorm p);
PNorm dual_exponent(PNorm p);

struct FiniteDimSpace {
  std::size_t dim = 1;
  PNorm p = PNorm::two;
  ScalarField field = ScalarField::real;

  void validate() const;
};

double norm(const FiniteDimSpace& space, const Vec& x);
double dual_norm(const FiniteDimSpace& space, const Vec& functional);
Complex apply_functional(const Vec& functional, const Vec& x);

// Operator norm of a matrix on l_p^n: max row sum (inf), max column sum (1),
// largest singular value (2).
double operator_norm(const FiniteDimSpace& space, const Mat& a);

struct MatrixBody {
  Mat matrix;
};

// One expression per output coordinate, in variables x1..xn.
struct RuleBody {
  std::vector<Expression> components;
};

class BallFunction {
 public:
  BallFunction(FiniteDimSpace space, Mat matrix);
  BallFunction(FiniteDimSpace space, std::vector<Expression> components);
  static BallFunction identity(const FiniteDimSpace& space);

  const FiniteDimSpace& space() const noexcept { return space_; }
  bool is_matrix() const noexcept { return std::holds_alternative<MatrixBody>(body_); }
  const Mat& matrix() const;
  const std::vector<Expression>& components() const;

  // Throws EvalError for rule bodies that fail to evaluate, and InvalidInput
  // when a real-field rule produces a non-real value.
  Vec operator()(const Vec& x) const;

 private:
  FiniteDimSpace space_;
  std::variant<MatrixBody, RuleBody> body_;
};

struct NormingPair {
  Vec point;
  Vec functional;
};

// Extreme points of the face of norming functionals at a unit vector x.
// l_1 free coordinates are discretized to `phase_samples` unimodular values
// in complex mode and to {-1, +1} in real mode.
std::vector<Vec> norming_functionals(const FiniteDimSpace& space, const Vec& x, double tol = 1e-9,
                                     int phase_samples = 64);

// max over norming functionals x* at x of |x*(y)|, in closed form, with the
// maximizing functional.
std::pair<double, Vec> best_norming_value(const FiniteDimSpace& space, const Vec& x, const Vec& y, double tol = 1e-9);

struct SamplingSpec {
  std::size_t density = 10000;
  std::uint64_t seed = 0;
  bool refine = true;
  std::size_t radii = 16;  // ball samples use radii k / radii, k = 0..radii
};

std::vector<Vec> sphere_samples(const FiniteDimSpace& space, const SamplingSpec& spec);
std::vector<Vec> ball_samples(const FiniteDimSpace& space, const SamplingSpec& spec);

struct RadiusReport {
  double value = 0.0;  // lower estimate of v(f)
  NormingPair pair;
  std::size_t samples = 0;
  bool refined = false;
};

RadiusReport numerical_radius(const BallFunction& f, const SamplingSpec& spec = {});

struct FunctionNorm {
  double value = 0.0;
  bool exact = false;  // matrix bodies use the exact operator norm
  Vec point;
};

FunctionNorm function_norm(const BallFunction& f, const SamplingSpec& spec = {});

// ||Id + lambda f|| (exact for matrices, ball-sampled for rules).
double id_plus_lambda_norm(const BallFunction& f, Complex lambda, const SamplingSpec& spec = {});

struct ParallelToIdReport {
  bool verdict_v = false;       // |v(f) - ||f||| <= tol
  bool verdict_direct = false;  // max_lambda ||Id + lambda f|| >= 1 + ||f|| - tol
  bool agree = false;
  double v_hat = 0.0;
  double norm_hat = 0.0;
  double direct_norm = 0.0;
  Complex direct_lambda{1.0, 0.0};
  NormingPair pair;               // best (x, x*) for v(f)
  Complex lambda{1.0, 0.0};       // x*(f(x)) = conj(lambda) |x*(f(x))|
  std::optional<double> lipschitz_estimate;  // rule bodies only
  bool lipschitz_warning = false;
  std::string diagnostic;
};

inline constexpr double kRadiusTolerance = 1e-6;
inline constexpr double kLipschitzWarning = 1e3;

ParallelToIdReport parallel_to_id(const BallFunction& f, double tol = kRadiusTolerance, const SamplingSpec& spec = {});

struct BpbResult {
  Vec z;
  Vec z_functional;
  double point_distance = 0.0;       // ||y - z||
  double functional_distance = 0.0;  // ||y* - z*||
  double pairing_error = 0.0;        // |z*(z) - 1|
  double bound = 0.0;                // sqrt(2 theta)
};

// Euclidean case only (p = 2). Throws PreconditionError when the hypothesis
// Re y*(y) > 1 - theta or a norm bound fails, and Error if a postcondition
// cannot be met.
BpbResult bpb_correct(const FiniteDimSpace& space, const Vec& y, const Vec& y_functional, double theta);

struct DaugavetReport {
  bool verdict = false;
  double norm_a = 0.0;
  double norm_a_plus_id = 0.0;
};

DaugavetReport daugavet_check(const FiniteDimSpace& space, const Mat& a, double tol = kRadiusTolerance);

struct SphereSupReport {
  double ball_sup = 0.0;
  double sphere_sup = 0.0;
  bool equal = false;
};

SphereSupReport sphere_sup_check(const BallFunction& f, double tol = kRadiusTolerance, const SamplingSpec& spec = {});

}  // namespace normpar
