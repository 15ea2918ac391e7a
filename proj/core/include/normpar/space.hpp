#pragma once

// Discretized spaces of continuous functions: C(K) over a finite labeled grid,
// and C_b(N) through rule-defined sequences truncated at a finite index.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normpar/expr.hpp"

namespace normpar {

using Complex = std::complex<double>;

enum class ScalarField { real, complex };

// Total mass tolerance for probability measures.
inline constexpr double kMassTolerance = 1e-12;

struct GridPoint {
  std::string label;
  Complex value;
};

// A complex-valued function on a finite labeled point set. Labels are unique
// and nonempty, and the point list is nonempty.
class GridFunction {
 public:
  GridFunction(std::string space_id, std::vector<GridPoint> points);

  const std::string& space_id() const noexcept { return space_id_; }
  std::span<const GridPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const GridPoint& operator[](std::size_t k) const { return points_[k]; }

  // Index of `label`, or size() when absent.
  std::size_t index_of(std::string_view label) const;
  Complex value_at(std::string_view label) const;

  // Real when every stored value has zero imaginary part.
  ScalarField field() const noexcept;
  bool is_zero() const noexcept;

  // Same grid, values multiplied by `c`.
  GridFunction scaled(Complex c) const;

 private:
  std::string space_id_;
  std::vector<GridPoint> points_;
};

// Two grid functions can be paired only when they share the space id and the
// exact label sequence. Throws PairingMismatch otherwise.
void require_pairable(const GridFunction& f, const GridFunction& g);
bool pairable(const GridFunction& f, const GridFunction& g) noexcept;

// f(n) for 0 <= n <= truncation, given by an expression in `n`. Values are
// evaluated once at construction; evaluation failures and non-finite values
// are rejected there.
class SequenceFunction {
 public:
  SequenceFunction(Expression rule, std::size_t truncation);
  static SequenceFunction from_source(std::string_view rule, std::size_t truncation);

  const Expression& rule() const noexcept { return rule_; }
  std::size_t truncation() const noexcept { return values_.size() - 1; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator()(std::size_t n) const { return values_.at(n); }

 private:
  Expression rule_;
  std::vector<Complex> values_;
};

struct Atom {
  std::string point;
  double weight;
};

// Finitely supported probability measure on grid labels.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);
  static DiscreteMeasure dirac(std::string point);
  static DiscreteMeasure uniform(std::span<const std::string> points);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept;

 private:
  std::vector<Atom> atoms_;
};

// Sup-norm of a grid function (exact maximum of moduli).
double sup_norm(const GridFunction& f);

struct SequenceNorm {
  double estimate = 0.0;
  std::size_t argmax = 0;  // first index attaining the estimate
  bool attained = false;   // argmax < truncation - tail_margin
};

// Default tail margin is truncation / 10.
SequenceNorm sup_norm_seq(const SequenceFunction& f);
SequenceNorm sup_norm_seq(const SequenceFunction& f, std::size_t tail_margin);

// {x : |f(x)| >= ||f|| - tol}, labels in grid order. tol = 0 gives the exact
// norm attaining set.
std::vector<std::string> attain_set(const GridFunction& f, double tol = 0.0);

// {x : |f(x)| >= ||f|| - eps} for eps > 0.
std::vector<std::string> level_set(const GridFunction& f, double eps);
std::vector<std::size_t> level_set(const SequenceFunction& f, double eps);

// z / |z|, with phase(0) = 1. For real z this is the sign with sign(0) = 1.
Complex phase(Complex z) noexcept;

// Sum over atoms of weight * conj(f(x)) * g(x).
Complex pairing(const GridFunction& f, const GridFunction& g, const DiscreteMeasure& mu);

}  // namespace normpar
