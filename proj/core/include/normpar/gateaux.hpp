#pragma once

// One-sided Gateaux derivative of the sup-norm,
//   D+(f, g) = lim_{t -> 0+} (||f + t g|| - ||f||) / t,
// in closed form on grids and sequences, plus the planar convex-hull
// machinery behind the half-plane argument for parallelism.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "normpar/space.hpp"

namespace normpar {

enum class DerivativeMethod { grid_exact, seq_infsup, finite_difference };
const char* method_name(DerivativeMethod m);

struct SchedulePoint {
  double parameter = 0.0;  // eps for seq_infsup, t for finite_difference
  double value = 0.0;
};

struct DerivativeReport {
  double value = 0.0;
  DerivativeMethod method = DerivativeMethod::grid_exact;
  std::vector<SchedulePoint> schedule;
  bool converged = true;
  std::string note;
};

// max over M_f of Re(conj(phase(f(x))) g(x)); ||g|| when f is identically zero.
double dplus_grid(const GridFunction& f, const GridFunction& g);
DerivativeReport dplus_grid_report(const GridFunction& f, const GridFunction& g);

// inf over eps of sup over the truncated level set M_f^eps, realized along a
// decreasing eps schedule. Flags non-convergence when the last two partial
// values differ by more than tol.
DerivativeReport dplus_seq(const SequenceFunction& f, const SequenceFunction& g,
                           const std::vector<double>& eps_schedule, double tol = 1e-3);

std::vector<double> default_t_schedule();

// (||f + t g|| - ||f||) / t, evaluated pointwise as
// max_x (|f(x) + t g(x)|^2 - ||f||^2) / (t (|f(x) + t g(x)| + ||f||)) to avoid
// cancellation at small t.
double fd_quotient(const GridFunction& f, const GridFunction& g, double t);
double fd_quotient(const SequenceFunction& f, const SequenceFunction& g, double t);

// Quotients along a decreasing t schedule; value is the smallest-t quotient.
DerivativeReport dplus_fd(const GridFunction& f, const GridFunction& g,
                          const std::vector<double>& t_schedule = default_t_schedule());
DerivativeReport dplus_fd(const SequenceFunction& f, const SequenceFunction& g,
                          const std::vector<double>& t_schedule = default_t_schedule());

// ---- planar hull -------------------------------------------------------

// Counter-clockwise hull without collinear points (Andrew's monotone chain).
std::vector<Complex> convex_hull(std::span<const Complex> points);

// Euclidean distance from 0 to the convex hull of the points.
double origin_hull_distance(std::span<const Complex> points);

// 0 in the closed convex hull, up to distance tol.
bool origin_in_hull(std::span<const Complex> points, double tol = 1e-9);

// min over unit directions u of max_j Re(u p_j): the support function of the
// hull minimized over a grid of `directions` angles and refined by golden
// section around the best grid angle. Equals -distance when 0 is outside.
double min_support(std::span<const Complex> points, int directions = 3600);

// Dual criterion: no open half plane through 0 contains every point.
bool origin_in_hull_dual(std::span<const Complex> points, int directions = 3600, double tol = 1e-9);

struct HullWeight {
  std::size_t index;
  double weight;
};

// Convex weights (at most three atoms) writing 0 as a combination of the
// points, from a basic feasible solution of the simplex LP.
std::optional<std::vector<HullWeight>> caratheodory_weights(std::span<const Complex> points);

// ||f|| - (largest |f(x)| strictly below ||f||); +inf when |f| is constant.
double spectral_gap(const GridFunction& f);

struct HalfplaneReport {
  bool contains_origin = false;
  bool dual_contains_origin = false;
  double spectral_gap = 0.0;
  double eps = 0.0;
  std::vector<std::string> labels;       // level_set(f, eps)
  std::vector<Complex> points;           // K_eps in label order
  std::optional<DiscreteMeasure> measure;  // convex weights hitting 0
};

// K_eps = { conj(phase(f(x))) (||g|| f(x) - lambda ||f|| g(x)) : x in M_f^eps }.
HalfplaneReport halfplane_witness(const GridFunction& f, const GridFunction& g, Complex lambda, double eps,
                                  double tol = 1e-9);

}  // namespace normpar
