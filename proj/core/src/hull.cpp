#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "normpar/error.hpp"
#include "normpar/gateaux.hpp"
#include "normpar/lp.hpp"

namespace normpar {

namespace {

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(a);
  const double s = std::clamp(-(std::conj(d) * a).real() / len2, 0.0, 1.0);
  return std::abs(a + s * d);
}

double support(std::span<const Complex> points, double theta) {
  const Complex u = std::polar(1.0, theta);
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) h = std::max(h, (u * p).real());
  return h;
}

}  // namespace

std::vector<Complex> convex_hull(std::span<const Complex> points) {
  std::vector<Complex> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() <= 2) return p;
  std::vector<Complex> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

double origin_hull_distance(std::span<const Complex> points) {
  if (points.empty()) throw PreconditionError("origin_hull_distance needs at least one point");
  const auto h = convex_hull(points);
  if (h.size() == 1) return std::abs(h[0]);
  if (h.size() == 2) return segment_distance(h[0], h[1]);
  bool inside = true;
  for (std::size_t k = 0; k < h.size() && inside; ++k) {
    inside = cross(h[k], h[(k + 1) % h.size()], Complex{}) >= 0.0;
  }
  if (inside) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < h.size(); ++k) d = std::min(d, segment_distance(h[k], h[(k + 1) % h.size()]));
  return d;
}

bool origin_in_hull(std::span<const Complex> points, double tol) { return origin_hull_distance(points) <= tol; }

double min_support(std::span<const Complex> points, int directions) {
  if (points.empty()) throw PreconditionError("min_support needs at least one point");
  if (directions < 3) throw PreconditionError("min_support needs at least three directions");
  const double step = 2.0 * std::numbers::pi / directions;
  std::vector<double> h(directions);
  for (int k = 0; k < directions; ++k) h[k] = support(points, k * step);

  double best = *std::min_element(h.begin(), h.end());
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  // Every grid-local minimum is refined: the negative arc of the support
  // function can be narrower than one grid step.
  for (int k = 0; k < directions; ++k) {
    const double left = h[(k + directions - 1) % directions];
    const double right = h[(k + 1) % directions];
    if (h[k] > left || h[k] > right) continue;
    double a = (k - 1) * step;
    double b = (k + 1) * step;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double hc = support(points, c);
    double hd = support(points, d);
    for (int it = 0; it < 80; ++it) {
      if (hc < hd) {
        b = d;
        d = c;
        hd = hc;
        c = b - phi * (b - a);
        hc = support(points, c);
      } else {
        a = c;
        c = d;
        hc = hd;
        d = a + phi * (b - a);
        hd = support(points, d);
      }
    }
    best = std::min({best, hc, hd});
  }
  return best;
}

bool origin_in_hull_dual(std::span<const Complex> points, int directions, double tol) {
  return min_support(points, directions) >= -tol;
}

std::optional<std::vector<HullWeight>> caratheodory_weights(std::span<const Complex> points) {
  if (points.empty()) throw PreconditionError("caratheodory_weights needs at least one point");
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, std::abs(p));
  const int n = static_cast<int>(points.size());
  std::vector<HullWeight> out;
  if (scale == 0.0) {
    out.push_back({0, 1.0});
    return out;
  }
  Eigen::MatrixXd A(3, n);
  for (int j = 0; j < n; ++j) {
    A(0, j) = points[j].real() / scale;
    A(1, j) = points[j].imag() / scale;
    A(2, j) = 1.0;
  }
  Eigen::Vector3d b(0.0, 0.0, 1.0);
  const LpResult lp = solve_lp(A, b, Eigen::VectorXd::Zero(n));
  if (lp.status != LpStatus::optimal) return std::nullopt;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (lp.x(j) > 0.0) {
      out.push_back({static_cast<std::size_t>(j), lp.x(j)});
      total += lp.x(j);
    }
  }
  for (auto& w : out) w.weight /= total;
  return out;
}

double spectral_gap(const GridFunction& f) {
  const double top = sup_norm(f);
  double second = -1.0;
  for (const auto& p : f.points()) {
    const double m = std::abs(p.value);
    if (m < top) second = std::max(second, m);
  }
  return second < 0.0 ? std::numeric_limits<double>::infinity() : top - second;
}

HalfplaneReport halfplane_witness(const GridFunction& f, const GridFunction& g, Complex lambda, double eps, double tol) {
  require_pairable(f, g);
  if (std::abs(std::abs(lambda) - 1.0) > 1e-9) throw PreconditionError("lambda must be unimodular");
  HalfplaneReport r;
  r.eps = eps;
  r.spectral_gap = spectral_gap(f);
  r.labels = level_set(f, eps);
  const double F = sup_norm(f);
  const double G = sup_norm(g);
  for (const auto& x : r.labels) {
    const std::size_t k = f.index_of(x);
    r.points.push_back(std::conj(phase(f[k].value)) * (G * f[k].value - lambda * F * g[k].value));
  }
  r.contains_origin = origin_in_hull(r.points, tol);
  r.dual_contains_origin = origin_in_hull_dual(r.points, 3600, tol);
  if (r.contains_origin) {
    if (auto weights = caratheodory_weights(r.points)) {
      std::vector<Atom> atoms;
      for (const auto& w : *weights) atoms.push_back({r.labels[w.index], w.weight});
      r.measure = DiscreteMeasure(std::move(atoms));
    }
  }
  return r;
}

}  // namespace normpar
