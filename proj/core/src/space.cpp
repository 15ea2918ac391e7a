#include "normpar/space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "normpar/error.hpp"

namespace normpar {

GridFunction::GridFunction(std::string space_id, std::vector<GridPoint> points)
    : space_id_(std::move(space_id)), points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("grid function has no points");
  std::unordered_set<std::string_view> seen;
  for (const auto& p : points_) {
    if (p.label.empty()) throw InvalidInput("grid point with empty label");
    if (!seen.insert(p.label).second) throw InvalidInput("duplicate grid label '" + p.label + "'");
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
      throw InvalidInput("non-finite value at grid label '" + p.label + "'");
    }
  }
}

std::size_t GridFunction::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (points_[k].label == label) return k;
  }
  return points_.size();
}

Complex GridFunction::value_at(std::string_view label) const {
  const std::size_t k = index_of(label);
  if (k == points_.size()) throw InvalidInput("label '" + std::string(label) + "' not in grid");
  return points_[k].value;
}

ScalarField GridFunction::field() const noexcept {
  const bool real = std::all_of(points_.begin(), points_.end(), [](const GridPoint& p) { return p.value.imag() == 0.0; });
  return real ? ScalarField::real : ScalarField::complex;
}

bool GridFunction::is_zero() const noexcept {
  return std::all_of(points_.begin(), points_.end(), [](const GridPoint& p) { return p.value == Complex{}; });
}

GridFunction GridFunction::scaled(Complex c) const {
  std::vector<GridPoint> pts = points_;
  for (auto& p : pts) p.value *= c;
  return GridFunction(space_id_, std::move(pts));
}

bool pairable(const GridFunction& f, const GridFunction& g) noexcept {
  if (f.space_id() != g.space_id() || f.size() != g.size()) return false;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].label != g[k].label) return false;
  }
  return true;
}

void require_pairable(const GridFunction& f, const GridFunction& g) {
  if (f.space_id() != g.space_id()) {
    throw PairingMismatch("space ids differ: '" + f.space_id() + "' vs '" + g.space_id() + "'");
  }
  if (!pairable(f, g)) throw PairingMismatch("label sequences differ on space '" + f.space_id() + "'");
}

SequenceFunction::SequenceFunction(Expression rule, std::size_t truncation) : rule_(std::move(rule)) {
  if (truncation < 1) throw InvalidInput("sequence truncation must be at least 1");
  for (const auto& v : rule_.variables()) {
    if (v != "n") throw InvalidInput("sequence rule uses variable '" + v + "'; only n is allowed");
  }
  values_.reserve(truncation + 1);
  Bindings b{{"n", Complex{}}};
  auto& slot = b.begin()->second;
  for (std::size_t n = 0; n <= truncation; ++n) {
    slot = static_cast<double>(n);
    try {
      values_.push_back(rule_.evaluate(b));
    } catch (const EvalError& e) {
      throw EvalError(e.kind(), std::string(e.what()) + " (at n = " + std::to_string(n) + ")");
    }
  }
}

SequenceFunction SequenceFunction::from_source(std::string_view rule, std::size_t truncation) {
  return SequenceFunction(Expression::parse(rule, {"n"}), truncation);
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidInput("measure has no atoms");
  std::unordered_set<std::string_view> seen;
  double mass = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw InvalidInput("measure weight must be finite and >= 0");
    if (!seen.insert(a.point).second) throw InvalidInput("measure atoms repeat point '" + a.point + "'");
    mass += a.weight;
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw InvalidInput("measure total mass " + std::to_string(mass) + " differs from 1");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(std::string point) { return DiscreteMeasure({{std::move(point), 1.0}}); }

DiscreteMeasure DiscreteMeasure::uniform(std::span<const std::string> points) {
  std::vector<Atom> atoms;
  for (const auto& p : points) atoms.push_back({p, 1.0 / static_cast<double>(points.size())});
  return DiscreteMeasure(std::move(atoms));
}

double DiscreteMeasure::total_mass() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (const auto& p : f.points()) m = std::max(m, std::abs(p.value));
  return m;
}

SequenceNorm sup_norm_seq(const SequenceFunction& f) { return sup_norm_seq(f, f.truncation() / 10); }

SequenceNorm sup_norm_seq(const SequenceFunction& f, std::size_t tail_margin) {
  SequenceNorm out;
  const auto vals = f.values();
  for (std::size_t n = 0; n < vals.size(); ++n) {
    const double m = std::abs(vals[n]);
    if (m > out.estimate) {
      out.estimate = m;
      out.argmax = n;
    }
  }
  const std::size_t N = f.truncation();
  out.attained = tail_margin < N && out.argmax < N - tail_margin;
  return out;
}

std::vector<std::string> attain_set(const GridFunction& f, double tol) {
  if (!(tol >= 0.0)) throw PreconditionError("attain_set tolerance must be >= 0");
  const double threshold = sup_norm(f) - tol;
  std::vector<std::string> out;
  for (const auto& p : f.points()) {
    if (std::abs(p.value) >= threshold) out.push_back(p.label);
  }
  return out;
}

std::vector<std::string> level_set(const GridFunction& f, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("level_set requires eps > 0");
  return attain_set(f, eps);
}

std::vector<std::size_t> level_set(const SequenceFunction& f, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("level_set requires eps > 0");
  const double threshold = sup_norm_seq(f).estimate - eps;
  std::vector<std::size_t> out;
  const auto vals = f.values();
  for (std::size_t n = 0; n < vals.size(); ++n) {
    if (std::abs(vals[n]) >= threshold) out.push_back(n);
  }
  return out;
}

Complex phase(Complex z) noexcept {
  if (z == Complex{}) return {1.0, 0.0};
  if (z.imag() == 0.0) return {z.real() > 0.0 ? 1.0 : -1.0, 0.0};
  if (z.real() == 0.0) return {0.0, z.imag() > 0.0 ? 1.0 : -1.0};
  return z / std::abs(z);
}

Complex pairing(const GridFunction& f, const GridFunction& g, const DiscreteMeasure& mu) {
  require_pairable(f, g);
  Complex acc{};
  for (const auto& a : mu.atoms()) {
    const std::size_t k = f.index_of(a.point);
    if (k == f.size()) throw InvalidInput("measure atom '" + a.point + "' is not a grid label");
    acc += a.weight * std::conj(f[k].value) * g[k].value;
  }
  return acc;
}

}  // namespace normpar
