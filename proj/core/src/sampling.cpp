#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "normpar/error.hpp"
#include "normpar/numradius.hpp"

namespace normpar {

namespace {

Vec normalized(const FiniteDimSpace& space, Vec v) {
  const double n = norm(space, v);
  return v / n;
}

// Nonzero vectors with entries in {0, +-1} (real) or {0, +-1, +-i} (complex):
// vertices, edge midpoints and face centres of the unit balls.
void append_lattice(const FiniteDimSpace& space, std::vector<Vec>& out) {
  const std::vector<Complex> digits = space.field == ScalarField::real
                                          ? std::vector<Complex>{0.0, 1.0, -1.0}
                                          : std::vector<Complex>{0.0, 1.0, -1.0, {0.0, 1.0}, {0.0, -1.0}};
  const std::size_t base = digits.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < space.dim; ++k) total *= base;
  for (std::size_t code = 1; code < total; ++code) {
    Vec v(space.dim);
    std::size_t c = code;
    for (std::size_t k = 0; k < space.dim; ++k) {
      v(k) = digits[c % base];
      c /= base;
    }
    out.push_back(normalized(space, v));
  }
}

double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Randomly shifted Halton points pushed through Box-Muller, then projected
// radially onto the unit sphere of the space.
void append_halton(const FiniteDimSpace& space, const SamplingSpec& spec, std::vector<Vec>& out) {
  const std::size_t real_dim = space.field == ScalarField::real ? space.dim : 2 * space.dim;
  const std::size_t coords = real_dim + (real_dim % 2);
  if (coords > std::size(kPrimes)) throw PreconditionError("sampling supports at most 6 complex dimensions");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(coords);
  for (auto& s : shift) s = unit(rng);
  std::vector<double> gauss(coords);
  for (std::size_t i = 1; i <= spec.density; ++i) {
    for (std::size_t k = 0; k < coords; k += 2) {
      double u1 = radical_inverse(i, kPrimes[k]) + shift[k];
      double u2 = radical_inverse(i, kPrimes[k + 1]) + shift[k + 1];
      u1 -= std::floor(u1);
      u2 -= std::floor(u2);
      const double r = std::sqrt(-2.0 * std::log(1.0 - u1 + 1e-300));
      gauss[k] = r * std::cos(2.0 * std::numbers::pi * u2);
      gauss[k + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    Vec v(space.dim);
    for (std::size_t k = 0; k < space.dim; ++k) {
      v(k) = space.field == ScalarField::real ? Complex{gauss[k], 0.0} : Complex{gauss[2 * k], gauss[2 * k + 1]};
    }
    if (norm(space, v) > 0.0) out.push_back(normalized(space, v));
  }
}

// Deterministic quasi-uniform samples for real spaces of dimension <= 3. The
// i-th point depends on i only, so a larger density adds points and never
// moves existing ones; the sampled maximum is then non-decreasing in density.
void append_real_grid(const FiniteDimSpace& space, const SamplingSpec& spec, std::vector<Vec>& out) {
  const std::size_t n = space.dim;
  if (n == 1) {
    Vec a(1), b(1);
    a << 1.0;
    b << -1.0;
    out.push_back(a);
    out.push_back(b);
    return;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < spec.density; ++i) {
    Vec v(n);
    if (space.p == PNorm::two) {
      if (n == 2) {
        // Azimuthal van der Corput sequence.
        const double t = two_pi * radical_inverse(i, 2);
        v << std::cos(t), std::sin(t);
      } else {
        // Equal-area map of the (2, 3) Halton points onto S^2.
        const double z = 1.0 - 2.0 * radical_inverse(i, 2);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = two_pi * radical_inverse(i, 3);
        v << r * std::cos(phi), r * std::sin(phi), z;
      }
    } else if (space.p == PNorm::infinity) {
      // Face x_j = s, remaining coordinates from a Halton sequence in [-1, 1].
      const std::size_t face = i % (2 * n);
      const std::size_t j = face / 2;
      const std::size_t idx = i / (2 * n);
      unsigned base_slot = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) {
          v(k) = face % 2 == 0 ? 1.0 : -1.0;
        } else {
          v(k) = -1.0 + 2.0 * radical_inverse(idx, kPrimes[base_slot++]);
        }
      }
    } else {
      // l_1: orthant o, barycentric point on the face of the cross-polytope.
      const std::size_t orthants = std::size_t{1} << n;
      const std::size_t o = i % orthants;
      const std::size_t idx = i / orthants;
      std::vector<double> bary(n);
      if (n == 2) {
        const double t = radical_inverse(idx, 2);
        bary = {t, 1.0 - t};
      } else {
        const double r1 = std::sqrt(radical_inverse(idx, 2));
        const double r2 = radical_inverse(idx, 3);
        bary = {1.0 - r1, r1 * (1.0 - r2), r1 * r2};
      }
      for (std::size_t k = 0; k < n; ++k) v(k) = ((o >> k) & 1U ? -1.0 : 1.0) * bary[k];
    }
    out.push_back(v);
  }
}

}  // namespace

std::vector<Vec> sphere_samples(const FiniteDimSpace& space, const SamplingSpec& spec) {
  space.validate();
  if (spec.density < 1) throw PreconditionError("sampling density must be positive");
  std::vector<Vec> out;
  append_lattice(space, out);
  if (space.field == ScalarField::real && space.dim <= 3) {
    append_real_grid(space, spec, out);
  } else {
    append_halton(space, spec, out);
  }
  return out;
}

std::vector<Vec> ball_samples(const FiniteDimSpace& space, const SamplingSpec& spec) {
  const auto sphere = sphere_samples(space, spec);
  const std::size_t radii = std::max<std::size_t>(spec.radii, 1);
  std::vector<Vec> out;
  out.reserve(sphere.size() * radii + 1);
  out.push_back(Vec::Zero(space.dim));
  for (std::size_t k = 1; k <= radii; ++k) {
    const double r = static_cast<double>(k) / static_cast<double>(radii);
    for (const auto& x : sphere) out.push_back(r * x);
  }
  return out;
}

}  // namespace normpar
