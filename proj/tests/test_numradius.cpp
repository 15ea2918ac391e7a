#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <random>

#include "normpar/error.hpp"
#include "normpar/numradius.hpp"

using namespace normpar;

namespace {

const Complex I{0.0, 1.0};

FiniteDimSpace l2(std::size_t n, ScalarField field) { return {n, PNorm::two, field}; }

Mat rotation() {
  Mat r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  return r;
}

Vec vec2(Complex a, Complex b) {
  Vec v(2);
  v << a, b;
  return v;
}

double largest_singular_value(const Mat& a) { return Eigen::JacobiSVD<Mat>(a).singularValues()(0); }

// Numerical radius of a complex matrix on Euclidean space:
// w(A) = max over theta of the top eigenvalue of (e^{i theta} A + h.c.) / 2.
double euclidean_radius_oracle(const Mat& a) {
  auto top = [&](double th) {
    const Mat h = (std::polar(1.0, th) * a + (std::polar(1.0, th) * a).adjoint()) / 2.0;
    return Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().maxCoeff();
  };
  const int n = 3600;
  double best = -1.0;
  int at = 0;
  for (int k = 0; k < n; ++k) {
    const double v = top(2 * std::numbers::pi * k / n);
    if (v > best) {
      best = v;
      at = k;
    }
  }
  double lo = 2 * std::numbers::pi * (at - 1) / n;
  double hi = 2 * std::numbers::pi * (at + 1) / n;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3;
    const double m2 = hi - (hi - lo) / 3;
    if (top(m1) < top(m2)) lo = m1;
    else hi = m2;
  }
  return std::max(best, top(0.5 * (lo + hi)));
}

Mat random_matrix(std::mt19937_64& rng, std::size_t n, ScalarField field) {
  std::normal_distribution<double> nd;
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = {nd(rng), field == ScalarField::complex ? nd(rng) : 0.0};
  }
  return a;
}

}  // namespace

TEST_CASE("space norms and duals") {
  const Vec x = vec2(3.0, Complex{0.0, -4.0});
  CHECK(norm({2, PNorm::one, ScalarField::complex}, x) == 7.0);
  CHECK(norm({2, PNorm::two, ScalarField::complex}, x) == 5.0);
  CHECK(norm({2, PNorm::infinity, ScalarField::complex}, x) == 4.0);
  CHECK(dual_norm({2, PNorm::one, ScalarField::complex}, x) == 4.0);
  CHECK(dual_norm({2, PNorm::infinity, ScalarField::complex}, x) == 7.0);
  CHECK(dual_exponent(PNorm::one) == PNorm::infinity);
  CHECK(dual_exponent(PNorm::two) == PNorm::two);
  CHECK_THROWS_AS(FiniteDimSpace({0, PNorm::two, ScalarField::real}).validate(), InvalidInput);
}

TEST_CASE("norming_functionals examples") {
  const FiniteDimSpace r2{2, PNorm::two, ScalarField::real};
  const auto a = norming_functionals(r2, vec2(1.0, 0.0));
  REQUIRE(a.size() == 1);
  CHECK((a[0] - vec2(1.0, 0.0)).norm() == 0.0);

  const FiniteDimSpace rinf{2, PNorm::infinity, ScalarField::real};
  const auto b = norming_functionals(rinf, vec2(1.0, 1.0));
  REQUIRE(b.size() == 2);
  CHECK((b[0] - vec2(1.0, 0.0)).norm() == 0.0);
  CHECK((b[1] - vec2(0.0, 1.0)).norm() == 0.0);
  for (const auto& c : b) {
    CHECK(apply_functional(c, vec2(1.0, 1.0)) == Complex{1.0, 0.0});
    CHECK(dual_norm(rinf, c) == 1.0);
  }

  const auto c = norming_functionals(rinf, vec2(1.0, 0.5));
  REQUIRE(c.size() == 1);
  CHECK((c[0] - vec2(1.0, 0.0)).norm() == 0.0);

  CHECK_THROWS_AS(norming_functionals(r2, vec2(2.0, 0.0)), PreconditionError);
}

TEST_CASE("norming functionals are norming on random points") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (PNorm p : {PNorm::one, PNorm::two, PNorm::infinity}) {
    for (ScalarField field : {ScalarField::real, ScalarField::complex}) {
      const FiniteDimSpace sp{3, p, field};
      for (int trial = 0; trial < 30; ++trial) {
        Vec x(3);
        for (int k = 0; k < 3; ++k) x(k) = {nd(rng), field == ScalarField::complex ? nd(rng) : 0.0};
        if (trial % 3 == 0) x(1) = 0.0;
        if (trial % 5 == 0) x(2) = x(0);
        x /= norm(sp, x);
        for (const auto& c : norming_functionals(sp, x)) {
          CHECK(std::abs(apply_functional(c, x) - 1.0) <= 1e-9);
          CHECK(std::abs(dual_norm(sp, c) - 1.0) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("numerical_radius examples") {
  const auto id = BallFunction::identity(l2(2, ScalarField::real));
  CHECK(numerical_radius(id).value == doctest::Approx(1.0).epsilon(1e-12));

  const BallFunction rot(l2(2, ScalarField::real), rotation());
  CHECK(numerical_radius(rot).value <= 1e-9);

  const BallFunction iid(l2(2, ScalarField::complex), Mat(I * Mat::Identity(2, 2)));
  CHECK(numerical_radius(iid).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("numerical radius against the eigenvalue oracle on Euclidean space") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const Mat a = random_matrix(rng, n, ScalarField::complex);
    const double oracle = euclidean_radius_oracle(a);
    const auto r = numerical_radius(BallFunction(l2(n, ScalarField::complex), a));
    CHECK(r.refined);
    CHECK(r.value <= oracle + 1e-9);
    CHECK(r.value >= oracle - 1e-6);
  }
  // Real Euclidean: v is the spectral radius of the symmetric part.
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const Mat a = random_matrix(rng, n, ScalarField::real);
    const Eigen::MatrixXd sym = ((a + a.transpose()) / 2.0).real();
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues();
    const double oracle = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
    const auto r = numerical_radius(BallFunction(l2(n, ScalarField::real), a));
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("l_inf and l_1 numerical radius equals the operator norm") {
  // For l_inf, v(A) = max_j (|a_jj| + sum_{k != j} |a_jk|), the max row sum;
  // l_1 is the column-sum analogue.
  std::mt19937_64 rng(21);
  for (PNorm p : {PNorm::infinity, PNorm::one}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Mat a = random_matrix(rng, 2 + trial % 3, ScalarField::real);
      const FiniteDimSpace sp{static_cast<std::size_t>(a.rows()), p, ScalarField::real};
      const double rows = a.cwiseAbs().rowwise().sum().maxCoeff();
      const double cols = a.cwiseAbs().colwise().sum().maxCoeff();
      const double oracle = p == PNorm::infinity ? rows : cols;
      CHECK(operator_norm(sp, a) == doctest::Approx(oracle).epsilon(1e-14));
      const auto r = numerical_radius(BallFunction(sp, a));
      CHECK(r.value <= oracle + 1e-12);
      CHECK(r.value >= oracle - 1e-3);
    }
  }
}

TEST_CASE("radius bounded by the norm and monotone in density") {
  std::mt19937_64 rng(5);
  for (PNorm p : {PNorm::one, PNorm::two, PNorm::infinity}) {
    for (ScalarField field : {ScalarField::real, ScalarField::complex}) {
      for (std::size_t n = 2; n <= 4; ++n) {
        const Mat a = random_matrix(rng, n, field);
        const BallFunction f({n, p, field}, a);
        const double nrm = function_norm(f).value;
        double previous = 0.0;
        for (std::size_t density : {500, 1000, 2000, 4000}) {
          SamplingSpec spec;
          spec.density = density;
          spec.refine = false;
          const double v = numerical_radius(f, spec).value;
          CHECK(v <= nrm * (1.0 + 1e-12));
          CHECK(v >= previous);
          previous = v;
        }
        CHECK(numerical_radius(f).value <= nrm * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  SamplingSpec spec;
  spec.density = 300;
  spec.seed = 42;
  const FiniteDimSpace sp{4, PNorm::two, ScalarField::complex};
  const auto a = sphere_samples(sp, spec);
  const auto b = sphere_samples(sp, spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK((a[k] - b[k]).norm() == 0.0);
  for (const auto& x : a) CHECK(norm(sp, x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("parallel_to_id examples") {
  const auto id = parallel_to_id(BallFunction::identity(l2(2, ScalarField::real)));
  CHECK(id.verdict_v);
  CHECK(id.verdict_direct);
  CHECK(std::abs(id.lambda - 1.0) <= 1e-12);
  CHECK(id.direct_norm == doctest::Approx(2.0).epsilon(1e-12));

  const auto rot = parallel_to_id(BallFunction(l2(2, ScalarField::real), rotation()));
  CHECK_FALSE(rot.verdict_v);
  CHECK_FALSE(rot.verdict_direct);
  CHECK(rot.agree);
  CHECK(rot.v_hat <= 1e-9);
  CHECK(rot.norm_hat == doctest::Approx(1.0).epsilon(1e-12));
  const Mat r = rotation();
  const Mat i2 = Mat::Identity(2, 2);
  CHECK(std::abs(largest_singular_value(i2 + r) - std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(rot.direct_norm - std::sqrt(2.0)) <= 1e-9);

  Mat d(2, 2);
  d << 1.0, 0.0, 0.0, -1.0;
  const auto diag = parallel_to_id(BallFunction(l2(2, ScalarField::complex), d));
  CHECK(diag.verdict_v);
  CHECK(diag.verdict_direct);
  CHECK(std::abs(diag.direct_lambda - 1.0) <= 1e-9);
  CHECK(diag.direct_norm == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Hermitian matrices are parallel to the identity") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const Mat b = random_matrix(rng, n, ScalarField::complex);
    const Mat h = (b + b.adjoint()) / 2.0;
    const double spectral = Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().cwiseAbs().maxCoeff();
    const auto rep = parallel_to_id(BallFunction(l2(n, ScalarField::complex), h));
    CHECK(rep.verdict_v);
    CHECK(rep.verdict_direct);
    CHECK(std::abs(rep.v_hat - spectral) <= 1e-6);
    CHECK(std::abs(rep.norm_hat - spectral) <= 1e-9);
  }
}

TEST_CASE("refinement escapes the smaller extreme eigenvector") {
  // Near-balanced spectra put local maxima of |<Hx, x>| at both extreme
  // eigenvectors; the estimate must reach the larger one.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3;
    const double top = 1.0 + u(rng);
    Vec eig(n);
    eig << top, -top * (0.97 + 0.029 * u(rng)), 0.3 * (u(rng) - 0.5);
    const Mat q = Eigen::HouseholderQR<Mat>(random_matrix(rng, n, ScalarField::complex)).householderQ();
    const Mat h = q * eig.asDiagonal() * q.adjoint();
    const auto r = numerical_radius(BallFunction(l2(n, ScalarField::complex), h));
    CHECK(std::abs(r.value - top) <= 1e-9);
  }
}

TEST_CASE("bpb_correct examples") {
  const FiniteDimSpace sp = l2(2, ScalarField::real);
  const Vec e1 = vec2(1.0, 0.0);
  const auto a = bpb_correct(sp, e1, e1, 0.5);
  CHECK((a.z - e1).norm() <= 1e-15);
  CHECK((a.z_functional - e1).norm() <= 1e-15);

  auto check_post = [&](const Vec& y, const Vec& ys, double theta, const BpbResult& r) {
    const double bound = std::sqrt(2.0 * theta);
    CHECK(std::abs(r.z.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(r.z_functional.norm() - 1.0) <= 1e-12);
    CHECK(std::abs((r.z_functional.transpose() * r.z)(0) - 1.0) <= 1e-12);
    CHECK((y - r.z).norm() < bound);
    CHECK((ys - r.z_functional).norm() < bound);
  };
  const Vec y1 = 0.9 * e1;
  check_post(y1, e1, 0.2, bpb_correct(sp, y1, e1, 0.2));
  const Vec y2 = vec2(0.8, 0.59);
  check_post(y2, e1, 0.3, bpb_correct(sp, y2, e1, 0.3));

  CHECK_THROWS_AS(bpb_correct(sp, 0.5 * e1, e1, 0.2), PreconditionError);
  CHECK_THROWS_AS(bpb_correct(sp, 2.0 * e1, e1, 1.5), PreconditionError);
  CHECK_THROWS_AS(bpb_correct({2, PNorm::one, ScalarField::real}, e1, e1, 0.5), PreconditionError);
}

TEST_CASE("bpb_correct postconditions on random admissible inputs") {
  std::mt19937_64 rng(64);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (ScalarField field : {ScalarField::real, ScalarField::complex}) {
    for (std::size_t n = 2; n <= 5; ++n) {
      const FiniteDimSpace sp = l2(n, field);
      int accepted = 0;
      while (accepted < 500) {
        Vec y(n), ys(n);
        for (std::size_t k = 0; k < n; ++k) {
          y(k) = {nd(rng), field == ScalarField::complex ? nd(rng) : 0.0};
          ys(k) = y(k) + 0.5 * Complex{nd(rng), field == ScalarField::complex ? nd(rng) : 0.0};
        }
        y *= std::pow(u(rng), 0.2) / y.norm();
        ys = ys.conjugate().eval();
        ys *= std::pow(u(rng), 0.2) / ys.norm();
        const double theta = 2.0 * u(rng);
        const double re = (ys.transpose() * y)(0).real();
        if (!(re > 1.0 - theta) || theta <= 0.0) continue;
        ++accepted;
        const auto r = bpb_correct(sp, y, ys, theta);
        const double bound = std::sqrt(2.0 * theta);
        CHECK(std::abs((r.z_functional.transpose() * r.z)(0) - 1.0) <= 1e-12);
        CHECK((y - r.z).norm() < bound);
        CHECK((ys - r.z_functional).norm() < bound);
      }
    }
  }
}

TEST_CASE("daugavet_check examples") {
  const auto id = daugavet_check(l2(2, ScalarField::real), Mat::Identity(2, 2));
  CHECK(id.verdict);
  CHECK(id.norm_a_plus_id == doctest::Approx(2.0).epsilon(1e-15));

  const auto rot = daugavet_check(l2(2, ScalarField::real), rotation());
  CHECK_FALSE(rot.verdict);
  CHECK(std::abs(rot.norm_a_plus_id - std::sqrt(2.0)) <= 1e-9);

  Mat d(2, 2);
  d << 1.0, 0.0, 0.0, 0.0;
  const auto dg = daugavet_check({2, PNorm::infinity, ScalarField::real}, d);
  CHECK(dg.verdict);
  CHECK(dg.norm_a_plus_id == 2.0);
  CHECK(dg.norm_a == 1.0);
}

TEST_CASE("daugavet equals parallelism with lambda = 1 on random matrices") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const PNorm p = trial % 3 == 0 ? PNorm::two : (trial % 3 == 1 ? PNorm::one : PNorm::infinity);
    Mat a = random_matrix(rng, n, ScalarField::real);
    if (trial % 2 == 0) a(0, 0) = std::abs(a(0, 0)) + 10.0;  // plant a dominant positive diagonal entry
    const FiniteDimSpace sp{n, p, ScalarField::real};
    const auto dg = daugavet_check(sp, a);
    const double lhs = operator_norm(sp, Mat(Mat::Identity(n, n) + a));
    CHECK(dg.verdict == (lhs >= operator_norm(sp, a) + 1.0 - kRadiusTolerance));
    const auto rep = parallel_to_id(BallFunction(sp, a));
    if (dg.verdict) CHECK(rep.verdict_direct);
  }
}

TEST_CASE("sphere_sup_check") {
  const auto id = sphere_sup_check(BallFunction::identity(l2(2, ScalarField::real)));
  CHECK(id.equal);
  CHECK(id.ball_sup == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  const auto any = sphere_sup_check(BallFunction({3, PNorm::infinity, ScalarField::real}, random_matrix(rng, 3, ScalarField::real)));
  CHECK(any.equal);

  const FiniteDimSpace sp = l2(2, ScalarField::real);
  const auto vars = coordinate_variables(2);
  const BallFunction bump(sp, std::vector<Expression>{Expression::parse("1 - (x1^2 + x2^2) + x1", vars), Expression::parse("x2", vars)});
  const auto rep = sphere_sup_check(bump);
  CHECK_FALSE(rep.equal);
  CHECK(rep.sphere_sup == doctest::Approx(1.0).epsilon(1e-9));
  // Dense polar oracle: ||f(r, phi)||^2 = (1 - r^2 + r cos phi)^2 + (r sin phi)^2.
  double oracle = 0.0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j < 720; ++j) {
      const double r = i / 400.0;
      const double ph = 2 * std::numbers::pi * j / 720;
      oracle = std::max(oracle, std::hypot(1 - r * r + r * std::cos(ph), r * std::sin(ph)));
    }
  }
  CHECK(rep.ball_sup <= oracle + 1e-12);
  CHECK(rep.ball_sup >= oracle - 1e-2);
  // Corollary: parallel to Id would force equality, so the decider must say no.
  const auto par = parallel_to_id(bump);
  CHECK_FALSE(par.verdict_v);
  CHECK_FALSE(par.verdict_direct);
  REQUIRE(par.lipschitz_estimate.has_value());
  CHECK_FALSE(par.lipschitz_warning);
}

TEST_CASE("rule bodies are validated") {
  const FiniteDimSpace sp = l2(2, ScalarField::real);
  const auto vars = coordinate_variables(2);
  CHECK_THROWS_AS(BallFunction(sp, std::vector<Expression>{Expression::parse("x1", vars)}), InvalidInput);
  CHECK_THROWS_AS(BallFunction(sp, std::vector<Expression>{Expression::parse("i*x1", vars), Expression::parse("x2", vars)}), InvalidInput);
  CHECK_THROWS(BallFunction(sp, std::vector<Expression>{Expression::parse("1/x1", vars), Expression::parse("x2", vars)}));
  CHECK_THROWS_AS(BallFunction(sp, Mat::Identity(3, 3)), InvalidInput);
}
