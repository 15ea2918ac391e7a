// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values come from the oracles in tests/support
// and from closed forms computed here, never from the deciders themselves.

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "normpar/error.hpp"
#include "normpar/expr.hpp"
#include "normpar/gateaux.hpp"
#include "normpar/numradius.hpp"
#include "normpar/parallelism.hpp"
#include "support/oracles.hpp"
#include "support/random_ast.hpp"
#include "support/reference_eval.hpp"

using namespace normpar;
using testing::GridPair;

namespace {

struct Check {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Check()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Check r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, fmt::format("unexpected exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.pass) ++failures;
  fmt::print("{} [{:>2}] {} ({}; {:.2f} s)\n", r.pass ? "PASS" : "FAIL", id, title, r.detail, secs);
  std::fflush(stdout);
}

// Instances shared by criteria 1, 2 and 10.
std::vector<GridPair> equivalence_instances() {
  testing::GridGenerator gen(20261016);
  std::vector<GridPair> out;
  out.reserve(10500);
  for (int k = 0; k < 10000; ++k) out.push_back(gen.plain());
  for (int k = 0; k < 500; ++k) out.push_back(gen.ties());
  return out;
}

Check criterion1(const std::vector<GridPair>& instances) {
  int disagreements = 0, lp_mismatch = 0, bad_certs = 0, positives = 0;
  double worst_residual = 0.0;
  for (const auto& [f, g] : instances) {
    const double tol = 1e-9;
    const auto direct = parallel_direct(f, g, tol);
    const bool attain = parallel_attain(f, g, tol);
    const auto witness = witness_measure(f, g, tol);
    if (direct.verdict != attain || direct.verdict != witness.measure.has_value()) ++disagreements;
    if (std::abs(witness_value_lp(f, g, tol) - testing::best_point_mass_pairing(f, g, tol)) > tol) ++lp_mismatch;
    if (!direct.verdict) continue;
    ++positives;
    const auto rep = verify_certificate(f, g, certify(f, g, tol), tol);
    const double worst = std::max({std::abs(rep.residual_norm), std::abs(rep.residual_pairing), rep.dual_value_error,
                                   rep.dual_modulus_error, rep.dual_norm_error});
    worst_residual = std::max(worst_residual, worst);
    if (!rep.passed || worst > 1e-9) ++bad_certs;
  }
  return {disagreements == 0 && lp_mismatch == 0 && bad_certs == 0,
          fmt::format("{} instances, {} parallel, {} verdict disagreements, {} LP cross-check mismatches, "
                      "{} failed certificates, max residual {:.2e}",
                      instances.size(), positives, disagreements, lp_mismatch, bad_certs, worst_residual)};
}

Check criterion2(const std::vector<GridPair>& instances) {
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (const auto& [f, g] : instances) {
    const auto cert = certify(f, g);
    if (!cert.verdict) continue;
    ++checked;
    const auto& phi = *cert.dual;
    // Independent evaluation of phi(h) = sum w c h(x) and of the norms.
    auto apply = [&](const GridFunction& h) {
      Complex s{};
      for (const auto& a : phi.atoms()) s += a.weight * a.coefficient * h.value_at(a.point);
      return s;
    };
    double total_weight = 0.0;
    for (const auto& a : phi.atoms()) total_weight += a.weight * std::abs(a.coefficient);
    const Complex pf = apply(f);
    const double e1 = std::abs(pf - testing::brute_sup(f));
    const double e2 = std::abs(std::abs(apply(g)) - testing::brute_sup(g));
    const double e3 = std::abs(total_weight - 1.0);
    const double e = std::max({e1, e2, e3});
    worst = std::max(worst, e);
    if (e > 1e-12) ++bad;
  }
  return {bad == 0 && checked > 0,
          fmt::format("{} dual functionals, {} outside 1e-12, max error {:.2e}", checked, bad, worst)};
}

Check criterion3() {
  testing::GridGenerator gen(33);
  int far = 0, non_monotone = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto [f, g] = k % 2 ? gen.plain() : gen.ties();
    const double exact = dplus_grid(f, g);
    const double q = fd_quotient(f, g, 1e-6);
    worst = std::max(worst, std::abs(exact - q));
    if (std::abs(exact - q) > 1e-4) ++far;
    const auto rep = dplus_fd(f, g);
    for (std::size_t s = 1; s < rep.schedule.size(); ++s) {
      if (rep.schedule[s].value > rep.schedule[s - 1].value) {
        ++non_monotone;
        break;
      }
    }
  }
  return {far == 0 && non_monotone == 0,
          fmt::format("1000 pairs, max |exact - fd(1e-6)| {:.2e}, {} beyond 1e-4, {} non-monotone schedules", worst,
                      far, non_monotone)};
}

Check criterion4() {
  const std::size_t N = 10000;
  const auto f = SequenceFunction::from_source("1 - 1/(n+1)", N);
  const auto alt = SequenceFunction::from_source("exp(i*pi*n)", N);
  const auto even = SequenceFunction::from_source("(1 - 1/(n+1)) * (1 + cos(pi*n))/2", N);
  const auto odd = SequenceFunction::from_source("(1 - cos(pi*n))/2", N);
  const auto r1 = asymptotic_parallel(f, f);
  const auto r3 = asymptotic_parallel(f, alt);
  const auto r2 = asymptotic_parallel(even, odd);
  const bool pass = r1.outcome == Outcome::parallel && r3.outcome == Outcome::parallel &&
                    r2.outcome == Outcome::not_parallel && r1.limit_residual < 1e-3 && r3.limit_residual < 1e-3 &&
                    r2.limit_residual >= 0.9 && r1.direct_verdict && r3.direct_verdict && !r2.direct_verdict;
  return {pass, fmt::format("self: {} (residual {:.2e}); alternating: {} (residual {:.2e}); disjoint: {} "
                            "(pairing residual {:.3f})",
                            outcome_name(r1.outcome), r1.limit_residual, outcome_name(r3.outcome), r3.limit_residual,
                            outcome_name(r2.outcome), r2.limit_residual)};
}

Check criterion5() {
  testing::GridGenerator gen(55);
  int hp_disagree = 0, positives = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto [f, g] = k % 3 == 0 ? gen.plain() : (k % 3 == 1 ? gen.ties() : gen.planted_parallel());
    const auto r = parallel_direct(f, g);
    positives += r.verdict;
    const double gap = spectral_gap(f);
    const double eps = std::isinf(gap) ? 1.0 : 0.5 * gap;
    const auto h = halfplane_witness(f, g, r.best_lambda, eps);
    if (h.contains_origin != r.verdict || h.dual_contains_origin != r.verdict) ++hp_disagree;
  }
  int hull_disagree = 0, inside = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = gen.size(1, 100);
    const Complex shift = gen.coin() ? 2.0 * gen.gaussian() : Complex{};
    std::vector<Complex> pts(n);
    for (auto& p : pts) p = gen.gaussian() + shift;
    const bool primal = origin_in_hull(pts, 1e-9);
    inside += primal;
    if (primal != origin_in_hull_dual(pts, 3600, 1e-9)) ++hull_disagree;
  }
  return {hp_disagree == 0 && hull_disagree == 0,
          fmt::format("half-plane vs direct: {} disagreements on 1000 pairs ({} parallel); hull vs 3600-direction "
                      "dual: {} disagreements on 1000 clouds ({} containing 0)",
                      hp_disagree, positives, hull_disagree, inside)};
}

Check criterion6() {
  testing::GridGenerator gen(66);
  int disagree = 0, positives = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto [f, g] = gen.planted_singleton();
    const bool s = singleton_check(f, g);
    positives += s;
    if (s != parallel_direct(f, g).verdict) ++disagree;
  }
  return {disagree == 0, fmt::format("1000 planted unique maximizers, {} parallel, {} disagreements", positives,
                                     disagree)};
}

double spectral_norm(const Mat& a) { return Eigen::JacobiSVD<Mat>(a).singularValues()(0); }

Check criterion7() {
  std::vector<std::string> problems;
  const FiniteDimSpace r2{2, PNorm::two, ScalarField::real};
  const FiniteDimSpace c2{2, PNorm::two, ScalarField::complex};

  const auto id = parallel_to_id(BallFunction::identity(r2));
  if (!(id.verdict_v && id.verdict_direct && std::abs(id.v_hat - 1.0) <= 1e-9 && std::abs(id.norm_hat - 1.0) <= 1e-12))
    problems.push_back("identity");

  Mat rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  const auto rr = parallel_to_id(BallFunction(r2, rot));
  const Mat I2 = Mat::Identity(2, 2);
  const double plus = spectral_norm(I2 + rot);
  const double minus = spectral_norm(I2 - rot);
  if (!(rr.v_hat <= 1e-9 && !rr.verdict_v && !rr.verdict_direct && std::abs(plus - std::sqrt(2.0)) <= 1e-9 &&
        std::abs(minus - std::sqrt(2.0)) <= 1e-9 && std::abs(rr.direct_norm - std::sqrt(2.0)) <= 1e-9))
    problems.push_back("rotation");

  Mat d(2, 2);
  d << 1.0, 0.0, 0.0, -1.0;
  const auto dr = parallel_to_id(BallFunction(c2, d));
  if (!(dr.verdict_v && dr.verdict_direct && std::abs(dr.direct_lambda - 1.0) <= 1e-9 &&
        std::abs(spectral_norm(I2 + d) - 2.0) <= 1e-12))
    problems.push_back("diag(1,-1)");

  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  int hermitian_bad = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = k < 100 ? 2 : 3;
    Mat b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = {nd(rng), nd(rng)};
    const Mat h = (b + b.adjoint()) / 2.0;
    const double spectral = Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().cwiseAbs().maxCoeff();
    const auto rep = parallel_to_id(BallFunction({n, PNorm::two, ScalarField::complex}, h));
    const double gap = std::abs(rep.v_hat - rep.norm_hat);
    worst = std::max(worst, gap);
    if (!(rep.verdict_v && rep.verdict_direct && gap <= 1e-6 && std::abs(rep.norm_hat - spectral) <= 1e-9))
      ++hermitian_bad;
  }
  if (hermitian_bad) problems.push_back(fmt::format("{} Hermitian failures", hermitian_bad));
  std::string detail = fmt::format(
      "identity, rotation (v {:.1e}, ||I+R|| = {:.12f}), diag(1,-1); 200 Hermitian on complex l2^2/l2^3, "
      "max |v - ||f||| {:.2e}",
      rr.v_hat, plus, worst);
  for (const auto& p : problems) detail += "; FAILED " + p;
  return {problems.empty(), detail};
}

Check criterion8() {
  std::mt19937_64 rng(88);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int total = 0, bad = 0;
  double worst_pairing = 0.0, worst_ratio = 0.0;
  for (ScalarField field : {ScalarField::real, ScalarField::complex}) {
    const double im = field == ScalarField::complex ? 1.0 : 0.0;
    for (std::size_t n = 2; n <= 5; ++n) {
      const FiniteDimSpace sp{n, PNorm::two, field};
      int accepted = 0;
      while (accepted < 10000) {
        Vec y(n), ys(n);
        const double spread = 0.05 + 1.5 * u(rng);
        for (std::size_t k = 0; k < n; ++k) {
          y(k) = {nd(rng), im * nd(rng)};
          ys(k) = std::conj(y(k)) + spread * Complex{nd(rng), im * nd(rng)};
        }
        y *= std::pow(u(rng), 0.1) / y.norm();
        ys *= std::pow(u(rng), 0.1) / ys.norm();
        const double theta = 2.0 * u(rng);
        const double re = (ys.transpose() * y)(0).real();
        if (!(theta > 0.0) || !(re > 1.0 - theta)) continue;
        ++accepted;
        ++total;
        const auto r = bpb_correct(sp, y, ys, theta);
        const double bound = std::sqrt(2.0 * theta);
        const double pe = std::abs((r.z_functional.transpose() * r.z)(0) - 1.0);
        const double dz = (y - r.z).norm();
        const double dzs = (ys - r.z_functional).norm();
        worst_pairing = std::max(worst_pairing, pe);
        worst_ratio = std::max({worst_ratio, dz / bound, dzs / bound});
        if (!(pe <= 1e-12 && dz < bound && dzs < bound && std::abs(r.z.norm() - 1.0) <= 1e-12)) ++bad;
      }
    }
  }
  return {bad == 0, fmt::format("{} inputs over real/complex l2^2..l2^5, {} violations, max |z*(z) - 1| {:.1e}, "
                                "max distance / sqrt(2 theta) {:.4f}",
                                total, bad, worst_pairing, worst_ratio)};
}

Check criterion9() {
  const FiniteDimSpace r2{2, PNorm::two, ScalarField::real};
  const FiniteDimSpace rinf{2, PNorm::infinity, ScalarField::real};
  Mat rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  Mat d(2, 2);
  d << 1.0, 0.0, 0.0, 0.0;
  const auto a = daugavet_check(r2, Mat::Identity(2, 2));
  const auto b = daugavet_check(rinf, d);
  const auto c = daugavet_check(r2, rot);
  const bool pass = a.verdict && std::abs(a.norm_a_plus_id - 2.0) <= 1e-12 && b.verdict &&
                    std::abs(b.norm_a_plus_id - 2.0) <= 1e-12 && !c.verdict &&
                    std::abs(c.norm_a_plus_id - std::sqrt(2.0)) <= 1e-9;
  return {pass, fmt::format("I: {}, diag(1,0) on l_inf^2: {}, rotation: {} with ||I+R|| - sqrt 2 = {:.1e}",
                            a.verdict, b.verdict, c.verdict, c.norm_a_plus_id - std::sqrt(2.0))};
}

Check criterion10(const std::vector<GridPair>& instances) {
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> nd;
  int asym = 0, inhomog = 0;
  for (const auto& [f, g] : instances) {
    const bool v = parallel_direct(f, g).verdict;
    if (parallel_direct(g, f).verdict != v) ++asym;
    double r = 0.0, s = 0.0;
    while (r == 0.0) r = nd(rng) * 3.0;
    while (s == 0.0) s = nd(rng) * 3.0;
    if (parallel_direct(f.scaled(r), g.scaled(s)).verdict != v) ++inhomog;
  }
  const auto f = testing::named_grid({{"a", 1.0}, {"b", 0.0}});
  const auto g = testing::named_grid({{"a", 1.0}, {"b", 1.0}});
  const auto h = testing::named_grid({{"a", 0.0}, {"b", 1.0}});
  const bool fg = parallel_direct(f, g).verdict;
  const bool gh = parallel_direct(g, h).verdict;
  const bool fh = parallel_direct(f, h).verdict;
  return {asym == 0 && inhomog == 0 && fg && gh && !fh,
          fmt::format("{} instances: {} symmetry and {} homogeneity violations; triple f||g {}, g||h {}, f||h {}",
                      instances.size(), asym, inhomog, fg, gh, fh)};
}

Check criterion11() {
  const std::set<std::string, std::less<>> vars{"n"};
  const Complex p1 = Expression::parse("2+3*4", vars).evaluate({});
  const Complex p2 = Expression::parse("2^3^2", vars).evaluate({});
  const Complex euler = Expression::parse("exp(i*pi*n)", vars).evaluate_at("n", 1.0);
  bool ok = p1 == Complex{14.0, 0.0} && p2 == Complex{512.0, 0.0} && std::abs(euler + 1.0) <= 1e-12;

  testing::AstGenerator gen(111);
  int round_trip_bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto tree = gen.generate(5);
    const auto printed = print_tree(*tree);
    if (!same_tree(*tree, Expression::parse(printed, vars).root())) ++round_trip_bad;
  }
  testing::AstGenerator gen2(112);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int compared = 0, fuzz_bad = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto e = Expression::from_tree(gen2.generate(4));
    const Complex n{u(gen2.rng()), u(gen2.rng())};
    Complex mine;
    try {
      mine = e.evaluate({{"n", n}});
    } catch (const EvalError&) {
      continue;
    }
    const Complex ref = testing::reference_evaluate(e.to_string(), {{"n", n}});
    const double rel = std::abs(mine - ref) / std::max(1.0, std::abs(mine));
    worst = std::max(worst, rel);
    ++compared;
    if (rel > 1e-12) ++fuzz_bad;
  }
  ok = ok && round_trip_bad == 0 && fuzz_bad == 0;
  return {ok, fmt::format("2+3*4 = {}, 2^3^2 = {}, |exp(i pi) + 1| = {:.1e}; {} round-trip failures in 1000 ASTs; "
                          "fuzz {} compared, {} beyond 1e-12 (max rel {:.1e})",
                          p1.real(), p2.real(), std::abs(euler + 1.0), round_trip_bad, compared, fuzz_bad, worst)};
}

}  // namespace

int main() {
  const auto instances = equivalence_instances();
  report(1, "grid equivalence: direct = attain = witness, certificates verify", [&] { return criterion1(instances); });
  report(2, "dual functional certificate exact to 1e-12", [&] { return criterion2(instances); });
  report(3, "grid derivative vs finite differences, monotone quotients", criterion3);
  report(4, "sequence-model asymptotic parallelism (true, true, false)", criterion4);
  report(5, "half-plane witness and origin-in-hull cross-checks", criterion5);
  report(6, "singleton attaining set specialization", criterion6);
  report(7, "numerical radius equals norm iff parallel to Id", criterion7);
  report(8, "Euclidean BPB correction postconditions", criterion8);
  report(9, "Daugavet equation cases", criterion9);
  report(10, "symmetry, R-homogeneity and non-transitivity", [&] { return criterion10(instances); });
  report(11, "expression parser and evaluator", criterion11);
  fmt::print("{} of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
