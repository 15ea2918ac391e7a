#include "normpar/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "normpar/error.hpp"
#include "normpar/gateaux.hpp"
#include "normpar/json_io.hpp"
#include "normpar/numradius.hpp"
#include "normpar/parallelism.hpp"

namespace normpar::cli {

namespace {

struct Config {
  bool json = false;
  std::optional<double> tolerance;
  std::size_t samples = 10000;
  std::optional<std::uint64_t> seed;
  bool no_refine = false;
  unsigned jobs = 1;
  std::optional<double> eps;
  std::string lambda;
  bool fd = false;
  int lambda_grid = 360;
  std::string eps_schedule;
  std::string t_schedule;
  std::vector<std::string> inputs;
};

// Everything a command writes goes through here so the exit code and both
// output modes stay in one place.
struct Output {
  std::ostream& out;
  std::ostream& err;
  bool json_mode;

  void emit(const json& j) const { out << j.dump() << '\n'; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string sci(double v) { return fmt::format("{:.2e}", v); }

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string cplx(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  if (z.real() == 0.0) return fmt::format("{}i", num(z.imag()));
  return fmt::format("{}{}{}i", num(z.real()), z.imag() < 0.0 ? "-" : "+", num(std::abs(z.imag())));
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& x : items) s += (s.empty() ? "" : ", ") + x;
  return s;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

GridFunction load_grid(const std::string& path) {
  const json j = load_json(path);
  if (is_sequence_json(j)) throw InvalidInput("'" + path + "' is a sequence; this command needs a grid function");
  return grid_from_json(j);
}

SequenceFunction load_sequence(const std::string& path) {
  const json j = load_json(path);
  if (!is_sequence_json(j)) throw InvalidInput("'" + path + "' is a grid; this command needs a sequence function");
  return sequence_from_json(j);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && item[used] == ' ') ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("{}: cannot read '{}' as a number", what, item));
    }
  }
  if (out.empty()) throw UsageError(fmt::format("{}: empty list", what));
  return out;
}

SamplingSpec sampling(const Config& cfg) {
  SamplingSpec spec;
  spec.density = cfg.samples;
  spec.refine = !cfg.no_refine;
  if (cfg.seed) {
    spec.seed = *cfg.seed;
  } else if (const char* env = std::getenv("NORMPAR_SEED")) {
    try {
      spec.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("NORMPAR_SEED='{}' is not an unsigned integer", env));
    }
  }
  return spec;
}

void require_inputs(const Config& cfg, std::size_t n, const char* usage) {
  if (cfg.inputs.size() != n) throw UsageError(fmt::format("expected {} input file(s): {}", n, usage));
}

// ---- commands ------------------------------------------------------------

int cmd_norm(const Config& cfg, const Output& o) {
  require_inputs(cfg, 1, "norm f.json");
  const json j = load_json(cfg.inputs[0]);
  if (is_sequence_json(j)) {
    const auto f = sequence_from_json(j);
    const auto r = sup_norm_seq(f);
    if (o.json_mode) {
      o.emit({{"command", "norm"},
              {"kind", "sequence"},
              {"norm", r.estimate},
              {"argmax", r.argmax},
              {"attained", r.attained},
              {"truncation", f.truncation()}});
    } else {
      o.out << fmt::format("norm estimate = {} at n = {} (truncation {}, {})\n", num(r.estimate), r.argmax,
                           f.truncation(), r.attained ? "attained" : "not attained before the tail margin");
    }
    return kTrue;
  }
  const auto f = grid_from_json(j);
  const double n = sup_norm(f);
  const auto m = attain_set(f, 0.0);
  if (o.json_mode) {
    o.emit({{"command", "norm"}, {"kind", "grid"}, {"norm", n}, {"attain_set", m}});
  } else {
    o.out << fmt::format("norm = {} attained at {{{}}}\n", num(n), join(m));
  }
  return kTrue;
}

int cmd_attain(const Config& cfg, const Output& o) {
  require_inputs(cfg, 1, "attain f.json [--eps E]");
  const json j = load_json(cfg.inputs[0]);
  if (cfg.eps && !(*cfg.eps > 0.0)) throw UsageError("--eps must be positive");
  json out{{"command", "attain"}, {"eps", cfg.eps ? json(*cfg.eps) : json(nullptr)}};
  std::string listing;
  if (is_sequence_json(j)) {
    const auto f = sequence_from_json(j);
    std::vector<std::size_t> idx;
    if (cfg.eps) {
      idx = level_set(f, *cfg.eps);
    } else {
      const double top = sup_norm_seq(f).estimate;
      for (std::size_t n = 0; n <= f.truncation(); ++n) {
        if (std::abs(f(n)) >= top) idx.push_back(n);
      }
    }
    out["kind"] = "sequence";
    out["norm"] = sup_norm_seq(f).estimate;
    out["points"] = idx;
    if (!idx.empty()) listing = fmt::format("{} indices from {} to {}", idx.size(), idx.front(), idx.back());
  } else {
    const auto f = grid_from_json(j);
    const auto pts = cfg.eps ? level_set(f, *cfg.eps) : attain_set(f, cfg.tolerance.value_or(0.0));
    out["kind"] = "grid";
    out["norm"] = sup_norm(f);
    out["points"] = pts;
    listing = "{" + join(pts) + "}";
  }
  if (o.json_mode) {
    o.emit(out);
  } else {
    o.out << fmt::format("{} = {}\n", cfg.eps ? fmt::format("level set (eps = {})", num(*cfg.eps)) : "attaining set",
                         listing);
  }
  return kTrue;
}

void print_certificate(const Output& o, const std::string& f, const std::string& g, const ParallelCertificate& c) {
  if (o.json_mode) {
    o.emit(to_json(c));
    return;
  }
  o.out << fmt::format("{} || {}: {}\n", f, g, c.verdict ? "parallel" : "not parallel");
  if (c.verdict) {
    o.out << fmt::format("  lambda = {}\n", cplx(*c.lambda));
    o.out << fmt::format("  witness = delta_{}\n", *c.witness_point);
    const auto& a = c.dual->atoms().front();
    o.out << fmt::format("  dual functional: h -> {} * h({})\n", cplx(a.coefficient), a.point);
    o.out << fmt::format("  residuals: norm {}, pairing {}\n", sci(c.residual_norm), sci(c.residual_pairing));
  } else {
    o.out << fmt::format("  gap = {}\n", sci(*c.gap));
  }
}

int cmd_parallel(const Config& cfg, const Output& o) {
  if (cfg.inputs.empty() || cfg.inputs.size() % 2 != 0) {
    throw UsageError("expected pairs of input files: parallel f.json g.json [f2.json g2.json ...]");
  }
  const double tol = cfg.tolerance.value_or(kGridTolerance);
  const std::size_t pairs = cfg.inputs.size() / 2;
  std::vector<GridFunction> fs, gs;
  for (std::size_t k = 0; k < pairs; ++k) {
    fs.push_back(load_grid(cfg.inputs[2 * k]));
    gs.push_back(load_grid(cfg.inputs[2 * k + 1]));
    require_pairable(fs.back(), gs.back());
  }
  // Pairs are independent; results are collected by index so the output order
  // is the input order whatever the completion order.
  std::vector<std::optional<ParallelCertificate>> certs(pairs);
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(pairs)));
  std::vector<std::future<void>> tasks;
  for (unsigned w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < pairs; k += workers) certs[k] = certify(fs[k], gs[k], tol);
    }));
  }
  for (auto& t : tasks) t.get();
  bool all = true;
  for (std::size_t k = 0; k < pairs; ++k) {
    print_certificate(o, cfg.inputs[2 * k], cfg.inputs[2 * k + 1], *certs[k]);
    all = all && certs[k]->verdict;
  }
  return all ? kTrue : kFalse;
}

int cmd_witness(const Config& cfg, const Output& o) {
  require_inputs(cfg, 2, "witness f.json g.json");
  const auto f = load_grid(cfg.inputs[0]);
  const auto g = load_grid(cfg.inputs[1]);
  const double tol = cfg.tolerance.value_or(kGridTolerance);
  const auto w = witness_measure(f, g, tol);
  const double lp = witness_value_lp(f, g, tol, cfg.lambda_grid);
  if (o.json_mode) {
    o.emit({{"command", "witness"},
            {"verdict", w.measure.has_value()},
            {"measure", w.measure ? to_json(*w.measure) : json(nullptr)},
            {"best_point", w.best_point},
            {"best_modulus", w.best_modulus},
            {"target", w.target},
            {"lp_value", lp}});
  } else if (w.measure) {
    o.out << fmt::format("witness measure: delta_{} with |pairing| = {} = ||f|| ||g||\n", w.best_point,
                         num(w.best_modulus));
    o.out << fmt::format("  LP cross-check value {} (difference {})\n", num(lp), sci(std::abs(lp - w.best_modulus)));
  } else {
    o.out << fmt::format("not parallel: best point-mass pairing {} at {} < ||f|| ||g|| = {}\n", num(w.best_modulus),
                         w.best_point, num(w.target));
  }
  return w.measure ? kTrue : kFalse;
}

int cmd_verify(const Config& cfg, const Output& o) {
  require_inputs(cfg, 3, "verify cert.json f.json g.json");
  const json cj = load_json(cfg.inputs[0]);
  const auto f = load_grid(cfg.inputs[1]);
  const auto g = load_grid(cfg.inputs[2]);
  ParallelCertificate cert;
  try {
    cert = certificate_from_json(cj);
  } catch (const InvalidInput& e) {
    throw MalformedCertificate(e.what());
  }
  const auto rep = verify_certificate(f, g, cert, cfg.tolerance.value_or(kGridTolerance));
  if (o.json_mode) {
    json j = to_json(rep);
    j["command"] = "verify";
    o.emit(j);
  } else {
    o.out << fmt::format("certificate {}\n", rep.passed ? "verified" : "REJECTED");
    if (cert.verdict) {
      o.out << fmt::format("  residuals: norm {}, pairing {}, phi(f) {}, |phi(g)| {}, ||phi|| {}\n",
                           sci(rep.residual_norm), sci(rep.residual_pairing), sci(rep.dual_value_error),
                           sci(rep.dual_modulus_error), sci(rep.dual_norm_error));
    } else {
      o.out << fmt::format("  recomputed gap {}\n", sci(rep.gap));
    }
    for (const auto& msg : rep.failures) o.out << "  failed: " << msg << '\n';
  }
  return rep.passed ? kTrue : kVerificationFailure;
}

int cmd_deriv(const Config& cfg, const Output& o) {
  require_inputs(cfg, 2, "deriv f.json g.json [--fd]");
  const json fj = load_json(cfg.inputs[0]);
  const json gj = load_json(cfg.inputs[1]);
  const auto ts = cfg.t_schedule.empty() ? default_t_schedule() : parse_list(cfg.t_schedule, "--t-schedule");
  DerivativeReport exact;
  std::optional<DerivativeReport> fd;
  if (is_sequence_json(fj)) {
    const auto f = sequence_from_json(fj);
    const auto g = sequence_from_json(gj);
    const auto eps = cfg.eps_schedule.empty() ? default_eps_schedule() : parse_list(cfg.eps_schedule, "--eps-schedule");
    exact = dplus_seq(f, g, eps, cfg.tolerance.value_or(1e-3));
    if (cfg.fd) fd = dplus_fd(f, g, ts);
  } else {
    const auto f = grid_from_json(fj);
    const auto g = grid_from_json(gj);
    exact = dplus_grid_report(f, g);
    if (cfg.fd) fd = dplus_fd(f, g, ts);
  }
  if (o.json_mode) {
    o.emit({{"command", "deriv"}, {"exact", to_json(exact)}, {"finite_difference", fd ? to_json(*fd) : json(nullptr)}});
  } else {
    o.out << fmt::format("D+ = {} ({})", num(exact.value), method_name(exact.method));
    if (fd) o.out << fmt::format("    finite difference at t = {}: {}", num(fd->schedule.back().parameter), num(fd->value));
    o.out << '\n';
    if (!exact.converged) o.out << "  warning: " << exact.note << '\n';
  }
  return exact.converged ? kTrue : kInconclusive;
}

int cmd_asym(const Config& cfg, const Output& o) {
  require_inputs(cfg, 2, "asym f.json g.json");
  const auto f = load_sequence(cfg.inputs[0]);
  const auto g = load_sequence(cfg.inputs[1]);
  const auto eps = cfg.eps_schedule.empty() ? default_eps_schedule() : parse_list(cfg.eps_schedule, "--eps-schedule");
  const auto r = asymptotic_parallel(f, g, eps, cfg.tolerance.value_or(1e-3));
  if (o.json_mode) {
    json j = to_json(r);
    j["command"] = "asym";
    o.emit(j);
  } else {
    o.out << fmt::format("outcome: {} (truncation {})\n", outcome_name(r.outcome), f.truncation());
    o.out << fmt::format("  lambda = {}, ||f|| ~ {}, ||g|| ~ {}\n", cplx(r.lambda), num(r.norm_f), num(r.norm_g));
    for (const auto& s : r.recipe) {
      o.out << fmt::format("  eps {}: delta_{} of {} candidates, residual {}\n", sci(s.eps), s.index,
                           s.level_set_size, sci(s.limit_residual));
    }
    o.out << fmt::format("  limit residual {}, direct test {}\n", sci(r.limit_residual),
                         r.direct_verdict ? "parallel" : "not parallel");
    if (!r.note.empty()) o.out << "  note: " << r.note << '\n';
  }
  switch (r.outcome) {
    case Outcome::parallel: return kTrue;
    case Outcome::not_parallel: return kFalse;
    case Outcome::inconclusive: break;
  }
  return kInconclusive;
}

json pair_json(const NormingPair& p) {
  return {{"point", vector_to_json(p.point)}, {"functional", vector_to_json(p.functional)}};
}

int cmd_vradius(const Config& cfg, const Output& o) {
  require_inputs(cfg, 1, "vradius f.json");
  const auto f = ball_from_json(load_json(cfg.inputs[0]));
  const auto r = numerical_radius(f, sampling(cfg));
  if (o.json_mode) {
    o.emit({{"command", "vradius"},
            {"value", r.value},
            {"pair", pair_json(r.pair)},
            {"samples", r.samples},
            {"refined", r.refined}});
  } else {
    o.out << fmt::format("v(f) >= {} ({} sphere samples{})\n", num(r.value), r.samples,
                         r.refined ? ", refined by local ascent" : "");
  }
  return kTrue;
}

int cmd_par_id(const Config& cfg, const Output& o) {
  require_inputs(cfg, 1, "par-id f.json");
  const auto f = ball_from_json(load_json(cfg.inputs[0]));
  const auto r = parallel_to_id(f, cfg.tolerance.value_or(kRadiusTolerance), sampling(cfg));
  if (o.json_mode) {
    o.emit({{"command", "par-id"},
            {"verdict_v", r.verdict_v},
            {"verdict_direct", r.verdict_direct},
            {"agree", r.agree},
            {"v_hat", r.v_hat},
            {"norm_hat", r.norm_hat},
            {"direct_norm", r.direct_norm},
            {"direct_lambda", complex_to_json(r.direct_lambda)},
            {"certificate", {{"pair", pair_json(r.pair)}, {"lambda", complex_to_json(r.lambda)}}},
            {"lipschitz_estimate", r.lipschitz_estimate ? json(*r.lipschitz_estimate) : json(nullptr)},
            {"lipschitz_warning", r.lipschitz_warning},
            {"diagnostic", r.diagnostic}});
  } else {
    o.out << fmt::format("v(f) ~ {}, ||f|| ~ {}: {}\n", num(r.v_hat), num(r.norm_hat),
                         r.verdict_v ? "equal (f || Id)" : "different");
    o.out << fmt::format("max ||Id + lambda f|| ~ {} at lambda = {}: {}\n", num(r.direct_norm), cplx(r.direct_lambda),
                         r.verdict_direct ? "parallel" : "not parallel");
    if (r.lipschitz_warning) o.out << fmt::format("warning: Lipschitz estimate {} is large\n", num(*r.lipschitz_estimate));
    if (!r.agree) o.out << "diagnostic: " << r.diagnostic << '\n';
  }
  if (!r.agree) {
    o.err << "par-id: the two criteria disagree; " << r.diagnostic << '\n';
    return kInconclusive;
  }
  return r.verdict_v ? kTrue : kFalse;
}

int cmd_daugavet(const Config& cfg, const Output& o) {
  require_inputs(cfg, 1, "daugavet A.json");
  const auto f = ball_from_json(load_json(cfg.inputs[0]));
  if (!f.is_matrix()) throw InvalidInput("daugavet needs a matrix body");
  const auto r = daugavet_check(f.space(), f.matrix(), cfg.tolerance.value_or(kRadiusTolerance));
  if (o.json_mode) {
    o.emit({{"command", "daugavet"},
            {"verdict", r.verdict},
            {"norm_a", r.norm_a},
            {"norm_a_plus_id", r.norm_a_plus_id}});
  } else {
    o.out << fmt::format("||A + I|| = {}, ||A|| + 1 = {}: {}\n", num(r.norm_a_plus_id), num(r.norm_a + 1.0),
                         r.verdict ? "Daugavet equation holds" : "Daugavet equation fails");
  }
  return r.verdict ? kTrue : kFalse;
}

int cmd_hull(const Config& cfg, const Output& o) {
  require_inputs(cfg, 2, "hull f.json g.json --lambda a,b --eps E");
  const auto f = load_grid(cfg.inputs[0]);
  const auto g = load_grid(cfg.inputs[1]);
  if (cfg.lambda.empty()) throw UsageError("hull needs --lambda re,im");
  const auto parts = parse_list(cfg.lambda, "--lambda");
  if (parts.size() != 2) throw UsageError("--lambda takes two numbers: re,im");
  double eps = 0.0;
  if (cfg.eps) {
    eps = *cfg.eps;
  } else {
    const double gap = spectral_gap(f);
    eps = std::isinf(gap) ? 1.0 : 0.5 * gap;
  }
  const auto r = halfplane_witness(f, g, Complex{parts[0], parts[1]}, eps, cfg.tolerance.value_or(1e-9));
  if (o.json_mode) {
    json j = to_json(r);
    j["command"] = "hull";
    o.emit(j);
  } else {
    o.out << fmt::format("K_eps over {{{}}} (eps = {}): origin {} the convex hull\n", join(r.labels), num(r.eps),
                         r.contains_origin ? "in" : "not in");
    o.out << fmt::format("  dual half-plane test: {}\n", r.dual_contains_origin ? "no separating half plane"
                                                                                : "separating half plane found");
    if (std::isfinite(r.spectral_gap)) o.out << fmt::format("  spectral gap of |f|: {}\n", num(r.spectral_gap));
  }
  return r.contains_origin ? kTrue : kFalse;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_flag("--json", cfg.json, "Print one JSON document per result");
  sub->add_option("--tolerance", cfg.tolerance, "Decision tolerance (grid default 1e-9)");
  sub->add_option("--jobs", cfg.jobs, "Worker threads for multiple input pairs")->check(CLI::PositiveNumber);
}

void add_sampling(CLI::App* sub, Config& cfg) {
  sub->add_option("--samples", cfg.samples, "Sphere sample density")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "Sampling seed (falls back to NORMPAR_SEED)");
  sub->add_flag("--refine,!--no-refine", [&cfg](std::int64_t n) { cfg.no_refine = n < 0; },
                "Local ascent after sampling (default on)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Norm-parallelism deciders and certificates for sup-norm spaces", "normpar"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Config&, const Output&);
    bool sampling;
  };
  const std::vector<Command> commands{
      {"norm", "Sup-norm of a grid or sequence function", cmd_norm, false},
      {"attain", "Norm-attaining set, or the eps-level set with --eps", cmd_attain, false},
      {"parallel", "Decide f || g and emit a certificate", cmd_parallel, false},
      {"witness", "Witness probability measure for f || g", cmd_witness, false},
      {"verify", "Recompute the residuals of a certificate", cmd_verify, false},
      {"deriv", "One-sided Gateaux derivative of the sup-norm", cmd_deriv, false},
      {"asym", "Asymptotic parallelism for sequence functions", cmd_asym, false},
      {"vradius", "Numerical radius of a function on the unit ball", cmd_vradius, true},
      {"par-id", "Decide whether f is parallel to the identity", cmd_par_id, true},
      {"daugavet", "Check the Daugavet equation ||A + I|| = ||A|| + 1", cmd_daugavet, false},
      {"hull", "Half-plane test: is 0 in the convex hull of K_eps", cmd_hull, false},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("inputs", cfg.inputs, "Input JSON files")->required();
    add_common(sub, cfg);
    if (c.sampling) add_sampling(sub, cfg);
    subs.push_back(sub);
  }
  subs[1]->add_option("--eps", cfg.eps, "Level-set width");
  subs[3]->add_option("--lambda-grid", cfg.lambda_grid, "Directions for the LP cross-check")->check(CLI::PositiveNumber);
  subs[5]->add_flag("--fd", cfg.fd, "Also print finite-difference quotients");
  subs[5]->add_option("--t-schedule", cfg.t_schedule, "Decreasing step sizes, comma separated");
  subs[5]->add_option("--eps-schedule", cfg.eps_schedule, "Decreasing eps values for sequences");
  subs[6]->add_option("--eps-schedule", cfg.eps_schedule, "Decreasing eps values, comma separated");
  subs[10]->add_option("--lambda", cfg.lambda, "Unimodular lambda as re,im")->required();
  subs[10]->add_option("--eps", cfg.eps, "Level-set width (default: half the spectral gap)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kInputError;
  }

  const Output o{out, err, cfg.json};
  for (std::size_t k = 0; k < commands.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      return commands[k].fn(cfg, o);
    } catch (const MalformedCertificate& e) {
      err << "normpar " << commands[k].name << ": malformed certificate: " << e.what() << '\n';
      return kVerificationFailure;
    } catch (const Error& e) {
      err << "normpar " << commands[k].name << ": " << e.what() << '\n';
      return kInputError;
    } catch (const json::exception& e) {
      err << "normpar " << commands[k].name << ": " << e.what() << '\n';
      return kInputError;
    }
  }
  return kInputError;
}

}  // namespace normpar::cli
