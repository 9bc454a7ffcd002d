#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hilltails/asymptotics.hpp"
#include "hilltails/discriminant.hpp"
#include "hilltails/elliptic.hpp"
#include "hilltails/error.hpp"
#include "hilltails/io.hpp"
#include "hilltails/lame.hpp"
#include "hilltails/ratefn.hpp"
#include "hilltails/report.hpp"
#include "hilltails/sampling.hpp"

using namespace hilltails;
using io::json;

namespace {

struct Params {
  // common
  std::uint64_t seed = 7;
  std::string out;
  std::string format;
  bool quick = false;
  std::string config;
  // per command
  double a = 10.0;
  double mu = 100.0;
  std::size_t n = 0;
  bool numeric = false;
  std::string lambda_grid;
  std::string mu_grid = "100:2500:5";
  std::string mu_window = "-3:3";
  std::size_t samples = 0;
  int bins = 60;
  std::string archive;
};

void add_common(CLI::App* sub, Params& p) {
  sub->add_option("--seed", p.seed, "master RNG seed");
  sub->add_option("--out", p.out, "output file (report: directory); stdout if omitted");
  sub->add_option("--format", p.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--quick", p.quick, "smaller sample sizes");
  sub->add_option("--config", p.config, "flat key = value file; flags take precedence");
}

void build(CLI::App& app, Params& p) {
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);

  auto* r = app.add_subcommand("ratefn", "minimize the rate function on the circle of length 2a");
  r->add_option("--a", p.a, "half-length a > 0");
  r->add_option("--n", p.n, "grid points (default 1024)");

  auto* l = app.add_subcommand("lame", "simple periodic spectrum of the Lame operator");
  l->add_option("--mu", p.mu, "mu >= 4 pi^2");
  l->add_flag("--numeric", p.numeric, "also run the finite-difference eigensolver");
  l->add_option("--n", p.n, "finite-difference grid (default max(4096, 64 sqrt(mu)))");

  auto* d = app.add_subcommand("discriminant", "Hill discriminant: monodromy vs Hochstadt formula");
  d->add_option("--mu", p.mu, "mu >= 4 pi^2");
  d->add_option("--lambda-grid", p.lambda_grid, "lo:hi:n in spectral units (default spans the spectrum)");

  auto* t = app.add_subcommand("tails", "assembled tail asymptotics vs closed form");
  t->add_option("--mu-grid", p.mu_grid, "lo:hi:n with lo >= 4 pi^2");

  auto* md = app.add_subcommand("mc-direct", "density of -lambda_0 by direct simulation");
  md->add_option("--mu-window", p.mu_window, "lo:hi");
  md->add_option("--samples", p.samples, "realizations (default 100000, quick 10000)");
  md->add_option("--n", p.n, "grid points (default 1024)");
  md->add_option("--bins", p.bins, "histogram bins");
  md->add_option("--archive", p.archive, "persist samples as float64 LE with a JSON sidecar");

  auto* mp = app.add_subcommand("mc-path", "density of -lambda_0 from the path integral");
  mp->add_option("--mu", p.mu, "mu in [-2, 2.5]");
  mp->add_option("--samples", p.samples, "paths (default 100000, quick 10000)");
  mp->add_option("--n", p.n, "grid points (default 1024)");

  app.add_subcommand("report", "full cross-validation bundle");

  for (auto* sub : app.get_subcommands({})) add_common(sub, p);
}

std::string long_name(const CLI::Option* o) {
  auto names = o->get_lnames();
  return names.empty() ? std::string() : names.front();
}

std::set<std::string> config_keys(CLI::App* sub) {
  std::set<std::string> keys;
  for (const auto* o : sub->get_options()) {
    std::string k = long_name(o);
    if (!k.empty() && k != "help" && k != "config") keys.insert(k);
  }
  return keys;
}

// resolved values; the output location and the config path are not parameters
io::Meta resolved(CLI::App* sub) {
  io::Meta m{{"command", sub->get_name()}};
  for (const auto* o : sub->get_options()) {
    std::string k = long_name(o);
    if (k.empty() || k == "help" || k == "config" || k == "out") continue;
    std::string v;
    if (o->count() > 0) {
      auto rs = o->results();
      v = rs.empty() ? "true" : rs.back();
    } else {
      v = o->get_default_str();
    }
    if (v.empty()) continue; // e.g. --format where the command picks its own
    m.emplace_back(k, v);
  }
  return m;
}

void emit(const Params& p, const std::string& text, const std::string& summary) {
  if (p.out.empty()) {
    std::cout << text;
    std::cerr << summary << "\n";
  } else {
    io::write_atomic(p.out, text);
    std::cout << summary << " -> " << p.out << "\n";
  }
}

void emit_table(const Params& p, const io::Table& t, const std::string& summary) {
  emit(p, p.format == "json" ? io::dump(t.to_json()) : t.to_csv(), summary);
}

int cmd_ratefn(Params& p, const io::Meta& meta) {
  ratefn::RateProblem prob{p.a, p.n ? p.n : 1024};
  auto r = ratefn::minimize(prob);
  io::Table t;
  t.meta = meta;
  t.columns = {"a", "I_star", "alpha", "beta", "el_residual", "iterations"};
  t.add_row({p.a, r.I_star, r.alpha, r.beta, r.el_residual, r.iterations});
  emit_table(p, t, "ratefn: I* = " + io::format_number(r.I_star) + (r.converged ? "" : " (not converged)"));
  return r.converged ? 0 : 3;
}

int cmd_lame(Params& p, const io::Meta& meta) {
  auto ctx = elliptic::modulus_for_mu(p.mu);
  auto sp = lame::explicit_spectrum(ctx, p.mu);
  std::vector<double> num;
  if (p.numeric) {
    std::size_t n = p.n ? p.n : static_cast<std::size_t>(std::max(4096.0, 64.0 * std::sqrt(p.mu)));
    num = lame::numerical_periodic_spectrum(p.mu, n, 5);
  }
  io::Table t;
  t.meta = meta;
  t.columns = {"ell", "lambda_explicit", "lambda_numeric", "rel_err"};
  double worst = 0.0;
  for (int ell = 0; ell < 5; ++ell) {
    double e = sp.scaled(ell);
    if (p.numeric) {
      double rel = std::fabs(num[static_cast<std::size_t>(ell)] / e - 1.0);
      worst = std::max(worst, rel);
      t.add_row({ell, e, num[static_cast<std::size_t>(ell)], rel});
    } else {
      t.add_row({ell, e, nullptr, nullptr});
    }
  }
  emit_table(p, t, "lame: mu = " + io::format_number(p.mu) + (p.numeric ? ", max rel_err " + io::format_number(worst) : ""));
  return 0;
}

int cmd_discriminant(Params& p, const io::Meta& meta) {
  auto ctx = elliptic::modulus_for_mu(p.mu);
  auto sp = lame::explicit_spectrum(ctx, p.mu);
  auto gp = discriminant::solve_gap_points(sp);
  io::Range g;
  if (p.lambda_grid.empty()) {
    g = {sp.scaled(0) - 0.2 * p.mu, sp.scaled(4) + 0.5 * p.mu, 41};
  } else {
    g = io::parse_range(p.lambda_grid, true);
  }
  io::Table t;
  t.meta = meta;
  t.columns = {"lambda", "delta_ode", "delta_hochstadt", "band_flag"};
  double worst = 0.0;
  for (double lam : g.points()) {
    auto m = discriminant::monodromy_delta(sp, lam);
    auto h = discriminant::hochstadt_delta(sp, gp, lam);
    worst = std::max(worst, std::fabs(m.delta - h.value) / std::max(1.0, std::fabs(m.delta)));
    t.add_row({lam, m.delta, h.value, std::fabs(m.delta) <= 2.0 ? 1 : 0});
  }
  emit_table(p, t, "discriminant: " + std::to_string(g.count) + " points, max rel diff " + io::format_number(worst));
  return 0;
}

int cmd_tails(Params& p, const io::Meta& meta) {
  auto g = io::parse_range(p.mu_grid, true);
  io::Table t;
  t.meta = meta;
  t.columns = {"mu", "log_A", "log_R", "log_Z", "I_val", "log_f_assembled", "log_f_closed", "ratio"};
  for (double mu : g.points()) {
    auto r = asymptotics::assemble_tail(mu);
    t.add_row({mu, r.log_A_plus + r.log_A_minus, r.log_R, r.Z.log_Z, r.I_val, r.log_f_assembled, r.log_f_closed, r.ratio});
  }
  emit_table(p, t, "tails: " + std::to_string(g.count) + " rows");
  return 0;
}

std::size_t default_samples(const Params& p) { return p.samples ? p.samples : (p.quick ? 10000 : 100000); }

int cmd_mc_direct(Params& p, const io::Meta& meta) {
  auto w = io::parse_range(p.mu_window, false);
  if (!(w.hi > w.lo)) throw PreconditionError("mu-window: need lo < hi");
  if (p.bins < 1) throw PreconditionError("bins must be positive");
  sampling::EnsembleConfig cfg;
  cfg.n = p.n ? p.n : 1024;
  cfg.count = default_samples(p);
  cfg.seed = p.seed;
  auto ens = sampling::ground_state_ensemble(cfg);
  std::vector<double> x;
  for (const auto& s : ens) x.push_back(s.minus_lambda0);
  auto d = sampling::estimate_density(x, w.lo, w.hi, p.bins);
  if (!p.archive.empty())
    io::write_f64_archive(p.archive, x, {x.size()},
                          {{"quantity", "minus_lambda0"}, {"seed", p.seed}, {"n", cfg.n}, {"count", cfg.count}});
  std::string summary = "mc-direct: " + std::to_string(cfg.count) + " realizations, " +
                        io::format_number(d.in_window) + " in window";
  if (p.format == "json") {
    json j;
    j["config"] = json::object();
    for (const auto& [k, v] : meta) j["config"][k] = v;
    j["bins"] = d.edges;
    j["density"] = d.density;
    j["stderr"] = d.stderr_;
    j["smoothed"] = d.smoothed;
    j["bandwidth"] = d.bandwidth;
    j["in_window"] = d.in_window;
    j["count"] = d.count;
    j["seed"] = p.seed;
    j["n"] = cfg.n;
    emit(p, io::dump(j), summary);
  } else {
    io::Table t;
    t.meta = meta;
    t.columns = {"lo", "hi", "density", "stderr", "smoothed"};
    for (std::size_t i = 0; i < d.density.size(); ++i)
      t.add_row({d.edges[i], d.edges[i + 1], d.density[i], d.stderr_[i], d.smoothed[i]});
    emit_table(p, t, summary);
  }
  return 0;
}

int cmd_mc_path(Params& p, const io::Meta& meta) {
  std::size_t n = p.n ? p.n : 1024;
  std::size_t count = default_samples(p);
  auto e = sampling::path_integral_density(p.mu, count, n, p.seed);
  std::string summary = "mc-path: f(" + io::format_number(p.mu) + ") = " + io::format_number(e.estimate) + " +- " +
                        io::format_number(e.stderr_);
  if (p.format == "json") {
    json j;
    j["config"] = json::object();
    for (const auto& [k, v] : meta) j["config"][k] = v;
    j["mu"] = p.mu;
    j["estimate"] = e.estimate;
    j["stderr"] = e.stderr_;
    j["count"] = e.count;
    j["seed"] = p.seed;
    j["n"] = n;
    emit(p, io::dump(j), summary);
  } else {
    io::Table t;
    t.meta = meta;
    t.columns = {"mu", "estimate", "stderr", "count", "seed", "n"};
    t.add_row({p.mu, e.estimate, e.stderr_, e.count, p.seed, n});
    emit_table(p, t, summary);
  }
  return 0;
}

int cmd_report(Params& p, const io::Meta& meta) {
  report::Options opt;
  opt.seed = p.seed;
  opt.quick = p.quick;
  opt.out_dir = p.out.empty() ? "report" : p.out;
  opt.config = meta;
  auto res = report::run(opt);
  int failed = 0;
  for (const auto& c : res.checks) {
    std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name << "\n";
    failed += !c.pass;
  }
  for (const auto& e : res.errors) std::cout << "ERROR " << e << "\n";
  std::cout << "report: " << res.checks.size() - static_cast<std::size_t>(failed) << "/" << res.checks.size()
            << " checks pass -> " << opt.out_dir.string() << "\n";
  return res.all_pass() ? 0 : 1;
}

int dispatch(const std::string& name, CLI::App* sub, Params& p) {
  try {
    auto meta = resolved(sub);
    if (p.format.empty() && name != "report") {
      p.format = (name == "mc-direct" || name == "mc-path") ? "json" : "csv";
      meta.emplace_back("format", p.format);
    }
    if (name == "ratefn") return cmd_ratefn(p, meta);
    if (name == "lame") return cmd_lame(p, meta);
    if (name == "discriminant") return cmd_discriminant(p, meta);
    if (name == "tails") return cmd_tails(p, meta);
    if (name == "mc-direct") return cmd_mc_direct(p, meta);
    if (name == "mc-path") return cmd_mc_path(p, meta);
    return cmd_report(p, meta);
  } catch (const PreconditionError& e) {
    std::cerr << "hilltails " << name << ": precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "hilltails " << name << ": precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hilltails " << name << ": " << e.what() << "\n";
    return 3;
  }
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> user(argv + 1, argv + argc);
  std::vector<std::string> args(user.rbegin(), user.rend()); // CLI11 consumes from the back

  Params p;
  CLI::App app{"hilltails: ground-state density of the random Hill operator"};
  build(app, p);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (p.config.empty()) return dispatch(name, sub, p);

  // second pass: config values go in front of the user's flags, which win (last value taken)
  std::map<std::string, std::string> cfg;
  try {
    cfg = io::read_config_file(p.config, config_keys(sub));
  } catch (const Error& e) {
    std::cerr << "hilltails " << name << ": " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> merged{name};
  for (const auto& [k, v] : cfg) {
    if (sub->get_option("--" + k)->get_expected_min() == 0) {
      merged.push_back("--" + k + "=" + v);
    } else {
      merged.push_back("--" + k);
      merged.push_back(v);
    }
  }
  auto at = std::find(user.begin(), user.end(), name);
  merged.insert(merged.end(), at + 1, user.end());
  std::reverse(merged.begin(), merged.end());

  Params p2;
  CLI::App app2{"hilltails"};
  build(app2, p2);
  try {
    app2.parse(merged);
  } catch (const CLI::ParseError& e) {
    return app2.exit(e);
  }
  return dispatch(name, app2.get_subcommand(name), p2);
}
