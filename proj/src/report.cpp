#include "hilltails/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hilltails/asymptotics.hpp"
#include "hilltails/discriminant.hpp"
#include "hilltails/error.hpp"
#include "hilltails/lame.hpp"
#include "hilltails/rice.hpp"
#include "hilltails/sampling.hpp"

namespace hilltails::report {

using io::json;

bool Result::all_pass() const {
  if (!errors.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

// thresholds, also written to the manifest
constexpr double z_max = 3.0;
constexpr double rice_exact_tol = 1e-14;
constexpr double left_slope_tol = 0.15;
constexpr double decay_factor = 1.5;
constexpr double ratio_lo = 0.8, ratio_hi = 1.25;
constexpr double d2mu_lo = 0.85, d2mu_hi = 1.15;
constexpr double sech_tol = 1e-10;
constexpr double bin_width = 0.1;

struct Sizes {
  std::size_t direct, path, left, rice, cm;
  std::size_t n;
};

Sizes sizes(bool quick) {
  if (quick) return {20000, 20000, 20000, 20000, 20000, 1024};
  return {100000, 100000, 1000000, 100000, 100000, 1024};
}

// sub-seeds: fixed offsets from the master seed
enum Stream : std::uint64_t { s_direct = 1, s_path, s_left, s_rice_max, s_rice_zeros, s_rice_weight, s_cm };

io::Meta with(const io::Meta& base, const std::string& k, const std::string& v) {
  io::Meta m = base;
  m.emplace_back(k, v);
  return m;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void tails_section(const Options& opt, const Sizes& sz, Result& res) {
  io::Table t;
  t.meta = with(opt.config, "table", "tails");
  t.columns = {"mu", "f_direct", "f_direct_se", "f_path", "f_path_se", "log_f_closed", "log_f_assembled", "ratio"};

  std::vector<double> mus;
  for (int i = -4; i <= 5; ++i) mus.push_back(0.5 * i);
  sampling::EnsembleConfig cfg;
  cfg.n = sz.n;
  cfg.count = sz.direct;
  cfg.seed = opt.seed + s_direct;
  auto ens = sampling::ground_state_ensemble(cfg);
  std::vector<double> x;
  x.reserve(ens.size());
  for (const auto& s : ens) x.push_back(s.minus_lambda0);
  auto pe = sampling::path_integral_density_multi(mus, sz.path, sz.n, opt.seed + s_path);

  Check cross{"cross_oracle_density", true, "direct simulation vs path integral within 3 sigma at mu = -1, 0, 1, 2", json::array()};
  for (std::size_t i = 0; i < mus.size(); ++i) {
    auto d = sampling::point_density(x, nullptr, mus[i], bin_width);
    json closed = nullptr;
    if (mus[i] != 0.0) closed = finite_or_null(asymptotics::closed_form_tails(mus[i]));
    t.add_row({mus[i], d.estimate, d.stderr_, pe[i].estimate, pe[i].stderr_, closed, nullptr, nullptr});
    if (mus[i] == -1.0 || mus[i] == 0.0 || mus[i] == 1.0 || mus[i] == 2.0) {
      double z = (d.estimate - pe[i].estimate) / std::hypot(d.stderr_, pe[i].stderr_);
      bool ok = std::fabs(z) <= z_max;
      cross.pass = cross.pass && ok;
      cross.values.push_back({{"mu", mus[i]}, {"direct", d.estimate}, {"path", pe[i].estimate}, {"z", z}, {"pass", ok}});
    }
  }

  Check ratio{"assembly_vs_closed_form", true, "assembled/closed-form ratio in [0.8, 1.25] at mu = 400 and |ratio - 1| smaller at 2500", json::array()};
  Check growth{"discriminant_growth", true, "-log((D^2(2mu) - 4)^(-1/2))/sqrt(mu) in [0.85, 1.15] at mu = 400 and closer to 1 at 2500", json::array()};
  double r400 = NAN, r2500 = NAN, g400 = NAN, g2500 = NAN;
  for (double mu : {100.0, 400.0, 900.0, 1600.0, 2500.0}) {
    auto tr = asymptotics::assemble_tail(mu);
    t.add_row({mu, nullptr, nullptr, nullptr, nullptr, tr.log_f_closed, tr.log_f_assembled, finite_or_null(tr.ratio)});
    ratio.values.push_back({{"mu", mu}, {"log_ratio", tr.log_ratio}, {"odd_negative", tr.odd_negative}});
    growth.values.push_back({{"mu", mu}, {"normalized_log", tr.d2mu_normalized_log}});
    if (mu == 400.0) {
      r400 = tr.ratio;
      g400 = tr.d2mu_normalized_log;
    }
    if (mu == 2500.0) {
      r2500 = tr.ratio;
      g2500 = tr.d2mu_normalized_log;
    }
  }
  ratio.pass = r400 >= ratio_lo && r400 <= ratio_hi && std::fabs(r2500 - 1.0) < std::fabs(r400 - 1.0);
  growth.pass = g400 >= d2mu_lo && g400 <= d2mu_hi && std::fabs(g2500 - 1.0) < std::fabs(g400 - 1.0);

  io::write_atomic(opt.out_dir / "tails.csv", t.to_csv());
  res.files.push_back("tails.csv");
  res.checks.push_back(std::move(cross));
  res.checks.push_back(std::move(ratio));
  res.checks.push_back(std::move(growth));
}

void left_tail_section(const Options& opt, const Sizes& sz, Result& res) {
  io::Table t;
  t.meta = with(opt.config, "table", "left_tail");
  t.columns = {"mu", "log_f_mc", "log_f_mc_se", "log_f_closed", "minus_half_mu_sq"};
  sampling::EnsembleConfig cfg;
  cfg.n = sz.n;
  cfg.count = sz.left;
  cfg.seed = opt.seed + s_left;
  cfg.tilts = {4.0, 5.0, 6.0, 7.0, 8.0};
  auto ens = sampling::ground_state_ensemble(cfg);
  std::vector<double> x, w;
  for (const auto& s : ens) {
    x.push_back(s.minus_lambda0);
    w.push_back(s.weight);
  }
  std::vector<double> X, Y;
  for (int i = 0; i <= 8; ++i) {
    double mu = -8.0 + 0.5 * i;
    auto d = sampling::point_density(x, &w, mu, bin_width);
    double lf = d.estimate > 0.0 ? std::log(d.estimate) : NAN;
    double se = d.estimate > 0.0 ? d.stderr_ / d.estimate : NAN;
    t.add_row({mu, finite_or_null(lf), finite_or_null(se), asymptotics::closed_form_tails(mu), -0.5 * mu * mu});
    if (std::isfinite(lf)) {
      X.push_back(-0.5 * mu * mu);
      Y.push_back(lf);
    }
  }
  double slope = NAN;
  if (X.size() >= 3) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      mx += X[i];
      my += Y[i];
    }
    mx /= X.size();
    my /= X.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      sxy += (X[i] - mx) * (Y[i] - my);
      sxx += (X[i] - mx) * (X[i] - mx);
    }
    slope = sxy / sxx;
  }
  io::write_atomic(opt.out_dir / "left_tail.csv", t.to_csv());
  res.files.push_back("left_tail.csv");
  res.checks.push_back({"left_tail_slope", std::fabs(slope - 1.0) <= left_slope_tol,
                        "regression slope of log density against -mu^2/2 over [-8, -4] within 15% of 1",
                        {{"slope", finite_or_null(slope)}, {"points", X.size()}}});
}

void identities_section(const Options& opt, const Sizes& sz, Result& res) {
  json out;
  out["config"] = json::object();
  for (const auto& [k, v] : opt.config) out["config"][k] = v;

  Check disc{"discrete_rice", true, "exact enumeration, |lhs - rhs| <= 1e-14", json::array()};
  for (const auto& p : rice::standard_lattice_processes()) {
    auto [l, r] = rice::check_discrete_rice(p, rice::standard_lattice_functional);
    double err = static_cast<double>(std::fabs(l - r));
    bool ok = err <= rice_exact_tol;
    disc.pass = disc.pass && ok;
    disc.values.push_back({{"process", p.name}, {"lhs", static_cast<double>(l)}, {"rhs", static_cast<double>(r)}, {"abs_err", err}, {"pass", ok}});
  }

  auto mc_entry = [](const std::string& label, const rice::MCPair& m) {
    return json{{"functional", label}, {"lhs", m.lhs}, {"lhs_se", m.lhs_se}, {"rhs", m.rhs}, {"rhs_se", m.rhs_se}, {"z", m.z()}, {"count", m.count}, {"excluded", m.excluded}, {"pass", std::fabs(m.z()) <= z_max}};
  };
  Check cont{"continuous_rice", true, "trigonometric process, lhs and rhs within 3 sigma", json::array()};
  const std::pair<const char*, std::pair<rice::ContinuousF, Stream>> fs[] = {
      {"max", {rice::ContinuousF::max, s_rice_max}},
      {"zeros", {rice::ContinuousF::zeros, s_rice_zeros}},
      {"density_weight", {rice::ContinuousF::density_weight, s_rice_weight}}};
  for (const auto& [label, sel] : fs) {
    auto m = rice::check_rice_continuous(0.5, sel.first, sz.rice, opt.seed + sel.second);
    cont.pass = cont.pass && std::fabs(m.z()) <= z_max;
    cont.values.push_back(mc_entry(label, m));
  }

  const std::size_t n = 256;
  GridPath cond(n), shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = cond.x(i);
    cond[i] = std::sin(2.0 * M_PI * x);
    shift[i] = 0.15 * std::cos(2.0 * M_PI * x) + 0.05 * std::sin(6.0 * M_PI * x);
  }
  auto F = [](const GridPath& p) {
    double q = 0.0;
    for (double v : p.v) q += v * v;
    return std::exp(-q * p.h());
  };
  auto cm = rice::check_cameron_martin(shift, cond, F, sz.cm, opt.seed + s_cm);
  Check cmc{"cameron_martin", std::fabs(cm.z()) <= z_max, "doubly conditioned bridge, shifted and reweighted expectation within 3 sigma",
            mc_entry("exp(-int p^2)", cm)};

  auto s100 = sampling::make_pstar_sampler(100.0);
  auto s400 = sampling::make_pstar_sampler(400.0);
  double v100 = 10.0 * sampling::pstar_mean_square(s100);
  double v400 = 20.0 * sampling::pstar_mean_square(s400);
  Check decay{"pstar_variance_decay", v400 <= decay_factor * v100 && v400 >= v100 / decay_factor,
              "sqrt(mu) E*[int p^2] at mu = 400 within 1.5x of its value at mu = 100",
              {{"mu100", v100}, {"mu400", v400}}};

  auto sc = asymptotics::sech_constants();
  double e1 = std::fabs(sc.sech4 - 4.0 / 3.0);
  double e2 = std::max({std::fabs(sc.sech5_tanh2 - M_PI / 16.0), std::fabs(sc.sech8 - 32.0 / 35.0),
                        std::fabs(sc.sech2_tanh2 - 2.0 / 3.0)});
  double lhs = 12.0 * sc.sech5_tanh2 * sc.sech5_tanh2, rhs = sc.sech2_tanh2 * sc.sech8;
  Check sech{"sech_constants", e1 <= sech_tol && e2 <= sech_tol && lhs < rhs,
             "quadrature: int sech^4 = 4/3 and 12 (int sech^5 tanh^2)^2 < int sech^2 tanh^2 * int sech^8",
             {{"sech4", sc.sech4}, {"sech4_err", e1}, {"max_const_err", e2}, {"lhs", lhs}, {"rhs", rhs}}};

  json checks = json::array();
  for (const Check* c : {&disc, &cont, &cmc, &decay, &sech})
    checks.push_back({{"name", c->name}, {"pass", c->pass}, {"criterion", c->detail}, {"values", c->values}});
  out["checks"] = checks;
  io::write_atomic(opt.out_dir / "identities.json", io::dump(out));
  res.files.push_back("identities.json");
  for (Check* c : {&disc, &cont, &cmc, &decay, &sech}) res.checks.push_back(std::move(*c));
}

} // namespace

Result run(const Options& opt) {
  Result res;
  const Sizes sz = sizes(opt.quick);
  const std::pair<const char*, std::function<void()>> parts[] = {
      {"tails", [&] { tails_section(opt, sz, res); }},
      {"left_tail", [&] { left_tail_section(opt, sz, res); }},
      {"identities", [&] { identities_section(opt, sz, res); }},
  };
  for (const auto& [name, fn] : parts) {
    try {
      fn();
    } catch (const std::exception& e) {
      res.errors.push_back(std::string(name) + ": " + e.what());
    }
  }

  json m;
  m["config"] = json::object();
  for (const auto& [k, v] : opt.config) m["config"][k] = v;
  m["seed"] = opt.seed;
  m["quick"] = opt.quick;
  m["sub_seeds"] = {{"direct", opt.seed + s_direct}, {"path", opt.seed + s_path}, {"left_tail", opt.seed + s_left},
                    {"rice_max", opt.seed + s_rice_max}, {"rice_zeros", opt.seed + s_rice_zeros},
                    {"rice_density_weight", opt.seed + s_rice_weight}, {"cameron_martin", opt.seed + s_cm}};
  m["samples"] = {{"direct", sz.direct}, {"path", sz.path}, {"left_tail", sz.left}, {"rice", sz.rice}, {"cameron_martin", sz.cm}, {"grid_n", sz.n}};
  m["tolerances"] = {{"z_max", z_max}, {"discrete_rice_abs", rice_exact_tol}, {"left_tail_slope_rel", left_slope_tol},
                     {"pstar_decay_factor", decay_factor}, {"ratio_window", {ratio_lo, ratio_hi}},
                     {"discriminant_window", {d2mu_lo, d2mu_hi}}, {"sech_abs", sech_tol}, {"density_bin_width", bin_width}};
  json checks = json::array();
  for (const auto& c : res.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"criterion", c.detail}});
  m["checks"] = checks;
  m["errors"] = res.errors;
  m["files"] = res.files;
  m["all_pass"] = res.all_pass();
  io::write_atomic(opt.out_dir / "manifest.json", io::dump(m));
  res.files.push_back("manifest.json");
  return res;
}

} // namespace hilltails::report
