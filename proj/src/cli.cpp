#include <gtube/cli.hpp>

#include <gtube/errors.hpp>
#include <gtube/flat_model.hpp>
#include <gtube/parallel.hpp>
#include <gtube/spectral_kernels.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace gtube {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return (fs::path(cfg.out) / name).string();
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

FlatModel model_of(const RunConfig& cfg) { return FlatModel::from_name(cfg.model, cfg.dim); }

std::vector<KernelKind> kernels_of(const RunConfig& cfg) {
  if (cfg.kernel == "both") return {KernelKind::smoothed, KernelKind::toeplitz};
  return {kernel_from_name(cfg.kernel)};
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  write_text(out_path(cfg, name), j.dump(2) + "\n");
}

}  // namespace

std::vector<SuiteFailure> cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const FlatModel model = model_of(cfg);
  std::ostringstream csv;
  for (int j = 0; j < model.m; ++j) csv << "k" << j + 1 << ",";
  csv << "norm,mu,hardy_norm_sq,log_hardy_norm_sq\n";
  const auto modes = enumerate_modes(model, cfg.lambda_max);
  for (const auto& k : modes) {
    for (int v : k.k) csv << v << ",";
    const double r = k.eigenvalue();
    const double lh = log_hardy_norm_sq(model, r, cfg.tau);
    csv << format_real(r) << "," << format_real(toeplitz_eigenvalue(model, r, cfg.tau)) << ","
        << format_real(std::exp(lh)) << "," << format_real(lh) << "\n";
  }
  write_text(out_path(cfg, "spectrum.csv"), csv.str());
  write_json(cfg, "spectrum.json", {{"config", config_json(cfg)}, {"rows", modes.size()}});
  log << "spectrum: " << modes.size() << " modes with |k| <= " << cfg.lambda_max << "\n";
  return {};
}

std::vector<SuiteFailure> cmd_phase_report(const RunConfig& cfg, std::ostream& log) {
  const PhaseReport r = phase_critical_data(cfg.tau);
  json j = to_json(r);
  json gam = json::array();
  for (double lam : cfg.lambda_grid) gam.push_back({{"lambda", lam}, {"gamma", leading_coefficient(lam, cfg.tau).real()}});
  write_json(cfg, "phase_report.json", {{"config", config_json(cfg)}, {"report", j}, {"gamma", gam}});
  std::vector<SuiteFailure> f;
  if (!(r.product_error <= 1e-14)) f.push_back({"phase.inverse", "assertion", "H * H^{-1} != I"});
  if (!(r.hessian_deviation <= 1e-14)) f.push_back({"phase.hessian", "assertion", "Hessian differs from closed form"});
  if (!(std::abs(r.determinant - cfg.tau * cfg.tau / 4) <= 1e-12 * std::max(1.0, cfg.tau * cfg.tau)))
    f.push_back({"phase.determinant", "assertion", "det H != tau^2/4"});
  if (r.signature != 0) f.push_back({"phase.signature", "assertion", "signature != 0"});
  if (!(std::abs(r.gamma_lambda_tau - 8 * kPi * kPi) <= 1e-12 * 8 * kPi * kPi))
    f.push_back({"phase.gamma", "assertion", "gamma lambda tau != 8 pi^2"});
  log << "phase-report: det = " << r.determinant << ", signature = " << r.signature
      << ", gamma*lambda*tau = " << r.gamma_lambda_tau << "\n";
  return f;
}

std::vector<SuiteFailure> cmd_scaling_study(const RunConfig& cfg, std::ostream& log) {
  const FlatModel model = model_of(cfg);
  const HeisenbergChart chart = build_heisenberg_chart(model, default_base_point(model.m, cfg.tau), cfg.tau);
  const ComparisonGrid grid = make_comparison_grid(model.m, cfg.rho, cfg.per_axis);
  StudyOptions opt{cfg.eps, cfg.rel_tail};
  std::vector<SuiteFailure> fails;
  std::vector<ScalingReport> reports;
  for (KernelKind k : kernels_of(cfg)) {
    ScalingReport r = scaling_study(k, chart, grid, cfg.lambda_grid, opt);
    const std::string name = to_string(k);
    write_json(cfg, "scaling_" + name + ".json",
               {{"config", config_json(cfg)}, {"chart", to_json(chart)}, {"report", to_json(r)}});
    std::ostringstream csv;
    csv << "lambda,log_lambda,sup_error,log_sup_error,diagonal_error,window,modes,certified_tail\n";
    for (const auto& d : r.details)
      csv << format_real(d.lambda) << "," << format_real(std::log(d.lambda)) << "," << format_real(d.sup_error)
          << "," << format_real(std::log(d.sup_error)) << "," << format_real(d.tuple_errors[grid.diagonal_tuple])
          << "," << format_real(d.window) << "," << d.modes << "," << format_real(d.tail) << "\n";
    write_text(out_path(cfg, "scaling_" + name + ".csv"), csv.str());
    log << "scaling-study[" << name << "]: slope " << r.fit.slope << " [" << r.fit.ci_low << ", "
        << r.fit.ci_high << "], monotone " << (r.monotone ? "yes" : "no") << "\n";
    if (!r.monotone)
      fails.push_back({"scaling." + name + ".monotone", "assertion", "normalized error not nonincreasing"});
    if (model.m >= 2 && !(r.fit.slope >= -0.7 && r.fit.slope <= -0.35))
      fails.push_back({"scaling." + name + ".exponent", "assertion",
                       "fitted exponent " + format_real(r.fit.slope) + " outside [-0.7, -0.35]"});
    reports.push_back(std::move(r));
  }
  if (reports.size() == 2) {
    const CrossConsistency c = cross_consistency(reports[1], reports[0]);
    write_json(cfg, "cross_consistency.json", {{"config", config_json(cfg)}, {"cross", to_json(c)}});
    log << "scaling-study[cross]: slope " << c.fit.slope << "\n";
    if (model.m >= 2 && !(c.fit.slope <= -0.35))
      fails.push_back({"scaling.cross", "assertion", "cross-consistency slope " + format_real(c.fit.slope) + " > -0.35"});
  }
  return fails;
}

std::vector<SuiteFailure> cmd_chart_check(const RunConfig& cfg, std::ostream& log) {
  const FlatModel model = model_of(cfg);
  const HeisenbergChart chart = build_heisenberg_chart(model, default_base_point(model.m, cfg.tau), cfg.tau);
  const PushforwardCoefficients pc = pushforward_coefficients(chart);
  const RemainderFit rf = chart_remainder_fit(chart, default_remainder_radii(chart));
  RVec ts, defects;
  json flow = json::array();
  for (int n = 0; n < 8; ++n) {
    const double t = 0.1 * cfg.tau * std::pow(2.0, -n);
    const FlowSample s = flow_in_chart(chart, t);
    ts.push_back(t);
    defects.push_back(std::abs(s.theta_defect));
    flow.push_back({{"t", t}, {"theta_defect", s.theta_defect}, {"u_defect", s.u_defect}});
  }
  const LogLogFit ff = loglog_fit(ts, defects);
  json j = {{"config", config_json(cfg)},
            {"chart", to_json(chart)},
            {"pushforward", {{"re_z0", pc.re_z0}, {"im_z0", pc.im_z0}, {"linear_u", pc.linear_u}}},
            {"remainder_fit", to_json(rf)},
            {"flow", flow},
            {"flow_fit", to_json(ff)}};
  write_json(cfg, "chart_check.json", j);
  std::vector<SuiteFailure> f;
  if (!(std::abs(pc.re_z0) < 1e-10) || !(pc.linear_u < 1e-10))
    f.push_back({"chart.linear_terms", "assertion", "pushed-forward defining function has Re z0 / linear u terms"});
  if (!rf.passes()) f.push_back({"chart.remainder", "assertion", "remainder exponents below (2, 3, 2)"});
  if (!(ff.floor_limited || ff.slope >= 1.9)) f.push_back({"chart.flow", "assertion", "theta-defect slope < 2"});
  log << "chart-check: Re z0 coeff " << pc.re_z0 << ", linear u " << pc.linear_u << ", remainder "
      << (rf.passes() ? "ok" : "FAIL") << "\n";
  return f;
}

std::vector<SuiteFailure> cmd_kernel_eval(const RunConfig& cfg, std::ostream& log) {
  const FlatModel model = model_of(cfg);
  const HeisenbergChart chart = build_heisenberg_chart(model, default_base_point(model.m, cfg.tau), cfg.tau);
  const ComparisonGrid grid = make_comparison_grid(model.m, cfg.rho, cfg.per_axis);
  auto chi = make_chi(cfg.eps);
  const int m = model.m;
  std::ostringstream csv;
  csv << "kernel,lambda,tau,theta";
  for (int j = 1; j < m; ++j) csv << ",u" << j << "_re,u" << j << "_im";
  csv << ",phi";
  for (int j = 1; j < m; ++j) csv << ",v" << j << "_re,v" << j << "_im";
  for (const char* p : {"a", "b"}) {
    for (int j = 1; j <= m; ++j) csv << "," << p << "_x" << j;
    for (int j = 1; j <= m; ++j) csv << "," << p << "_y" << j;
  }
  csv << ",re,im,certified_tail\n";
  std::size_t rows = 0;
  for (KernelKind kind : kernels_of(cfg))
    for (double lam : cfg.lambda_grid) {
      std::vector<TubePoint> pts;
      for (const auto& p : grid.points) pts.push_back(rescaled_point(chart, p.first, p.second, lam).z());
      // window certified relative to a lower bound of the diagonal at the base
      KernelSumConfig probe{lam, cfg.tau, 20.0, std::numeric_limits<double>::infinity()};
      const TubePoint zb = chart.base.z();
      const double d0 = SpectralSum(kind, model, chi, probe).eval(zb, zb).real();
      const double tol = cfg.rel_tail * d0;
      const double W = choose_window(kind, model, *chi, lam, cfg.tau, tol);
      SpectralSum sum(kind, model, chi, {lam, cfg.tau, W, tol});
      const auto vals = sum.eval_batch(pts, grid.pair_index);
      for (std::size_t q = 0; q < grid.tuples.size(); ++q) {
        const auto& t = grid.tuples[q];
        csv << to_string(kind) << "," << format_real(lam) << "," << format_real(cfg.tau) << "," << format_real(t.theta);
        for (auto u : t.u) csv << "," << format_real(u.real()) << "," << format_real(u.imag());
        csv << "," << format_real(t.phi);
        for (auto v : t.v) csv << "," << format_real(v.real()) << "," << format_real(v.imag());
        for (std::size_t idx : {grid.pair_index[q].first, grid.pair_index[q].second}) {
          for (int j = 0; j < m; ++j) csv << "," << format_real(pts[idx][j].real());
          for (int j = 0; j < m; ++j) csv << "," << format_real(pts[idx][j].imag());
        }
        csv << "," << format_real(vals[q].real()) << "," << format_real(vals[q].imag()) << ","
            << format_real(sum.tail_bound()) << "\n";
        ++rows;
      }
    }
  write_text(out_path(cfg, "kernel_eval.csv"), csv.str());
  write_json(cfg, "kernel_eval.json", {{"config", config_json(cfg)}, {"rows", rows}});
  log << "kernel-eval: " << rows << " rows\n";
  return {};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Grauert tube kernels and Heisenberg scaling checks on flat models"};
  app.require_subcommand(1);
  std::string config_file;
  std::map<std::string, std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "key = value configuration file");
    static const std::pair<const char*, const char*> flags[] = {
        {"model", "circle or torus (default torus)"},
        {"dim", "dimension m (default 2)"},
        {"tau", "tube radius (default 0.5)"},
        {"eps", "Fourier support of the smoothing function (default 3)"},
        {"lambda-grid", "comma-separated lambda values"},
        {"rho", "radius of the comparison grid (default 0.8)"},
        {"kernel", "smoothed, toeplitz or both (default both)"},
        {"out", "output directory (default .)"},
        {"threads", "worker threads; 0 uses THREADS or the hardware count"},
        {"seed", "random seed (default 12345)"},
        {"per-axis", "grid points per axis (default 5)"},
        {"lambda-max", "spectrum cutoff (default 20)"},
        {"rel-tail", "tail tolerance relative to the diagonal (default 1e-8)"}};
    for (const auto& [flag, help] : flags) {
      std::string key = flag;
      for (auto& ch : key)
        if (ch == '-') ch = '_';
      sub->add_option_function<std::string>(std::string("--") + flag,
                                            [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
    }
  };
  struct Cmd {
    const char* name;
    const char* help;
    std::vector<SuiteFailure> (*fn)(const RunConfig&, std::ostream&);
  };
  const Cmd cmds[] = {{"spectrum", "Lattice modes, Toeplitz eigenvalues and Hardy norms", cmd_spectrum},
                      {"phase-report", "Critical data of the rescaled phase", cmd_phase_report},
                      {"scaling-study", "Normalized kernel errors against the model factor", cmd_scaling_study},
                      {"chart-check", "Heisenberg chart contract and flow expansion", cmd_chart_check},
                      {"kernel-eval", "Kernel values on the rescaled comparison grid", cmd_kernel_eval}};
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_common(subs.back());
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  RunConfig cfg;
  std::string command;
  std::vector<SuiteFailure> fails;
  int code = 0;
  try {
    if (!config_file.empty()) cfg = RunConfig::from_file(config_file);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    cfg.validate();
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) {
        command = cmds[i].name;
        fails = cmds[i].fn(cfg, std::cout);
      }
    code = fails.empty() ? 0 : 1;
  } catch (const Error& e) {
    fails.push_back({command.empty() ? "config" : command, e.kind(), e.what()});
    code = 2;
  } catch (const std::exception& e) {
    fails.push_back({command.empty() ? "config" : command, "runtime", e.what()});
    code = 2;
  }
  if (!fails.empty()) {
    json list = json::array();
    for (const auto& f : fails) list.push_back({{"suite", f.suite}, {"kind", f.kind}, {"message", f.message}});
    const json manifest = {{"command", command}, {"exit_code", code}, {"failures", list}};
    try {
      write_text(out_path(cfg, "failures.json"), manifest.dump(2) + "\n");
    } catch (...) {
    }
    std::cerr << manifest.dump(2) << "\n";
  }
  return code;
}

}  // namespace gtube
