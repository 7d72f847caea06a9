/*
 * Copyright 2026 The gwcd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gwcd/gwcd.hpp"

using nlohmann::json;

namespace gwcd::cli {

/// Bad flag values or combinations; reported as usage, exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------
// Input handling

struct CommonOpts {
  std::string ksd_path;
  std::string model_text;
  std::string state = "homo";
  std::string omega = "midgap";
  std::string scheme = "dense";
  Index rank = 0;
  Index quad = 64;
  std::string shift = "auto";
  std::string units = "ev";
  std::string out;
  long seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  bool reuse_basis = false;
};

ModelSpec parse_model_spec(const std::string& text) {
  ModelSpec spec;
  if (text == "default") return spec;
  json j;
  if (!text.empty() && text.front() == '{') {
    j = json::parse(text);
  } else {
    std::ifstream in(text);
    if (!in) throw IoError("cannot open model spec file " + text);
    in >> j;
  }
  spec.n_grid = j.value("n_grid", spec.n_grid);
  spec.box_length = j.value("box_length", spec.box_length);
  spec.soft_core = j.value("soft_core", spec.soft_core);
  spec.n_v = j.value("n_v", spec.n_v);
  if (j.contains("well_depths"))
    spec.well_depths = j["well_depths"].get<std::vector<double>>();
  if (j.contains("well_centers"))
    spec.well_centers = j["well_centers"].get<std::vector<double>>();
  if (j.contains("well_widths"))
    spec.well_widths = j["well_widths"].get<std::vector<double>>();
  return spec;
}

KsSystem load_input(const CommonOpts& opts) {
  const bool has_ksd = !opts.ksd_path.empty();
  const bool has_model = !opts.model_text.empty();
  if (has_ksd == has_model)
    throw UsageError("exactly one of --ksd and --model must be given");
  if (has_ksd) return load_ksd(opts.ksd_path);
  return build_model_1d(parse_model_spec(opts.model_text));
}

double parse_number(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": cannot parse '" + text + "'");
  }
}

Index resolve_state(const KsSystem& sys, const std::string& text) {
  if (text == "homo") return sys.n_v;
  if (text == "lumo") return sys.n_v + 1;
  return static_cast<Index>(parse_number(text, "--state"));
}

double resolve_omega(const KsSystem& sys, const std::string& text) {
  if (text == "midgap") return 0.5 * (sys.homo() + sys.lumo());
  return parse_number(text, "--omega");
}

Scheme resolve_scheme(const std::string& text) {
  if (text == "dense") return Scheme::Dense;
  if (text == "svd-wp") return Scheme::SvdWp;
  if (text == "svd-vchi") return Scheme::SvdVchi;
  if (text == "smw-vchi0") return Scheme::SmwVchi0;
  if (text == "fourier") return Scheme::FourierTrunc;
  throw UsageError("unknown scheme '" + text + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "list"));
  if (out.empty()) throw UsageError("empty numeric list");
  return out;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  for (double v : parse_double_list(text)) out.push_back(Index(v));
  return out;
}

/// The experiment definition echoed into every output header. The
/// worker count is an execution resource and deliberately not part of
/// it: outputs do not depend on --threads.
json run_config(const std::string& subcommand, const CommonOpts& opts,
                std::initializer_list<std::pair<std::string, json>> extra) {
  json j = {{"subcommand", subcommand},
            {"units", opts.units},
            {"seed", opts.seed},
            {"reuse_basis", opts.reuse_basis},
            {"out", opts.out}};
  if (!opts.ksd_path.empty())
    j["input"] = {{"kind", "ksd"}, {"path", opts.ksd_path}};
  else if (!opts.model_text.empty())
    j["input"] = {{"kind", "model"}, {"spec", opts.model_text}};
  for (const auto& [key, value] : extra) j[key] = value;
  return j;
}

double to_output_units(double value_ha, const std::string& units) {
  return units == "ha" ? value_ha : value_ha * kHartreeToEv;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_file_atomic(out, content);
}

void emit_json(const std::string& out, const json& config,
               const json& result) {
  json doc = {{"config", config}, {"result", result}};
  emit(out, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------
// Subcommand bodies

int cmd_gen_model(const CommonOpts& opts, bool with_zero_vxc) {
  if (opts.model_text.empty()) throw UsageError("gen-model requires --model");
  if (opts.out.empty()) throw UsageError("gen-model requires --out DIR");
  KsSystem sys = build_model_1d(parse_model_spec(opts.model_text));
  if (with_zero_vxc) sys.vxc_element = Vec::Zero(sys.n);
  save_ksd(sys, opts.out);
  std::cout << "wrote KSD bundle to " << opts.out << " (n_grid=" << sys.n_grid
            << ", n_v=" << sys.n_v << ", gap=" << sys.gap() << " Ha)\n";
  return 0;
}

int cmd_info(const CommonOpts& opts) {
  const KsSystem sys = load_input(opts);
  const double dw = delta_w(sys);
  json result = {
      {"n_grid", sys.n_grid},
      {"n", sys.n},
      {"n_v", sys.n_v},
      {"homo_ha", sys.homo()},
      {"lumo_ha", sys.lumo()},
      {"gap_ha", sys.gap()},
      {"gap_ev", sys.gap() * kHartreeToEv},
      {"delta_w_ha", dw},
      {"delta_w_ev", dw * kHartreeToEv},
      {"has_vxc", sys.vxc_element.has_value()},
  };
  if (!opts.out.empty()) {
    emit_json(opts.out, run_config("info", opts, {}), result);
  } else {
    std::cout << result.dump(2) << "\n";
  }
  return 0;
}

int cmd_poles(const CommonOpts& opts, double eta_g0, double eta_wp) {
  const KsSystem sys = load_input(opts);
  const double omega = resolve_omega(sys, opts.omega);
  const CasidaSpectrum spec = casida_full(sys);
  CsvDocument doc(run_config("poles", opts,
                             {{"omega_ha", omega},
                              {"eta_g0_ha", eta_g0},
                              {"eta_wp_ha", eta_wp}}),
                  {"re", "im", "kind"});
  for (Index j = 1; j <= sys.n; ++j) {
    const bool occ = j <= sys.n_v;
    doc.add_row({csv_number(sys.eps(j) - omega),
                 csv_number(occ ? eta_g0 : -eta_g0),
                 occ ? "g0_occ" : "g0_unocc"});
  }
  for (Index s = 0; s < spec.omegas.size(); ++s) {
    doc.add_row({csv_number(spec.omegas(s)), csv_number(-eta_wp), "wp_pos"});
    doc.add_row({csv_number(-spec.omegas(s)), csv_number(eta_wp), "wp_neg"});
  }
  emit(opts.out, doc.str());
  return 0;
}

std::unique_ptr<WpProvider> make_provider(const KsSystem& sys,
                                          const CommonOpts& opts) {
  const Scheme scheme = resolve_scheme(opts.scheme);
  if (scheme == Scheme::Dense) return std::make_unique<DenseWpProvider>(sys);
  if (opts.rank < 1)
    throw UsageError("low-rank schemes require --rank");
  return std::make_unique<LowRankWpProvider>(sys, scheme, opts.rank,
                                             opts.reuse_basis);
}

int cmd_integrand(const CommonOpts& opts) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);
  const double omega = resolve_omega(sys, opts.omega);
  const CasidaSpectrum spec = casida_full(sys);
  double shift = 0.0;
  if (opts.shift == "auto") {
    const auto rf = residue_free(sys, omega, spec.omegas(0));
    shift = rf.is_residue_free ? *rf.suggested_shift : 0.0;
  } else {
    shift = parse_number(opts.shift, "--shift");
  }
  const auto provider = make_provider(sys, opts);
  const QuadratureRule rule = lgr_rule(opts.quad);

  CsvDocument doc(run_config("integrand", opts,
                             {{"state", state},
                              {"omega_ha", omega},
                              {"shift_ha", shift},
                              {"scheme", opts.scheme},
                              {"rank", opts.rank},
                              {"quad", opts.quad}}),
                  {"xi", "zeta", "re", "im"});
  for (Index q = 0; q < rule.m; ++q) {
    const double xi = rule.nodes(q);
    const double zeta = half_line_zeta(xi);
    const Complex f =
        integrand_sample(sys, state, omega, Complex(shift, zeta), *provider);
    doc.add_row({csv_number(xi), csv_number(zeta), csv_number(f.real()),
                 csv_number(f.imag())});
  }
  emit(opts.out, doc.str());
  return 0;
}

int cmd_sweep_quadrature(const CommonOpts& opts, const std::string& shifts,
                         const std::string& quads) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);
  const double omega = resolve_omega(sys, opts.omega);
  const CasidaSpectrum spec = casida_full(sys);
  const auto provider = make_provider(sys, opts);
  const auto rows = quadrature_error_sweep(
      sys, state, omega, parse_double_list(shifts), parse_index_list(quads),
      *provider, &spec, opts.threads);

  CsvDocument doc(run_config("sweep-quadrature", opts,
                             {{"state", state},
                              {"omega_ha", omega},
                              {"shifts", shifts},
                              {"quads", quads},
                              {"scheme", opts.scheme},
                              {"rank", opts.rank}}),
                  {"shift", "m", "value_ha", "value_ev", "abs_error"});
  for (const auto& row : rows)
    doc.add_row({csv_number(row.shift), std::to_string(row.m),
                 csv_number(row.value),
                 csv_number(row.value * kHartreeToEv),
                 csv_number(to_output_units(row.abs_error, opts.units))});
  emit(opts.out, doc.str());
  return 0;
}

int cmd_sweep_contour(const CommonOpts& opts, const std::string& shifts) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);
  const double omega = resolve_omega(sys, opts.omega);
  const CasidaSpectrum spec = casida_full(sys);
  const auto provider = make_provider(sys, opts);

  CsvDocument doc(run_config("sweep-contour", opts,
                             {{"state", state},
                              {"omega_ha", omega},
                              {"shifts", shifts},
                              {"quad", opts.quad},
                              {"scheme", opts.scheme},
                              {"rank", opts.rank}}),
                  {"shift", "m", "value_ha", "value_ev", "abs_error"});
  bool have_reference = false;
  double reference = 0.0;
  for (double shift : parse_double_list(shifts)) {
    const auto path =
        make_integration_path(sys, omega, shift, opts.quad, &spec);
    const double value =
        sigma_c_contour(sys, state, omega, path, *provider, opts.threads);
    if (!have_reference) {
      reference = value;
      have_reference = true;
    }
    doc.add_row({csv_number(shift), std::to_string(opts.quad),
                 csv_number(value), csv_number(value * kHartreeToEv),
                 csv_number(to_output_units(std::abs(value - reference),
                                            opts.units))});
  }
  emit(opts.out, doc.str());
  return 0;
}

int cmd_sweep_rank(const CommonOpts& opts, const std::string& schemes,
                   const std::string& ranks) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);
  const double omega = resolve_omega(sys, opts.omega);

  std::vector<std::string> scheme_names;
  if (schemes == "all") {
    scheme_names = {"svd-wp", "svd-vchi", "smw-vchi0", "fourier"};
  } else {
    std::stringstream ss(schemes);
    std::string item;
    while (std::getline(ss, item, ',')) scheme_names.push_back(item);
  }

  SigmaConfig dense_cfg;
  dense_cfg.quad_points = opts.quad;
  dense_cfg.threads = opts.threads;
  const double dense =
      sigma_c_element(sys, state, omega, dense_cfg).sigma_c;

  CsvDocument doc(run_config("sweep-rank", opts,
                             {{"state", state},
                              {"omega_ha", omega},
                              {"schemes", schemes},
                              {"ranks", ranks},
                              {"quad", opts.quad},
                              {"dense_sigma_c_ha", dense}}),
                  {"scheme", "k", "sigma_c_ha", "abs_error_ha", "e1", "e2",
                   "e3"});
  for (const auto& name : scheme_names) {
    for (Index k : parse_index_list(ranks)) {
      SigmaConfig cfg;
      cfg.scheme = resolve_scheme(name);
      cfg.rank = k;
      cfg.quad_points = opts.quad;
      cfg.threads = opts.threads;
      const SigmaReport rep = sigma_c_element(sys, state, omega, cfg);
      doc.add_row({name, std::to_string(k), csv_number(rep.sigma_c),
                   csv_number(std::abs(rep.sigma_c - dense)),
                   csv_number(rep.bounds ? rep.bounds->e1 : 0.0),
                   csv_number(rep.bounds ? rep.bounds->e2 : 0.0),
                   csv_number(rep.bounds ? rep.bounds->e3 : 0.0)});
    }
  }
  emit(opts.out, doc.str());
  return 0;
}

int cmd_singvals(const CommonOpts& opts) {
  const KsSystem sys = load_input(opts);
  const double omega = resolve_omega(sys, opts.omega);
  const SingularValueProfile prof =
      singular_value_profile(sys, Complex(omega, 0.0));
  CsvDocument doc(
      run_config("singvals", opts, {{"omega_ha", omega}}),
      {"index", "sv_wp", "sv_vchi0", "sv_vchi"});
  for (Index i = 0; i < prof.wp.size(); ++i)
    doc.add_row({std::to_string(i + 1), csv_number(prof.wp(i)),
                 csv_number(prof.vchi0(i)), csv_number(prof.vchi(i))});
  emit(opts.out, doc.str());
  return 0;
}

bool wants_json(const std::string& out) {
  return out.size() >= 5 && out.substr(out.size() - 5) == ".json";
}

int cmd_sigma(const CommonOpts& opts, bool with_oracle) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);
  const double omega = resolve_omega(sys, opts.omega);

  SigmaConfig cfg;
  cfg.scheme = resolve_scheme(opts.scheme);
  if (cfg.scheme != Scheme::Dense && opts.rank < 1)
    throw UsageError("low-rank schemes require --rank");
  cfg.rank = opts.rank;
  cfg.quad_points = opts.quad;
  cfg.threads = opts.threads;
  cfg.reuse_static_basis = opts.reuse_basis;
  cfg.compute_oracle = with_oracle;
  if (opts.shift != "auto") {
    cfg.shift_policy = ShiftPolicy::Fixed;
    cfg.shift = parse_number(opts.shift, "--shift");
  }
  const SigmaReport rep = sigma_c_element(sys, state, omega, cfg);

  const json config = run_config("sigma", opts,
                                 {{"state", state},
                                  {"omega_ha", omega},
                                  {"scheme", opts.scheme},
                                  {"rank", opts.rank},
                                  {"quad", opts.quad},
                                  {"shift", opts.shift},
                                  {"with_oracle", with_oracle}});
  if (opts.out.empty() || wants_json(opts.out)) {
    emit_json(opts.out, config, sigma_report_json(rep));
    if (opts.out.empty()) return 0;
  } else {
    CsvDocument doc(config,
                    {"state", "omega_ha", "sigma_x_ha", "sigma_c_ha",
                     "sigma_x_ev", "sigma_c_ev", "scheme", "rank", "quad",
                     "shift_ha", "residue_count", "e1_ha", "e2_ha", "e3_ha",
                     "oracle_value_ha", "oracle_abs_gap_ha"});
    doc.add_row({std::to_string(rep.state), csv_number(rep.omega),
                 csv_number(rep.sigma_x), csv_number(rep.sigma_c),
                 csv_number(rep.sigma_x * kHartreeToEv),
                 csv_number(rep.sigma_c * kHartreeToEv),
                 scheme_name(rep.scheme), std::to_string(rep.rank),
                 std::to_string(rep.quad_points), csv_number(rep.shift),
                 std::to_string(rep.residue_count),
                 rep.bounds ? csv_number(rep.bounds->e1) : "",
                 rep.bounds ? csv_number(rep.bounds->e2) : "",
                 rep.bounds ? csv_number(rep.bounds->e3) : "",
                 rep.oracle_value ? csv_number(*rep.oracle_value) : "",
                 rep.oracle_gap() ? csv_number(*rep.oracle_gap()) : ""});
    emit(opts.out, doc.str());
  }
  std::cerr << "sigma_c(" << state << ", " << omega
            << " Ha) = " << to_output_units(rep.sigma_c, opts.units) << " "
            << (opts.units == "ha" ? "Ha" : "eV") << "\n";
  return 0;
}

int cmd_qp(const CommonOpts& opts, int max_iter, double tol) {
  const KsSystem sys = load_input(opts);
  const Index state = resolve_state(sys, opts.state);

  SigmaConfig cfg;
  cfg.scheme = resolve_scheme(opts.scheme);
  if (cfg.scheme != Scheme::Dense && opts.rank < 1)
    throw UsageError("low-rank schemes require --rank");
  cfg.rank = opts.rank;
  cfg.quad_points = opts.quad;
  cfg.threads = opts.threads;
  cfg.reuse_static_basis = opts.reuse_basis;
  const QpResult res = solve_qp(sys, state, cfg, tol, max_iter);

  json result = {
      {"state", state},
      {"eps_ks_ha", sys.eps(state)},
      {"e_qp_ha", res.energy},
      {"e_qp_ev", res.energy * kHartreeToEv},
      {"correction_ha", res.energy - sys.eps(state)},
      {"converged", res.converged},
      {"iterations", res.iterations},
  };
  emit_json(opts.out, run_config("qp", opts,
                                 {{"state", state},
                                  {"scheme", opts.scheme},
                                  {"rank", opts.rank},
                                  {"quad", opts.quad},
                                  {"max_iter", max_iter},
                                  {"tol", tol}}),
            result);
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](const char* what, bool ok) {
    std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", what);
    if (!ok) ++failures;
  };

  const KsSystem s2 = two_state_fixture();
  validate_ks_system(s2);
  check("two-state fixture invariants", true);

  CMat chi0_expect(2, 2);
  chi0_expect << -1.0, 1.0, 1.0, -1.0;
  check("chi0 fixture value",
        (chi0_dense(s2, {0.0, 0.0}) - chi0_expect).norm() <= 1e-13);

  CMat wp_expect(2, 2);
  wp_expect << -0.125, 0.125, 0.125, -0.125;
  check("screened interaction fixture value",
        (wp_dense(s2, {0.0, 0.0}) - wp_expect).norm() <= 1e-13);

  const CasidaSpectrum spec = casida_full(s2);
  check("pole expansion reconstructs the dense interaction",
        (wp_from_poles(spec, {0.4, 1.1}) - wp_dense(s2, {0.4, 1.1})).norm() <=
            1e-10);

  SigmaConfig cfg;
  cfg.quad_points = 64;
  const double contour = sigma_c_element(s2, 1, 0.0, cfg).sigma_c;
  const double oracle = sigma_c_exact_sos(s2, 1, 0.0, spec);
  check("contour matches the analytic sum over states",
        std::abs(contour - oracle) <= 1e-10);

  const KsSystem model = build_model_1d(ModelSpec{});
  const auto mspec = casida_full(model);
  const double mid = 0.5 * (model.homo() + model.lumo());
  const double c1 = sigma_c_element(model, model.n_v, mid, cfg).sigma_c;
  const double o1 = sigma_c_exact_sos(model, model.n_v, mid, mspec);
  check("model contour matches the analytic sum over states",
        std::abs(c1 - o1) <= 1e-8);

  std::printf(failures == 0 ? "selftest: all checks passed\n"
                            : "selftest: %d check(s) FAILED\n",
              failures);
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_numerics = true) {
  cmd->add_option("--ksd", opts.ksd_path, "KSD bundle directory");
  cmd->add_option("--model", opts.model_text,
                  "model spec: 'default', inline JSON, or a JSON file");
  cmd->add_option("--units", opts.units, "output units: ev|ha")
      ->check(CLI::IsMember({"ev", "ha"}));
  cmd->add_option("--out", opts.out, "output file (stdout when omitted)");
  cmd->add_option("--seed", opts.seed, "seed echoed into the run config");
  cmd->add_option("--threads", opts.threads,
                  "worker threads (results do not depend on this)");
  if (with_numerics) {
    cmd->add_option("--state", opts.state, "state index (1-based), homo, or lumo");
    cmd->add_option("--omega", opts.omega, "frequency in Ha, or midgap");
    cmd->add_option("--scheme", opts.scheme,
                    "dense|svd-wp|svd-vchi|smw-vchi0|fourier");
    cmd->add_option("--rank", opts.rank, "rank for low-rank schemes");
    cmd->add_option("--quad", opts.quad, "quadrature node count");
    cmd->add_option("--shift", opts.shift, "contour shift in Ha, or auto");
    cmd->add_flag("--reuse-basis", opts.reuse_basis,
                  "fix the low-rank subspaces at omega = 0 and recompute "
                  "only the middle factor per frequency");
  }
}

int run(int argc, char** argv) {
  CLI::App app{
      "gwcd: quasiparticle self-energy corrections via contour-deformed "
      "frequency integration with low-rank screened interactions"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* gen = app.add_subcommand("gen-model", "write a model KSD bundle");
  bool with_zero_vxc = false;
  add_common(gen, opts, false);
  gen->add_flag("--with-zero-vxc", with_zero_vxc,
                "include a zero Vxc blob (enables qp runs)");

  auto* info = app.add_subcommand("info", "system summary");
  add_common(info, opts, false);

  auto* poles = app.add_subcommand("poles", "pole map CSV");
  double eta_g0 = 0.01 / kHartreeToEv, eta_wp = 0.02 / kHartreeToEv;
  add_common(poles, opts);
  poles->add_option("--eta-g0", eta_g0, "plot offset for G0 poles (Ha)");
  poles->add_option("--eta-wp", eta_wp, "plot offset for W_p poles (Ha)");

  auto* integ = app.add_subcommand("integrand", "integrand trace CSV");
  add_common(integ, opts);

  auto* sweepq =
      app.add_subcommand("sweep-quadrature", "node-count convergence CSV");
  std::string shifts = "0", quads = "8,16,32,64";
  add_common(sweepq, opts);
  sweepq->add_option("--shifts", shifts, "comma list of shifts (Ha)");
  sweepq->add_option("--quads", quads, "comma list of node counts");

  auto* sweepc =
      app.add_subcommand("sweep-contour", "shift independence CSV");
  std::string cshifts = "0";
  add_common(sweepc, opts);
  sweepc->add_option("--shifts", cshifts, "comma list of shifts (Ha)");

  auto* sweepr = app.add_subcommand("sweep-rank", "rank fidelity CSV");
  std::string schemes = "all", ranks = "4,8,16,32";
  add_common(sweepr, opts);
  sweepr->add_option("--schemes", schemes, "all or comma list of schemes");
  sweepr->add_option("--ranks", ranks, "comma list of ranks");

  auto* sing = app.add_subcommand("singvals", "singular value profiles CSV");
  add_common(sing, opts);

  auto* sigma = app.add_subcommand("sigma", "self-energy matrix element");
  bool with_oracle = false;
  add_common(sigma, opts);
  sigma->add_flag("--with-oracle", with_oracle,
                  "also evaluate the sum-over-states oracle");

  auto* qp = app.add_subcommand("qp", "quasiparticle energy");
  int max_iter = 50;
  double tol = 1e-6;
  add_common(qp, opts);
  qp->add_option("--max-iter", max_iter, "secant iteration cap");
  qp->add_option("--tol", tol, "convergence tolerance (Ha)");

  auto* self = app.add_subcommand("selftest", "built-in verification");
  (void)self;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_model(opts, with_zero_vxc);
    if (info->parsed()) return cmd_info(opts);
    if (poles->parsed()) return cmd_poles(opts, eta_g0, eta_wp);
    if (integ->parsed()) return cmd_integrand(opts);
    if (sweepq->parsed()) return cmd_sweep_quadrature(opts, shifts, quads);
    if (sweepc->parsed()) return cmd_sweep_contour(opts, cshifts);
    if (sweepr->parsed()) return cmd_sweep_rank(opts, schemes, ranks);
    if (sing->parsed()) return cmd_singvals(opts);
    if (sigma->parsed()) return cmd_sigma(opts, with_oracle);
    if (qp->parsed()) return cmd_qp(opts, max_iter, tol);
    if (self->parsed()) return cmd_selftest();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    json err = {{"error",
                 {{"type", "domain"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error",
                 {{"type", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gwcd::cli

int main(int argc, char** argv) { return gwcd::cli::run(argc, argv); }
