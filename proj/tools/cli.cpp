#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "shrinkerlab/config.hpp"
#include "shrinkerlab/errors.hpp"
#include "shrinkerlab/parallel.hpp"
#include "shrinkerlab/report.hpp"

namespace shrinkerlab::cli {

namespace {

struct CylinderOpts {
  int round_k = 0;        // 0 = unset
  std::string curve_file;
  int p = 0, q = 0;
  int nodes = 256;
  double tol = 1e-9;
  double step = 2e-4;
  double Y = 12.0;
  int axial = 257;
  int dim = 3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--round-k", round_k, "round profile dimension (k = 1 builds the circle)");
    cmd->add_option("--curve", curve_file, "profile curve file");
    cmd->add_option("--p", p, "AL rotation index");
    cmd->add_option("--q", q, "AL oscillation count");
    cmd->add_option("--nodes", nodes, "profile nodes");
    cmd->add_option("--tol", tol, "profile residual tolerance");
    cmd->add_option("--step", step, "shooting integrator step");
    cmd->add_option("--Y", Y, "axial half-width");
    cmd->add_option("--axial", axial, "axial node count (odd)");
    cmd->add_option("--dim", dim, "ambient dimension (3 or 4)");
  }

  ProfileCurve profile() const {
    if (!curve_file.empty()) return read_curve(curve_file);
    if (p > 0 && q > 0) {
      ProfileSpec spec;
      spec.kind = ProfileSpec::Kind::AbreschLanger;
      spec.p = p;
      spec.q = q;
      spec.nodes = nodes;
      spec.tolerance = tol;
      spec.step = step;
      return solve_abresch_langer(spec);
    }
    return round_profile_curve(nodes);
  }

  CylinderGrid grid() const { return build_grid(profile(), Y, axial, dim); }
};

NormalField named_field(const CylinderGrid& g, const KernelBasis& basis,
                        const std::string& name, double eps,
                        std::uint64_t seed, double support) {
  if (name == "k1") {
    NormalField f = family_shape(g, basis, FamilyKind::PureK1, seed, support);
    return eps * f;
  }
  if (name == "k0") {
    NormalField f = family_shape(g, basis, FamilyKind::PureK0, seed, support);
    return eps * f;
  }
  if (name == "h0") {
    NormalField f = family_shape(g, basis, FamilyKind::PureH, seed, support);
    return eps * f;
  }
  if (name == "mixed") {
    NormalField f = family_shape(g, basis, FamilyKind::Mixed, seed, support);
    return eps * f;
  }
  if (name == "radial") {
    NormalField f = zero_field(g, g.ambient_dim == 4);
    f.u.setConstant(eps);
    return f;
  }
  if (name == "random") {
    NormalField f = random_smooth_field(g, seed, support, g.ambient_dim == 4);
    return eps * f;
  }
  throw BadField("unknown field name: " + name +
                 " (expected k0|k1|h0|mixed|radial|random)");
}

int cmd_profile_solve(const CylinderOpts& opt, const std::string& out) {
  ProfileSpec spec;
  spec.kind = ProfileSpec::Kind::AbreschLanger;
  spec.p = opt.p;
  spec.q = opt.q;
  spec.nodes = opt.nodes;
  spec.tolerance = opt.tol;
  spec.step = opt.step;
  const ProfileCurve c = solve_abresch_langer(spec);
  if (!out.empty()) write_curve(out, c);
  std::printf("solved AL(%d,%d): nodes %d, length %.12g\n", opt.p, opt.q,
              c.nodes(), c.length);
  std::printf("residual %.3e  closure %.3e  conserved spread %.3e\n",
              shrinker_residual(c), c.closure_defect, c.conserved_spread);
  std::printf("kappa range [%.12g, %.12g]  B2 %.12g\n", c.kappa.minCoeff(),
              c.kappa.maxCoeff(), compute_B2(c));
  return 0;
}

int cmd_profile_check(const std::string& in, double tol) {
  const ProfileCurve c = read_curve(in);
  const double resid = shrinker_residual(c);
  const double jac = jacobi_identity_residual(c);
  Eigen::ArrayXd cons =
      c.kappa * ((-(c.x.col(0).square() + c.x.col(1).square()) / 4.0).exp());
  const double spread = (cons.maxCoeff() - cons.minCoeff()) / cons.mean();
  std::printf("nodes %d length %.12g rotation %d symmetry %d\n", c.nodes(),
              c.length, c.rotation_index, c.symmetry);
  std::printf("shrinker residual   %.3e  (tolerance %.1e)\n", resid, tol);
  std::printf("first-integral drift %.3e\n", spread);
  std::printf("jacobi identity      %.3e\n", jac);
  std::printf("B2                   %.12g\n", compute_B2(c));
  return resid <= tol ? 0 : 1;
}

int cmd_grid_build(const CylinderOpts& opt, const std::string& out) {
  const CylinderGrid g = opt.grid();
  if (!out.empty()) write_grid_snapshot(out, g);
  std::printf("grid %dx%d, Y = %g, ambient dim %d\n", g.M(), g.J(), g.Y,
              g.ambient_dim);
  std::printf("F(base) = %.12g   tail bound %.3e\n", gaussian_area(g),
              g.tail_bound);
  return 0;
}

int cmd_geometry_eval(const CylinderOpts& opt, const std::string& field,
                      double eps, std::uint64_t seed, double support,
                      double eps2, const std::string& out_csv,
                      const std::string& out_json) {
  const CylinderGrid g = opt.grid();
  const KernelBasis basis = build_kernel_basis(g);
  const NormalField U = named_field(g, basis, field, eps, seed, support);
  GraphThresholds thr;
  thr.eps2 = eps2;
  const GeometryState st = evaluate_geometry(g, U, thr);
  if (!out_csv.empty()) write_geometry_csv(out_csv, st);
  nlohmann::ordered_json j;
  j["field"] = field;
  j["eps"] = eps;
  j["min_absH"] = st.absH.minCoeff();
  j["max_absH"] = st.absH.maxCoeff();
  j["gradtau_l1"] = grad_tau_norm(st).value;
  j["p_l1"] = g.integrate_rho(st.P.abs());
  j["area"] = gaussian_area(g, st);
  j["tail_bound"] = g.tail_bound;
  if (!out_json.empty()) {
    std::ofstream os(out_json);
    if (!os) throw IoError("cannot open " + out_json);
    os << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_kernel_verify(const CylinderOpts& opt, double tol,
                      const std::string& out_csv) {
  const CylinderGrid g = opt.grid();
  const KernelBasis basis = build_kernel_basis(g);
  std::FILE* csv = nullptr;
  if (!out_csv.empty()) {
    csv = std::fopen(out_csv.c_str(), "w");
    if (!csv) throw IoError("cannot open " + out_csv);
    std::fprintf(csv, "label,residual,c_growth,c_mixed\n");
  }
  bool ok = true;
  std::printf("%-12s %-12s %-12s %-12s\n", "field", "residual", "C_growth",
              "C_mixed");
  for (int i = 0; i < basis.size(); ++i) {
    const double res = kernel_residual(g, basis.field(i));
    const GrowthConstants gc = kernel_growth_constants(g, basis.field(i));
    std::printf("%-12s %-12.3e %-12.4g %-12.4g\n", basis.label(i).c_str(), res,
                gc.c_growth, gc.c_mixed);
    if (csv)
      std::fprintf(csv, "%s,%.17g,%.17g,%.17g\n", basis.label(i).c_str(), res,
                   gc.c_growth, gc.c_mixed);
    ok = ok && res <= tol;
  }
  std::printf("gram condition %.4g\n", basis.gram_condition);
  if (csv) std::fclose(csv);
  return ok ? 0 : 1;
}

int cmd_variation_check(const CylinderOpts& opt, int nfields,
                        std::uint64_t seed, double step,
                        const std::string& out_csv) {
  const CylinderGrid g = opt.grid();
  GraphThresholds thr{1.0, 0.1};
  std::vector<VariationRow> rows;
  bool ok = true;
  for (int f = 0; f < nfields; ++f) {
    NormalField V = random_smooth_field(g, seed + f, g.Y, g.ambient_dim == 4,
                                        /*apply_cutoff=*/false);
    const double c2 = field_cm_norm(g, V, 2);
    V = (1.0 / c2) * V;
    const VariationGaps gaps = compare_first_variations(g, V, step, thr);
    auto push = [&](const std::string& name, double rel, double tol) {
      rows.push_back({name, 1.0, rel, rel, gaps.richardson});
      ok = ok && rel <= tol;
      std::printf("field %d  %-12s rel gap %.3e  (tol %.1e)\n", f, name.c_str(),
                  rel, tol);
    };
    push("g_s", gaps.metric, 1e-6);
    push("A_s", gaps.second_ff, 1e-6);
    push("absH_s", gaps.abs_h, 1e-6);
    push("N_s", gaps.normal_dir, 1e-6);
    push("grad_absH_s", gaps.grad_abs_h, 1e-6);
    push("grad_A_s", gaps.grad_A, 1e-6);
    push("grad_tau_s", gaps.grad_tau, 1e-5);
    push("Pi_s", gaps.pi_s, 1e-6);
  }
  if (!out_csv.empty()) write_variation_csv(out_csv, rows);
  return ok ? 0 : 1;
}

int cmd_constants(const CylinderOpts& opt, int round_k) {
  if (round_k > 0) {
    if (round_k == 1) {
      const CylinderGrid g = opt.grid();
      const auto rep = constant_report_round(1, &g);
      std::printf("target 2/k^3 (k=1): %.12g\n", rep.round_target.at(1));
      std::printf("measured:           %.12g\n", rep.measured);
      std::cout << to_json(rep).dump(2) << "\n";
    } else {
      const auto rep = constant_report_round(round_k, nullptr);
      std::printf("target 2/k^3 (k=%d): %.12g\n", round_k,
                  rep.round_target.at(round_k));
      std::cout << to_json(rep).dump(2) << "\n";
    }
    return 0;
  }
  const CylinderGrid g = opt.grid();
  const auto rep = constant_report_curve(g);
  std::printf("B2(profile)  = %.12g\n", rep.b2);
  std::printf("target 4 B2  = %.12g\n", rep.al_target);
  std::printf("measured     = %.12g\n", rep.measured);
  std::cout << to_json(rep).dump(2) << "\n";
  return 0;
}

int cmd_loja_sweep(const std::string& config_path, const std::string& prefix) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const RunManifest manifest = make_manifest(config_path, cfg);
  auto ctx = make_context(cfg);

  std::vector<InequalityReport> reports;
  reports.push_back(check_ord1(*ctx));
  reports.push_back(check_entire_tau_phi(*ctx));
  reports.push_back(check_dtauP(*ctx));
  reports.push_back(check_Pest(*ctx));
  reports.push_back(check_entire_est(*ctx));

  // theorem-level checks at the family shape, truncated into B_{R-5} when
  // needed; the cutoff estimate runs when the family shape is a truncation
  const double max_profile = std::sqrt(
      (ctx->grid.profile.x.col(0).square() + ctx->grid.profile.x.col(1).square())
          .maxCoeff());
  const double admissible =
      std::sqrt(std::max(0.0, std::pow(cfg.R - 5.0, 2) - max_profile * max_profile));
  NormalField V = ctx->shape;
  std::optional<NormalField> parent;
  if (V.support_radius > admissible) {
    parent = V;
    const Grid2D chi = cutoff_profile(ctx->grid, admissible);
    V.u *= chi;
    if (V.has_z()) V.uz *= chi;
    V.support_radius = admissible;
  }
  reports.push_back(check_lojasiewicz_first(*ctx, V, parent));
  reports.push_back(check_lojasiewicz_gradient(*ctx, V));

  write_reports_json(prefix + "_reports.json", reports, manifest.to_json());
  for (const auto& rep : reports) {
    write_sweep_csv(prefix + "_" + rep.name + ".csv", rep);
    std::cout << to_text(rep) << "\n";
  }
  {
    std::ofstream os(prefix + "_manifest.json");
    if (!os) throw IoError("cannot open manifest output");
    os << manifest.to_json().dump(2) << "\n";
  }
  return 0;
}

int cmd_interp_check(const CylinderOpts& opt, int m, int j, int p, double r,
                     double omega_max, const std::string& out_json) {
  const CylinderGrid g = opt.grid();
  std::vector<double> omegas;
  for (double w = 1.0; w <= omega_max * (1 + 1e-12); w *= 2.0)
    omegas.push_back(w);
  const auto rep = interpolation_sweep(g, m, j, p, r, omegas);
  std::printf("a_{%d,%d,2} = %.12g\n", m, j, rep.extra.at("a_mjn"));
  std::cout << to_text(rep) << "\n";
  if (!out_json.empty())
    write_reports_json(out_json, {rep}, nlohmann::ordered_json::object());
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"shrinker-lab: numerical laboratory for mean convex shrinking "
               "cylinders"};
  app.require_subcommand(1);

  // profile
  auto* profile = app.add_subcommand("profile", "construct and check profiles");
  profile->require_subcommand(1);
  CylinderOpts solve_opt;
  std::string solve_out;
  auto* solve = profile->add_subcommand("solve", "shoot a closed AL profile");
  solve_opt.attach(solve);
  solve->add_option("-o,--out", solve_out, "curve output file");

  std::string check_in;
  double check_tol = 1e-7;
  auto* pcheck = profile->add_subcommand("check", "validate a curve file");
  pcheck->add_option("-i,--in", check_in, "curve input file")->required();
  pcheck->add_option("--tol", check_tol, "residual tolerance");

  // grid
  auto* gridc = app.add_subcommand("grid", "grid operations");
  gridc->require_subcommand(1);
  CylinderOpts grid_opt;
  std::string grid_out;
  auto* gbuild = gridc->add_subcommand("build", "build a cylinder grid");
  grid_opt.attach(gbuild);
  gbuild->add_option("-o,--out", grid_out, "snapshot output file");

  // geometry
  auto* geo = app.add_subcommand("geometry", "graph geometry");
  geo->require_subcommand(1);
  CylinderOpts geo_opt;
  std::string geo_field = "k1", geo_csv, geo_json;
  double geo_eps = 1e-2, geo_support = 8.0, geo_eps2 = 0.5;
  std::uint64_t geo_seed = 20260810;
  auto* geval = geo->add_subcommand("eval", "evaluate a normal graph");
  geo_opt.attach(geval);
  geval->add_option("--field", geo_field, "k0|k1|h0|mixed|radial|random");
  geval->add_option("--eps", geo_eps, "field amplitude");
  geval->add_option("--seed", geo_seed, "random field seed");
  geval->add_option("--support", geo_support, "compact support radius");
  geval->add_option("--eps2", geo_eps2, "graph regularity threshold");
  geval->add_option("-o,--out", geo_csv, "per-node CSV output");
  geval->add_option("--summary", geo_json, "summary JSON output");

  // kernel
  auto* kern = app.add_subcommand("kernel", "Jacobi kernel");
  kern->require_subcommand(1);
  CylinderOpts kern_opt;
  double kern_tol = 1e-6;
  std::string kern_csv;
  auto* kverify = kern->add_subcommand("verify", "kernel residuals and bounds");
  kern_opt.attach(kverify);
  kverify->add_option("--kernel-tol", kern_tol, "residual tolerance");
  kverify->add_option("-o,--out", kern_csv, "CSV output");

  // variation
  auto* vari = app.add_subcommand("variation", "variation formulas");
  vari->require_subcommand(1);
  CylinderOpts vari_opt;
  int vari_fields = 5;
  std::uint64_t vari_seed = 11;
  double vari_step = 4e-3;
  std::string vari_csv;
  auto* vcheck = vari->add_subcommand("check", "analytic vs numeric variations");
  vari_opt.attach(vcheck);
  vcheck->add_option("--fields", vari_fields, "number of random fields");
  vcheck->add_option("--seed", vari_seed, "field seed");
  vcheck->add_option("--fd-step", vari_step, "s-difference step");
  vcheck->add_option("-o,--out", vari_csv, "CSV output");

  // constants
  CylinderOpts const_opt;
  int const_round_k = 0;
  auto* consts = app.add_subcommand("constants", "second-variation constants");
  const_opt.attach(consts);
  consts->add_option("--target-k", const_round_k,
                     "report 2/k^3 for this k (k=1 also measures)");

  // loja
  auto* loja = app.add_subcommand("loja", "inequality sweeps");
  loja->require_subcommand(1);
  std::string loja_config, loja_prefix = "loja";
  auto* lsweep = loja->add_subcommand("sweep", "run the section 4-5 sweeps");
  lsweep->add_option("--config", loja_config, "experiment config file")
      ->required();
  lsweep->add_option("-o,--out", loja_prefix, "output path prefix");

  // interp
  auto* interp = app.add_subcommand("interp", "interpolation inequality");
  interp->require_subcommand(1);
  CylinderOpts interp_opt;
  int im = 4, ij = 2, ip = 2;
  double ir = 6.0, iomega = 64.0;
  std::string interp_json;
  auto* icheck = interp->add_subcommand("check", "frequency sweep");
  interp_opt.attach(icheck);
  icheck->add_option("--m", im, "derivative count");
  icheck->add_option("--j", ij, "estimated order");
  icheck->add_option("--lp", ip, "weighted-corollary exponent");
  icheck->add_option("--r", ir, "ball radius");
  icheck->add_option("--omega-max", iomega, "largest frequency");
  icheck->add_option("-o,--out", interp_json, "JSON output");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_profile_solve(solve_opt, solve_out);
    if (pcheck->parsed()) return cmd_profile_check(check_in, check_tol);
    if (gbuild->parsed()) return cmd_grid_build(grid_opt, grid_out);
    if (geval->parsed())
      return cmd_geometry_eval(geo_opt, geo_field, geo_eps, geo_seed,
                               geo_support, geo_eps2, geo_csv, geo_json);
    if (kverify->parsed()) return cmd_kernel_verify(kern_opt, kern_tol, kern_csv);
    if (vcheck->parsed())
      return cmd_variation_check(vari_opt, vari_fields, vari_seed, vari_step,
                                 vari_csv);
    if (consts->parsed()) return cmd_constants(const_opt, const_round_k);
    if (lsweep->parsed()) return cmd_loja_sweep(loja_config, loja_prefix);
    if (icheck->parsed())
      return cmd_interp_check(interp_opt, im, ij, ip, ir, iomega, interp_json);
  } catch (const LabError& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace shrinkerlab::cli
