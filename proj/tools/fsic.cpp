// fsic: batch experiment runner for the gap-flow laboratory. Every module is
// exposed as a subcommand with grid sweeps, CSV/JSON outputs, and a registry
// of named experiments that doubles as the acceptance suite.
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsic/asymptotics.hpp"
#include "fsic/collidingflow.hpp"
#include "fsic/criteria.hpp"
#include "fsic/eulerflow.hpp"
#include "fsic/experiments.hpp"
#include "fsic/io.hpp"
#include "fsic/lubridyn.hpp"
#include "fsic/particles1d.hpp"
#include "fsic/testfield.hpp"

namespace {

using nlohmann::json;

std::string out_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("FSIC_OUT");
  return env ? env : ".";
}

std::string join_path(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw fsic::UsageError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

fsic::ShapeProfile make_profile(const std::string& kind, double alpha, int d, double h,
                                double r0) {
  if (kind == "powerlaw")
    return fsic::ShapeProfile::power_law(alpha, d, h, r0 > 0 ? r0 : 1.0);
  if (kind == "spherical") return fsic::ShapeProfile::spherical(d, h, r0 > 0 ? r0 : 0.5);
  throw fsic::UsageError("profile must be 'powerlaw' or 'spherical'");
}

const char* regime_name(fsic::RegimeTag t) {
  switch (t) {
    case fsic::RegimeTag::PowerLaw: return "PowerLaw";
    case fsic::RegimeTag::Logarithmic: return "Logarithmic";
    case fsic::RegimeTag::Bounded: return "Bounded";
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_asymptotics(double alpha, double q, double s, const std::string& h_spec, double r0,
                    const std::string& out_dir) {
  using namespace fsic;
  std::vector<double> grid = parse_grid(h_spec);
  std::sort(grid.begin(), grid.end(), std::greater<>());
  json report{{"schema", 1}, {"alpha", alpha}, {"q", q}, {"s", s}};
  const AsymptoticClass cls = classify(alpha, q, s);
  report["tag"] = regime_name(cls.tag);
  if (cls.tag == RegimeTag::PowerLaw) report["exponent"] = cls.exponent;
  report["near_critical"] = cls.near_critical;

  std::vector<std::vector<double>> rows;
  if (grid.size() >= 5) {
    const auto sweep = sweep_singular_gap_integral(alpha, q, s, r0, grid);
    for (size_t i = 0; i < sweep.h.size(); ++i) rows.push_back({sweep.h[i], sweep.value[i]});
    report["fit"] = {{"exponent", sweep.fit.exponent},
                     {"r2", sweep.fit.r2},
                     {"logarithmic_branch", sweep.fit.logarithmic_branch},
                     {"r2_log", sweep.fit.r2_log},
                     {"slow_converging", sweep.fit.slow_converging}};
  } else {
    for (double h : grid) rows.push_back({h, singular_gap_integral(alpha, q, s, h, r0).value});
  }
  const std::string csv = join_path(out_dir, "asymptotics_sweep.csv");
  write_csv(csv, "asymptotics", {"h", "value"}, rows);
  const std::string jpath = join_path(out_dir, "asymptotics_regime.json");
  write_json(jpath, report);
  std::printf("%s", report.dump(2).c_str());
  std::printf("\nwrote %s and %s\n", csv.c_str(), jpath.c_str());
  return 0;
}

int cmd_testfield_norm(const std::string& kind, double alpha, int d, double r0,
                       const std::string& field, double q, const std::string& region_name,
                       const std::string& h_spec, bool slip, double beta_s, double beta_omega,
                       double mu, const std::string& out_dir) {
  using namespace fsic;
  const ShapeProfile prof = make_profile(kind, alpha, d, 0.0, r0);
  const TestFieldSpec spec =
      slip ? TestFieldSpec::slip(prof, beta_s, beta_omega, mu) : TestFieldSpec::no_slip(prof);
  FieldQuantity what = FieldQuantity::Velocity;
  if (field == "gradw") what = FieldQuantity::Gradient;
  else if (field == "dhw") what = FieldQuantity::GapDeriv;
  else if (field != "w") throw UsageError("field must be w, gradw, or dhw");
  Region region = Region::Inner;
  if (region_name == "outer") region = Region::Outer;
  else if (region_name == "full") region = Region::Full;
  else if (region_name != "inner") throw UsageError("region must be inner, outer, or full");
  std::vector<double> grid = parse_grid(h_spec);
  std::sort(grid.begin(), grid.end(), std::greater<>());
  std::vector<std::vector<double>> rows;
  std::vector<double> values;
  for (double h : grid) {
    const double v = lq_norm(spec, h, what, q, region).value;
    values.push_back(v);
    rows.push_back({h, v});
    std::printf("h = %-12g ||.||_%g = %.12g\n", h, q, v);
  }
  const std::string csv = join_path(out_dir, "testfield_norms.csv");
  write_csv(csv, "testfield norm", {"h", "norm"}, rows);
  if (grid.size() >= 5) {
    const ScalingFit fit = fit_scaling(grid, values);
    std::printf("log-log slope of the norm: %.6f (R2 = %.6f)\n", fit.exponent, fit.r2);
  }
  std::printf("wrote %s\n", csv.c_str());
  return 0;
}

int cmd_testfield_drag(const std::string& kind, double alpha, double beta_s, double beta_omega,
                       bool slip, double mu, double r0, const std::string& h_spec,
                       const std::string& out_dir) {
  using namespace fsic;
  const ShapeProfile prof = make_profile(kind, alpha, 3, 0.0, r0);
  const TestFieldSpec spec =
      slip ? TestFieldSpec::slip(prof, beta_s, beta_omega, mu) : TestFieldSpec::no_slip(prof);
  std::vector<double> grid = parse_grid(h_spec);
  std::sort(grid.begin(), grid.end(), std::greater<>());
  std::vector<std::vector<double>> rows;
  for (double h : grid) {
    const DragEnergy d = drag_energy(spec, h);
    rows.push_back({h, d.value, d.bulk, d.body_boundary, d.wall_boundary});
    std::printf("h = %-12g D = %-14.8g (bulk %g, body %g, wall %g)\n", h, d.value, d.bulk,
                d.body_boundary, d.wall_boundary);
  }
  const std::string csv = join_path(out_dir, "drag_energy.csv");
  write_csv(csv, "testfield drag", {"h", "drag", "bulk", "body_boundary", "wall_boundary"}, rows);
  std::printf("wrote %s\n", csv.c_str());
  return 0;
}

int cmd_criteria_grid(int d, bool convection, const std::string& gamma_spec,
                      const std::string& p_spec, const std::string& out_dir) {
  using namespace fsic;
  const auto gammas = parse_grid(gamma_spec);
  const auto ps = parse_grid(p_spec);
  std::vector<std::vector<double>> rows;
  int feasible = 0;
  for (double gamma : gammas)
    for (double p : ps) {
      const auto b = compressible_alpha_bound(gamma, p, d, convection);
      rows.push_back({gamma, p, b.feasible ? 1.0 : 0.0, b.feasible ? b.bound : 0.0});
      if (b.feasible) ++feasible;
    }
  const std::string csv = join_path(out_dir, "alpha_threshold_map.csv");
  write_csv(csv, "criteria grid", {"gamma", "p", "feasible", "alpha_bound"}, rows);
  json report{{"schema", 1},
              {"d", d},
              {"convection", convection},
              {"points", rows.size()},
              {"feasible_points", feasible}};
  const std::string jpath = join_path(out_dir, "alpha_region.json");
  write_json(jpath, report);
  std::printf("%zu grid points, %d feasible; wrote %s and %s\n", rows.size(), feasible,
              csv.c_str(), jpath.c_str());
  return 0;
}

int cmd_fall(const std::string& bc_name, const std::string& kind, double alpha, int d, double m,
             double g, double mu, double rho_s, double rho_f, double h0, double hdot0,
             double t_max, bool calibrate, const std::string& out_dir) {
  using namespace fsic;
  ContactParams params;
  params.m = m;
  params.g = g;
  params.mu = mu;
  params.rho_s = rho_s;
  params.rho_f = rho_f;
  params.d = d;
  if (bc_name == "noslip") params.bc = BoundaryCondition::NoSlip;
  else if (bc_name == "slipboth") params.bc = BoundaryCondition::SlipBoth;
  else if (bc_name == "slipmixed") params.bc = BoundaryCondition::SlipMixed;
  else throw UsageError("bc must be noslip, slipboth, or slipmixed");
  const ShapeProfile prof = make_profile(kind, alpha, d, 0.0, 0.0);
  std::function<double(double)> hook;
  DragLaw law;
  if (calibrate) {
    const TestFieldSpec spec = params.bc == BoundaryCondition::NoSlip
                                   ? TestFieldSpec::no_slip(prof)
                                   : TestFieldSpec::slip(prof, 1.0, 1.0, mu);
    hook = [spec](double h) { return drag_energy(spec, h).value; };
    law = drag_law_for(params, prof, &hook);
  } else {
    law = drag_law_for(params, prof);
  }
  const GapTrajectory traj = integrate_fall(law, params, h0, hdot0, t_max);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < traj.t.size(); ++i)
    rows.push_back({traj.t[i], traj.h[i], traj.hdot[i], traj.drag[i]});
  const std::string csv = join_path(out_dir, "gap_trajectory.csv");
  write_csv(csv, "lubridyn fall", {"t", "h", "hdot", "D(h)"}, rows);
  json report{{"schema", 1}, {"contact", traj.contact.has_value()}};
  if (traj.contact) {
    double kappa = 0.0;
    try {
      kappa = fit_contact_rate(traj).kappa;
    } catch (const std::exception&) {
    }
    report["T_star"] = traj.contact->t_star;
    report["impact_speed"] = traj.contact->impact_speed;
    report["kappa"] = kappa;
  }
  const std::string jpath = join_path(out_dir, "contact_report.json");
  write_json(jpath, report);
  std::printf("%s\nwrote %s and %s\n", report.dump(2).c_str(), csv.c_str(), jpath.c_str());
  return 0;
}

int cmd_euler_table(const std::string& sigma_spec, const std::string& out_dir) {
  using namespace fsic;
  std::vector<std::vector<double>> rows;
  for (double sigma : parse_grid(sigma_spec))
    rows.push_back({sigma, added_mass_energy(sigma).value});
  const std::string csv = join_path(out_dir, "added_mass_table.csv");
  write_csv(csv, "euler table", {"sigma", "E"}, rows);
  std::printf("wrote %s (%zu rows)\n", csv.c_str(), rows.size());
  return 0;
}

int cmd_colliding_dump(double sigma, double sigma_dot, int n_rho, int n_theta,
                       const std::string& out_dir) {
  using namespace fsic;
  const EccentricMap map(3.0, 1.0);
  std::vector<std::vector<double>> rows;
  for (int i = 1; i <= n_rho; ++i) {
    const double rho = 3.0 * i / (n_rho + 1.0);
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * M_PI * j / n_theta;
      const auto x = map.forward(sigma, rho, theta);
      const auto u = map.velocity(sigma, sigma_dot, x[0], x[1]);
      rows.push_back({rho, theta, x[0], x[1], u[0], u[1]});
    }
  }
  const std::string csv = join_path(out_dir, "colliding_field.csv");
  write_csv(csv, "colliding field-dump", {"rho", "theta", "x1", "x2", "u1", "u2"}, rows);
  std::printf("wrote %s (%zu rows)\n", csv.c_str(), rows.size());
  return 0;
}

int cmd_particles_run(double kappa, double gap, double speed, double mass, double L, int nodes,
                      double t_end, const std::string& out_dir) {
  using namespace fsic;
  Solver1DConfig cfg;
  cfg.kappa = kappa;
  cfg.L = L;
  cfg.nodes_per_unit = nodes;
  const double d = gap / 2.0, s = 1.0;
  auto u0 = [d, s, speed](double x) {
    if (x <= -s || x >= s) return 0.0;
    if (x <= -d) return speed * (x + s) / (s - d);
    if (x >= d) return -speed * (s - x) / (s - d);
    return -speed * x / d;
  };
  ParticleSystem1D sys(u0, {{-d, speed, mass}, {d, -speed, mass}}, cfg);
  sys.run(t_end);
  std::vector<std::vector<double>> rows;
  for (const auto& r : sys.history())
    rows.push_back({r.t, r.h[0], r.h[1], r.hdot[0], r.hdot[1], r.energy, r.min_gap, r.grad_sup});
  const std::string csv = join_path(out_dir, "particles_run.csv");
  {
    std::ofstream out(csv, std::ios::binary);
    out << "# particles run generated " << iso_timestamp() << "\n";
    out << "# config: kappa = " << fmt_g(kappa) << ", L = " << fmt_g(L)
        << ", nodes_per_unit = " << nodes << ", mass = " << fmt_g(mass)
        << ", gap0 = " << fmt_g(gap) << ", speed = " << fmt_g(speed) << "\n";
    out << "t,h1,h2,hdot1,hdot2,E,min_gap,grad_sup\n";
    for (const auto& row : rows) {
      for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt_g(row[c]);
      out << "\n";
    }
  }
  const auto gw = gronwall_gap_check(sys.history());
  std::printf("final gap %.8g, envelope %s, int ||u_x||^2_inf dt = %.8g\nwrote %s\n",
              sys.min_gap(), gw.holds ? "holds" : "VIOLATED", gw.grad_l2_time, csv.c_str());
  return gw.holds && sys.min_gap() > 0.0 ? 0 : 1;
}

int run_config(const std::string& path, const std::string& out_flag) {
  using namespace fsic;
  const Config cfg = Config::parse_file(path);
  const std::string name = cfg.get("experiment", "name");
  ExperimentContext ctx;
  ctx.out_dir = out_root(!out_flag.empty() ? out_flag : cfg.get_or("params", "out", ""));
  if (cfg.has("params", "seed")) ctx.seed = static_cast<unsigned>(cfg.get_double("params", "seed"));
  static const std::set<std::string> known{"out", "seed"};
  if (cfg.sections.count("params"))
    for (const auto& [key, value] : cfg.sections.at("params"))
      if (!known.count(key))
        throw UsageError("config: unknown parameter '" + key + "' for experiment targets");
  const RunReport rep = run_experiment(name, ctx);
  const std::string jpath = join_path(ctx.out_dir, "report_" + name + ".json");
  write_json(jpath, rep.to_json());
  std::printf("%s: %s (%.0f ms), report at %s\n", name.c_str(),
              rep.pass() ? "pass" : "FAIL", rep.wall_ms, jpath.c_str());
  return rep.pass() ? 0 : 1;
}

}  // namespace

namespace {
// free the short -h for gap-grid options; help stays on --help
void help_long_only(CLI::App* app) {
  app->set_help_flag("--help", "print help");
  for (CLI::App* sub : app->get_subcommands({})) help_long_only(sub);
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gap-flow laboratory: test fields, drag laws, contact criteria"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, "output root (default: FSIC_OUT or '.')");

  // geometry
  auto* geo = app.add_subcommand("geometry", "gap profile queries");
  std::string g_kind = "spherical";
  double g_alpha = 1.0, g_h = 0.01, g_r = 0.0, g_r0 = 0.0;
  int g_d = 3, g_order = 1;
  geo->add_option("--profile", g_kind);
  geo->add_option("--alpha", g_alpha);
  geo->add_option("--d", g_d);
  geo->add_option("--h", g_h);
  geo->add_option("--r", g_r)->required();
  geo->add_option("--r0", g_r0);
  geo->add_option("--order", g_order);
  auto* geo_gap = geo->add_subcommand("gap", "print psi_h(r)");
  auto* geo_der = geo->add_subcommand("derivative", "print a gap derivative");
  auto* geo_nrm = geo->add_subcommand("normal", "print the body normal");

  // asymptotics
  auto* asy = app.add_subcommand("asymptotics", "singular gap integral sweep + regime fit");
  double a_alpha = 1.0, a_q = 0.0, a_s = 1.0, a_r0 = 1.0;
  std::string a_h = "log:1e-6:1e-2:25";
  asy->add_option("--alpha", a_alpha)->required();
  asy->add_option("--q", a_q)->required();
  asy->add_option("--s", a_s)->required();
  asy->add_option("--h", a_h, "grid spec {lin|log}:start:stop:count or scalar");
  asy->add_option("--r0", a_r0);

  // testfield
  auto* tf = app.add_subcommand("testfield", "norms and drag of the explicit fields");
  std::string t_kind = "spherical", t_field = "gradw", t_region = "inner",
              t_h = "log:1e-6:1e-3:8";
  double t_alpha = 1.0, t_q = 2.0, t_bs = 0.0, t_bo = 0.0, t_mu = 1.0, t_r0 = 0.0;
  int t_d = 3;
  bool t_slip = false;
  tf->add_option("--profile", t_kind);
  tf->add_option("--alpha", t_alpha);
  tf->add_option("--d", t_d);
  tf->add_option("--field", t_field, "w | gradw | dhw");
  tf->add_option("--lq", t_q);
  tf->add_option("--region", t_region, "inner | outer | full");
  tf->add_option("--h", t_h);
  tf->add_option("--r0", t_r0);
  tf->add_flag("--slip", t_slip);
  tf->add_option("--betas", t_bs);
  tf->add_option("--betaomega", t_bo);
  tf->add_option("--mu", t_mu);
  auto* tf_norm = tf->add_subcommand("norm", "L^q norm sweep");
  auto* tf_drag = tf->add_subcommand("drag", "drag energy sweep");
  auto* tf_slipc = tf->add_subcommand("slip-coeffs", "slip profile coefficients at --r");
  double t_r = 0.2, t_gap = 0.01;
  tf->add_option("--r", t_r);
  tf->add_option("--gap", t_gap);

  // criteria
  auto* cr = app.add_subcommand("criteria", "collision decision predicates");
  auto* cr_ab = cr->add_subcommand("alpha-bound", "admissible roughness threshold");
  double c_gamma = 2.0, c_p = 2.0;
  int c_d = 3;
  bool c_conv = false;
  cr_ab->add_option("--gamma", c_gamma)->required();
  cr_ab->add_option("--p", c_p)->required();
  cr_ab->add_option("--d", c_d);
  cr_ab->add_flag("--convection", c_conv);
  auto* cr_grid = cr->add_subcommand("grid", "alpha-threshold map over (gamma, p)");
  std::string c_gspec = "lin:1.6:6:20", c_pspec = "lin:2.0:2.95:20";
  cr_grid->add_option("--gamma", c_gspec);
  cr_grid->add_option("--p", c_pspec);
  cr_grid->add_option("--d", c_d);
  cr_grid->add_flag("--convection", c_conv);
  auto* cr_mass = cr->add_subcommand("mass", "large-mass gate");
  double c_m = 1.0, c_e0 = 0.0, c_c0 = 1.0;
  cr_mass->add_option("--m", c_m)->required();
  cr_mass->add_option("--e0", c_e0)->required();
  cr_mass->add_option("--gamma", c_gamma)->required();
  cr_mass->add_option("--p", c_p)->required();
  cr_mass->add_option("--c0", c_c0)->required();
  auto* cr_st = cr->add_subcommand("starovoitov", "contact exponent and rate");
  double c_alpha = 1.0, c_q = 2.0;
  cr_st->add_option("--alpha", c_alpha)->required();
  cr_st->add_option("--p", c_p)->required();
  cr_st->add_option("--q", c_q);
  cr_st->add_option("--d", c_d);
  auto* cr_inc = cr->add_subcommand("incompressible", "Newtonian gravity dichotomy");
  double c_rs = 2.0, c_rf = 1.0;
  cr_inc->add_option("--alpha", c_alpha)->required();
  cr_inc->add_option("--d", c_d);
  cr_inc->add_option("--rhos", c_rs);
  cr_inc->add_option("--rhof", c_rf);

  // lubridyn
  auto* lb = app.add_subcommand("lubridyn", "reduced gap dynamics");
  auto* lb_fall = lb->add_subcommand("fall", "integrate the gap ODE");
  std::string l_bc = "noslip", l_kind = "spherical";
  double l_alpha = 1.0, l_m = 1.0, l_g = 1.0, l_mu = 1.0, l_rs = 2.0, l_rf = 1.0, l_h0 = 0.05,
         l_v0 = 0.0, l_tmax = 100.0;
  int l_d = 3;
  bool l_cal = false;
  lb_fall->add_option("--bc", l_bc, "noslip | slipboth | slipmixed");
  lb_fall->add_option("--profile", l_kind);
  lb_fall->add_option("--alpha", l_alpha);
  lb_fall->add_option("--d", l_d);
  lb_fall->add_option("--m", l_m);
  lb_fall->add_option("--g", l_g);
  lb_fall->add_option("--mu", l_mu);
  lb_fall->add_option("--rhos", l_rs);
  lb_fall->add_option("--rhof", l_rf);
  lb_fall->add_option("--h0", l_h0);
  lb_fall->add_option("--hdot0", l_v0);
  lb_fall->add_option("--t-max", l_tmax);
  lb_fall->add_flag("--calibrate", l_cal, "fit the drag constant from the test field");
  auto* lb_tr = lb->add_subcommand("tresca", "shear-threshold contact schedule");
  double tr_h0 = 0.01, tr_g = 9.81, tr_sigma = 0.25, tr_m = 2e5, tr_cs = 1.0, tr_cf = 1.0;
  int tr_n = 50;
  lb_tr->add_option("--h0", tr_h0);
  lb_tr->add_option("--g", tr_g);
  lb_tr->add_option("--sigma", tr_sigma);
  lb_tr->add_option("--m", tr_m);
  lb_tr->add_option("--csharp", tr_cs);
  lb_tr->add_option("--cflat", tr_cf);
  lb_tr->add_option("--n", tr_n);

  // euler
  auto* eu = app.add_subcommand("euler", "inviscid disk fall");
  auto* eu_en = eu->add_subcommand("energy", "added-mass energy at --sigma");
  double e_sigma = 0.5, e_tol = 1e-12;
  eu_en->add_option("--sigma", e_sigma)->required();
  eu_en->add_option("--tol", e_tol);
  auto* eu_tab = eu->add_subcommand("table", "CSV (sigma, E) table");
  std::string e_spec = "lin:0.01:0.99:50";
  eu_tab->add_option("--sigma", e_spec);
  auto* eu_fall = eu->add_subcommand("fall", "energy-conserving collision ODE");
  double e_m = 3.14159265358979, e_rf = 1.0, e_h0 = 1.0, e_v0 = -1.0;
  eu_fall->add_option("--m", e_m);
  eu_fall->add_option("--rhof", e_rf);
  eu_fall->add_option("--h0", e_h0);
  eu_fall->add_option("--hdot0", e_v0);

  // colliding
  auto* co = app.add_subcommand("colliding", "disk-in-disk colliding field");
  auto* co_nu = co->add_subcommand("nu1", "closed form vs quadrature");
  double co_sigma = 0.5, co_sdot = -1.0;
  co_nu->add_option("--sigma", co_sigma)->required();
  auto* co_norm = co->add_subcommand("norms", "L2 and Laplacian norms at --sigma");
  co_norm->add_option("--sigma", co_sigma)->required();
  co_norm->add_option("--sigmadot", co_sdot);
  auto* co_dump = co->add_subcommand("field-dump", "structured (rho, theta) field CSV");
  int co_nrho = 24, co_ntheta = 64;
  co_dump->add_option("--sigma", co_sigma)->required();
  co_dump->add_option("--sigmadot", co_sdot);
  co_dump->add_option("--nrho", co_nrho);
  co_dump->add_option("--ntheta", co_ntheta);
  auto* co_adm = co->add_subcommand("admissibility", "driving-family functionals");
  std::string co_family = "quartic";
  double co_T = 1.0, co_tstar = 0.4;
  co_adm->add_option("--family", co_family, "quartic | linear");
  co_adm->add_option("--T", co_T);
  co_adm->add_option("--tstar", co_tstar);

  // particles
  auto* pa = app.add_subcommand("particles", "1D fluid-particle system");
  auto* pa_run = pa->add_subcommand("run", "symmetric two-particle benchmark");
  double p_kappa = 1.0, p_gap = 0.5, p_speed = 1.0, p_mass = 1.0, p_L = 20.0, p_T = 10.0;
  int p_nodes = 32;
  pa_run->add_option("--kappa", p_kappa);
  pa_run->add_option("--gap", p_gap);
  pa_run->add_option("--speed", p_speed);
  pa_run->add_option("--mass", p_mass);
  pa_run->add_option("--L", p_L);
  pa_run->add_option("--nodes", p_nodes);
  pa_run->add_option("--T", p_T);

  // experiments
  auto* ex = app.add_subcommand("experiments", "named acceptance experiments");
  auto* ex_list = ex->add_subcommand("list", "print the registry");
  auto* ex_run = ex->add_subcommand("run", "run one experiment");
  std::string ex_name;
  unsigned ex_seed = 42;
  ex_run->add_option("name", ex_name)->required();
  ex_run->add_option("--seed", ex_seed);
  auto* ex_all = ex->add_subcommand("run-all", "run every experiment and aggregate");

  // config-driven run
  auto* rn = app.add_subcommand("run", "run an experiment from a config file");
  std::string cfg_path;
  rn->add_option("--config", cfg_path)->required();

  help_long_only(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    using namespace fsic;
    const std::string out_dir = out_root(out_flag);
    if (geo->parsed()) {
      const ShapeProfile prof = make_profile(g_kind, g_alpha, g_d, g_h, g_r0);
      if (geo_gap->parsed()) std::printf("%.17g\n", gap(prof, g_r));
      else if (geo_der->parsed()) std::printf("%.17g\n", gap_derivative(prof, g_r, g_order));
      else if (geo_nrm->parsed()) {
        const auto n = body_normal(prof, g_r);
        std::printf("%.17g %.17g\n", n.e_r, n.e_vert);
      } else throw UsageError("geometry: need gap, derivative, or normal");
      return 0;
    }
    if (asy->parsed()) return cmd_asymptotics(a_alpha, a_q, a_s, a_h, a_r0, out_dir);
    if (tf->parsed()) {
      if (tf_norm->parsed())
        return cmd_testfield_norm(t_kind, t_alpha, t_d, t_r0, t_field, t_q, t_region, t_h,
                                  t_slip, t_bs, t_bo, t_mu, out_dir);
      if (tf_drag->parsed())
        return cmd_testfield_drag(t_kind, t_alpha, t_bs, t_bo, t_slip, t_mu, t_r0, t_h, out_dir);
      if (tf_slipc->parsed()) {
        const auto spec =
            TestFieldSpec::slip(make_profile("spherical", 1.0, 3, 0.0, t_r0), t_bs, t_bo, t_mu);
        const auto sc = slip_coefficients(spec, t_gap, t_r);
        json j{{"schema", 1},     {"alpha_S", sc.alpha_s}, {"alpha_Omega", sc.alpha_omega},
               {"P1", sc.p1},     {"P2", sc.p2},           {"P3", sc.p3},
               {"c", sc.c},       {"r", t_r},              {"h", t_gap}};
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
      }
      throw UsageError("testfield: need norm, drag, or slip-coeffs");
    }
    if (cr->parsed()) {
      if (cr_ab->parsed()) {
        const auto b = compressible_alpha_bound(c_gamma, c_p, c_d, c_conv);
        if (b.feasible) std::printf("%.17g\n", b.bound);
        else std::printf("Infeasible\n");
        return 0;
      }
      if (cr_grid->parsed()) return cmd_criteria_grid(c_d, c_conv, c_gspec, c_pspec, out_dir);
      if (cr_mass->parsed()) {
        std::printf("%s\n", mass_threshold(c_m, c_e0, c_gamma, c_p, c_c0) ? "satisfied"
                                                                          : "not satisfied");
        return 0;
      }
      if (cr_st->parsed()) {
        const auto b = starovoitov_beta(c_alpha, c_p, c_d);
        std::printf("beta = %.17g (%s)\n", b.beta,
                    b.collision_possible ? "collision possible" : "no collision");
        if (b.collision_possible)
          std::printf("eta = %.17g\n", starovoitov_rate(c_alpha, c_p, c_q, c_d));
        return 0;
      }
      if (cr_inc->parsed()) {
        const auto v = incompressible_newtonian_predicate(c_alpha, c_d, c_rs, c_rf);
        std::printf("%s\n", v == ContactVerdict::Collision ? "Collision" : "NoCollision");
        return 0;
      }
      throw UsageError("criteria: need a subcommand");
    }
    if (lb->parsed()) {
      if (lb_fall->parsed())
        return cmd_fall(l_bc, l_kind, l_alpha, l_d, l_m, l_g, l_mu, l_rs, l_rf, l_h0, l_v0,
                        l_tmax, l_cal, out_dir);
      if (lb_tr->parsed()) {
        const auto s = tresca_schedule(tr_h0, tr_g, tr_sigma, tr_m, tr_cs, tr_cf, tr_n);
        std::vector<std::vector<double>> rows;
        for (size_t n = 0; n < s.lower.size(); ++n)
          rows.push_back({double(n), s.t[n], s.lower[n], s.h_repr[n], s.upper[n]});
        const std::string csv = join_path(out_dir, "tresca_schedule.csv");
        write_csv(csv, "lubridyn tresca", {"n", "t", "lower", "h", "upper"}, rows);
        std::printf("admissible: %s, T* <= %.10g\nwrote %s\n",
                    s.admissible() ? "yes" : "no", s.t_star_upper, csv.c_str());
        return 0;
      }
      throw UsageError("lubridyn: need fall or tresca");
    }
    if (eu->parsed()) {
      if (eu_en->parsed()) {
        const auto v = added_mass_energy_checked(e_sigma, std::max(e_tol, 1e-12) * 1e3);
        std::printf("%.12g (terms %d, tail bound %.3g)\n", v.value, v.terms, v.tail_bound);
        return 0;
      }
      if (eu_tab->parsed()) return cmd_euler_table(e_spec, out_dir);
      if (eu_fall->parsed()) {
        const auto fall = euler_fall(e_m, e_rf, e_h0, e_v0);
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < fall.trajectory.t.size(); ++i)
          rows.push_back(
              {fall.trajectory.t[i], fall.trajectory.h[i], fall.trajectory.hdot[i]});
        const std::string csv = join_path(out_dir, "euler_trajectory.csv");
        write_csv(csv, "euler fall", {"t", "h", "hdot"}, rows);
        json j{{"schema", 1},
               {"contact", fall.contact},
               {"T_star", fall.t_star},
               {"impact_speed", fall.impact_speed},
               {"speed_ratio", fall.speed_ratio}};
        const std::string jpath = join_path(out_dir, "euler_contact.json");
        write_json(jpath, j);
        std::printf("%s\nwrote %s and %s\n", j.dump(2).c_str(), csv.c_str(), jpath.c_str());
        return 0;
      }
      throw UsageError("euler: need energy, table, or fall");
    }
    if (co->parsed()) {
      if (co_nu->parsed()) {
        const auto r = nu1(co_sigma);
        std::printf("closed %.12g, quadrature %.12g, |diff| %.3g\n", r.closed, r.quadrature,
                    r.abs_diff);
        return 0;
      }
      if (co_norm->parsed()) {
        const EccentricMap map(3.0, 1.0);
        const double grad = l2_grad_psi_quadrature(map, co_sigma, co_sdot);
        const double closed = mu1(map) * nu1(co_sigma, false).closed * co_sdot * co_sdot;
        const double lap = l2_laplacian_quadrature(map, co_sigma, co_sdot);
        json j{{"schema", 1},          {"sigma", co_sigma},      {"grad_norm_sq", grad},
               {"grad_closed", closed}, {"laplacian_norm_sq", lap}};
        const std::string jpath = join_path(out_dir, "colliding_norms.json");
        write_json(jpath, j);
        std::printf("%s\nwrote %s\n", j.dump(2).c_str(), jpath.c_str());
        return 0;
      }
      if (co_dump->parsed())
        return cmd_colliding_dump(co_sigma, co_sdot, co_nrho, co_ntheta, out_dir);
      if (co_adm->parsed()) {
        SigmaFamily fam;
        if (co_family != "linear" && co_family != "quartic")
          throw UsageError("family must be quartic or linear");
        fam.kind = co_family == "linear" ? SigmaFamily::Kind::Linear : SigmaFamily::Kind::Quartic;
        fam.T = co_T;
        fam.t_star = co_tstar;
        const auto a = admissibility(fam);
        json j{{"schema", 1},
               {"family", co_family},
               {"sup_dsigma", a.sup_dsigma},
               {"singular_integral", a.l1_singular},
               {"singular_converged", a.l1_converged},
               {"refinement_ratio", a.refinement_ratio},
               {"l2_ddsigma", a.l2_ddsigma},
               {"admissible", a.admissible}};
        std::printf("%s\n", j.dump(2).c_str());
        return a.admissible || co_family == "linear" ? 0 : 1;
      }
      throw UsageError("colliding: need a subcommand");
    }
    if (pa->parsed()) {
      if (pa_run->parsed())
        return cmd_particles_run(p_kappa, p_gap, p_speed, p_mass, p_L, p_nodes, p_T, out_dir);
      throw UsageError("particles: need run");
    }
    if (ex->parsed()) {
      if (ex_list->parsed()) {
        for (const auto& e : experiment_registry())
          std::printf("%2d  %-26s %s\n", e.criterion, e.name.c_str(), e.summary.c_str());
        std::printf("%zu experiments registered\n", experiment_registry().size());
        return 0;
      }
      ExperimentContext ctx;
      ctx.out_dir = out_dir;
      ctx.seed = ex_seed;
      if (ex_run->parsed()) {
        const RunReport rep = run_experiment(ex_name, ctx);
        write_json(join_path(out_dir, "report_" + ex_name + ".json"), rep.to_json());
        for (const auto& a : rep.assertions)
          std::printf("[%s] %s %s\n", a.pass ? "pass" : "FAIL", a.name.c_str(),
                      a.detail.c_str());
        return rep.pass() ? 0 : 1;
      }
      if (ex_all->parsed()) {
        bool all = true;
        json agg{{"schema", 1}, {"reports", json::array()}};
        for (const auto& e : experiment_registry()) {
          const RunReport rep = run_experiment(e.name, ctx);
          all = all && rep.pass();
          agg["reports"].push_back(rep.to_json());
          std::printf("[%s] %-26s (%.0f ms)\n", rep.pass() ? "PASS" : "FAIL", e.name.c_str(),
                      rep.wall_ms);
        }
        agg["pass"] = all;
        write_json(join_path(out_dir, "report_all.json"), agg);
        return all ? 0 : 1;
      }
      throw UsageError("experiments: need list, run, or run-all");
    }
    if (rn->parsed()) return run_config(cfg_path, out_flag);
    throw UsageError("no subcommand given");
  } catch (const fsic::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
