// warpregge: command line front end for the Regge-pole toolkit.
//
// Subcommands: potential, kernel, jost, poles, verify-asymptotics,
// wt-reconstruct, dtn, marchenko-roundtrip. Each writes CSV/JSON artifacts
// plus a manifest into the output directory. Outputs are deterministic for a
// fixed config; the manifest (which carries wall time) is the one exception.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "regge/errors.hpp"
#include "regge/io.hpp"
#include "regge/jost.hpp"
#include "regge/kernel.hpp"
#include "regge/marchenko.hpp"
#include "regge/model.hpp"
#include "regge/parallel.hpp"
#include "regge/poles.hpp"
#include "regge/special.hpp"
#include "regge/wt.hpp"

namespace fs = std::filesystem;
using cplx = std::complex<double>;
using regge::io::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

struct Context {
  regge::io::RunConfig cfg;
  std::string out_dir;
  std::string subcommand;
  std::vector<std::string> artifacts;
  std::chrono::steady_clock::time_point t0;

  std::string path(const std::string& name) {
    artifacts.push_back(name);
    return (fs::path(out_dir) / name).string();
  }

  void write_manifest() {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json m{{"subcommand", subcommand},
           {"config_hash", regge::io::config_hash(cfg)},
           {"version", kVersion},
           {"artifacts", artifacts},
           {"wall_time_s", wall}};
    regge::io::write_json((fs::path(out_dir) / ("manifest_" + subcommand + ".json")).string(), m);
  }
};

regge::model::PotentialTable make_potential(Context& ctx) {
  auto spec = regge::io::warp_from_config(ctx.cfg);
  const int grid = ctx.cfg.integer("numerics.grid_size", 256);
  return regge::model::build_potential(spec, grid);
}

regge::kernel::KernelSolution make_kernel(Context& ctx,
                                          const regge::model::PotentialTable& pot) {
  const double lambda = ctx.cfg.required_number("warp.lambda");
  const int N = ctx.cfg.integer("numerics.kernel_n", 512);
  const double tol = ctx.cfg.number("numerics.kernel_tol", 1e-10);
  const std::string cache = (fs::path(ctx.out_dir) / "kernel.bin").string();
  regge::kernel::KernelSolution sol;
  if (regge::kernel::load_kernel(sol, cache)) {
    if (sol.grid.N == N && sol.lambda == lambda &&
        std::abs(sol.grid.a - pot.a) < 1e-14 && sol.p == pot.jump_order &&
        std::abs(sol.qf_jump - pot.jump_value) < 1e-12)
      return sol;
  }
  return regge::kernel::solve_kernel(pot, lambda, N, tol);
}

regge::poles::Rect pole_region(Context& ctx, const regge::kernel::KernelSolution& ker) {
  if (ctx.cfg.has("regions.poles")) {
    return regge::poles::Rect{ctx.cfg.required_number("regions.poles.re0"),
                              ctx.cfg.required_number("regions.poles.re1"),
                              ctx.cfg.required_number("regions.poles.im0"),
                              ctx.cfg.required_number("regions.poles.im1")};
  }
  // Default: Re in [-R, 1], |Im| <= R with R wide enough that at least 8
  // beta pairs fall inside per the predictor. Degenerate jumps fall back to
  // an alpha-family window.
  if (ker.jump_s_p == 0.0) return regge::poles::Rect{-10.5, 1.0, -2.0, 2.0};
  const double a = ker.grid.a;
  const double A = regge::poles::beta_constant_A(ker);
  const auto beta8 = regge::poles::predict_beta(8, 8, A, a, ker.p).front();
  const double R = std::max({beta8.imag() + kPi / (2.0 * a), std::abs(beta8.real()) + 2.0, 10.5});
  return regge::poles::Rect{-R, 1.0, -R, R};
}

std::vector<cplx> parse_grid(const std::string& s, int& n_out) {
  // re0:re1:im0:im1:n
  double re0, re1, im0, im1;
  int n;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf:%lf:%d", &re0, &re1, &im0, &im1, &n) != 5 ||
      n < 2)
    throw regge::ValidationError("bad --grid, expected re0:re1:im0:im1:n", "jost.grid");
  n_out = n;
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.emplace_back(re0 + (re1 - re0) * i / (n - 1), im0 + (im1 - im0) * j / (n - 1));
  return out;
}

int run_potential(Context& ctx) {
  auto pot = make_potential(ctx);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < pot.grid.size(); ++i)
    rows.push_back({pot.grid[i], pot.qf_values[i]});
  regge::io::write_csv(ctx.path("potential.csv"), {"x", "Qf"}, rows);
  json meta{{"a", pot.a},
            {"jump_order", pot.jump_order},
            {"jump_value", pot.jump_value},
            {"qf_left_a", pot.qf_left_a},
            {"f0", pot.f0},
            {"f0_prime", pot.f0_prime},
            {"degenerate", pot.degenerate}};
  regge::io::write_json(ctx.path("potential.json"), meta);
  return 0;
}

int run_kernel(Context& ctx) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  const int N = ctx.cfg.integer("numerics.kernel_n", 512);
  const double tol = ctx.cfg.number("numerics.kernel_tol", 1e-10);
  auto sol = regge::kernel::solve_kernel(pot, lambda, N, tol);
  regge::kernel::save_kernel(sol, (fs::path(ctx.out_dir) / "kernel.bin").string());
  ctx.artifacts.push_back("kernel.bin");

  const int stride = std::max(1, sol.grid.N / 128);  // plot-sized dump
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= sol.grid.N; i += stride)
    for (int j = 0; j <= i; j += stride) {
      const auto idx = sol.grid.idx(i, j);
      const double dKx = 0.5 * (sol.dKu[idx] - sol.dKv[idx]);
      const double dKt = 0.5 * (sol.dKu[idx] + sol.dKv[idx]);
      rows.push_back({sol.grid.x(i, j), sol.grid.t(i, j), sol.K[idx], dKx, dKt});
    }
  regge::io::write_csv(ctx.path("kernel.csv"), {"x", "t", "K", "dKx", "dKt"}, rows);
  auto je = regge::kernel::jump_estimate_detail(sol, sol.p);
  json meta{{"N", sol.grid.N},          {"a", sol.grid.a},
            {"lambda", sol.lambda},     {"p", sol.p},
            {"iterations", sol.iterations}, {"residual", sol.residual},
            {"contraction_M", sol.contraction_M},
            {"jump_s_p_analytic", je.analytic},
            {"jump_s_p_numeric", je.numeric},
            {"jump_rel_dev", je.rel_dev}};
  regge::io::write_json(ctx.path("kernel.json"), meta);
  return 0;
}

int run_jost(Context& ctx, const std::string& grid_arg) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  auto ker = make_kernel(ctx, pot);
  const std::string gs = !grid_arg.empty()
                             ? grid_arg
                             : ctx.cfg.text("jost.grid", "-10:2:-5:5:41");
  int n = 0;
  auto zs = parse_grid(gs, n);
  std::vector<cplx> vals(zs.size());
  regge::parallel_for(zs.size(), [&](std::size_t i) {
    vals[i] = regge::jost::psi(zs[i], ker, lambda);
  });
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < zs.size(); ++i)
    rows.push_back({zs[i].real(), zs[i].imag(), vals[i].real(), vals[i].imag(),
                    std::abs(vals[i])});
  regge::io::write_csv(ctx.path("jost.csv"),
                       {"re", "im", "psi_re", "psi_im", "abs_psi"}, rows);
  return 0;
}

json run_metadata(Context& ctx, const regge::kernel::KernelSolution& ker) {
  return json{{"lambda", ker.lambda},
              {"a", ker.grid.a},
              {"p", ker.p},
              {"kernel_n", ker.grid.N},
              {"kernel_tol", ctx.cfg.number("numerics.kernel_tol", 1e-10)},
              {"pole_tol", ctx.cfg.number("numerics.pole_tol", 1e-10)},
              {"config_hash", regge::io::config_hash(ctx.cfg)}};
}

int run_poles(Context& ctx) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  auto ker = make_kernel(ctx, pot);
  auto region = pole_region(ctx, ker);
  regge::poles::SearchOptions so;
  so.tol = ctx.cfg.number("numerics.pole_tol", 1e-10);
  auto res = regge::poles::locate_poles(region, ker, lambda, so);
  regge::io::write_pole_csv(ctx.path("poles.csv"), res.poles);
  json meta = run_metadata(ctx, ker);
  meta["region"] = {{"re0", region.re0}, {"re1", region.re1},
                    {"im0", region.im0}, {"im1", region.im1}};
  meta["cells_processed"] = res.cells_processed;
  json uncovered = json::array();
  for (const auto& r : res.uncovered)
    uncovered.push_back({{"re0", r.re0}, {"re1", r.re1}, {"im0", r.im0}, {"im1", r.im1}});
  meta["uncovered_cells"] = uncovered;
  regge::io::write_json(ctx.path("poles.json"), regge::io::pole_json(res.poles, meta));
  return 0;
}

int run_verify_asymptotics(Context& ctx) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  auto ker = make_kernel(ctx, pot);
  auto region = pole_region(ctx, ker);
  regge::poles::SearchOptions so;
  so.attach_residues = false;
  auto res = regge::poles::locate_poles(region, ker, lambda, so);

  std::vector<std::vector<double>> arows;
  for (const auto& p : res.poles) {
    if (p.family != regge::poles::Family::alpha) continue;
    const double k = std::round(-p.location.real());
    arows.push_back({k, p.location.real(), p.location.imag(),
                     std::abs(p.location.real() + k)});
  }
  regge::io::write_csv(ctx.path("alpha_table.csv"), {"k", "re", "im", "dev"}, arows);

  std::vector<std::vector<double>> brows;
  json summary{{"alpha_count", arows.size()}};
  if (ker.jump_s_p != 0.0) {
    const double A = regge::poles::beta_constant_A(ker);
    std::vector<cplx> located;
    for (const auto& p : res.poles)
      if (p.family == regge::poles::Family::beta && p.location.imag() > 0)
        located.push_back(p.location);
    std::sort(located.begin(), located.end(),
              [](cplx a, cplx b) { return a.imag() < b.imag(); });
    auto preds = regge::poles::predict_beta(1, static_cast<int>(located.size()) + 4,
                                            A, ker.grid.a, ker.p);
    for (std::size_t i = 0; i < located.size(); ++i) {
      double best = 1e300;
      cplx pb;
      int jb = 0;
      for (std::size_t j = 0; j < preds.size(); ++j) {
        const double d = std::abs(located[i] - preds[j]);
        if (d < best) {
          best = d;
          pb = preds[j];
          jb = static_cast<int>(j) + 1;
        }
      }
      const double spacing =
          i + 1 < located.size() ? located[i + 1].imag() - located[i].imag() : 0.0;
      brows.push_back({static_cast<double>(jb), located[i].real(), located[i].imag(),
                       pb.real(), pb.imag(), best, spacing});
    }
    summary["A"] = A;
    summary["beta_pairs"] = located.size();
    summary["spacing_target"] = kPi / ker.grid.a;
  } else {
    summary["A"] = 0.0;
    summary["beta_pairs"] = 0;
  }
  regge::io::write_csv(ctx.path("beta_table.csv"),
                       {"j", "re", "im", "re_pred", "im_pred", "abs_dev", "im_spacing"},
                       brows);
  regge::io::write_json(ctx.path("verify_summary.json"), summary);
  return 0;
}

int run_wt_reconstruct(Context& ctx, const std::string& test_points) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  auto ker = make_kernel(ctx, pot);
  const double radius = ctx.cfg.number("numerics.truncation_radius", 20.0);
  regge::poles::Rect region{-radius - 0.6, 0.9, -radius - 0.6, radius + 0.6};
  regge::poles::SearchOptions so;
  auto res = regge::poles::locate_poles(region, ker, lambda, so);
  auto model = regge::wt::build_weyl_model(res.poles, ker, lambda, radius);

  std::vector<cplx> pts;
  if (!test_points.empty()) {
    std::ifstream in(test_points);
    if (!in)
      throw regge::ValidationError("cannot open test point file " + test_points,
                                   "wt.test_points");
    std::string line;
    std::getline(in, line);  // header z_re,z_im
    double re, im;
    while (std::getline(in, line))
      if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) == 2) pts.emplace_back(re, im);
  } else {
    for (int i = 0; i < 10; ++i)
      pts.emplace_back(0.35 + 0.45 * i, (i % 2 == 0 ? 0.3 : -0.4) + 0.05 * i);
  }

  std::vector<std::vector<double>> rows;
  for (cplx z : pts) {
    const cplx direct =
        regge::jost::psi_prime(z, ker, lambda) / regge::jost::psi(z, ker, lambda);
    const cplx recon = regge::wt::reconstruct_m(z, model);
    rows.push_back({z.real(), z.imag(), direct.real(), direct.imag(), recon.real(),
                    recon.imag(), std::abs(direct - recon)});
  }
  regge::io::write_csv(ctx.path("wt_reconstruct.csv"),
                       {"z_re", "z_im", "m_direct_re", "m_direct_im", "m_recon_re",
                        "m_recon_im", "abs_err"},
                       rows);
  json meta{{"truncation_radius", radius},
            {"poles_used", model.poles.size()},
            {"m0_re", model.m0.real()},
            {"m0_prime_re", model.m0_prime.real()},
            {"zero_pole_mode", model.zero_pole_mode}};
  regge::io::write_json(ctx.path("wt_summary.json"), meta);
  return 0;
}

int run_dtn(Context& ctx) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  const int n = ctx.cfg.required_integer("warp.n");
  auto ker = make_kernel(ctx, pot);
  const double radius = ctx.cfg.number("numerics.truncation_radius", 20.0);
  regge::poles::Rect region{-radius - 0.6, 0.9, -radius - 0.6, radius + 0.6};
  regge::poles::SearchOptions so;
  auto res = regge::poles::locate_poles(region, ker, lambda, so);
  auto model = regge::wt::build_weyl_model(res.poles, ker, lambda, radius);

  regge::model::TransversalSpectrum spectrum;
  if (ctx.cfg.has("dtn.mu_sq")) {
    std::vector<double> mu;
    for (const auto& v : ctx.cfg.doc["dtn"]["mu_sq"]) mu.push_back(v.get<double>());
    spectrum = regge::model::shifted_momenta(mu, n);
  } else {
    const int kmax = ctx.cfg.integer("dtn.kmax", 8);
    auto sph = regge::model::sphere_spectrum(n, kmax);
    std::vector<double> mu;
    std::vector<int> mult;
    for (auto& [m2, ml] : sph) {
      mu.push_back(m2);
      mult.push_back(ml);
    }
    spectrum = regge::model::shifted_momenta(mu, mult, n);
  }
  const bool use_recon = ctx.cfg.boolean("dtn.use_reconstruction", true);
  auto entries = regge::wt::dtn_multipliers(model, spectrum, pot.f0, pot.f0_prime, n,
                                            ker, lambda, use_recon);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < entries.size(); ++i)
    rows.push_back({spectrum.mu_sq[i], static_cast<double>(spectrum.multiplicity[i]),
                    entries[i].z_k, entries[i].value.real(), entries[i].value.imag(),
                    entries[i].pole_collision ? 1.0 : 0.0});
  regge::io::write_csv(ctx.path("dtn.csv"),
                       {"mu_sq", "multiplicity", "z_k", "lambda_re", "lambda_im",
                        "pole_collision"},
                       rows);
  return 0;
}

int run_marchenko(Context& ctx) {
  auto pot = make_potential(ctx);
  const double lambda = ctx.cfg.required_number("warp.lambda");
  auto ker = make_kernel(ctx, pot);
  regge::marchenko::RoundtripOptions opts;
  opts.assemble.k_max = ctx.cfg.number("numerics.kmax", 0.0);
  opts.assemble.k_step = ctx.cfg.number("numerics.k_step", 0.05);
  opts.assemble.lattice_h = ctx.cfg.number("numerics.lattice_h", 0.02);
  auto rep = regge::marchenko::marchenko_roundtrip(pot, ker, lambda, opts);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.x.size(); ++i)
    rows.push_back({rep.x[i], rep.qf_true[i], rep.qf_recovered[i],
                    std::abs(rep.qf_true[i] - rep.qf_recovered[i])});
  regge::io::write_csv(ctx.path("roundtrip.csv"),
                       {"x", "Qf_true", "Qf_recovered", "abs_err"}, rows);
  json bound = json::array();
  for (const auto& b : rep.bound_states)
    bound.push_back({{"alpha", b.alpha}, {"m", b.m}});
  json meta{{"l2_rel", rep.l2_rel},
            {"linf", rep.linf},
            {"k_max", rep.k_max},
            {"lattice_h", rep.lattice_h},
            {"tail_estimate", rep.tail_estimate},
            {"bound_states", bound}};
  regge::io::write_json(ctx.path("roundtrip_summary.json"), meta);
  return 0;
}

int dispatch(Context& ctx, const std::string& sub, const std::string& grid_arg,
             const std::string& test_points) {
  if (sub == "potential") return run_potential(ctx);
  if (sub == "kernel") return run_kernel(ctx);
  if (sub == "jost") return run_jost(ctx, grid_arg);
  if (sub == "poles") return run_poles(ctx);
  if (sub == "verify-asymptotics") return run_verify_asymptotics(ctx);
  if (sub == "wt-reconstruct") return run_wt_reconstruct(ctx, test_points);
  if (sub == "dtn") return run_dtn(ctx);
  if (sub == "marchenko-roundtrip") return run_marchenko(ctx);
  throw regge::ValidationError("unknown subcommand " + sub, "subcommand");
}

json error_json(const std::string& code, const std::string& msg,
                const std::string& field = "") {
  json e{{"error", {{"code", code}, {"message", msg}}}};
  if (!field.empty()) e["error"]["field"] = field;
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regge poles of warped-ball Schrodinger operators"};
  app.require_subcommand(1);

  std::string config_path, out_flag, grid_arg, test_points;
  std::vector<std::string> overrides;
  app.add_option("--config,-c", config_path, "JSON config file")->required();
  app.add_option("--out,-o", out_flag, "output directory (overrides config and env)");
  app.add_option("-D", overrides, "dotted config override, e.g. -D numerics.kernel_n=256");

  const std::vector<std::string> subs = {"potential",        "kernel",
                                         "jost",             "poles",
                                         "verify-asymptotics", "wt-reconstruct",
                                         "dtn",              "marchenko-roundtrip"};
  for (const auto& s : subs) {
    auto* c = app.add_subcommand(s);
    if (s == "jost") c->add_option("--grid", grid_arg, "re0:re1:im0:im1:n");
    if (s == "wt-reconstruct")
      c->add_option("--test-points", test_points, "CSV with header z_re,z_im");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  Context ctx;
  ctx.subcommand = sub;
  ctx.t0 = std::chrono::steady_clock::now();
  try {
    ctx.cfg = regge::io::load_config(config_path);
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw regge::ValidationError("override must be key=value", "-D");
      ctx.cfg.apply_override(ov.substr(0, eq), ov.substr(eq + 1));
    }
    regge::set_worker_count(ctx.cfg.integer("numerics.workers", 0));

    ctx.out_dir = ctx.cfg.text("outputs.dir", "out");
    if (const char* env = std::getenv("WARPREGGE_OUTPUT_DIR")) ctx.out_dir = env;
    if (!out_flag.empty()) ctx.out_dir = out_flag;
    fs::create_directories(ctx.out_dir);

    const int rc = dispatch(ctx, sub, grid_arg, test_points);
    ctx.write_manifest();
    return rc;
  } catch (const regge::ValidationError& e) {
    std::cout << error_json("validation", e.what(), e.field).dump(2) << "\n";
    return 2;
  } catch (const regge::ModelError& e) {
    std::cout << error_json("model", e.what()).dump(2) << "\n";
    return 3;
  } catch (const regge::DomainError& e) {
    std::cout << error_json("domain", e.what()).dump(2) << "\n";
    return 4;
  } catch (const regge::NumericError& e) {
    std::cout << error_json("numeric", e.what()).dump(2) << "\n";
    return 4;
  } catch (const regge::ResolutionError& e) {
    std::cout << error_json("resolution", e.what()).dump(2) << "\n";
    return 5;
  } catch (const regge::DataError& e) {
    std::cout << error_json("data", e.what()).dump(2) << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cout << error_json("internal", e.what()).dump(2) << "\n";
    return 1;
  }
}
