#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "ell2/ck.hpp"
#include "ell2/cutoff.hpp"
#include "ell2/dbar.hpp"
#include "ell2/errors.hpp"
#include "ell2/measure.hpp"
#include "ell2/sobolev.hpp"
#include "ell2/surface.hpp"
#include "ell2/verify.hpp"
#include "io.hpp"

using namespace ell2;
using nlohmann::json;

namespace {

struct Globals {
  int weight_count = 8;
  double weight_ratio = 0.5;
  std::uint64_t seed = 20240601;
  int workers = 0;
  // set when given on the command line; these then win over a config file
  CLI::Option* seed_opt = nullptr;
  CLI::Option* weights_opt = nullptr;
  CLI::Option* ratio_opt = nullptr;

  WeightSequence weights() const { return WeightSequence::geometric(weight_count, weight_ratio); }
  SampleStream stream(int dims) const {
    SampleStream s;
    s.seed = seed;
    s.dims = dims;
    return s;
  }
};

std::string g17(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

TailedPoint parse_point(const std::vector<double>& head, const std::vector<double>& tail) {
  TailedPoint p;
  p.head = head;
  if (tail.size() == 2) p.tail = PowerGeometric::geometric(tail[0], tail[1]);
  else if (tail.size() == 3) p.tail = PowerGeometric{tail[0], tail[1], tail[2]};
  else if (!tail.empty()) throw Error(ErrorKind::ConfigError, "tail takes scale,ratio[,exponent]");
  else p.tail = PowerGeometric::zero();
  return p;
}

int cmd_verify(const std::string& config, const std::vector<std::string>& suites, const std::string& out,
               const std::string& format, const Globals& g) {
  RunConfig cfg = config.empty() ? RunConfig{} : parse_config(io::read_file(config));
  if (!suites.empty()) cfg.suites = suites;
  if (!out.empty()) cfg.out = out;
  if (!format.empty()) cfg.format = format;
  if (g.seed_opt->count()) cfg.seed = g.seed;
  if (g.weights_opt->count()) cfg.weight_count = g.weight_count;
  if (g.ratio_opt->count()) cfg.weight_ratio = g.weight_ratio;
  apply_env_overrides(cfg);
  cfg.validate();
  if (g.workers > 0) set_worker_count(g.workers);
  Report rep = run_suite(cfg);
  if (!cfg.out.empty()) emit(rep, cfg.out, cfg.format);
  else std::cout << (cfg.format == "json" ? to_json(rep) + "\n" : to_csv(rep));
  for (auto& r : rep.records)
    std::cerr << (r.pass ? "pass " : "FAIL ") << r.suite << "/" << r.check << " (" << g17(r.wall_seconds) << " s)\n";
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ell2: numerical checks for Gaussian analysis on l2"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may also follow the subcommand
  Globals g;
  g.weights_opt = app.add_option("--weights", g.weight_count, "number of explicit weights a_i = ratio^i");
  g.ratio_opt = app.add_option("--ratio", g.weight_ratio, "weight ratio");
  g.seed_opt = app.add_option("--seed", g.seed, "random seed");
  app.add_option("--workers", g.workers, "worker threads (results do not depend on it)");

  int rc = 0;

  // verify
  auto* verify = app.add_subcommand("verify", "acceptance suites");
  verify->require_subcommand(1);
  auto* vrun = verify->add_subcommand("run", "run suites and write a report");
  std::string v_config, v_out, v_format;
  std::vector<std::string> v_suites;
  vrun->add_option("--config", v_config, "JSON run configuration");
  vrun->add_option("--suite", v_suites, "suite name or 'all' (repeatable)");
  vrun->add_option("--out", v_out, "report path");
  vrun->add_option("--format", v_format, "csv or json");
  vrun->callback([&] { rc = cmd_verify(v_config, v_suites, v_out, v_format, g); });

  // measure
  auto* measure = app.add_subcommand("measure", "product Gaussian measures");
  measure->require_subcommand(1);
  double m_a = 0.5, m_r = 1.0, m_s = 1.0, m_x1 = 0.0, m_x2 = 0.0, m_c = 0.0;
  auto* mh = measure->add_subcommand("hellinger", "1-D Hellinger integral");
  mh->add_option("--a", m_a);
  mh->add_option("--r", m_r);
  mh->add_option("--s", m_s);
  mh->add_option("--x1", m_x1);
  mh->add_option("--x2", m_x2);
  mh->callback([&] {
    json o = {{"inputs", {{"a", m_a}, {"r", m_r}, {"s", m_s}, {"x1", m_x1}, {"x2", m_x2}}},
              {"value", hellinger_1d(m_a, m_r, m_s, m_x1, m_x2)}};
    std::cout << o.dump() << "\n";
  });
  std::vector<double> c_h1, c_h2, c_t1, c_t2;
  auto* mc = measure->add_subcommand("classify", "equivalence or singularity of two shifted product Gaussians");
  mc->add_option("--r", m_r);
  mc->add_option("--s", m_s);
  mc->add_option("--x1", c_h1, "explicit coordinates of the first shift")->delimiter(',');
  mc->add_option("--x2", c_h2, "explicit coordinates of the second shift")->delimiter(',');
  mc->add_option("--tail1", c_t1, "scale,ratio[,exponent] beyond the head")->delimiter(',');
  mc->add_option("--tail2", c_t2, "scale,ratio[,exponent] beyond the head")->delimiter(',');
  mc->callback([&] {
    ShiftedGaussianPair p{g.weights(), m_r, m_s, parse_point(c_h1, c_t1), parse_point(c_h2, c_t2)};
    DichotomyVerdict v = classify_pair(p);
    json o = {{"inputs", {{"r", m_r}, {"s", m_s}, {"x1", c_h1}, {"x2", c_h2}}},
              {"value", v.hellinger},
              {"log_value", std::isfinite(v.log_hellinger) ? json(v.log_hellinger) : json("-inf")},
              {"verdict", to_string(v.verdict)}};
    std::cout << o.dump() << "\n";
  });
  long f_samples = 0;
  auto* mf = measure->add_subcommand("fernique", "int exp(c |x|^2) dP_r");
  mf->add_option("--c", m_c)->required();
  mf->add_option("--r", m_r);
  mf->add_option("--samples", f_samples, "also estimate by Monte Carlo");
  mf->callback([&] {
    ProductGaussian pg{g.weights(), m_r};
    FerniqueResult f = fernique_integral(pg, m_c);
    json o = {{"inputs", {{"c", m_c}, {"r", m_r}}},
              {"value", f.finite ? json(f.value) : json("inf")},
              {"threshold", f.threshold},
              {"verdict", f.finite ? "finite" : "divergent"}};
    if (f_samples > 0) {
      double c = m_c;
      Estimate e = mc_integrate(pg, [c](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v * v;
        return std::exp(c * s);
      }, g.stream(g.weight_count), f_samples);
      o["mc_mean"] = e.mean;
      o["mc_std_error"] = e.std_error;
    }
    std::cout << o.dump() << "\n";
  });

  // cutoff
  auto* cutoff = app.add_subcommand("cutoff", "smooth cut-off functions");
  cutoff->require_subcommand(1);
  int cu_k = 1, cu_points = 20, cu_dims = 8;
  long cu_samples = 100000;
  auto* cv = cutoff->add_subcommand("verify", "sample K_k, the exterior and the transition shell");
  cv->add_option("--k", cu_k);
  cv->add_option("--points", cu_points, "points per class");
  cv->add_option("--dims", cu_dims);
  cv->add_option("--samples", cu_samples);
  cv->callback([&] {
    CutoffConfig cc{g.weights(), cu_dims, cu_samples, g.stream(cu_dims)};
    CutoffSystem cut(cc);
    Rng rng(chunk_seed(g.seed, 77));
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> U;
    auto point = [&](double rho) {
      std::vector<double> u(cu_dims);
      double nn = 0;
      for (auto& v : u) {
        v = nd(rng);
        nn += v * v;
      }
      for (int i = 0; i < cu_dims; ++i) u[i] *= rho * std::sqrt(cut.c()[i] / nn);
      return u;
    };
    double C2 = cut.C() * cut.C(), lo = cu_k, hi = cu_k + 2.0 * cut.N1();
    std::cout << "class,rho,X,gradient_bound,std_error,C_squared\n";
    for (int cls = 0; cls < 3; ++cls)
      for (int p = 0; p < cu_points; ++p) {
        double rho = cls == 0 ? lo * std::pow(U(rng), 1.0 / cu_dims) : cls == 1 ? lo + (hi - lo) * U(rng) : hi + 3 * U(rng);
        auto x = point(rho);
        auto gb = cut.gradient_bound(cu_k, x);
        static const char* names[] = {"inside", "shell", "outside"};
        std::cout << names[cls] << ',' << g17(rho) << ',' << g17(cut.X(cu_k, x)) << ',' << g17(gb.value) << ','
                  << g17(gb.std_error) << ',' << g17(C2) << '\n';
      }
  });

  // surface
  auto* surface = app.add_subcommand("surface", "surfaces, surface measure and Gauss-Green");
  surface->require_subcommand(1);
  std::string s_scene;
  long s_samples = 200000;
  auto* sm = surface->add_subcommand("measure", "surface measure of a graph chart over a rectangle");
  sm->add_option("--scene", s_scene, "JSON {graph, region}")->required();
  sm->add_option("--samples", s_samples);
  sm->callback([&] {
    json j = json::parse(io::read_file(s_scene));
    GraphSurface gs = io::graph_from_json(j.at("graph"));
    double v = surface_measure(gs, g.weights(), io::region_from_json(j.value("region", json::array())),
                               g.stream(g.weight_count), s_samples);
    std::cout << "n_I,measure\n" << g17(n_I(gs)) << ',' << g17(v) << '\n';
  });
  int s_i = 1;
  auto* sg = surface->add_subcommand("gauss-green", "both sides of Gauss-Green for a polynomial");
  sg->add_option("--scene", s_scene, "JSON {domain, f, i}")->required();
  sg->add_option("--samples", s_samples);
  sg->callback([&] {
    json j = json::parse(io::read_file(s_scene));
    GaussGreenDomain d = io::domain_from_json(j.at("domain"));
    RealPoly f = io::poly_from_json(j.at("f"));
    int i = j.value("i", s_i);
    GaussGreenResult r = gauss_green_check(g.weights(), d, f, i, g.stream(d.dims), s_samples);
    std::cout << "lhs,volume,boundary,residual,std_error\n"
              << g17(r.lhs) << ',' << g17(r.volume) << ',' << g17(r.boundary) << ',' << g17(r.residual) << ','
              << g17(r.std_error) << '\n';
  });
  auto* ss = surface->add_subcommand("stokes", "Stokes on a flat piece of co-dimension <= 2");
  ss->add_option("--scene", s_scene, "JSON {dims, comp, offset, region, f, i}")->required();
  ss->callback([&] {
    json j = json::parse(io::read_file(s_scene));
    StokesScene sc;
    sc.dims = j.at("dims").get<int>();
    sc.comp = j.at("comp").get<std::vector<long>>();
    sc.offset = j.at("offset").get<std::vector<double>>();
    sc.region = io::domain_from_json(j.at("region"));
    StokesResult r = stokes_check(g.weights(), sc, io::poly_from_json(j.at("f")), j.value("i", 1));
    std::cout << "surface,boundary,residual\n" << g17(r.surface) << ',' << g17(r.boundary) << ',' << g17(r.residual) << '\n';
  });

  // dbar
  auto* dbar = app.add_subcommand("dbar", "the dbar complex");
  dbar->require_subcommand(1);
  int d_trials = 20, d_cap = 6, d_n = 1;
  double d_r = 1.0;
  auto* de = dbar->add_subcommand("estimate", "basic estimate on random (0,1)-forms");
  de->add_option("--trials", d_trials);
  de->add_option("--r", d_r);
  de->callback([&] {
    Rng rng(chunk_seed(g.seed, 91));
    std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), var(1, 3), side(0, 1);
    std::cout << "lhs,rhs,ratio\n";
    for (int k = 0; k < d_trials; ++k) {
      Form f(0, 1);
      for (int j = 1; j <= 3; ++j) {
        CPoly p;
        for (int t = 0; t < 3; ++t) {
          CMono m;
          for (int e = deg(rng); e > 0; --e) {
            int v = var(rng);
            auto [pz, qz] = m.exponents(v);
            m = side(rng) ? m.with(v, pz + 1, qz) : m.with(v, pz, qz + 1);
          }
          p.add(m, cplx(coef(rng), coef(rng)));
        }
        f.add({}, {j}, p);
      }
      if (f.is_zero()) continue;
      BasicEstimate e = basic_estimate_check(f, g.weights(), d_r);
      std::cout << g17(e.lhs) << ',' << g17(e.rhs) << ',' << g17(e.lhs / e.rhs) << '\n';
    }
  });
  std::string d_input;
  auto* ds = dbar->add_subcommand("solve", "least-norm solution of T u = f");
  ds->add_option("--input", d_input, "JSON form")->required();
  ds->add_option("--cap", d_cap);
  ds->add_option("--n", d_n, "active complex coordinates");
  ds->add_option("--r", d_r);
  ds->callback([&] {
    Form f = io::form_from_json(json::parse(io::read_file(d_input)));
    DbarSolution s = solve_dbar(f, g.weights(), d_r, d_cap, d_n);
    std::cout << "lhs,rhs,ratio\n"
              << g17(s.norm_ratio) << ',' << g17(s.bound) << ',' << g17(s.norm_ratio / s.bound) << '\n';
    std::cerr << json{{"u", io::to_json(s.u.pruned(1e-14))}, {"residual", s.residual}, {"basis_size", s.basis_size}}.dump()
              << "\n";
  });

  // ck
  auto* ck = app.add_subcommand("ck", "power-series Cauchy problems");
  ck->require_subcommand(1);
  std::string k_problem;
  int k_cap = 12, k_n = 3;
  double k_p = 1.0;
  std::vector<double> k_v;
  auto* ks = ck->add_subcommand("solve", "solve u_t = sum A_i d_i u + A_0 u, u(0) = Phi");
  ks->add_option("--problem", k_problem, "JSON problem")->required();
  ks->add_option("--cap", k_cap, "total degree cap");
  ks->add_option("--n", k_n, "active spatial coordinates");
  ks->add_option("--p", k_p, "gauge exponent of the majorant frame");
  ks->add_option("--v", k_v, "point near infinity (head; tail continues geometrically)")->delimiter(',');
  ks->callback([&] {
    LinearCauchyProblem<double> pb = io::problem_from_json(json::parse(io::read_file(k_problem)), k_cap);
    MonomialSeries<double> u = ck_solve(pb, k_cap, k_n);
    json o = {{"solution", io::to_json(u)}, {"residual_zero", ck_residual(pb, u, k_cap, k_n).is_zero()}};
    TailedPoint v;
    if (k_v.empty())
      for (int i = 1; i <= k_n; ++i) v.head.push_back(std::ldexp(1.0, i));
    else
      v.head = k_v;
    double last = v.head.back(), prev = v.head.size() > 1 ? v.head[v.head.size() - 2] : last / 2;
    v.tail = PowerGeometric::geometric(last / std::pow(last / prev, double(v.head.size())), last / prev);
    try {
      MajorantFrame fr = majorant_frame(v, k_p);
      Certificate c = convergence_certificate(pb, fr, k_cap, k_n);
      o["certificate"] = {{"entire", c.entire}, {"radius", c.entire ? json("inf") : json(c.radius)}, {"ratios", c.ratios}};
    } catch (const Error& e) {
      o["certificate"] = {{"error", e.what()}};
    }
    std::cout << o.dump(2) << "\n";
  });

  // sobolev
  auto* sob = app.add_subcommand("sobolev", "Gaussian Sobolev spaces");
  sob->require_subcommand(1);
  std::string so_poly;
  int so_m = 1, so_n = 10, so_dims = 6;
  long so_points = 10000;
  auto* sn = sob->add_subcommand("norm", "W^{m,2} norm of a polynomial");
  sn->add_option("--poly", so_poly, "JSON polynomial")->required();
  sn->add_option("--m", so_m);
  sn->callback([&] {
    RealPoly f = io::poly_from_json(json::parse(io::read_file(so_poly)));
    std::cout << "m,norm\n" << so_m << ',' << g17(sobolev_norm(f, so_m, g.weights())) << '\n';
  });
  auto* st = sob->add_subcommand("translate-demo", "translation is unbounded on H^1");
  st->add_option("--n", so_n, "largest shift");
  st->callback([&] {
    std::cout << "n,ratio,lower,upper\n";
    for (int n = 0; n <= so_n; ++n) {
      UnboundednessRow r = translation_unboundedness_demo(n, g.weights().a(1));
      std::cout << r.n << ',' << g17(r.ratio) << ',' << g17(r.lower) << ',' << g17(r.upper) << '\n';
    }
  });
  auto* sc = sob->add_subcommand("chart-check", "flattening chart of the unit sphere near e_1");
  sc->add_option("--points", so_points);
  sc->add_option("--dims", so_dims);
  sc->callback([&] {
    SphereChart c(g.weights());
    ChartSampleReport r = chart_sample_check(c, so_dims, so_points, g.stream(so_dims));
    std::cout << "points,max_product_defect,J_min,J_max,J1_min,J1_max,C1,C2\n"
              << r.points << ',' << g17(r.max_product_defect) << ',' << g17(r.J_min) << ',' << g17(r.J_max) << ','
              << g17(r.J1_min) << ',' << g17(r.J1_max) << ',' << g17(c.C1()) << ',' << g17(c.C2()) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::IoError ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
