// linelab command line: sampling, set volumes, line measurement, long-line
// search, TV estimation, claim verification, and scaling experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ll/diagnostics.hpp"
#include "ll/harness.hpp"
#include "ll/samplers.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerifyFail = 3;

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return ll::kInfP;
  return std::stod(s);
}

ll::Vec parse_vec(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  ll::Vec v;
  double x;
  while (is >> x) v.push_back(x);
  return v;
}

ll::MembershipSet build_set(const std::string& kind, int n, const std::string& p_text,
                            double a, long budget, ll::RandomStream& stream) {
  if (kind == "ball-shell") return ll::ball_shell_construction(n);
  if (kind == "cube") return ll::cube_set(n, 0.5);
  if (kind == "euclidean-ball")
    return ll::euclidean_ball_set(n, 5.0 * std::sqrt(double(n)));
  if (kind == "cube-shell" || kind == "gaussian-shell") {
    const ll::ProductMeasure mu =
        kind == "cube-shell" ? ll::uniform_cube_product(n) : ll::gaussian_product(n);
    return ll::product_norm_shell(mu, 1.0 - a, stream, budget);
  }
  if (kind == "lp-shell") {
    const double p = parse_p(p_text);
    const double c0 = ll::calibrate_lp_shell(p, n, a, stream, budget);
    return ll::lp_shell(p, n, c0);
  }
  if (kind == "hybrid-shell") {
    const double p = parse_p(p_text);
    const ll::HybridCalibration cal = ll::calibrate_hybrid_shell(p, n, a, stream, budget);
    return ll::hybrid_shell(p, n, cal.C0, cal.E);
  }
  if (kind == "striped") return ll::striped_cube_shell(n, 0.5, 0.02, 1e-4, stream, budget);
  throw CLI::ValidationError("--kind", "unknown set kind " + kind);
}

int run(int argc, char** argv) {
  CLI::App app{"linelab: long lines in subsets of large measure"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw points, CSV to stdout");
  std::string s_kind = "lp-ball", s_p = "2";
  int s_n = 8, s_count = 10;
  std::uint64_t s_seed = 1;
  sample->add_option("--kind", s_kind, "lp-ball | gaussian | cube | simplex | mixture");
  sample->add_option("--p", s_p, "norm index (number or inf)");
  sample->add_option("--n", s_n)->check(CLI::PositiveNumber);
  sample->add_option("--count", s_count)->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed);

  // shell-volume
  auto* vol = app.add_subcommand("shell-volume", "MC volume of a set");
  std::string v_kind = "ball-shell", v_p = "2";
  int v_n = 10;
  double v_a = 0.5;
  long v_budget = 100000;
  std::uint64_t v_seed = 1;
  vol->add_option("--kind", v_kind);
  vol->add_option("--p", v_p);
  vol->add_option("--n", v_n)->check(CLI::PositiveNumber);
  vol->add_option("--a", v_a);
  vol->add_option("--budget", v_budget);
  vol->add_option("--seed", v_seed);

  // measure-line
  auto* ml = app.add_subcommand("measure-line", "length of a segment inside a set");
  std::string m_kind = "ball-shell", m_p = "2", m_origin, m_dir;
  int m_n = 10;
  double m_a = 0.5, m_tmax = 1.0;
  long m_budget = 100000, m_grid = 1024;
  std::uint64_t m_seed = 1;
  ml->add_option("--kind", m_kind);
  ml->add_option("--p", m_p);
  ml->add_option("--n", m_n)->check(CLI::PositiveNumber);
  ml->add_option("--a", m_a);
  ml->add_option("--origin", m_origin, "comma-separated coordinates")->required();
  ml->add_option("--dir", m_dir, "comma-separated direction")->required();
  ml->add_option("--tmax", m_tmax);
  ml->add_option("--grid", m_grid);
  ml->add_option("--budget", m_budget);
  ml->add_option("--seed", m_seed);

  // find-line
  auto* fl = app.add_subcommand("find-line", "certify a long segment in a regime set");
  std::string f_regime = "cube", f_p = "4";
  int f_n = 64, f_trials = 50, f_ugrid = 64;
  double f_a = 0.5;
  long f_budget = 50000;
  std::uint64_t f_seed = 1;
  fl->add_option("--regime", f_regime, "cube | gaussian | mixture | lp");
  fl->add_option("--p", f_p);
  fl->add_option("--n", f_n)->check(CLI::PositiveNumber);
  fl->add_option("--a", f_a);
  fl->add_option("--trials", f_trials);
  fl->add_option("--u-grid", f_ugrid);
  fl->add_option("--budget", f_budget);
  fl->add_option("--seed", f_seed);

  // tv-estimate
  auto* tv = app.add_subcommand("tv-estimate", "TV distance of a scheme's push-forward");
  std::string t_regime = "cube", t_p = "4";
  int t_n = 64;
  double t_a = 0.5;
  long t_samples = 2000;
  std::uint64_t t_seed = 1;
  tv->add_option("--regime", t_regime, "cube | gaussian | mixture | lp | simplex");
  tv->add_option("--p", t_p);
  tv->add_option("--n", t_n)->check(CLI::PositiveNumber);
  tv->add_option("--a", t_a);
  tv->add_option("--samples", t_samples);
  tv->add_option("--seed", t_seed);

  // verify
  auto* ver = app.add_subcommand("verify", "run claim checks, CSV to stdout");
  std::string c_claim = "all", c_p = "";
  int c_n = 0;
  long c_budget = 0;
  int c_budget_percent = 100;
  std::uint64_t c_seed = 1;
  ver->add_option("--claim", c_claim, "claim id or 'all'");
  ver->add_option("--p", c_p, "override p for a single claim");
  ver->add_option("--n", c_n, "override n for a single claim");
  ver->add_option("--budget", c_budget, "override samples for a single claim");
  ver->add_option("--budget-percent", c_budget_percent, "scale default budgets");
  ver->add_option("--seed", c_seed);

  // scaling
  auto* sc = app.add_subcommand("scaling", "run a scaling experiment from a config file");
  std::string cfg_path;
  sc->add_option("--config", cfg_path, "key = value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::cout.precision(10);
  if (*sample) {
    ll::RandomStream stream(s_seed);
    const double p = parse_p(s_p);
    for (int i = 0; i < s_count; ++i) {
      ll::Vec x;
      if (s_kind == "lp-ball") x = ll::sample_lp_ball(ll::LpBall(p, s_n), stream);
      else if (s_kind == "gaussian") x = ll::sample_product(ll::gaussian_product(s_n), stream);
      else if (s_kind == "cube") x = ll::sample_product(ll::uniform_cube_product(s_n), stream);
      else if (s_kind == "simplex") x = ll::sample_simplex(s_n, stream);
      else if (s_kind == "mixture") x = ll::sample_gaussian_mixture(s_n, stream);
      else throw CLI::ValidationError("--kind", "unknown measure kind " + s_kind);
      for (std::size_t j = 0; j < x.size(); ++j) std::cout << (j ? "," : "") << x[j];
      std::cout << '\n';
    }
    return 0;
  }
  if (*vol) {
    ll::RandomStream calib = ll::RandomStream(v_seed).child(0);
    const ll::MembershipSet set = build_set(v_kind, v_n, v_p, v_a, v_budget, calib);
    ll::RandomStream stream = ll::RandomStream(v_seed).child(1);
    const ll::MeanStderr m = ll::mc_mass(set, v_budget, stream);
    std::cout << "kind=" << v_kind << " n=" << v_n << " volume=" << m.mean
              << " stderr=" << m.stderr_ << '\n';
    return 0;
  }
  if (*ml) {
    ll::RandomStream calib = ll::RandomStream(m_seed).child(0);
    const ll::MembershipSet set = build_set(m_kind, m_n, m_p, m_a, m_budget, calib);
    const ll::Vec o = parse_vec(m_origin), d = parse_vec(m_dir);
    if (int(o.size()) != m_n || int(d.size()) != m_n)
      throw CLI::ValidationError("--origin/--dir", "dimension mismatch with --n");
    ll::RandomStream stream = ll::RandomStream(m_seed).child(1);
    const ll::LineMeasureResult res =
        ll::measure_segment(set, ll::Segment{o, d, m_tmax}, m_grid, &stream);
    std::cout << "length=" << res.covered_length << " fraction=" << res.fraction
              << " exact=" << (res.exact ? 1 : 0) << '\n';
    return 0;
  }
  if (*fl) {
    ll::ExperimentConfig cfg;
    cfg.regime = f_regime;
    cfg.p = parse_p(f_p);
    cfg.a = f_a;
    cfg.n_list = {f_n};
    cfg.trials = f_trials;
    cfg.u_grid = f_ugrid;
    cfg.seed = f_seed;
    cfg.calib_budget = f_budget;
    ll::RandomStream calib = ll::RandomStream(f_seed).child(0);
    const ll::RegimeInstance inst = ll::build_regime(cfg, f_n, calib);
    ll::RandomStream stream = ll::RandomStream(f_seed).child(1);
    const ll::LineCertificate cert =
        ll::find_long_line(inst.set, inst.scheme, f_trials, f_ugrid, stream);
    std::cout << "certified_length=" << cert.certified_length
              << " fraction=" << cert.fraction << " dir_norm=" << ll::norm2(cert.segment.dir)
              << " degenerate=" << (cert.degenerate ? 1 : 0) << '\n'
              << "scheme: " << cert.scheme_desc << '\n'
              << "set: " << inst.set.desc.to_text() << '\n';
    return 0;
  }
  if (*tv) {
    ll::PerturbationScheme scheme;
    if (t_regime == "cube") scheme = ll::default_params(ll::kInfP, t_n, t_a);
    else if (t_regime == "gaussian")
      scheme = ll::default_product_params(ll::gaussian_product(t_n), t_a);
    else if (t_regime == "mixture") scheme = ll::MixtureScheme{t_n, 1.0};
    else if (t_regime == "simplex") scheme = ll::default_params(1.0, t_n, t_a);
    else if (t_regime == "lp") scheme = ll::default_params(parse_p(t_p), t_n, t_a);
    else throw CLI::ValidationError("--regime", "unknown regime " + t_regime);
    ll::RandomStream stream(t_seed);
    const ll::TvEstimate est = ll::tv_estimate(scheme, t_samples, stream);
    std::cout << "tv=" << est.tv << " stderr=" << est.stderr_
              << " density_term=" << est.density_term << " escape_term=" << est.escape_term
              << '\n';
    return 0;
  }
  if (*ver) {
    std::vector<ll::CheckReport> reports;
    if (c_claim == "all") {
      reports = ll::verify_all(c_seed, c_budget_percent);
    } else {
      ll::CheckParams params;
      params.seed = c_seed;
      if (!c_p.empty()) params.p = parse_p(c_p);
      if (c_n > 0) params.n = c_n;
      if (c_budget > 0) params.budget = c_budget;
      reports.push_back(ll::check_claim(c_claim, params));
    }
    std::cout << ll::check_csv_header() << '\n';
    bool any_fail = false;
    for (const ll::CheckReport& r : reports) {
      std::cout << ll::to_csv_row(r) << '\n';
      any_fail = any_fail || r.verdict == ll::Verdict::fail;
    }
    return any_fail ? kExitVerifyFail : 0;
  }
  // scaling
  const ll::ExperimentConfig cfg = ll::parse_config_file(cfg_path);
  const ll::ResultRecord rec = ll::run_scaling(cfg);
  const std::string base = cfg.output_dir + "/" + rec.experiment_id;
  {
    std::ofstream csv(base + ".csv");
    csv << ll::scaling_csv(rec);
    std::ofstream json(base + ".json");
    json << ll::result_json(rec) << '\n';
  }
  std::cout << ll::scaling_csv(rec);
  if (rec.lower_fit.valid)
    std::cout << "lower_fit slope=" << rec.lower_fit.slope
              << " stderr=" << rec.lower_fit.slope_stderr << " r2=" << rec.lower_fit.r2
              << '\n';
  if (rec.upper_fit.valid)
    std::cout << "upper_fit slope=" << rec.upper_fit.slope
              << " stderr=" << rec.upper_fit.slope_stderr << " r2=" << rec.upper_fit.r2
              << '\n';
  std::cout << "written: " << base << ".csv " << base << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
