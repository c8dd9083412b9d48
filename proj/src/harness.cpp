#include "ll/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ll/samplers.hpp"
#include "ll/stats.hpp"

namespace ll {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<int> out;
  int v;
  while (is >> v) out.push_back(v);
  return out;
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfP;
  return std::stod(s);
}

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os.precision(10);
  os << p;
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "regime=" << c.regime << "\np=" << fmt_p(c.p) << "\na=" << fmt(c.a) << "\nn=";
  for (std::size_t i = 0; i < c.n_list.size(); ++i) os << (i ? " " : "") << c.n_list[i];
  os << "\ntrials=" << c.trials << "\nu_grid=" << c.u_grid << "\nseed=" << c.seed
     << "\ncalib_budget=" << c.calib_budget << "\nsup_grid=" << c.sup_grid
     << "\neps=" << fmt(c.eps) << "\nbump=" << c.bump << "\n";
  return os.str();
}

void check_config(const ExperimentConfig& c) {
  if (c.a <= 0.0 || c.a >= 1.0) throw std::invalid_argument("config: need a in (0,1)");
  if (c.n_list.empty()) throw std::invalid_argument("config: empty n list");
  for (std::size_t i = 0; i + 1 < c.n_list.size(); ++i)
    if (c.n_list[i] >= c.n_list[i + 1])
      throw std::invalid_argument("config: n list must be strictly increasing");
  if (c.regime != "cube" && c.regime != "gaussian" && c.regime != "mixture" &&
      c.regime != "lp")
    throw std::invalid_argument("config: unknown regime " + c.regime);
  if (c.regime == "lp" && (c.p <= 1.0 || std::isinf(c.p)))
    throw std::invalid_argument("config: lp regime needs finite p > 1");
  if (c.trials < 1 || c.u_grid < 1) throw std::invalid_argument("config: trials/u_grid >= 1");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) continue;
    if (key == "regime") c.regime = val;
    else if (key == "p") c.p = parse_p(val);
    else if (key == "a") c.a = std::stod(val);
    else if (key == "n") c.n_list = parse_int_list(val);
    else if (key == "trials") c.trials = std::stoi(val);
    else if (key == "u_grid") c.u_grid = std::stoi(val);
    else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "calib_budget") c.calib_budget = std::stol(val);
    else if (key == "sup_grid") c.sup_grid = std::stol(val);
    else if (key == "eps") c.eps = std::stod(val);
    else if (key == "bump") c.bump = val;
    else if (key == "output_dir") c.output_dir = val;
    else throw std::invalid_argument("config: unknown key " + key);
  }
  check_config(c);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_config(in);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_text(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

RegimeInstance build_regime(const ExperimentConfig& cfg, int n, RandomStream& calib) {
  const FinderConfig fc{cfg.eps, 1.0, 1.0};
  if (cfg.regime == "cube") {
    const ProductMeasure mu = uniform_cube_product(n);
    MembershipSet set = product_norm_shell(mu, 1.0 - cfg.a, calib, cfg.calib_budget);
    return {std::move(set), default_params(kInfP, n, cfg.a, fc)};
  }
  if (cfg.regime == "gaussian") {
    const ProductMeasure mu = gaussian_product(n);
    MembershipSet set = product_norm_shell(mu, 1.0 - cfg.a, calib, cfg.calib_budget);
    return {std::move(set), default_product_params(mu, cfg.a, fc)};
  }
  if (cfg.regime == "mixture") {
    const MixtureScheme scheme{n, 1.0};
    auto ambient = [n](RandomStream& s) { return sample_gaussian_mixture(n, s); };
    MembershipSet set = euclidean_ball_set(n, 5.0 * std::sqrt(double(n)), ambient);
    return {std::move(set), scheme};
  }
  // regime == lp
  if (cfg.p > 2.0) {
    const HybridCalibration cal =
        calibrate_hybrid_shell(cfg.p, n, cfg.a, calib, cfg.calib_budget);
    return {hybrid_shell(cfg.p, n, cal.C0, cal.E), default_params(cfg.p, n, cfg.a, fc)};
  }
  const double c0 = calibrate_lp_shell(cfg.p, n, cfg.a, calib, cfg.calib_budget);
  return {lp_shell(cfg.p, n, c0), default_params(cfg.p, n, cfg.a, fc)};
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& n_length) {
  if (n_length.size() < 4) throw std::invalid_argument("fit_exponent: need >= 4 points");
  std::vector<double> xs, ys;
  for (const auto& [n, len] : n_length) {
    if (n <= 0.0 || len <= 0.0)
      throw std::invalid_argument("fit_exponent: nonpositive point");
    xs.push_back(std::log(n));
    ys.push_back(std::log(len));
  }
  const double spread = *std::max_element(xs.begin(), xs.end()) -
                        *std::min_element(xs.begin(), xs.end());
  if (spread < 1e-12) throw std::invalid_argument("fit_exponent: degenerate abscissas");
  const OlsFit f = ols(xs, ys);
  ScalingFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.slope_stderr = f.slope_stderr;
  out.r2 = f.r2;
  out.valid = true;
  for (std::size_t i = 0; i < xs.size(); ++i) out.points.emplace_back(xs[i], ys[i]);
  return out;
}

ResultRecord run_scaling(const ExperimentConfig& cfg) {
  check_config(cfg);
  ResultRecord rec;
  rec.config = cfg;
  {
    std::ostringstream os;
    os << cfg.regime << '-' << std::hex << config_hash(cfg);
    rec.experiment_id = os.str();
  }
  const double row_p = cfg.regime == "cube" ? kInfP : (cfg.regime == "lp" ? cfg.p : 0.0);
  RandomStream root(cfg.seed);
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    const int n = cfg.n_list[i];
    RandomStream per_n = root.child(i);
    RandomStream calib = per_n.child(0);
    RandomStream finder = per_n.child(1);
    RandomStream sup = per_n.child(2);
    const RegimeInstance inst = build_regime(cfg, n, calib);
    const LineCertificate lower =
        find_long_line(inst.set, inst.scheme, cfg.trials, cfg.u_grid, finder);
    SupLineParams sp;
    sp.grid = cfg.sup_grid;
    sp.seeds = {lower.segment};
    const SupLineResult upper = sup_line_search(inst.set, sup, sp);
    ScalingRow row;
    row.n = n;
    row.p = row_p;
    row.a = cfg.a;
    row.lower_len = lower.certified_length;
    row.upper_len = std::max(upper.length, lower.certified_length);
    row.lower_fraction = lower.fraction;
    row.seed = cfg.seed;
    rec.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> lo, hi;
  for (const ScalingRow& r : rec.rows) {
    if (r.lower_len > 0.0) lo.emplace_back(double(r.n), r.lower_len);
    if (r.upper_len > 0.0) hi.emplace_back(double(r.n), r.upper_len);
  }
  if (lo.size() >= 4) rec.lower_fit = fit_exponent(lo);
  if (hi.size() >= 4) rec.upper_fit = fit_exponent(hi);
  {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    rec.timestamp = buf;
  }
  return rec;
}

std::string scaling_csv_header() { return "n,p,a,lower_len,upper_len,lower_fraction,seed"; }

std::string to_csv_row(const ScalingRow& r) {
  std::ostringstream os;
  os << r.n << ',' << fmt_p(r.p) << ',' << fmt(r.a) << ',' << fmt(r.lower_len) << ','
     << fmt(r.upper_len) << ',' << fmt(r.lower_fraction) << ',' << r.seed;
  return os.str();
}

std::string scaling_csv(const ResultRecord& rec) {
  std::ostringstream os;
  os << scaling_csv_header() << '\n';
  for (const ScalingRow& r : rec.rows) os << to_csv_row(r) << '\n';
  return os.str();
}

std::string result_json(const ResultRecord& rec) {
  nlohmann::json j;
  j["experiment_id"] = rec.experiment_id;
  j["config_hash"] = config_hash(rec.config);
  j["version"] = kLibraryVersion;
  j["timestamp"] = rec.timestamp;
  j["regime"] = rec.config.regime;
  j["a"] = rec.config.a;
  j["seed"] = rec.config.seed;
  j["bump"] = rec.config.bump;
  auto fit_json = [](const ScalingFit& f) {
    nlohmann::json fj;
    fj["valid"] = f.valid;
    fj["slope"] = f.slope;
    fj["intercept"] = f.intercept;
    fj["slope_stderr"] = f.slope_stderr;
    fj["r2"] = f.r2;
    return fj;
  };
  j["lower_fit"] = fit_json(rec.lower_fit);
  j["upper_fit"] = fit_json(rec.upper_fit);
  nlohmann::json rows = nlohmann::json::array();
  for (const ScalingRow& r : rec.rows) {
    nlohmann::json rj;
    rj["n"] = r.n;
    rj["p"] = fmt_p(r.p);
    rj["a"] = r.a;
    rj["lower_len"] = r.lower_len;
    rj["upper_len"] = r.upper_len;
    rj["lower_fraction"] = r.lower_fraction;
    rj["seed"] = r.seed;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j.dump(2);
}

}  // namespace ll
