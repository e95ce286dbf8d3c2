#include "ylab/reports.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ylab/util.hpp"

namespace ylab {

std::string version() { return "0.1.0"; }

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["k"] = k;
  j["l"] = l;
  j["t"] = t;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["steps"] = steps;
  j["lmax"] = l_max;
  j["degree"] = degree;
  j["restarts"] = restarts;
  j["seed"] = seed;
  j["tol"] = tol;
  j["out"] = out;
  j["format"] = format;
  j["with_minimizer"] = with_minimizer;
  j["full_basis"] = full_basis;
  j["config"] = config_path;
  return j;
}

nlohmann::ordered_json family_json(const ProductFamily& fam) {
  nlohmann::ordered_json j;
  j["k"] = fam.k;
  j["l"] = fam.factor.dim;
  j["t"] = fam.t;
  j["factor"] = fam.factor.kind == EinsteinFactor::Kind::Sphere ? "sphere" : "abstract";
  return j;
}

bool apply_config_file(RunConfig& cfg, const std::string& path, std::string* error) {
  std::ifstream in(path);
  if (!in) {
    *error = "cannot open config file " + path;
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      *error = "config line " + std::to_string(lineno) + ": expected key = value";
      return false;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "k") cfg.k = std::stoi(val);
      else if (key == "l") cfg.l = std::stoi(val);
      else if (key == "t") cfg.t = std::stod(val);
      else if (key == "t-min") cfg.t_min = std::stod(val);
      else if (key == "t-max") cfg.t_max = std::stod(val);
      else if (key == "steps") cfg.steps = std::stoi(val);
      else if (key == "lmax") cfg.l_max = std::stoi(val);
      else if (key == "degree") cfg.degree = std::stoi(val);
      else if (key == "restarts") cfg.restarts = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "tol") cfg.tol = std::stod(val);
      else if (key == "out") cfg.out = val;
      else if (key == "format") cfg.format = val;
      else if (key == "with-minimizer") cfg.with_minimizer = (val == "1" || val == "true");
      else if (key == "full-basis") cfg.full_basis = (val == "1" || val == "true");
      else {
        *error = "config line " + std::to_string(lineno) + ": unknown key '" + key + "'";
        return false;
      }
    } catch (const std::exception&) {
      *error = "config line " + std::to_string(lineno) + ": bad value for '" + key + "'";
      return false;
    }
  }
  return true;
}

nlohmann::ordered_json meta_json(const RunConfig& cfg, double walltime_ms) {
  nlohmann::ordered_json meta;
  meta["tool"] = "ylab";
  meta["version"] = version();
  meta["config"] = cfg.to_json();
  meta["seed"] = cfg.seed;
  meta["walltime_ms"] = walltime_ms;
  return meta;
}

namespace {

std::string config_line(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command=" << cfg.command << " k=" << cfg.k << " l=" << cfg.l << " t=" << fmt_g17(cfg.t)
     << " t_min=" << fmt_g17(cfg.t_min) << " t_max=" << fmt_g17(cfg.t_max)
     << " steps=" << cfg.steps << " lmax=" << cfg.l_max << " degree=" << cfg.degree
     << " restarts=" << cfg.restarts << " seed=" << cfg.seed << " tol=" << fmt_g17(cfg.tol)
     << " format=" << cfg.format << " with_minimizer=" << (cfg.with_minimizer ? 1 : 0)
     << " full_basis=" << (cfg.full_basis ? 1 : 0);
  return os.str();
}

void csv_header(std::ostringstream& os, const RunConfig& cfg, double walltime_ms) {
  os << "# ylab v" << version() << "\n";
  os << "# " << config_line(cfg) << "\n";
  os << "# seed=" << cfg.seed << "\n";
  os << "# walltime_ms=" << fmt_g17(walltime_ms) << "\n";
}

}  // namespace

std::string scan_csv(const std::vector<ScanRecord>& records, const RunConfig& cfg,
                     double walltime_ms) {
  std::ostringstream os;
  csv_header(os, cfg, walltime_ms);
  os << "t,s,lambda1,threshold,classification,energy,estimate,drop\n";
  for (const ScanRecord& r : records) {
    os << fmt_g17(r.t) << ',' << fmt_g17(r.scalar) << ',' << fmt_g17(r.lambda1) << ','
       << fmt_g17(r.threshold) << ',' << to_string(r.classification) << ','
       << fmt_g17(r.eh_energy) << ',';
    if (r.minimizer_estimate) os << fmt_g17(*r.minimizer_estimate);
    os << ',';
    if (r.certificate) os << fmt_g17(r.certificate->energy_drop);
    os << "\n";
  }
  return os.str();
}

nlohmann::ordered_json scan_json(const std::vector<ScanRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ScanRecord& r : records) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["s"] = r.scalar;
    j["lambda1"] = r.lambda1;
    j["threshold"] = r.threshold;
    j["classification"] = to_string(r.classification);
    j["energy"] = r.eh_energy;
    if (r.minimizer_estimate)
      j["estimate"] = *r.minimizer_estimate;
    else
      j["estimate"] = nullptr;
    if (r.certificate) {
      j["drop"] = r.certificate->energy_drop;
      j["certificate"] = {{"direction", r.certificate->direction},
                          {"tau", r.certificate->tau},
                          {"energy_drop", r.certificate->energy_drop},
                          {"predicted_drop", r.certificate->predicted_drop}};
    } else {
      j["drop"] = nullptr;
    }
    arr.push_back(j);
  }
  return arr;
}

std::string trace_csv(const std::vector<TraceRow>& trace, const RunConfig& cfg,
                      double walltime_ms) {
  std::ostringstream os;
  csv_header(os, cfg, walltime_ms);
  os << "restart,iter,quotient,step,min_u\n";
  for (const TraceRow& r : trace) {
    os << r.restart << ',' << r.iter << ',' << fmt_g17(r.quotient) << ',' << fmt_g17(r.step)
       << ',' << fmt_g17(r.min_u) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

struct Panel {
  double x0, y0, w, h;      // pixel rect
  double tmin, tmax;        // data ranges
  double vmin, vmax;

  double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
  double py(double v) const { return y0 + h - (v - vmin) / (vmax - vmin) * h; }
};

void polyline(std::ostringstream& os, const Panel& p, const std::vector<double>& ts,
              const std::vector<double>& vs, const char* color, const char* dash = nullptr) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dash) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (std::size_t i = 0; i < ts.size(); ++i) os << p.px(ts[i]) << ',' << p.py(vs[i]) << ' ';
  os << "\"/>\n";
}

void axes(std::ostringstream& os, const Panel& p, const std::string& label) {
  os << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w << "\" height=\""
     << p.h << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << p.x0 << "\" y=\"" << p.y0 - 6 << "\" font-size=\"12\">" << label
     << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = p.tmin + (p.tmax - p.tmin) * i / 4;
    const double v = p.vmin + (p.vmax - p.vmin) * i / 4;
    os << "<text x=\"" << p.px(t) - 8 << "\" y=\"" << p.y0 + p.h + 14
       << "\" font-size=\"10\">" << fmt_g17(std::round(t * 1000) / 1000).substr(0, 6)
       << "</text>\n";
    os << "<text x=\"" << p.x0 - 44 << "\" y=\"" << p.py(v) + 3 << "\" font-size=\"10\">"
       << fmt_g17(std::round(v * 1000) / 1000).substr(0, 7) << "</text>\n";
  }
}

void critical_marker(std::ostringstream& os, const Panel& p, double tc) {
  if (tc < p.tmin || tc > p.tmax) return;
  os << "<line x1=\"" << p.px(tc) << "\" y1=\"" << p.y0 << "\" x2=\"" << p.px(tc) << "\" y2=\""
     << p.y0 + p.h << "\" stroke=\"red\" stroke-dasharray=\"4,3\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << p.px(tc) + 3 << "\" y=\"" << p.y0 + 12
     << "\" font-size=\"10\" fill=\"red\">t = k/(k-1)</text>\n";
}

}  // namespace

std::string scan_svg(const std::vector<ScanRecord>& records, int k) {
  std::vector<double> ts, energy, estimate, lam, thr;
  bool has_estimate = true;
  for (const ScanRecord& r : records) {
    ts.push_back(r.t);
    energy.push_back(r.eh_energy);
    lam.push_back(r.lambda1);
    thr.push_back(r.threshold);
    if (r.minimizer_estimate)
      estimate.push_back(*r.minimizer_estimate);
    else
      has_estimate = false;
  }
  auto range = [](std::initializer_list<const std::vector<double>*> vs) {
    double lo = 1e300, hi = -1e300;
    for (const auto* v : vs)
      for (double x : *v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    const double pad = (hi - lo) * 0.08 + 1e-9;
    return std::pair<double, double>{lo - pad, hi + pad};
  };

  const double tc = critical_parameter(k);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"520\" "
        "font-family=\"sans-serif\">\n";

  {
    auto [lo, hi] = has_estimate ? range({&energy, &estimate}) : range({&energy});
    Panel p{70, 30, 540, 190, ts.front(), ts.back(), lo, hi};
    axes(os, p, has_estimate ? "energy (black) and minimizer estimate (blue)" : "energy");
    polyline(os, p, ts, energy, "black");
    if (has_estimate) polyline(os, p, ts, estimate, "blue");
    critical_marker(os, p, tc);
  }
  {
    auto [lo, hi] = range({&lam, &thr});
    Panel p{70, 290, 540, 190, ts.front(), ts.back(), lo, hi};
    axes(os, p, "lambda1 (black) and s/(n-1) (green)");
    polyline(os, p, ts, lam, "black");
    polyline(os, p, ts, thr, "green", "6,3");
    critical_marker(os, p, tc);
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::ordered_json static_report_json(const StaticReport& rep) {
  nlohmann::ordered_json j;
  j["k"] = rep.k;
  j["l"] = rep.l;
  j["t"] = rep.t;
  j["critical_t"] = rep.critical_t;
  j["is_static"] = rep.is_critical;
  j["scalar"] = rep.scalar;
  j["threshold"] = rep.threshold;
  j["static_residual"] = rep.static_residual;
  j["trace_residual"] = rep.trace_residual;
  j["hessian_residual"] = rep.hessian_residual;
  j["hessian_fd_deviation"] = rep.hessian_fd_deviation;
  j["rayleigh"] = rep.rayleigh;
  j["mean"] = rep.mean_f;
  j["geodesic_deviation"] = rep.geodesic_deviation;
  j["zero_set"] = {{"nonempty", rep.zero_set.nonempty},
                   {"samples", rep.zero_set.samples},
                   {"max_abs_f", rep.zero_set.max_abs_f},
                   {"grad_min", rep.zero_set.grad_min},
                   {"grad_max", rep.zero_set.grad_max},
                   {"tangent_drift", rep.zero_set.tangent_drift}};
  j["cokernel_max"] = rep.cokernel_max;
  j["cokernel_lmax"] = rep.cokernel_l_max;
  j["upstairs_mismatch"] = rep.upstairs_mismatch;
  j["positive_lobe_integral"] = rep.positive_lobe_integral;
  j["sign_note"] = "f normalized so that its positive-lobe integral is > 0; -f is a second "
                   "static potential";
  return j;
}

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int write_output(const std::string& path, const std::string& payload, std::ostream& out,
                 std::ostream& err) {
  if (path.empty()) {
    out << payload;
    return 0;
  }
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot open output file " << path << "\n";
    return 1;
  }
  f << payload;
  return 0;
}

std::string sibling_path(const std::string& base, const std::string& new_ext) {
  const std::size_t dot = base.find_last_of('.');
  const std::size_t slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + new_ext;
  return base.substr(0, dot) + new_ext;
}

int usage_error(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n";
  return 2;
}

MinimizeOptions minimize_options(const RunConfig& cfg) {
  MinimizeOptions mo;
  mo.l_max = cfg.l_max;
  mo.degree = cfg.degree;
  mo.restarts = cfg.restarts;
  mo.seed = cfg.seed;
  mo.tol = cfg.tol;
  mo.full_basis = cfg.full_basis;
  return mo;
}

bool validate_family(const RunConfig& cfg, std::ostream& err, int* code) {
  if (cfg.t < 1.0) {
    *code = usage_error(err, "t must be >= 1");
    return false;
  }
  if (cfg.k < 2) {
    *code = usage_error(err, "k must be >= 2");
    return false;
  }
  if (cfg.l < 2) {
    *code = usage_error(err, "l must be >= 2 (the factor carries Ricci = k-1)");
    return false;
  }
  if (cfg.tol <= 0.0) {
    *code = usage_error(err, "tol must be positive");
    return false;
  }
  return true;
}

}  // namespace

int run_invariants(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  int code = 0;
  if (!validate_family(cfg, err, &code)) return code;
  const ProductFamily fam = ProductFamily::spheres(cfg.k, cfg.l, cfg.t);

  const EnergyReport er = energy_report(fam);
  const double lam = product_lambda1(fam);
  const double thr = er.scalar / (fam.n() - 1);
  const Classification cls = classify_family(fam);

  nlohmann::ordered_json j;
  j["meta"] = meta_json(cfg, sw.ms());
  j["family"] = family_json(fam);
  auto [ric_a, ric_b] = ricci_block_eigenvalues(fam);
  auto [rho_a, rho_b] = rho_block_eigenvalues(fam);
  j["result"] = {{"energy", er.energy},
                 {"aubin", er.aubin_bound},
                 {"scalar", er.scalar},
                 {"volume", er.volume},
                 {"lambda1", lam},
                 {"threshold", thr},
                 {"classification", to_string(cls)},
                 {"ricci_blocks", {ric_a, ric_b}},
                 {"rho_blocks", {rho_a, rho_b}},
                 {"lichnerowicz_bound", lichnerowicz_lower_bound(fam)},
                 {"critical_t", critical_parameter(cfg.k)}};
  return write_output(cfg.out, j.dump(2) + "\n", out, err);
}

int run_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  int code = 0;
  if (!validate_family(cfg, err, &code)) return code;
  if (cfg.t_min < 1.0) return usage_error(err, "t_min must be >= 1");
  if (cfg.steps > 1 && !(cfg.t_min < cfg.t_max))
    return usage_error(err, "empty range: need t_min < t_max");
  if (cfg.steps < 1) return usage_error(err, "steps must be >= 1");

  ScanOptions so;
  so.with_minimizer = cfg.with_minimizer;
  so.minimize = minimize_options(cfg);
  std::vector<ScanRecord> records;
  try {
    records = scan(cfg.k, cfg.l, cfg.t_min, cfg.t_max, cfg.steps, so);
  } catch (const std::runtime_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  }

  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["meta"] = meta_json(cfg, sw.ms());
    j["records"] = scan_json(records);
    if (cfg.with_minimizer) {
      const Bracket br = bracket_maximal_T(records, cfg.tol);
      j["bracket"] = {{"t_low", br.t_low},
                      {"t_high", br.t_high},
                      {"degenerate", br.degenerate},
                      {"heuristic", br.heuristic},
                      {"note", "largest prefix where no lower quotient was found; "
                               "evidence, not proof"}};
    }
    return write_output(cfg.out, j.dump(2) + "\n", out, err);
  }
  const std::string csv = scan_csv(records, cfg, sw.ms());
  int rc = write_output(cfg.out, csv, out, err);
  if (rc != 0) return rc;
  if (cfg.format == "svg") {
    const std::string svg = scan_svg(records, cfg.k);
    const std::string path = cfg.out.empty() ? "scan.svg" : sibling_path(cfg.out, ".svg");
    rc = write_output(path, svg, out, err);
  }
  return rc;
}

int run_minimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  int code = 0;
  if (!validate_family(cfg, err, &code)) return code;

  const ProductFamily fam = ProductFamily::spheres(cfg.k, cfg.l, cfg.t);
  MinimizeResult res;
  try {
    res = minimize_quotient(fam, minimize_options(cfg));
  } catch (const std::runtime_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  }

  const double energy = eh_energy(fam);
  const double aubin = aubin_constant(fam.n());
  nlohmann::ordered_json j;
  j["meta"] = meta_json(cfg, sw.ms());
  j["family"] = family_json(fam);
  j["result"] = {{"estimate", res.estimate},
                 {"energy", energy},
                 {"gap_to_energy", energy - res.estimate},
                 {"aubin", aubin},
                 {"gap_to_aubin", aubin - res.estimate},
                 {"seed", cfg.seed},
                 {"basis_size", res.basis_size},
                 {"best_restart", res.best_restart},
                 {"iterations", res.trace.size()},
                 {"quadrature_exact", res.quadrature_exact},
                 {"estimate_is_upper_bound", true}};
  const int rc = write_output(cfg.out, j.dump(2) + "\n", out, err);
  if (rc != 0) return rc;
  if (!cfg.out.empty()) {
    const std::string tpath = sibling_path(cfg.out, ".trace.csv");
    return write_output(tpath, trace_csv(res.trace, cfg, sw.ms()), out, err);
  }
  return 0;
}

int run_static_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  if (cfg.k < 2) return usage_error(err, "k must be >= 2");
  if (cfg.l < 2) return usage_error(err, "l must be >= 2 (the factor carries Ricci = k-1)");
  // t = 0 (the subcommand default) selects the critical parameter k/(k-1);
  // an explicit off-critical t >= 1 is diagnosed as-is.
  if (cfg.t != 0.0 && cfg.t < 1.0) return usage_error(err, "t must be >= 1 (or 0 for critical)");
  const StaticReport rep = static_check(cfg.k, cfg.l, cfg.t, std::min(cfg.l_max, 4));

  nlohmann::ordered_json j;
  j["meta"] = meta_json(cfg, sw.ms());
  j["report"] = static_report_json(rep);
  return write_output(cfg.out, j.dump(2) + "\n", out, err);
}

}  // namespace ylab
