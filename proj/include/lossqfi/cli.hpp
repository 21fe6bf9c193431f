#pragma once

// Command-line front end. `run` parses arguments, evaluates the requested
// command and writes CSV or JSON records. Exit status: 0 success, 1 engine
// or domain error, 2 usage error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lossqfi/degauss.hpp"
#include "lossqfi/estimation.hpp"
#include "lossqfi/format.hpp"
#include "lossqfi/montecarlo.hpp"
#include "lossqfi/optimizer.hpp"
#include "lossqfi/probes.hpp"

namespace lossqfi::cli {

// ---------------------------------------------------------------------------
// Records

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json };

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v ? "true" : "false";
      },
      c);
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

// Numbers go through the same 12-digit rounding as CSV; non-finite values
// have no JSON literal and are written as strings.
inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
          return std::strtod(format_number(v).c_str(), nullptr);
        } else {
          return v;
        }
      },
      c);
}

inline void write_json(const Table& t, std::ostream& os) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  os << rows.dump(2) << '\n';
}

inline void write_table(const Table& t, Format f, std::ostream& os) {
  if (f == Format::csv) write_csv(t, os);
  else write_json(t, os);
}

// ---------------------------------------------------------------------------
// Argument values

[[noreturn]] inline void usage_error(const std::string& what) { throw Error(ErrorCode::parse, what); }

/// A real number or a multiple of pi: "0.3", "pi", "pi/4", "3pi/8", "3*pi/8".
inline double parse_scalar(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (!text.empty() && end == text.c_str() + text.size() && std::isfinite(v)) return v;
  static const std::regex pi_form(R"(^\s*([+-]?[0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    const std::string k = m[1].str();
    double factor = 1.0;
    if (k == "-") factor = -1.0;
    else if (!k.empty() && k != "+") factor = detail::parse_real(k, "pi multiple");
    const double div = m[2].matched ? detail::parse_real(m[2].str(), "pi divisor") : 1.0;
    if (div == 0.0) usage_error("division by zero in '" + text + "'");
    return factor * std::numbers::pi / div;
  }
  usage_error("bad number '" + text + "'");
}

/// "start:stop:count", endpoints inclusive. A bare value is a one-point range.
inline std::vector<double> parse_range(const std::string& text, int min_count) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() == 1 && min_count <= 1) return {parse_scalar(parts[0])};
  if (parts.size() != 3) usage_error("range '" + text + "' is not start:stop:count");
  const double count = parse_scalar(parts[2]);
  if (count != std::floor(count) || count < min_count || count > 1e6) {
    usage_error("range '" + text + "' needs an integer count >= " + std::to_string(min_count));
  }
  return linspace(parse_scalar(parts[0]), parse_scalar(parts[1]), static_cast<int>(count));
}

struct Globals {
  int cutoff_cap = CutoffPolicy{}.cap;
  double tail_tol = CutoffPolicy{}.tail_tol;
  double phi_min = default_phi_min;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";

  CutoffPolicy policy() const { return {tail_tol, cutoff_cap, CutoffPolicy{}.guard}; }
  Format fmt() const { return format == "json" ? Format::json : Format::csv; }
  LossParameter loss(double phi) const { return LossParameter(phi, phi_min); }
};

// ---------------------------------------------------------------------------
// Families

enum class FamilyKind { probe, qutrit_opt, gaussian_opt, superposition_opt, cat_opt };

struct FamilyRequest {
  FamilyKind kind = FamilyKind::probe;
  std::string label;  // text as given
  std::string name;   // family name before ':'
  detail::KeyValues keys;
  int k = 0;
  std::optional<double> nbar;
};

/// Splits a family list at commas. A piece without ':' that looks like
/// key=value continues the previous family ("qutrit:nbar=0.5,beta=1").
inline std::vector<std::string> split_families(const std::string& list) {
  std::vector<std::string> groups;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    const bool starts_new = tok.find(':') != std::string::npos || tok.find('=') == std::string::npos ||
                            tok.rfind("superposition_k=", 0) == 0;
    if (starts_new || groups.empty()) {
      if (!starts_new) usage_error("family list starts with a bare parameter '" + tok + "'");
      groups.push_back(tok);
    } else {
      groups.back() += "," + tok;
    }
  }
  if (groups.empty()) usage_error("empty family list");
  return groups;
}

inline FamilyRequest parse_family(const std::string& group) {
  FamilyRequest req;
  req.label = group;
  std::string text = group;
  if (text.rfind("superposition_k=", 0) == 0) text = "superposition_opt:k=" + text.substr(16);
  const std::size_t colon = text.find(':');
  req.name = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (req.name == "qutrit_opt" || req.name == "gaussian_opt" || req.name == "superposition_opt" ||
      req.name == "cat_opt") {
    detail::KeyReader keys(detail::parse_key_values(body, req.name), req.name);
    if (keys.has("nbar")) req.nbar = keys.real("nbar");
    if (req.name == "qutrit_opt") req.kind = FamilyKind::qutrit_opt;
    if (req.name == "gaussian_opt") req.kind = FamilyKind::gaussian_opt;
    if (req.name == "cat_opt") req.kind = FamilyKind::cat_opt;
    if (req.name == "superposition_opt") {
      req.kind = FamilyKind::superposition_opt;
      req.k = keys.integer("k");
    }
    keys.finish();
    return req;
  }
  req.keys = detail::parse_key_values(body, req.name);
  return req;
}

inline OptimizationResult run_optimizer(const FamilyRequest& req, double nbar, const LossParameter& phi,
                                        const Globals& g) {
  switch (req.kind) {
    case FamilyKind::qutrit_opt: return optimize_qutrit(nbar, phi);
    case FamilyKind::gaussian_opt: return optimize_gaussian(nbar, phi, g.policy());
    case FamilyKind::superposition_opt: return optimize_superposition(req.k, nbar, phi, g.seed);
    case FamilyKind::cat_opt: return optimize_cat(nbar, phi, g.policy());
    case FamilyKind::probe: break;
  }
  usage_error("'" + req.label + "' is not an optimized family");
}

/// Probe families whose energy is set by the sweep: qubit, qutrit, coherent, squeezed.
inline ProbeSpec energy_probe(const FamilyRequest& req, double nbar) {
  detail::KeyReader keys(req.keys, req.name);
  if (keys.has("nbar")) usage_error("'" + req.label + "' fixes nbar inside an energy sweep");
  ProbeSpec spec;
  if (req.name == "qubit") {
    spec = qubit_from_nbar(nbar, keys.real_or("phase", 0.0));
  } else if (req.name == "qutrit") {
    spec = probe::Qutrit{nbar, keys.real_or("beta", 0.0), keys.real_or("mu", std::numbers::pi),
                         keys.real_or("nu", std::numbers::pi)};
  } else if (req.name == "coherent") {
    spec = probe::Coherent{std::polar(std::sqrt(nbar), keys.real_or("phase", 0.0))};
  } else if (req.name == "squeezed") {
    spec = probe::Gaussian{0.0, std::asinh(std::sqrt(nbar)), keys.real_or("theta", 0.0)};
  } else {
    usage_error("family '" + req.name + "' has no energy parameter");
  }
  keys.finish();
  return spec;
}

// ---------------------------------------------------------------------------
// Commands

inline Table cmd_qfi(const std::string& probe_text, double phi, int runs, const Globals& g) {
  const EstimationReport rep = qfi(parse_probe(probe_text), g.loss(phi), g.policy(), runs);
  Table t;
  t.columns = {"probe", "phi", "nbar", "H", "H_trace", "ultimate_bound", "crlb_variance", "runs"};
  t.rows.push_back({format_probe(rep.probe), rep.phi, rep.nbar, rep.qfi, rep.qfi_trace_route, rep.ultimate_bound,
                    rep.crlb_variance, static_cast<long long>(rep.runs)});
  return t;
}

inline Table cmd_sweep_phi(const std::string& families, const std::vector<double>& phis, const Globals& g) {
  Table t;
  t.columns = {"family", "phi", "nbar", "H", "ultimate_bound"};
  std::vector<FamilyRequest> reqs;
  for (const auto& grp : split_families(families)) reqs.push_back(parse_family(grp));
  for (const auto& req : reqs) {
    if (req.kind != FamilyKind::probe && !req.nbar) usage_error("'" + req.label + "' needs nbar in a phi sweep");
  }
  for (const auto& req : reqs) {
    if (req.kind == FamilyKind::probe) {
      const ProbeSpec spec = parse_probe(req.label);
      const FockVector psi = build_probe(spec, g.policy());
      const double nbar = mean_photon(psi);
      for (double phi : phis) {
        t.rows.push_back({format_probe(spec), phi, nbar, qfi_of_state(psi, g.loss(phi)), 4.0 * nbar});
      }
    } else {
      for (double phi : phis) {
        const OptimizationResult r = run_optimizer(req, *req.nbar, g.loss(phi), g);
        t.rows.push_back({req.label, phi, r.nbar, r.best_qfi, 4.0 * r.nbar});
      }
    }
  }
  return t;
}

inline Table cmd_sweep_energy(const std::string& families, const std::vector<double>& nbars, double phi,
                              const Globals& g) {
  Table t;
  t.columns = {"family", "nbar", "phi", "H", "ultimate_bound"};
  const LossParameter lp = g.loss(phi);
  std::vector<FamilyRequest> reqs;
  for (const auto& grp : split_families(families)) reqs.push_back(parse_family(grp));
  for (const auto& req : reqs) {
    if (req.nbar) usage_error("'" + req.label + "' fixes nbar inside an energy sweep");
  }
  for (const auto& req : reqs) {
    for (double nbar : nbars) {
      if (req.kind == FamilyKind::probe) {
        const FockVector psi = build_probe(energy_probe(req, nbar), g.policy());
        const double n = mean_photon(psi);
        t.rows.push_back({req.label, n, phi, qfi_of_state(psi, lp), 4.0 * n});
      } else {
        const OptimizationResult r = run_optimizer(req, nbar, lp, g);
        t.rows.push_back({req.label, r.nbar, phi, r.best_qfi, 4.0 * r.nbar});
      }
    }
  }
  return t;
}

inline Table optimization_table(const OptimizationResult& r) {
  Table t;
  t.columns = {"family", "nbar", "phi", "H", "ultimate_bound", "starts", "converged", "seed", "evaluations",
               "skipped", "params"};
  std::string params;
  for (std::size_t i = 0; i < r.best_params.size(); ++i) {
    if (i) params += ";";
    params += (i < r.param_names.size() ? r.param_names[i] : "p" + std::to_string(i)) + "=" +
              format_number(r.best_params[i]);
  }
  t.rows.push_back({r.family, r.nbar, r.phi, r.best_qfi, 4.0 * r.nbar, static_cast<long long>(r.starts), r.converged,
                    static_cast<long long>(r.seed), static_cast<long long>(r.evaluations),
                    static_cast<long long>(r.skipped), params});
  return t;
}

inline Table cmd_optimize(const std::string& family, std::optional<double> nbar, double phi, const Globals& g) {
  FamilyRequest req = parse_family(family);
  if (req.kind == FamilyKind::probe) usage_error("'" + family + "' is not an optimized family");
  if (nbar && req.nbar && *nbar != *req.nbar) usage_error("nbar given twice with different values");
  if (!nbar) nbar = req.nbar;
  if (!nbar) usage_error("optimize needs --nbar");
  return optimization_table(run_optimizer(req, *nbar, g.loss(phi), g));
}

inline Table cmd_sld_dump(const std::string& probe_text, double phi, const Globals& g) {
  const FockVector psi = build_probe(parse_probe(probe_text), g.policy());
  const ProbeEvolution ev = analyze_probe(psi, g.loss(phi));
  const Spectrum& s = ev.solution.sld.spectrum;
  const int dim = static_cast<int>(s.eigenvalues.size());
  Table t;
  t.columns = {"index", "eigenvalue"};
  for (int m = 0; m < dim; ++m) {
    t.columns.push_back("re_" + std::to_string(m));
    t.columns.push_back("im_" + std::to_string(m));
  }
  for (int k = 0; k < dim; ++k) {
    std::vector<Cell> row{static_cast<long long>(k), s.eigenvalues(k)};
    for (int m = 0; m < dim; ++m) {
      row.emplace_back(s.eigenvectors(m, k).real());
      row.emplace_back(s.eigenvectors(m, k).imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table cmd_simulate(int n, double phi, int runs, int reps, const Globals& g) {
  const ExperimentReport r = simulate_fock_estimation(n, g.loss(phi), runs, reps, g.seed);
  Table t;
  t.columns = {"n", "phi", "runs", "repetitions", "seed", "phi_mean", "empirical_variance", "crlb",
               "normalized_variance", "boundary_hits"};
  t.rows.push_back({static_cast<long long>(r.n), r.phi_true, static_cast<long long>(r.runs),
                    static_cast<long long>(r.repetitions), static_cast<long long>(r.seed), r.phi_mean,
                    r.empirical_variance, r.crlb, r.normalized_variance, static_cast<long long>(r.boundary_hits)});
  return t;
}

struct RegionOutput {
  Table region;
  std::vector<Table> curves;
  Table coverage;
  CoverageReport report;
  int skipped = 0;
};

inline RegionOutput cmd_region(const std::vector<double>& etas, const std::vector<double>& rs,
                               const std::vector<double>& phis, const std::vector<double>& nbars, const Globals& g) {
  for (double phi : phis) (void)g.loss(phi);  // validate before the expensive part
  RegionOutput out;
  const RegionMap map = region_map(etas, rs, g.policy());
  out.skipped = map.skipped;
  out.region.columns = {"eta", "r", "nbar", "beta"};
  for (const auto& p : map.points) out.region.rows.push_back({p.eta, p.r, p.nbar, p.beta});

  out.report = coverage_check(phis, nbars, map);
  out.coverage.columns = {"phi", "nbar", "beta_opt", "H_opt", "qfi_spread", "covered", "exception"};
  for (double phi : phis) {
    Table curve;
    curve.columns = {"phi", "nbar", "beta_opt", "H_opt"};
    for (const auto& p : out.report.points) {
      if (p.phi != phi) continue;
      curve.rows.push_back({p.phi, p.nbar, p.beta_opt, p.qfi_opt});
      out.coverage.rows.push_back({p.phi, p.nbar, p.beta_opt, p.qfi_opt, p.qfi_spread, p.covered, p.exception});
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

/// Comma-separated angles; "max" stands for pi/2 - phi_min.
inline std::vector<double> parse_angle_list(const std::string& list, const Globals& g) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    out.push_back(tok == "max" ? std::numbers::pi / 2 - g.phi_min : parse_scalar(tok));
  }
  if (out.empty()) usage_error("empty phi list");
  return out;
}

// ---------------------------------------------------------------------------
// Driver

inline void emit(const Table& t, const Globals& g, std::ostream& out) {
  std::ostringstream buf;
  write_table(t, g.fmt(), buf);
  if (g.out.empty()) {
    out << buf.str();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + g.out + "' for writing");
  f << buf.str();
}

inline void write_file(const std::filesystem::path& path, const Table& t, Format fmt) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_table(t, fmt, f);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loss estimation in bosonic channels: QFI, optimal probes, region maps, simulation"};
  app.name("lossqfi");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--cutoff-cap", g.cutoff_cap, "largest Fock cutoff for infinite-dimensional states")
      ->check(CLI::Range(1, 2000));
  app.add_option("--tail-tol", g.tail_tol, "population allowed above the cutoff")->check(CLI::Range(1e-300, 1e-2));
  app.add_option("--phi-min", g.phi_min, "guard band at the ends of [0, pi/2]")->check(CLI::Range(1e-12, 0.5));
  app.add_option("--seed", g.seed, "seed for optimizer restarts and simulations");
  app.add_option("--out", g.out, "output file (a directory for `region`); default stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string probe_text, phi_text, families, family, nbar_text;
  std::string phi_range, energy_range = "0.05:1:20";
  std::string eta_text = "0:2:401", r_text = "-1:1:401", phis_text = "pi/16,pi/8,pi/4,3pi/8,max";
  std::string curve_nbar = "0.05:0.95:19";
  int runs = 1, n = 1, sim_runs = 10000, reps = 200;

  auto* qfi_cmd = app.add_subcommand("qfi", "QFI and Cramer-Rao bounds for one probe");
  qfi_cmd->add_option("probe", probe_text, "probe, e.g. fock:n=2 or qubit:nbar=0.5")->required();
  qfi_cmd->add_option("--phi", phi_text, "loss parameter")->required();
  qfi_cmd->add_option("--runs", runs, "number of runs N")->check(CLI::PositiveNumber);

  auto* sphi = app.add_subcommand("sweep-phi", "QFI versus phi");
  sphi->add_option("--families", families, "comma-separated probe or *_opt families")->required();
  sphi->add_option("--phi", phi_range, "start:stop:count (default spans the domain, 50 points)");

  auto* sen = app.add_subcommand("sweep-energy", "QFI versus nbar at fixed phi");
  sen->add_option("--families", families, "qubit, qutrit[:beta=], coherent, squeezed, *_opt")->required();
  sen->add_option("--nbar", energy_range, "start:stop:count")->capture_default_str();
  sen->add_option("--phi", phi_text, "loss parameter")->required();

  auto* opt = app.add_subcommand("optimize", "best probe of a family at fixed energy");
  opt->add_option("--family", family, "qutrit_opt, gaussian_opt, superposition_opt:k=K, cat_opt")->required();
  opt->add_option("--nbar", nbar_text, "mean photon number");
  opt->add_option("--phi", phi_text, "loss parameter")->required();

  auto* reg = app.add_subcommand("region", "attainable (nbar, beta) region of truncated subtracted states");
  reg->add_option("--eta", eta_text, "eta grid start:stop:count")->capture_default_str();
  reg->add_option("--r", r_text, "r grid start:stop:count")->capture_default_str();
  reg->add_option("--phis", phis_text, "comma-separated angles; 'max' is pi/2 - phi_min")->capture_default_str();
  reg->add_option("--nbar", curve_nbar, "nbar grid for the optimal curves")->capture_default_str();

  auto* sld_cmd = app.add_subcommand("sld-dump", "eigenvalues and eigenvectors of the SLD");
  sld_cmd->add_option("probe", probe_text, "probe")->required();
  sld_cmd->add_option("--phi", phi_text, "loss parameter")->required();

  auto* sim = app.add_subcommand("simulate", "photon-counting estimation with a Fock probe");
  sim->add_option("--n", n, "photons in the probe")->required();
  sim->add_option("--phi", phi_text, "true loss parameter")->required();
  sim->add_option("--runs", sim_runs, "runs per experiment N");
  sim->add_option("--reps", reps, "repetitions R");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("lossqfi");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*qfi_cmd) {
      emit(cmd_qfi(probe_text, parse_scalar(phi_text), runs, g), g, out);
    } else if (*sphi) {
      const std::vector<double> phis = phi_range.empty()
                                           ? linspace(g.phi_min, std::numbers::pi / 2 - g.phi_min, 50)
                                           : parse_range(phi_range, 2);
      emit(cmd_sweep_phi(families, phis, g), g, out);
    } else if (*sen) {
      emit(cmd_sweep_energy(families, parse_range(energy_range, 2), parse_scalar(phi_text), g), g, out);
    } else if (*opt) {
      std::optional<double> nbar;
      if (!nbar_text.empty()) nbar = parse_scalar(nbar_text);
      emit(cmd_optimize(family, nbar, parse_scalar(phi_text), g), g, out);
    } else if (*sld_cmd) {
      emit(cmd_sld_dump(probe_text, parse_scalar(phi_text), g), g, out);
    } else if (*sim) {
      emit(cmd_simulate(n, parse_scalar(phi_text), sim_runs, reps, g), g, out);
    } else if (*reg) {
      if (g.out.empty()) usage_error("region needs --out DIR");
      const auto etas = parse_range(eta_text, 1);
      const auto rs = parse_range(r_text, 1);
      const auto phis = parse_angle_list(phis_text, g);
      const auto nbars = parse_range(curve_nbar, 1);
      const RegionOutput res = cmd_region(etas, rs, phis, nbars, g);
      const std::filesystem::path dir(g.out);
      std::filesystem::create_directories(dir);
      const std::string ext = g.fmt() == Format::json ? ".json" : ".csv";
      write_file(dir / ("region" + ext), res.region, g.fmt());
      for (std::size_t i = 0; i < res.curves.size(); ++i) {
        write_file(dir / ("curve_" + std::to_string(i + 1) + ext), res.curves[i], g.fmt());
      }
      write_file(dir / ("coverage" + ext), res.coverage, g.fmt());
      const auto& rep = res.report;
      out << "region points " << res.region.rows.size() << ", skipped " << res.skipped << "; coverage "
          << rep.points.size() - static_cast<std::size_t>(rep.uncovered + rep.uncovered_in_exception) << "/"
          << rep.points.size() << " covered, " << rep.uncovered_in_exception << " exempt misses, " << rep.uncovered
          << " uncovered\n";
      if (!rep.passed()) {
        err << "error: " << rep.uncovered << " optimal qutrit points fall outside the region\n";
        return 1;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::parse ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lossqfi::cli
