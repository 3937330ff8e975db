#include "lattsite/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lattsite/dynamics.hpp"
#include "lattsite/exact_diag.hpp"
#include "lattsite/model.hpp"
#include "lattsite/renorm.hpp"

namespace lattsite::cli {
namespace {

using Json = nlohmann::ordered_json;

// 17 significant digits, locale independent, round-trips exactly
std::string fmt17(double v) {
  v += 0.0;  // folds negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void csv_row(std::string& s, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) s += ',';
    s += cells[i];
  }
  s += '\n';
}

// Pulls --config FILE out of the argument list and re-emits the file's keys
// as --key=value flags right after the subcommand name, so flags typed on
// the command line come later and win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file path");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      rest.push_back(a);
    }
  }
  if (path.empty()) return rest;
  if (rest.empty()) throw std::invalid_argument("--config needs a subcommand");
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad config file: ") + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object of flag: value pairs");
  std::vector<std::string> merged;
  merged.push_back(rest.front());
  for (const auto& [key, val] : cfg.items()) {
    if (val.is_boolean()) {
      if (val.get<bool>()) merged.push_back("--" + key);
    } else if (val.is_string()) {
      merged.push_back("--" + key + "=" + val.get<std::string>());
    } else if (val.is_number() || val.is_null()) {
      merged.push_back("--" + key + "=" + val.dump());
    } else {
      throw std::invalid_argument("config key '" + key + "' must be a scalar");
    }
  }
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

struct PhysSpec {
  std::string species;
  double omega_khz = 0.0;
  double ascat_nm = 0.0;
  double re_nm = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  double u3_intrinsic_hz = 0.0;
  double u3_hz = 0.0;
};

void add_phys_options(CLI::App* cmd, PhysSpec& ps) {
  ps.beta = renorm::beta_closed_form();
  cmd->add_option("--species", ps.species, "atomic species, e.g. Rb87");
  cmd->add_option("--omega-khz", ps.omega_khz, "well frequency omega/2pi in kHz")->required();
  cmd->add_option("--ascat-nm", ps.ascat_nm, "s-wave scattering length in nm (default from the species table)");
  cmd->add_option("--re-nm", ps.re_nm, "effective range in nm; 0 disables the correction");
  cmd->add_option("--xi", ps.xi, "dimensionless coupling u2/(hbar omega); alternative to --species");
  cmd->add_option("--beta", ps.beta, "induced three-body coefficient")->capture_default_str();
  cmd->add_option("--u3-intrinsic-hz", ps.u3_intrinsic_hz, "additive intrinsic three-body energy, Hz");
  cmd->add_option("--u3-hz", ps.u3_hz, "override the total three-body energy, Hz");
}

struct Resolved {
  model::CouplingSet c;
  double sigma = std::numeric_limits<double>::quiet_NaN();  // nan on the --xi route
  std::vector<std::string> warnings;
};

Resolved resolve_phys(const CLI::App* cmd, const PhysSpec& ps) {
  const bool has_species = cmd->count("--species") > 0;
  const bool has_xi = cmd->count("--xi") > 0;
  if (has_species == has_xi) throw std::invalid_argument("give exactly one of --species or --xi");
  if (!has_species && (cmd->count("--ascat-nm") > 0 || cmd->count("--re-nm") > 0))
    throw std::invalid_argument("--ascat-nm and --re-nm need the --species route");
  if (!(ps.omega_khz > 0.0)) throw std::invalid_argument("--omega-khz must be positive");
  const double omega = 2.0 * std::numbers::pi * ps.omega_khz * 1e3;

  Resolved r;
  if (has_species) {
    const model::SpeciesInfo* info = model::find_species(ps.species);
    if (info == nullptr) throw std::invalid_argument("unknown species: " + ps.species);
    model::PhysicalParams p;
    p.atom_mass = info->mass;
    p.a_scat = cmd->count("--ascat-nm") > 0 ? ps.ascat_nm * 1e-9 : info->default_a_scat;
    p.omega = omega;
    p.r_e = ps.re_nm * 1e-9;
    p.u3_intrinsic = ps.u3_intrinsic_hz * model::constants::planck;
    model::DerivationFlags flags;
    r.c = model::derive_couplings(p, ps.beta, &flags);
    r.sigma = model::sigma(p);
    if (flags.strong_coupling)
      r.warnings.push_back("strong coupling: |xi| = " + fmt17(std::abs(r.c.xi)) +
                           " exceeds 0.2, perturbative couplings are unreliable");
  } else {
    const double hw = model::constants::hbar * omega;
    r.c.xi = ps.xi;
    r.c.u2 = ps.xi * hw;
    r.c.u3 = ps.u3_intrinsic_hz * model::constants::planck - ps.beta * ps.xi * ps.xi * hw;
    r.c.hbar_omega = hw;
    if (std::abs(ps.xi) > 0.2)
      r.warnings.push_back("strong coupling: |xi| = " + fmt17(std::abs(ps.xi)) +
                           " exceeds 0.2, perturbative couplings are unreliable");
  }
  if (cmd->count("--u3-hz") > 0) r.c.u3 = ps.u3_hz * model::constants::planck;
  if (r.c.u2 == 0.0) r.warnings.push_back("no collapse: u2 = 0, the revival period t2 is infinite");
  return r;
}

double period_ms(double energy) {
  if (energy == 0.0) return std::numeric_limits<double>::infinity();
  return 1e3 * model::constants::planck / std::abs(energy);
}

std::string emit_beta(int cutoff, const std::string& format) {
  const double closed = renorm::beta_closed_form();
  std::vector<double> partial(static_cast<std::size_t>(cutoff));
  for (int c = 1; c <= cutoff; ++c) partial[static_cast<std::size_t>(c) - 1] = renorm::beta(c);
  std::string s;
  if (format == "json") {
    Json j;
    j["cutoff"] = cutoff;
    j["beta_partial"] = partial;
    j["beta_closed_form"] = closed;
    j["residual"] = partial.back() - closed;
    s = j.dump(2);
    s += '\n';
  } else {
    csv_row(s, {"cutoff", "beta", "beta_closed_form", "residual"});
    for (int c = 1; c <= cutoff; ++c) {
      const double b = partial[static_cast<std::size_t>(c) - 1];
      csv_row(s, {std::to_string(c), fmt17(b), fmt17(closed), fmt17(b - closed)});
    }
  }
  return s;
}

std::string emit_couplings(const Resolved& r, const std::string& format) {
  const double p = model::constants::planck;
  const double sigma_nm = r.sigma * 1e9;
  const double u2_hz = r.c.u2 / p;
  const double u3_hz = r.c.u3 / p;
  const double t2_ms = period_ms(r.c.u2);
  const double t3_ms = period_ms(r.c.u3);
  std::string s;
  if (format == "json") {
    Json j;
    j["sigma_nm"] = sigma_nm;
    j["xi"] = r.c.xi;
    j["u2_hz"] = u2_hz;
    j["u3_hz"] = u3_hz;
    j["t2_ms"] = t2_ms;  // serialized as null when infinite
    j["t3_ms"] = t3_ms;
    s = j.dump(2);
    s += '\n';
  } else {
    csv_row(s, {"sigma_nm", "xi", "u2_hz", "u3_hz", "t2_ms", "t3_ms"});
    csv_row(s, {fmt17(sigma_nm), fmt17(r.c.xi), fmt17(u2_hz), fmt17(u3_hz), fmt17(t2_ms), fmt17(t3_ms)});
  }
  return s;
}

struct RevivalSpec {
  double nbar = 0.0;
  double tail_tol = 1e-12;
  double tmax_ms = 0.0;
  double tmax_over_t2 = 0.0;
  int steps = 2000;
  double eps = 0.0;
  int diameter = 60;
  bool no_scale_u3 = false;
  bool with_closed_form = false;
};

std::string emit_revival(const CLI::App* cmd, const Resolved& r, const RevivalSpec& rv, const std::string& format) {
  if (cmd->count("--tmax-ms") + cmd->count("--tmax-over-t2") != 1)
    throw std::invalid_argument("give exactly one of --tmax-ms or --tmax-over-t2");
  double tmax = 0.0;
  if (cmd->count("--tmax-ms") > 0) {
    tmax = rv.tmax_ms * 1e-3;
  } else {
    if (r.c.u2 == 0.0) throw std::invalid_argument("--tmax-over-t2 needs u2 != 0; use --tmax-ms");
    tmax = rv.tmax_over_t2 * model::constants::planck / std::abs(r.c.u2);
  }
  if (!(tmax > 0.0)) throw std::invalid_argument("the time span must be positive");

  std::vector<double> times(static_cast<std::size_t>(rv.steps) + 1);
  for (int i = 0; i <= rv.steps; ++i) times[static_cast<std::size_t>(i)] = tmax * i / rv.steps;

  const dynamics::CoherentStateSpec spec = dynamics::make_coherent_spec(rv.nbar, rv.tail_tol);
  dynamics::TraceOptions topt;
  topt.with_closed_form = rv.with_closed_form;
  dynamics::LatticeEnvelope env;
  if (rv.eps > 0.0) {
    env = dynamics::LatticeEnvelope::make(rv.diameter, rv.eps, !rv.no_scale_u3);
    topt.envelope = &env;
  }
  const dynamics::VisibilityTrace tr = dynamics::trace(times, spec, r.c, topt);

  const double p = model::constants::planck;
  std::string s;
  if (format == "json") {
    Json params;
    params["xi"] = r.c.xi;
    params["u2_hz"] = r.c.u2 / p;
    params["u3_hz"] = r.c.u3 / p;
    params["nbar"] = rv.nbar;
    params["t2_ms"] = period_ms(r.c.u2);
    params["t3_ms"] = period_ms(r.c.u3);
    Json j;
    j["params"] = params;
    Json t_ms = Json::array();
    for (double t : tr.times) t_ms.push_back(t * 1e3);
    j["t_ms"] = std::move(t_ms);
    j["visibility"] = tr.visibility;
    if (!tr.closed_form.empty()) j["closed_form"] = tr.closed_form;
    if (!tr.averaged.empty()) j["averaged"] = tr.averaged;
    s = j.dump(2);
    s += '\n';
  } else {
    std::vector<std::string> header{"t_ms", "visibility"};
    if (!tr.closed_form.empty()) header.push_back("closed_form");
    if (!tr.averaged.empty()) header.push_back("averaged");
    csv_row(s, header);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      std::vector<std::string> row{fmt17(tr.times[i] * 1e3), fmt17(tr.visibility[i])};
      if (!tr.closed_form.empty()) row.push_back(fmt17(tr.closed_form[i]));
      if (!tr.averaged.empty()) row.push_back(fmt17(tr.averaged[i]));
      csv_row(s, row);
    }
  }
  return s;
}

std::string emit_sweep(double xi_min, double xi_max, int steps, double beta, const std::string& format) {
  if (!(xi_max > xi_min)) throw std::invalid_argument("--xi-max must exceed --xi-min");
  std::vector<double> xs(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) xs[static_cast<std::size_t>(i)] = xi_min + (xi_max - xi_min) * i / steps;
  std::string s;
  if (format == "json") {
    Json j;
    j["beta"] = beta;
    j["xi"] = xs;
    Json u2 = Json::array(), u3 = Json::array();
    for (double x : xs) {
      u2.push_back(x);
      u3.push_back(-beta * x * x + 0.0);
    }
    j["u2_over_hbar_omega"] = std::move(u2);
    j["u3_over_hbar_omega"] = std::move(u3);
    s = j.dump(2);
    s += '\n';
  } else {
    csv_row(s, {"xi", "u2_over_hbar_omega", "u3_over_hbar_omega"});
    for (double x : xs) csv_row(s, {fmt17(x), fmt17(x), fmt17(-beta * x * x)});
  }
  return s;
}

struct EdSpec {
  int n = 2;
  int cutoff = 2;
  double xi = 0.05;
  double xi2 = 0.0;
  int max_dim = 12000;
};

std::string emit_ed(const CLI::App* cmd, const EdSpec& es, const std::string& format,
                    std::vector<std::string>& warnings) {
  if (std::abs(es.xi) > 0.2 || (cmd->count("--xi2") > 0 && std::abs(es.xi2) > 0.2))
    warnings.push_back("strong coupling: |xi| exceeds 0.2, the perturbative prediction is unreliable");
  exact_diag::EdOptions opts;
  opts.max_dimension = es.max_dim;
  std::vector<double> xis{es.xi};
  if (cmd->count("--xi2") > 0) xis.push_back(es.xi2);

  struct Row {
    double xi, energy, prediction, residual;
    int dimension, iterations;
    bool converged;
  };
  std::vector<Row> rows;
  for (double x : xis) {
    const exact_diag::EdResult res = exact_diag::exact_diag_oracle(es.n, es.cutoff, x, opts);
    if (!res.converged) warnings.push_back("eigensolver did not reach tolerance at xi = " + fmt17(x));
    const double first = x * es.n * (es.n - 1) / 2.0;
    const double pred = first + renorm::mode_truncated_second_order_shift(es.n, es.cutoff, x);
    rows.push_back({x, res.energy, pred, res.energy - pred, res.dimension, res.iterations, res.converged});
  }

  std::string s;
  if (format == "json") {
    Json j;
    j["n"] = es.n;
    j["cutoff"] = es.cutoff;
    Json runs = Json::array();
    for (const Row& r : rows) {
      Json jr;
      jr["xi"] = r.xi;
      jr["ed_energy"] = r.energy;
      jr["prediction"] = r.prediction;
      jr["residual"] = r.residual;
      jr["dimension"] = r.dimension;
      jr["iterations"] = r.iterations;
      jr["converged"] = r.converged;
      runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);
    if (rows.size() == 2 && rows[1].residual != 0.0) {
      j["residual_ratio"] = std::abs(rows[0].residual / rows[1].residual);
      j["cubic_ratio"] = std::abs(rows[0].xi * rows[0].xi * rows[0].xi /
                                  (rows[1].xi * rows[1].xi * rows[1].xi));
    }
    s = j.dump(2);
    s += '\n';
  } else {
    csv_row(s, {"n", "cutoff", "xi", "ed_energy", "prediction", "residual", "dimension", "iterations", "converged"});
    for (const Row& r : rows)
      csv_row(s, {std::to_string(es.n), std::to_string(es.cutoff), fmt17(r.xi), fmt17(r.energy),
                  fmt17(r.prediction), fmt17(r.residual), std::to_string(r.dimension),
                  std::to_string(r.iterations), r.converged ? "1" : "0"});
  }
  return s;
}

void deliver(const std::string& payload, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << payload;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"on-site interaction energies and collapse-and-revival traces for lattice bosons"};
  app.name("lattsite");
  try {
    std::vector<std::string> merged = merge_config(args);

    app.require_subcommand(1);
    app.option_defaults()->take_last();

    std::string format = "csv";
    std::string out_path;
    auto add_io = [&](CLI::App* cmd) {
      cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
          ->capture_default_str();
      cmd->add_option("--out", out_path, "write to a file instead of stdout");
    };

    int beta_cutoff = 0;
    CLI::App* cmd_beta = app.add_subcommand("beta", "induced three-body coefficient vs cutoff");
    cmd_beta->add_option("--cutoff", beta_cutoff, "largest intermediate-state energy, hbar omega units")
        ->required()
        ->check(CLI::Range(1, 400));
    add_io(cmd_beta);

    PhysSpec phys;
    CLI::App* cmd_coup = app.add_subcommand("couplings", "derive xi, u2, u3 and the revival periods");
    add_phys_options(cmd_coup, phys);
    bool strict = false;
    cmd_coup->add_flag("--strict", strict, "treat numerical-validity warnings as errors");
    add_io(cmd_coup);

    PhysSpec phys_rv;
    RevivalSpec rv;
    CLI::App* cmd_rev = app.add_subcommand("revival", "visibility trace of the matter-wave interference");
    add_phys_options(cmd_rev, phys_rv);
    cmd_rev->add_option("--nbar", rv.nbar, "mean atoms per site")->required()->check(CLI::NonNegativeNumber);
    cmd_rev->add_option("--tail-tol", rv.tail_tol, "Poisson tail mass dropped by the truncation")
        ->capture_default_str();
    CLI::Option* opt_tmax_ms = cmd_rev->add_option("--tmax-ms", rv.tmax_ms, "trace length in ms");
    CLI::Option* opt_tmax_t2 = cmd_rev->add_option("--tmax-over-t2", rv.tmax_over_t2, "trace length in units of t2");
    opt_tmax_ms->excludes(opt_tmax_t2);
    cmd_rev->add_option("--steps", rv.steps, "grid intervals; the trace has steps+1 rows")
        ->check(CLI::Range(2, 5000000))
        ->capture_default_str();
    cmd_rev->add_option("--inhom-eps", rv.eps, "fractional u2 depression at the cloud edge; 0 disables averaging")
        ->capture_default_str();
    cmd_rev->add_option("--diameter", rv.diameter, "averaging sphere diameter in sites")->capture_default_str();
    cmd_rev->add_flag("--no-scale-u3", rv.no_scale_u3, "keep u3 uniform instead of scaling with the local u2^2");
    cmd_rev->add_flag("--with-closed-form", rv.with_closed_form, "emit the u3 = 0 closed-form column");
    cmd_rev->add_flag("--strict", strict, "treat numerical-validity warnings as errors");
    add_io(cmd_rev);

    double xi_min = 0.0, xi_max = 0.0, sweep_beta = renorm::beta_closed_form();
    int sweep_steps = 100;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "u2 and u3 in hbar omega units across a xi range");
    cmd_sweep->add_option("--xi-min", xi_min, "left end of the xi range")->required();
    cmd_sweep->add_option("--xi-max", xi_max, "right end of the xi range")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "grid intervals")->check(CLI::Range(1, 5000000))
        ->capture_default_str();
    cmd_sweep->add_option("--beta", sweep_beta, "induced three-body coefficient")->capture_default_str();
    add_io(cmd_sweep);

    EdSpec es;
    CLI::App* cmd_ed = app.add_subcommand("ed", "exact diagonalization against the perturbative prediction");
    cmd_ed->add_option("--atoms", es.n, "atom number on the site")->required()->check(CLI::Range(1, 8));
    cmd_ed->add_option("--cutoff", es.cutoff, "single-particle mode energy cutoff")->required()
        ->check(CLI::Range(0, 20));
    cmd_ed->add_option("--xi", es.xi, "bare coupling in hbar omega units")->required();
    cmd_ed->add_option("--xi2", es.xi2, "second coupling for the residual scaling ratio");
    cmd_ed->add_option("--max-dim", es.max_dim, "largest allowed Fock dimension")->capture_default_str();
    cmd_ed->add_flag("--strict", strict, "treat numerical-validity warnings as errors");
    add_io(cmd_ed);

    std::reverse(merged.begin(), merged.end());
    app.parse(std::move(merged));

    std::string payload;
    std::vector<std::string> warnings;
    if (cmd_beta->parsed()) {
      payload = emit_beta(beta_cutoff, format);
    } else if (cmd_coup->parsed()) {
      Resolved r = resolve_phys(cmd_coup, phys);
      warnings = std::move(r.warnings);
      payload = emit_couplings(r, format);
    } else if (cmd_rev->parsed()) {
      Resolved r = resolve_phys(cmd_rev, phys_rv);
      warnings = std::move(r.warnings);
      payload = emit_revival(cmd_rev, r, rv, format);
    } else if (cmd_sweep->parsed()) {
      payload = emit_sweep(xi_min, xi_max, sweep_steps, sweep_beta, format);
    } else {
      payload = emit_ed(cmd_ed, es, format, warnings);
    }

    for (const std::string& w : warnings) err << "warning: " << w << '\n';
    deliver(payload, out_path, out);
    if (strict && !warnings.empty()) {
      err << "error: warnings escalated by --strict\n";
      return 3;
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace lattsite::cli
