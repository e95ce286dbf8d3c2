// ylab — numerical laboratory for Einstein-Hilbert energies, Laplace spectra,
// Yamabe-quotient minimization, and static-potential checks on squeezed
// sphere products.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ylab/reports.hpp"

namespace {

void add_family_flags(CLI::App* cmd, ylab::RunConfig& cfg) {
  cmd->add_option("--k", cfg.k, "sphere factor dimension (>= 2)");
  cmd->add_option("--l", cfg.l, "Einstein factor dimension (>= 2)");
}

void add_numerics_flags(CLI::App* cmd, ylab::RunConfig& cfg) {
  cmd->add_option("--lmax", cfg.l_max, "trial-space harmonic degree cap");
  cmd->add_option("--degree", cfg.degree, "quadrature exactness degree (0 = 4*lmax)");
  cmd->add_option("--restarts", cfg.restarts, "minimizer restarts");
  cmd->add_option("--seed", cfg.seed, "RNG seed, recorded in every artifact");
  cmd->add_option("--tol", cfg.tol, "convergence / comparison tolerance");
  cmd->add_flag("--full-basis", cfg.full_basis, "use the full (non-zonal) harmonic basis");
}

void add_output_flags(CLI::App* cmd, ylab::RunConfig& cfg) {
  cmd->add_option("--out", cfg.out, "output path (default: stdout)");
  cmd->add_option("--format", cfg.format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--config", cfg.config_path,
                  "key = value configuration file (flags take precedence)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"yamabe-lab: energies, spectra, quotient minimization, static potentials"};
  app.require_subcommand(1);

  ylab::RunConfig cfg;

  // The config file provides defaults under the flags, so it is located and
  // applied before CLI11 writes any flag values.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::string error;
      if (!ylab::apply_config_file(cfg, argv[i + 1], &error)) {
        std::cerr << "error: " << error << "\n";
        return 2;
      }
    }
  }
  const bool config_set_t = cfg.t != 1.0;
  double static_t = config_set_t ? cfg.t : 0.0;  // static-check default: critical

  CLI::App* inv = app.add_subcommand("invariants", "closed-form invariants of one family");
  add_family_flags(inv, cfg);
  inv->add_option("--t", cfg.t, "squeezing parameter (>= 1)");
  add_numerics_flags(inv, cfg);
  add_output_flags(inv, cfg);

  CLI::App* scn = app.add_subcommand("scan", "classification sweep over t");
  add_family_flags(scn, cfg);
  scn->add_option("--t-min", cfg.t_min, "sweep start (>= 1)");
  scn->add_option("--t-max", cfg.t_max, "sweep end");
  scn->add_option("--steps", cfg.steps, "number of samples");
  scn->add_flag("--with-minimizer", cfg.with_minimizer, "attach quotient-minimizer estimates");
  add_numerics_flags(scn, cfg);
  add_output_flags(scn, cfg);

  CLI::App* mini = app.add_subcommand("minimize", "Galerkin minimization of the quotient");
  add_family_flags(mini, cfg);
  mini->add_option("--t", cfg.t, "squeezing parameter (>= 1)");
  add_numerics_flags(mini, cfg);
  add_output_flags(mini, cfg);

  CLI::App* stat = app.add_subcommand("static-check", "static-potential identity suite");
  add_family_flags(stat, cfg);
  stat->add_option("--t", static_t, "family parameter (0 = critical k/(k-1))");
  add_numerics_flags(stat, cfg);
  add_output_flags(stat, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;     // usage errors are exit code 2
  }

  int rc = 0;
  try {
    if (inv->parsed()) {
      cfg.command = "invariants";
      rc = ylab::run_invariants(cfg, std::cout, std::cerr);
    } else if (scn->parsed()) {
      cfg.command = "scan";
      rc = ylab::run_scan(cfg, std::cout, std::cerr);
    } else if (mini->parsed()) {
      cfg.command = "minimize";
      rc = ylab::run_minimize(cfg, std::cout, std::cerr);
    } else if (stat->parsed()) {
      cfg.command = "static-check";
      cfg.t = static_t;
      rc = ylab::run_static_check(cfg, std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
