#pragma once

// CLI11 wiring for the dimerlab tool: one subcommand per RunConfig command.

#include <map>
#include <string>

#include "CLI11.hpp"
#include "dimerlab/cli.hpp"
#include "dimerlab/errors.hpp"

namespace dimerlab::tool {

struct Parsed {
  cli::RunConfig config;
  std::string format = "human";
  std::string output;  // empty: stdout
};

inline void add_common(CLI::App* sub, Parsed& p) {
  sub->add_option("--format", p.format, "Output format")
      ->check(CLI::IsMember({"human", "json", "csv"}))
      ->capture_default_str();
  sub->add_option("-o,--output", p.output, "Write the report to a file instead of stdout");
  sub->add_option("--seed", p.config.seed, "Seed recorded with the run")->capture_default_str();
  sub->add_option("--threads", p.config.threads, "Worker threads for matching enumeration (default DIMERLAB_THREADS or 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--max-nodes", p.config.max_nodes, "Search-node cap for matching enumeration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

inline void configure(CLI::App& app, Parsed& p) {
  p.config.threads = limits().threads;
  p.config.max_nodes = limits().max_enumeration_nodes;
  app.require_subcommand(1);
  auto& c = p.config;

  auto* ring = app.add_subcommand("ring", "Ring reduced states: oracle check, trace, negativity and noise decay");
  ring->add_option("--S", c.S, "Local dimension 2s+1")->check(CLI::Range(2, 64))->capture_default_str();
  ring->add_option("--N", c.N, "Half the number of ring sites")->check(CLI::Range(1, 64))->capture_default_str();
  ring->add_option("--a", c.a, "Shift label of every dimer")->check(CLI::NonNegativeNumber)->capture_default_str();
  ring->add_option("--b", c.b, "Phase label of every dimer")->check(CLI::NonNegativeNumber)->capture_default_str();
  ring->add_flag("--closed-form-only", c.closed_form_only, "Skip the brute-force oracle");
  add_common(ring, p);

  auto* lattice = app.add_subcommand("lattice", "Dimer fractions from perfect-matching enumeration");
  lattice->add_option("--family", c.family, "Lattice family")
      ->check(CLI::IsMember({"square", "honeycomb", "cubic", "file"}))
      ->capture_default_str();
  lattice->add_option("--sizes", c.sizes, "Linear sizes L (comma separated)")->delimiter(',');
  lattice->add_option("--boundary", c.boundary, "Boundary condition")
      ->check(CLI::IsMember({"open", "periodic"}))
      ->capture_default_str();
  lattice->add_option("--file", c.file, "Edge-list file for --family file");
  lattice->add_flag("--check-oracle", c.check_oracle, "Compare pair states with the statevector oracle");
  lattice->add_option("--spins", c.spins, "Local dimensions S for pair-state negativities")->delimiter(',');
  lattice->add_option("--a", c.a, "Shift label used by the oracle check")->capture_default_str();
  lattice->add_option("--b", c.b, "Phase label used by the oracle check")->capture_default_str();
  add_common(lattice, p);

  auto* werner = app.add_subcommand("werner", "Negativity of Werner-form pair states");
  werner->add_option("--spins", c.spins, "Local dimensions S")->delimiter(',');
  werner->add_option("--p", c.weights, "Weights of the entangled projector")->delimiter(',');
  add_common(werner, p);

  auto* thresholds = app.add_subcommand("thresholds", "Minimal spin for neighbour entanglement per coordination number");
  thresholds->add_option("--z", c.z, "Coordination numbers")->delimiter(',');
  add_common(thresholds, p);

  auto* verify = app.add_subcommand("verify", "Run every reproduction criterion");
  verify->add_option("--only", c.only, "Restrict to groups (ring, lattice, thresholds, determinism) or ids")
      ->delimiter(',');
  add_common(verify, p);

  app.final_callback([&app, &p] {
    for (auto* sub : app.get_subcommands()) p.config.command = sub->get_name();
    p.config.format = cli::parse_format(p.format);
    p.config.validate();
  });
}

}  // namespace dimerlab::tool
