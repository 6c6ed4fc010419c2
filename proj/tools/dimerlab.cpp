#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_args.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dimerlab: entanglement of dimer-covering states"};
  dimerlab::tool::Parsed parsed;
  dimerlab::tool::configure(app, parsed);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const dimerlab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const auto& config = parsed.config;
  try {
    std::ostream* progress = parsed.output.empty() ? &std::cout : nullptr;
    const auto outcome = dimerlab::cli::run_command(config, progress);
    if (parsed.output.empty()) {
      dimerlab::cli::render(std::cout, config, outcome);
    } else {
      std::ofstream out(parsed.output);
      if (!out) {
        std::cerr << "error: cannot write " << parsed.output << '\n';
        return 2;
      }
      dimerlab::cli::render(out, config, outcome);
    }
    return outcome.ok ? 0 : 1;
  } catch (const dimerlab::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const dimerlab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
