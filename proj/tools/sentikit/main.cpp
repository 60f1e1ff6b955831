#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "sentikit/error.hpp"
#include "sentikit/parallel.hpp"

namespace {

// First bare word that is neither a global option value nor a subcommand.
std::string unknown_subcommand(const CLI::App& app, int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--seed" || a == "--jobs" || a == "--config") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    try {
      (void)app.get_subcommand(a);
    } catch (const CLI::OptionNotFound&) {
      return a;
    }
    return "";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sentikit;
  CLI::App app{"sentikit: financial news sentiment pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file (TOML/INI, one section per subcommand)")
      ->envname("SENTIKIT_CONFIG");

  cli::Globals g;
  app.add_option("--seed", g.seed, "global seed; per-component seeds derive from it");
  app.add_option("--jobs", g.jobs, "maximum worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber)
      ->each([](const std::string& v) { set_max_threads(std::stoi(v)); });

  cli::add_data_commands(app, g);
  cli::add_lexicon_commands(app, g);
  cli::add_model_commands(app, g);
  cli::add_eval_commands(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    auto unknown = app.get_subcommands().empty() ? unknown_subcommand(app, argc, argv) : "";
    if (!unknown.empty()) std::cerr << "error: usage: unknown subcommand '" << unknown << "'\n\n" << app.help();
    else std::cerr << "error: usage: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
