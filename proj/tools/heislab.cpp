#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "heislab/commands.hpp"
#include "heislab/config.hpp"
#include "heislab/io.hpp"
#include "heislab/parallel.hpp"

using namespace heislab;

namespace {

const char* describe(const std::string& cmd) {
  if (cmd == "analyze") return "per-node contact residual, wedge and rank maps of a sampled map";
  if (cmd == "blowup") return "blow-up L1 errors and circle-integral wedge estimates at a point";
  if (cmd == "measure") return "box-counting dimension fits and contents of a point cloud";
  return "randomized property batteries for the wedge / rank identities";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heislab: numerical experiments on maps into the Heisenberg group"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("heislab ") + kVersion);

  struct Sub {
    CLI::App* app;
    std::string config_file;
    std::map<std::string, std::pair<CLI::Option*, std::string>> keys;
  };
  std::map<std::string, std::unique_ptr<Sub>> subs;
  for (const auto& name : command_names()) {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, describe(name));
    s->app->add_option("--config", s->config_file, "flat 'key = value' config file")->check(CLI::ExistingFile);
    const unsigned mask = command_mask(name);
    for (const auto& k : config_keys()) {
      if (!(k.commands & mask)) continue;
      auto& slot = s->keys[k.key];
      std::string help = k.help + (k.fallback.empty() ? "" : " [" + k.fallback + "]");
      slot.first = s->app->add_option("--" + k.key, slot.second, help);
    }
    subs[name] = std::move(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    apply_thread_env();
    for (auto& [name, s] : subs) {
      if (!s->app->parsed()) continue;
      ExperimentConfig cfg(name);
      if (!s->config_file.empty()) cfg.apply_text(io::read_text(s->config_file));
      for (auto& [key, slot] : s->keys) {
        if (slot.first->count()) cfg.set(key, slot.second);
      }
      const CommandResult res = run_command(cfg);
      std::cout << name << ": " << res.summary << "\n";
      for (const auto& p : res.outputs) std::cout << "  wrote " << p.string() << "\n";
      return res.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "heislab: error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitFailure;
}
