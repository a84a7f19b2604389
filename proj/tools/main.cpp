#include <cstdio>
#include <iostream>

#include "cli.hpp"
#include "infcartel/io.hpp"
#include "infcartel/montecarlo.hpp"

using namespace infcartel;
using namespace infcartel::cli;

namespace {

CLI::App* selected_leaf(CLI::App& app) {
  CLI::App* at = &app;
  while (!at->get_subcommands().empty()) at = at->get_subcommands().front();
  return at;
}

std::string command_path(CLI::App* leaf) {
  std::string path;
  for (CLI::App* a = leaf; a->get_parent() != nullptr; a = a->get_parent())
    path = a->get_name() + (path.empty() ? "" : " ") + path;
  return path;
}

void emit(const std::string& content, const std::optional<std::filesystem::path>& path) {
  if (path) {
    if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
    io::write_atomic(*path, content);
  } else {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influencer cartel model: analytics, simulation, pod protocol and empirics"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_name = "csv", out, config_path;
  app.add_option("--format", format_name, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--out", out, "Output file; '-' for stdout. Relative paths go under INFCARTEL_OUT_DIR");
  app.add_option("--config", config_path, "JSON object of option values; overrides flags");

  Registry registry;
  add_model_commands(app, registry);
  add_pod_commands(app, registry);
  add_empirics_commands(app, registry);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* leaf = selected_leaf(app);
  const Handler* handler = registry.find(leaf);
  if (handler == nullptr) {
    std::cerr << app.help();
    return 2;
  }

  try {
    if (!config_path.empty()) apply_config(*leaf, read_json_path(config_path));
    Format format = format_name == "json" ? Format::Json : Format::Csv;
    Json config = resolved_options(*leaf);
    const std::string command = command_path(leaf);
    Result result = (*handler)();
    if (result.document) format = Format::Json;
    Json full = {{"command", command}, {"format", format == Format::Json ? "json" : "csv"}, {"options", config}};
    for (const auto& side : result.side_files) {
      const auto p = output_path(side.path, side.schema, Format::Csv);
      if (!p) throw UsageError("side outputs need a file path, not stdout");
      emit(render_table(side.schema, side.table, full, Json::object(), Format::Csv), p);
    }
    emit(render(result, full, format), output_path(out, result.schema, format));
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (last iterate " << e.last_iterate() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
