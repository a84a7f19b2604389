#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace infcartel::cli {

using Json = nlohmann::json;

/// Cells are JSON values: numbers, strings, booleans, or null for absent.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

/// An extra table written next to the main output.
struct SideFile {
  std::string path;
  std::string schema;
  Table table;
};

struct Result {
  std::string schema;
  Table table;
  /// When set, the output is this JSON document instead of a table.
  std::optional<Json> document;
  Json metadata = Json::object();
  std::vector<SideFile> side_files;
};

/// Invalid flag values found after parsing; exits like a parse error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Handler = std::function<Result()>;

/// Leaf subcommands and what they run.
class Registry {
 public:
  void add(CLI::App* leaf, Handler handler) { handlers_[leaf] = std::move(handler); }
  const Handler* find(CLI::App* leaf) const {
    const auto it = handlers_.find(leaf);
    return it == handlers_.end() ? nullptr : &it->second;
  }

 private:
  std::map<CLI::App*, Handler> handlers_;
};

void add_model_commands(CLI::App& app, Registry& registry);
void add_pod_commands(CLI::App& app, Registry& registry);
void add_empirics_commands(CLI::App& app, Registry& registry);

enum class Format { Csv, Json };

/// Options of a leaf subcommand after parsing, defaults included.
Json resolved_options(const CLI::App& leaf);

/// Sets options of `leaf` from a flat JSON object keyed by long option name.
/// Values replace whatever was given on the command line.
void apply_config(CLI::App& leaf, const Json& config);

std::string render(const Result& result, const Json& config, Format format);
std::string render_table(const std::string& schema, const Table& table, const Json& config, const Json& metadata,
                         Format format);

/// Resolves an output path: "-" is stdout; relative paths go under
/// INFCARTEL_OUT_DIR when it is set.
std::optional<std::filesystem::path> output_path(const std::string& requested, const std::string& default_name,
                                                 Format format);

Json read_json_path(const std::string& path);

}  // namespace infcartel::cli
