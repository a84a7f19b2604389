#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "infcartel/io.hpp"

namespace infcartel::cli {

namespace {

Json typed(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return s;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return s;
  if (s.find_first_of(".eEnN") == std::string::npos) {
    const long long i = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() + s.size()) return i;
  }
  return x;
}

std::string bare_name(const CLI::Option& opt) {
  return opt.get_lnames().empty() ? opt.get_name() : opt.get_lnames().front();
}

std::string cell_csv(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_string()) return io::csv_escape(v.get<std::string>());
  return io::csv_escape(v.dump());
}

std::string schema_id(const std::string& schema) { return "infcartel/" + schema + "/v1"; }

}  // namespace

Json resolved_options(const CLI::App& leaf) {
  Json out = Json::object();
  for (const CLI::Option* opt : leaf.get_options()) {
    const std::string name = bare_name(*opt);
    if (name == "help" || name == "config") continue;
    const auto& res = opt->results();
    if (opt->count() == 0) {
      const std::string def = opt->get_default_str();
      if (opt->get_expected_max() > 1 && !def.empty() && (def.front() == '[' || def.front() == '{')) {
        Json arr = Json::array();
        std::stringstream ss(def.substr(1, def.size() - 2));
        for (std::string item; std::getline(ss, item, ',');) arr.push_back(typed(item));
        out[name] = arr;
      } else {
        out[name] = def.empty() ? Json(nullptr) : typed(def);
      }
    } else if (opt->get_expected_max() > 1) {
      Json arr = Json::array();
      for (const auto& r : res) arr.push_back(typed(r));
      out[name] = arr;
    } else if (opt->get_type_size() == 0) {
      out[name] = true;
    } else {
      out[name] = typed(res.back());
    }
  }
  return out;
}

void apply_config(CLI::App& leaf, const Json& config) {
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    CLI::Option* opt = leaf.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "help" || key == "config")
      throw UsageError("config: unknown option '" + key + "' for " + leaf.get_name());
    opt->clear();
    const auto add = [&](const Json& v) {
      opt->add_result(v.is_string() ? v.get<std::string>() : v.is_boolean() ? (v.get<bool>() ? "true" : "false")
                                                                            : v.dump());
    };
    if (value.is_array()) {
      for (const auto& v : value) add(v);
    } else if (!value.is_null()) {
      add(value);
    }
    if (opt->count() > 0) opt->run_callback();
  }
}

std::string render_table(const std::string& schema, const Table& table, const Json& config, const Json& metadata,
                         Format format) {
  if (format == Format::Json) {
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = r[c];
      rows.push_back(std::move(obj));
    }
    Json doc = {{"schema", schema_id(schema)}, {"config", config}, {"metadata", metadata},
                {"columns", table.columns}, {"rows", rows}};
    return doc.dump(2) + "\n";
  }
  std::string out = io::schema_line(schema) + "\n";
  out += "# config: " + config.dump() + "\n";
  if (!metadata.empty()) out += "# metadata: " + metadata.dump() + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + io::csv_escape(table.columns[c]);
  out += "\n";
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + cell_csv(r[c]);
    out += "\n";
  }
  return out;
}

std::string render(const Result& result, const Json& config, Format format) {
  if (result.document) {
    Json doc = {{"schema", schema_id(result.schema)}, {"config", config}, {"metadata", result.metadata},
                {"model", *result.document}};
    return doc.dump(2) + "\n";
  }
  return render_table(result.schema, result.table, config, result.metadata, format);
}

std::optional<std::filesystem::path> output_path(const std::string& requested, const std::string& default_name,
                                                 Format format) {
  if (requested == "-") return std::nullopt;
  const char* env = std::getenv("INFCARTEL_OUT_DIR");
  const bool have_dir = env != nullptr && *env != '\0';
  if (requested.empty()) {
    if (!have_dir) return std::nullopt;
    return std::filesystem::path(env) / (default_name + (format == Format::Json ? ".json" : ".csv"));
  }
  std::filesystem::path p(requested);
  if (p.is_relative() && have_dir) p = std::filesystem::path(env) / p;
  return p;
}

Json read_json_path(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::InputError(path, 0, "cannot open file");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    throw io::InputError(path, 0, "invalid JSON: " + msg);
  }
}

}  // namespace infcartel::cli
