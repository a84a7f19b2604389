#include "infcartel/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "infcartel/empirics/text.hpp"

namespace infcartel::io {

InputError::InputError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InputError(source, header_line, "missing column '" + std::string(name) + "'");
}

const std::string& CsvTable::field(const CsvRow& row, std::size_t col) const {
  if (col >= row.fields.size())
    throw InputError(source, row.line, "expected at least " + std::to_string(col + 1) + " fields, found " +
                                           std::to_string(row.fields.size()));
  return row.fields[col];
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  table.source = source;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw InputError(source, 0, "read failed");

  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = content.size();
  bool have_header = false;
  while (i < n) {
    const std::size_t row_line = line;
    if (content[i] == '#') {
      const std::size_t end = content.find('\n', i);
      std::string text = content.substr(i, end == std::string::npos ? std::string::npos : end - i);
      if (!text.empty() && text.back() == '\r') text.pop_back();
      table.comments.push_back(std::move(text));
      i = end == std::string::npos ? n : end + 1;
      ++line;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    bool row_done = false;
    while (i < n && !row_done) {
      const char c = content[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < n && content[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          quoted = false;
          ++i;
          continue;
        }
        if (c == '\n') ++line;
        field += c;
        ++i;
        continue;
      }
      if (c == '"') {
        if (!field.empty()) throw InputError(source, line, "quote inside unquoted field");
        quoted = true;
        was_quoted = true;
        ++i;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
        ++i;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && i + 1 < n && content[i + 1] == '\n') ++i;
        ++i;
        ++line;
        row_done = true;
      } else {
        if (was_quoted) throw InputError(source, line, "text after closing quote");
        field += c;
        ++i;
      }
    }
    if (quoted) throw InputError(source, row_line, "unterminated quoted field");
    if (!row_done) ++line;
    if (fields.empty() && field.empty() && !was_quoted) continue;
    fields.push_back(std::move(field));
    if (!have_header) {
      table.header = std::move(fields);
      table.header_line = row_line;
      have_header = true;
    } else {
      table.rows.push_back(CsvRow{row_line, std::move(fields)});
    }
  }
  if (!have_header) throw InputError(source, 0, "no header row");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  return read_csv(in, path.string());
}

CsvTable read_csv_path(const std::string& path) {
  if (path == "-") return read_csv(std::cin, "<stdin>");
  return read_csv_file(path);
}

double parse_double(std::string_view text, const std::string& source, std::size_t line, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InputError(source, line, "invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line, std::string_view what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InputError(source, line, "invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos && (field.empty() || field.front() != '#'))
    return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string schema_line(std::string_view name, int version) {
  return "# schema: infcartel/" + std::string(name) + "/v" + std::to_string(version);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignore;
      std::filesystem::remove(tmp, ignore);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    std::filesystem::remove(tmp, ignore);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

pod::SubmissionLog load_submissions(const CsvTable& t) {
  const std::size_t cm = t.column("member_id"), cp = t.column("post_id"), ct = t.column("timestamp");
  pod::SubmissionLog log;
  log.reserve(t.rows.size());
  for (const auto& row : t.rows)
    log.push_back(pod::Submission{t.field(row, cm), t.field(row, cp),
                                  parse_int(t.field(row, ct), t.source, row.line, "timestamp")});
  return log;
}

std::vector<pod::EngagementEvent> load_events(const CsvTable& t) {
  const std::size_t cm = t.column("member_id"), cp = t.column("post_id"), ct = t.column("timestamp"),
                    ck = t.column("kind");
  std::vector<pod::EngagementEvent> events;
  events.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    pod::EngagementKind kind;
    try {
      kind = pod::parse_engagement_kind(t.field(row, ck));
    } catch (const std::invalid_argument& e) {
      throw InputError(t.source, row.line, e.what());
    }
    events.push_back(pod::EngagementEvent{t.field(row, cm), t.field(row, cp),
                                          parse_int(t.field(row, ct), t.source, row.line, "timestamp"), kind});
  }
  return events;
}

std::vector<empirics::PanelObservation> load_panel(const CsvTable& t) {
  const std::size_t ca = t.column("author_id"), cc = t.column("commenter_id"), ck = t.column("class"),
                    cs = t.column("similarity");
  std::vector<empirics::PanelObservation> panel;
  panel.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    empirics::CommenterClass cls;
    try {
      cls = empirics::parse_commenter_class(t.field(row, ck));
    } catch (const std::invalid_argument& e) {
      throw InputError(t.source, row.line, e.what());
    }
    panel.push_back(empirics::PanelObservation{t.field(row, ca), t.field(row, cc), cls,
                                               parse_double(t.field(row, cs), t.source, row.line, "similarity")});
  }
  return panel;
}

std::vector<empirics::EmbeddingVector> load_embeddings(const CsvTable& t) {
  if (t.header.size() != 2 || t.header[0] != "id")
    throw InputError(t.source, t.header_line, "embedding header must be 'id,<dimension>'");
  const std::int64_t d = parse_int(t.header[1], t.source, t.header_line, "dimension");
  if (d < 1) throw InputError(t.source, t.header_line, "dimension must be positive");
  std::vector<empirics::EmbeddingVector> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (row.fields.size() != static_cast<std::size_t>(d) + 1)
      throw InputError(t.source, row.line, "expected " + std::to_string(d) + " values, found " +
                                               std::to_string(row.fields.size() - 1));
    empirics::EmbeddingVector v{row.fields[0], {}};
    v.values.reserve(static_cast<std::size_t>(d));
    for (std::size_t j = 1; j < row.fields.size(); ++j)
      v.values.push_back(parse_double(row.fields[j], t.source, row.line, "embedding value"));
    out.push_back(std::move(v));
  }
  return out;
}

empirics::Corpus load_corpus(const CsvTable& t) {
  const std::size_t cu = t.column("user_id"), cx = t.column("text");
  empirics::Corpus corpus;
  std::map<std::string, std::size_t> index;
  for (const auto& row : t.rows) {
    const std::string& user = t.field(row, cu);
    const auto [it, added] = index.try_emplace(user, corpus.size());
    if (added) corpus.push_back(empirics::Document{user, {}});
    auto tags = empirics::extract_hashtags(t.field(row, cx));
    auto& tokens = corpus[it->second].tokens;
    tokens.insert(tokens.end(), std::make_move_iterator(tags.begin()), std::make_move_iterator(tags.end()));
  }
  return corpus;
}

}  // namespace infcartel::io
