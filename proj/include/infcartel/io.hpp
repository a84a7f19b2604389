#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "infcartel/empirics/lda.hpp"
#include "infcartel/empirics/regression.hpp"
#include "infcartel/empirics/similarity.hpp"
#include "infcartel/pod.hpp"

namespace infcartel::io {

/// Bad input file content; the message carries source and line number.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// RFC 4180 style CSV. Lines whose first character is '#' outside a quoted
/// field are comments; blank lines are skipped. The first remaining row is
/// the header.
struct CsvTable {
  std::string source;
  std::size_t header_line = 0;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::vector<std::string> comments;

  /// Index of column `name`; throws InputError naming the header line.
  std::size_t column(std::string_view name) const;
  const std::string& field(const CsvRow& row, std::size_t col) const;
};

CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv_file(const std::filesystem::path& path);
/// "-" reads stdin.
CsvTable read_csv_path(const std::string& path);

double parse_double(std::string_view text, const std::string& source, std::size_t line,
                    std::string_view what);
std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line,
                       std::string_view what);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);
std::string csv_escape(std::string_view field);
/// Comment line put in row 1 of every CSV this project writes.
std::string schema_line(std::string_view name, int version = 1);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

pod::SubmissionLog load_submissions(const CsvTable& table);
std::vector<pod::EngagementEvent> load_events(const CsvTable& table);
std::vector<empirics::PanelObservation> load_panel(const CsvTable& table);

/// Embedding table: header row `id,<d>`, then rows `id,x1,...,xd`.
std::vector<empirics::EmbeddingVector> load_embeddings(const CsvTable& table);

/// Post table with columns user_id,text. Each user's tokens are the
/// hashtags of their posts in row order; users appear in first-seen order.
empirics::Corpus load_corpus(const CsvTable& table);

}  // namespace infcartel::io
