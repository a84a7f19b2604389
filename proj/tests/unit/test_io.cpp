#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "infcartel/io.hpp"
#include "infcartel/random.hpp"

using namespace infcartel;
using namespace infcartel::io;

namespace {

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in, "mem.csv");
}

std::string error_of(const std::string& text, CsvTable (*load)(const std::string&) = parse) {
  try {
    load(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

template <class F>
std::string error_from(F&& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("csv parsing") {
  const CsvTable t = parse("# schema: x\n\na,b,c\n1,\"two, 2\",3\n\"multi\nline\",\"q\"\"uote\",\n# trailing note\n");
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  CHECK(t.header_line == 3);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields == std::vector<std::string>{"1", "two, 2", "3"});
  CHECK(t.rows[0].line == 4);
  CHECK(t.rows[1].fields == std::vector<std::string>{"multi\nline", "q\"uote", ""});
  CHECK(t.rows[1].line == 5);
  CHECK(t.comments.size() == 2);
  CHECK(t.column("c") == 2);
  CHECK(parse("x,y\r\n1,2\r\n").rows[0].fields == std::vector<std::string>{"1", "2"});
}

TEST_CASE("csv errors carry source and line") {
  CHECK(error_of("a,b\n1,\"open\n") == "mem.csv:2: unterminated quoted field");
  CHECK(error_of("a,b\n1,x\"y\n").rfind("mem.csv:2:", 0) == 0);
  CHECK(error_of("a,b\n\"q\"z,1\n").rfind("mem.csv:2:", 0) == 0);
  CHECK(error_of("# only a comment\n") == "mem.csv: no header row");
  const CsvTable t = parse("a,b\n1,2\n");
  CHECK(error_from([&] { t.column("zzz"); }) == "mem.csv:1: missing column 'zzz'");
  CHECK(error_from([] { read_csv_file("/nonexistent/file.csv"); }).find("cannot open") != std::string::npos);
}

TEST_CASE("numbers") {
  CHECK(parse_double("0.25", "s", 1, "x") == 0.25);
  CHECK(parse_double("-1e-3", "s", 1, "x") == -0.001);
  CHECK(parse_int("42", "s", 1, "x") == 42);
  CHECK_THROWS_AS(parse_double("abc", "s", 7, "x"), InputError);
  CHECK_THROWS_AS(parse_double("1.5x", "s", 7, "x"), InputError);
  CHECK_THROWS_AS(parse_int("1.5", "s", 7, "x"), InputError);
  CHECK_THROWS_AS(parse_int("", "s", 7, "x"), InputError);
  try {
    parse_double("nope", "f.csv", 9, "similarity");
  } catch (const InputError& e) {
    CHECK(e.line() == 9);
    CHECK(std::string(e.what()).rfind("f.csv:9:", 0) == 0);
  }

  RandomStream rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(200)) - 100);
    REQUIRE(parse_double(format_double(x), "s", 1, "x") == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv escaping round-trips") {
  for (const std::string s : {"plain", "with,comma", "with\"quote", "multi\nline", "#hash", ""}) {
    const CsvTable t = parse("h,k\n" + csv_escape(s) + ",1\n");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].fields[0] == s);
  }
  CHECK(csv_escape("plain") == "plain");
  CHECK(schema_line("welfare-curve") == "# schema: infcartel/welfare-curve/v1");
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / ("infcartel_io_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  CHECK(content == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS(write_atomic(dir / "missing" / "x.csv", "x"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("domain loaders") {
  const auto log = load_submissions(parse("member_id,post_id,timestamp\nA,p1,1\nB,p2,5\n"));
  REQUIRE(log.size() == 2);
  CHECK(log[1] == pod::Submission{"B", "p2", 5});
  CHECK(error_from([] { load_submissions(parse("member_id,post_id,timestamp\nA,p1,1\nB,p2,later\n")); })
            .rfind("mem.csv:3:", 0) == 0);

  const auto ev = load_events(parse("member_id,post_id,timestamp,kind\nA,p1,3,comment\n"));
  CHECK(ev.at(0).kind == pod::EngagementKind::Comment);
  CHECK(error_from([] { load_events(parse("member_id,post_id,timestamp,kind\nA,p1,3,share\n")); })
            .rfind("mem.csv:2:", 0) == 0);

  const auto panel = load_panel(parse("author_id,commenter_id,class,similarity\na,c,topic,0.5\n"));
  CHECK(panel.at(0).commenter_class == empirics::CommenterClass::TopicCartel);
  CHECK(panel.at(0).similarity == 0.5);
  CHECK(error_from([] { load_panel(parse("author_id,commenter_id,class,similarity\na,c,bot,0.5\n")); })
            .rfind("mem.csv:2:", 0) == 0);

  const auto emb = load_embeddings(parse("id,3\nx,1,2,3\ny,0,0,1\n"));
  REQUIRE(emb.size() == 2);
  CHECK(emb[0].values == std::vector<double>{1, 2, 3});
  CHECK(error_from([] { load_embeddings(parse("id,3\nx,1,2\n")); }).rfind("mem.csv:2:", 0) == 0);
  CHECK(error_from([] { load_embeddings(parse("name,3\nx,1,2,3\n")); }).rfind("mem.csv:1:", 0) == 0);

  const auto corpus = load_corpus(parse("user_id,text\nu2,\"#alpha #beta\"\nu1,#gamma\nu2,#delta_x\n"));
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].id == "u2");
  CHECK(corpus[0].tokens == std::vector<std::string>{"alpha", "beta", "delta x"});
  CHECK(corpus[1].tokens == std::vector<std::string>{"gamma"});
}
