#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "surveymon/csv.h"
#include "surveymon/provenance.h"
#include "surveymon/random.h"
#include "surveymon/utf8.h"

using namespace surveymon;

TEST_CASE("utf8 decode and encode") {
  CHECK(utf8::length("abc") == 3);
  CHECK(utf8::length("é") == 1);
  CHECK(utf8::length("日本語") == 3);
  CHECK(utf8::length("😀") == 1);
  CHECK(utf8::decode("\xff" "a") == std::u32string{0xFFFD, U'a'});
  CHECK(utf8::decode("\xe6\x97") == std::u32string{0xFFFD, 0xFFFD});
  const std::string mixed = "Ça va? 日本 😀";
  CHECK(utf8::encode(utf8::decode(mixed)) == mixed);
}

TEST_CASE("utf8 round trip on random scalar values") {
  rng::Engine e(2);
  for (int i = 0; i < 500; ++i) {
    std::u32string cps;
    for (int k = 0; k < 10; ++k) {
      char32_t cp;
      do {
        cp = static_cast<char32_t>(rng::below(e, 0x110000));
      } while (cp >= 0xD800 && cp <= 0xDFFF);
      cps.push_back(cp);
    }
    CHECK(utf8::decode(utf8::encode(cps)) == cps);
  }
}

TEST_CASE("utf8 classes and folding") {
  CHECK(utf8::is_letter(U'é'));
  CHECK(utf8::is_letter(U'日'));
  CHECK_FALSE(utf8::is_letter(U'?'));
  CHECK(utf8::is_digit(U'7'));
  CHECK(utf8::is_space(0x00A0));
  CHECK(utf8::is_mark(0x0301));
  CHECK(utf8::fold("ÀÉÎ Straße ΣΑ ДОМ") == "àéî straße σα дом");
  CHECK(utf8::trim("  x y \n") == "x y");
  CHECK(utf8::collapse_whitespace(" a \t b\n\nc ") == "a b c");
}

TEST_CASE("csv reading") {
  std::istringstream in("# comment\na,b,c\n\"x, y\",\"he said \"\"hi\"\"\",\n\n\"multi\nline\",2,3\n");
  const auto rows = csv::read(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"a", "b", "c"});
  CHECK(rows[1] == csv::Row{"x, y", "he said \"hi\"", ""});
  CHECK(rows[2][0] == "multi\nline");

  std::istringstream unterminated("a,\"b\n");
  CHECK_THROWS_AS(csv::read(unterminated), csv::CsvError);
}

TEST_CASE("csv escaping round trip") {
  const csv::Row row{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
  std::istringstream in(csv::join(row) + "\n");
  CHECK(csv::read(in).at(0) == row);
  CHECK(csv::escape("plain") == "plain");
}

TEST_CASE("number formatting round trips") {
  rng::Engine e(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng::uniform01(e) - 0.5) * std::pow(10.0, static_cast<double>(rng::between(e, -8, 8)));
    CHECK(csv::parse_number(csv::format_number(v)) == v);
  }
  CHECK(csv::format_number(3.0) == "3");
  CHECK(csv::format_number(0.1) == "0.1");
  CHECK_THROWS_AS(csv::parse_number("1.5x"), csv::CsvError);
  CHECK_THROWS_AS(csv::parse_number(""), csv::CsvError);
}

TEST_CASE("fnv-1a test vectors") {
  CHECK(provenance::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(provenance::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(provenance::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config hash ignores key order") {
  const auto a = nlohmann::json::parse(R"({"b": 1, "a": {"y": 2, "x": [1, 2]}})");
  const auto b = nlohmann::json::parse(R"({"a": {"x": [1, 2], "y": 2}, "b": 1})");
  CHECK(provenance::config_hash(a) == provenance::config_hash(b));
  CHECK(provenance::config_hash(a).size() == 16);
  CHECK(provenance::config_hash(a) != provenance::config_hash(nlohmann::json::parse(R"({"b": 2})")));
}

TEST_CASE("meta header") {
  const auto m = provenance::meta("drift", nlohmann::json::object(), 42);
  CHECK(m["tool"] == "surveymon");
  CHECK(m["version"] == std::string(provenance::tool_version()));
  CHECK(m["command"] == "drift");
  CHECK(m["seed"] == 42);
  CHECK_FALSE(provenance::meta("extract", nlohmann::json::object()).contains("seed"));
  const auto line = provenance::csv_comment(m);
  CHECK(line.rfind("# ", 0) == 0);
  CHECK(line.find("seed=42") != std::string::npos);
  CHECK(line.find('\n') == line.size() - 1);
}
