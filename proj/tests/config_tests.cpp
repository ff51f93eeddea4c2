#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "nlop/config.hpp"

using namespace nlop;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("sections, bare keys, comments, and whitespace") {
  Config c = Config::parse_string(
      "# leading comment\n"
      "top = 1\n"
      "\n"
      "[grid]\n"
      "  nodes = 128   \n"
      "; alt comment style\n"
      "[solver]\n"
      "tol = 1e-9\n"
      "verbose = yes\n");
  CHECK(c.has("top"));
  CHECK(c.get_int("grid.nodes") == 128);
  CHECK(c.get_double("solver.tol") == doctest::Approx(1e-9));
  CHECK(c.get_bool("solver.verbose"));
  CHECK(c.keys() == std::vector<std::string>{"grid.nodes", "solver.tol", "solver.verbose", "top"});
}

TEST_CASE("parse errors carry origin and line number") {
  std::string msg =
      error_of([] { Config::parse_string("a = 1\nbroken line\n", "demo.cfg"); });
  CHECK(msg.find("demo.cfg:2") != std::string::npos);
  CHECK(msg.find("key = value") != std::string::npos);

  msg = error_of([] { Config::parse_string("[grid\n", "demo.cfg"); });
  CHECK(msg.find("demo.cfg:1") != std::string::npos);
  CHECK(msg.find("unterminated") != std::string::npos);

  msg = error_of([] { Config::parse_string("[]\n", "demo.cfg"); });
  CHECK(msg.find("empty section") != std::string::npos);

  msg = error_of([] { Config::parse_string("= 3\n", "demo.cfg"); });
  CHECK(msg.find("empty key") != std::string::npos);

  msg = error_of([] { Config::parse_string("[a]\nk = 1\nk = 2\n", "demo.cfg"); });
  CHECK(msg.find("demo.cfg:3") != std::string::npos);
  CHECK(msg.find("duplicate key 'a.k'") != std::string::npos);
}

TEST_CASE("typed getters validate their values") {
  Config c = Config::parse_string(
      "f = 2.5\n"
      "i = 7\n"
      "bad_num = 3.5x\n"
      "frac = 2.5\n"
      "flag_no = no\n"
      "flag_bad = maybe\n");
  CHECK(c.get_double("f") == 2.5);
  CHECK(c.get_int("i") == 7);
  CHECK_FALSE(c.get_bool("flag_no"));
  CHECK_THROWS_AS(c.get_double("bad_num"), std::runtime_error);
  CHECK_THROWS_AS(c.get_int("frac"), std::runtime_error);
  CHECK_THROWS_AS(c.get_bool("flag_bad"), std::runtime_error);
  CHECK_THROWS_AS(c.get_string("missing"), std::runtime_error);
  // fallbacks only apply to absent keys, not malformed ones
  CHECK(c.get_double("missing", 4.0) == 4.0);
  CHECK(c.get_int("missing", 5) == 5);
  CHECK(c.get_bool("missing", true));
  CHECK(c.get_string("missing", "dflt") == "dflt");
  CHECK_THROWS_AS(c.get_double("bad_num", 1.0), std::runtime_error);
}

TEST_CASE("file parsing and the missing-file error") {
  std::string path = "/tmp/nlop_config_test.cfg";
  {
    std::ofstream out(path);
    out << "[run]\nseed = 3\n";
  }
  Config c = Config::parse_file(path);
  CHECK(c.get_int("run.seed") == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(Config::parse_file(path), std::runtime_error);
}

TEST_CASE("set overrides and adds entries") {
  Config c = Config::parse_string("a = 1\n");
  c.set("a", "2");
  c.set("extra.b", "x");
  CHECK(c.get_int("a") == 2);
  CHECK(c.get_string("extra.b") == "x");
}
