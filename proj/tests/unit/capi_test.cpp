#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>

#include "solsem/solsem.h"

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SOLSEM_SAMPLES_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Owns one returned string.
struct Out {
  char* p = nullptr;
  ~Out() { ss_free_string(p); }
  char** operator&() { return &p; }
  std::string str() const { return p ? p : ""; }
  std::size_t lines() const {
    const std::string s = str();
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  }
};

using SessionPtr = std::unique_ptr<ss_session, decltype(&ss_session_free)>;
SessionPtr make_session() { return SessionPtr(ss_session_new(), &ss_session_free); }

const char* kCounter = R"(
contract Counter {
  uint public count = 0;
  function bump() public { count = count + 1; }
  function spin() public { while (true) { count = count + 1; } }
}
)";

}  // namespace

TEST_CASE("argument validation") {
  auto s = make_session();
  REQUIRE(s);
  CHECK(ss_set_gas(nullptr, 1) == SS_USAGE);
  CHECK(std::string(ss_last_error()) == "null session");
  CHECK(ss_set_gas(s.get(), 0) == SS_USAGE);
  CHECK(ss_set_k(s.get(), 0) == SS_USAGE);
  CHECK(ss_set_gas(s.get(), 10) == SS_OK);
  CHECK(ss_set_block_field(s.get(), "weather", 1) == SS_USAGE);
  CHECK(ss_set_block_field(s.get(), "timestamp", -1) == SS_USAGE);
  CHECK(ss_set_block_field(s.get(), "sender", -1) == SS_OK);
  CHECK(ss_set_mode(s.get(), "fast") == SS_USAGE);
  CHECK(ss_set_mode(s.get(), "concolic") == SS_OK);
  CHECK(ss_add_symbolic(s.get(), "x:float") == SS_USAGE);
  CHECK(ss_load_source(s.get(), nullptr) == SS_USAGE);
  CHECK(ss_step(s.get(), nullptr, nullptr) == SS_USAGE);
}

TEST_CASE("parse errors are usage errors with a position") {
  auto s = make_session();
  CHECK(ss_load_source(s.get(), "contract C {\n  int x\n}\n") == SS_USAGE);
  CHECK(std::string(ss_last_error()).rfind("3:", 0) == 0);
  CHECK(ss_load_spec(s.get(), "frobnicate\n") == SS_USAGE);
  Out report;
  CHECK(ss_typecheck(s.get(), &report) == SS_USAGE);
}

TEST_CASE("typecheck and AST emission") {
  auto s = make_session();
  REQUIRE(ss_load_source(s.get(), kCounter) == SS_OK);
  Out report;
  CHECK(ss_typecheck(s.get(), &report) == SS_OK);
  CHECK(report.str().rfind("well-typed: 1 contracts", 0) == 0);
  Out ast;
  REQUIRE(ss_emit_ast(s.get(), &ast) == SS_OK);
  const auto j = nlohmann::json::parse(ast.str());
  REQUIRE(j.is_array());
  CHECK(j[0]["kind"] == "Contract");
}

TEST_CASE("concrete runs") {
  auto s = make_session();
  REQUIRE(ss_load_source(s.get(), kCounter) == SS_OK);
  REQUIRE(ss_set_entry(s.get(), "bump") == SS_OK);
  Out dump, json;
  REQUIRE(ss_run(s.get(), &dump, &json) == SS_OK);
  const auto j = nlohmann::json::parse(json.str());
  CHECK(j["status"] == "done");
  CHECK(j["threw"] == false);
  CHECK(dump.lines() == 100);

  REQUIRE(ss_set_entry(s.get(), "spin") == SS_OK);
  REQUIRE(ss_set_gas(s.get(), 25) == SS_OK);
  Out dump2, json2;
  REQUIRE(ss_run(s.get(), &dump2, &json2) == SS_OK);
  const auto k = nlohmann::json::parse(json2.str());
  CHECK(k["status"] == "out-of-gas");
  CHECK(k["dispatched"] == 25);

  REQUIRE(ss_set_entry(s.get(), "nothing") == SS_OK);
  Out dump3;
  CHECK(ss_run(s.get(), &dump3, nullptr) == SS_USAGE);
}

TEST_CASE("memory size changes rebind the source") {
  auto s = make_session();
  REQUIRE(ss_load_source(s.get(), kCounter) == SS_OK);
  REQUIRE(ss_set_entry(s.get(), "bump") == SS_OK);
  REQUIRE(ss_set_memory_size(s.get(), 40) == SS_OK);
  Out dump;
  REQUIRE(ss_run(s.get(), &dump, nullptr) == SS_OK);
  CHECK(dump.lines() == 40);
  CHECK(ss_set_memory_size(s.get(), 5) == SS_USAGE);
}

TEST_CASE("stepping") {
  auto s = make_session();
  REQUIRE(ss_load_source(s.get(), kCounter) == SS_OK);
  REQUIRE(ss_set_entry(s.get(), "bump") == SS_OK);
  Out first;
  REQUIRE(ss_step_begin(s.get(), &first) == SS_OK);
  int finished = 0;
  int steps = 0;
  std::string last;
  while (!finished && steps < 50) {
    Out text;
    REQUIRE(ss_step(s.get(), &text, &finished) == SS_OK);
    last = text.str();
    ++steps;
  }
  CHECK(finished);
  CHECK(steps >= 2);
  CHECK(last.rfind("step ", 0) == 0);
  CHECK(last.find("status=done") != std::string::npos);
}

TEST_CASE("verification verdicts map to status codes") {
  auto s = make_session();
  REQUIRE(ss_load_source(s.get(), slurp("wallet.lls").c_str()) == SS_OK);
  REQUIRE(ss_load_spec(s.get(), slurp("no_in_time.spec").c_str()) == SS_OK);
  Out text, json;
  CHECK(ss_verify(s.get(), &text, &json) == SS_OK);
  CHECK(text.str().rfind("verified", 0) == 0);
  CHECK(nlohmann::json::parse(json.str())["status"] == "verified");

  auto t = make_session();
  REQUIRE(ss_load_source(t.get(), slurp("wallet.lls").c_str()) == SS_OK);
  std::string spec = slurp("no_in_time.spec");
  spec.replace(spec.find("post throw"), 10, "post nothrow");
  REQUIRE(ss_load_spec(t.get(), spec.c_str()) == SS_OK);
  Out text2, json2;
  CHECK(ss_verify(t.get(), &text2, &json2) == SS_NOT_VERIFIED);
  const auto j = nlohmann::json::parse(json2.str());
  CHECK(j["status"] == "refuted");
  CHECK(j["witness"].size() == 3);
}

TEST_CASE("oracle through the C interface") {
  Out text, json;
  CHECK(ss_oracle(1, 50, &text, &json) == SS_OK);
  const auto j = nlohmann::json::parse(json.str());
  CHECK(j["checked"] == 50);
  CHECK(j["divergences"].empty());
}
