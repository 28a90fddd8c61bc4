#include <doctest.h>

#include <fstream>
#include <sstream>

#include "solsem/arith.hpp"
#include "solsem/session.hpp"
#include "solsem/value.hpp"

using namespace solsem;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SOLSEM_SAMPLES_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Session wallet_session(const std::string& spec) {
  Session s;
  s.load_source(slurp("wallet.lls"));
  s.apply_spec(parse_spec_file(slurp(spec)));
  return s;
}

int line_of_error(const std::string& text) {
  try {
    parse_spec_file(text);
  } catch (const FrontendError& e) {
    return e.pos.line;
  }
  return 0;
}

const char* kCounter = R"(
contract Counter {
  uint public count = 0;
  uint public limit = 3;
  function bump() public {
    require(count < limit);
    count = count + 1;
  }
  function add(uint n) public {
    count = count + n;
  }
}
)";

std::optional<std::int64_t> global_int(const Session& s, const MemoryState& m, const std::string& name) {
  auto v = concrete_scalar(m.at(s.program().globals.at(name).addr));
  if (!v) return std::nullopt;
  return arith::as_signed(v->type, v->bits);
}

}  // namespace

TEST_CASE("symbol specs") {
  const SymbolSpec a = parse_symbol_spec("now:int:0..7");
  CHECK(a.name == "now");
  CHECK_FALSE(a.is_bool);
  REQUIRE(a.range);
  CHECK(a.range->first == 0);
  CHECK(a.range->second == 7);
  CHECK(parse_symbol_spec("flag:bool").is_bool);
  CHECK_FALSE(parse_symbol_spec("n:uint").range);
  CHECK_THROWS(parse_symbol_spec("n"));
  CHECK_THROWS(parse_symbol_spec("n:float"));
  CHECK_THROWS(parse_symbol_spec("n:int:5..1"));
}

TEST_CASE("spec file directives") {
  const SpecFile f = parse_spec_file(slurp("no_in_time.spec"));
  CHECK(f.entry == "wallet");
  CHECK(f.value == 1000000000000000000);
  CHECK(f.pre.size() == 2);
  CHECK(f.symbols.size() == 3);
  CHECK(f.assumptions.size() == 1);
  REQUIRE(f.post.size() == 1);
  CHECK(f.post[0].kind == PostClause::Kind::Throw);
  CHECK(f.mode == Mode::Static);

  const SpecFile g = parse_spec_file("gas 50\nk 7\nsender 9\ntimestamp 4\npost equals x 3\npost unchanged y\n"
                                     "post nothrow\nsummary f { x = 1; }\n");
  CHECK(g.gas == 50u);
  CHECK(g.k == 7u);
  CHECK(g.sender == 9);
  CHECK(g.timestamp == 4);
  REQUIRE(g.post.size() == 3);
  CHECK(g.post[0].kind == PostClause::Kind::Equals);
  CHECK(g.post[0].value == "3");
  CHECK(g.post[1].kind == PostClause::Kind::Unchanged);
  REQUIRE(g.summaries.size() == 1);
  CHECK(g.summaries[0].first == "f");
}

TEST_CASE("spec file errors name the line") {
  CHECK(line_of_error("entry f\n\nbogus 1\n") == 3);
  CHECK(line_of_error("# c\ngas ten\n") == 2);
  CHECK(line_of_error("mode fast\n") == 1);
  CHECK(line_of_error("post maybe\n") == 1);
  CHECK(line_of_error("symbolic x\n") == 1);
}

TEST_CASE("wallet rejects deposits outside the window") {
  Session s = wallet_session("no_in_time.spec");
  const VerifyReport r = s.verify();
  CHECK(r.verdict.status == VerdictStatus::Verified);
  CHECK(r.verdict.paths >= 1);
}

TEST_CASE("concolic wallet run ends in the throw state") {
  Session s = wallet_session("no_in_time_concolic.spec");
  CHECK(s.verify().verdict.status == VerdictStatus::Verified);
  const RunResult r = s.run();
  CHECK(r.threw);
  REQUIRE(r.final_state);
  CHECK(*r.final_state == throw_state(r.initial));
}

TEST_CASE("a false claim is refuted with a witness") {
  Session s;
  s.load_source(slurp("wallet.lls"));
  SpecFile spec = parse_spec_file(slurp("no_in_time.spec"));
  spec.post = {PostClause{PostClause::Kind::NoThrow, "", ""}};
  s.apply_spec(spec);
  const VerifyReport r = s.verify();
  CHECK(r.verdict.status == VerdictStatus::Refuted);
  CHECK(r.witness.size() == 3);
}

TEST_CASE("arguments and pre-state") {
  Session s;
  s.options().entry = "add";
  s.load_source(kCounter);
  s.add_arg("n=5");
  s.add_arg("limit=9");
  const RunResult r = s.run();
  REQUIRE(r.final_state);
  CHECK(r.status == RunStatus::Done);
  CHECK(global_int(s, *r.final_state, "count") == 5);
  CHECK(global_int(s, *r.final_state, "limit") == 9);
  CHECK_THROWS(s.add_arg("missing-equals"));
  // Names are resolved when the initial state is built.
  s.add_arg("nosuch=1");
  CHECK_THROWS_AS(s.run(), FrontendError);
}

TEST_CASE("postcondition clauses") {
  Session s;
  s.options().entry = "bump";
  s.load_source(kCounter);
  s.add_symbolic(parse_symbol_spec("count:uint:0..5"));
  s.add_post(PostClause{PostClause::Kind::NoThrow, "", ""});
  CHECK(s.verify().verdict.status == VerdictStatus::Refuted);

  Session t;
  t.options().entry = "bump";
  t.load_source(kCounter);
  t.add_symbolic(parse_symbol_spec("count:uint:0..2"));
  t.add_post(PostClause{PostClause::Kind::NoThrow, "", ""});
  t.add_post(PostClause{PostClause::Kind::Unchanged, "limit", ""});
  CHECK(t.verify().verdict.status == VerdictStatus::Verified);

  Session u;
  u.options().entry = "bump";
  u.load_source(kCounter);
  u.add_pre("count = 1;");
  u.add_post(PostClause{PostClause::Kind::Equals, "count", "2"});
  CHECK(u.verify().verdict.status == VerdictStatus::Verified);
  u.add_post(PostClause{PostClause::Kind::Unchanged, "count", ""});
  CHECK(u.verify().verdict.status == VerdictStatus::Refuted);
}

TEST_CASE("assumptions restrict the symbols") {
  Session s;
  s.options().entry = "bump";
  s.load_source(kCounter);
  s.add_symbolic(parse_symbol_spec("count:uint:0..5"));
  s.add_assumption("count < 3");
  s.add_post(PostClause{PostClause::Kind::NoThrow, "", ""});
  CHECK(s.verify().verdict.status == VerdictStatus::Verified);
  s.add_assumption("count + 1");
  CHECK_THROWS_AS(s.verify(), FrontendError);
}

TEST_CASE("selective mode checks summaries before using them") {
  const char* src = R"(
contract S {
  uint public x = 0;
  uint public y = 0;
  function inc() public { x = x + 1; }
  function main() public { inc(); y = x; }
}
)";
  Session good;
  good.options().entry = "main";
  good.load_source(src);
  good.set_mode(Mode::Selective);
  good.add_summary("inc", "x = x + 1;");
  good.add_post(PostClause{PostClause::Kind::Equals, "y", "1"});
  CHECK(good.verify().verdict.status == VerdictStatus::Verified);

  Session bad;
  bad.options().entry = "main";
  bad.load_source(src);
  bad.set_mode(Mode::Selective);
  bad.add_summary("inc", "x = x + 2;");
  bad.add_post(PostClause{PostClause::Kind::Equals, "y", "1"});
  CHECK(bad.verify().verdict.status == VerdictStatus::Error);
}

TEST_CASE("stepping a session") {
  Session s;
  s.options().entry = "bump";
  s.load_source(kCounter);
  ExecState st = s.begin();
  const ExecConfig cfg = s.exec_config();
  std::uint64_t steps = 0;
  while (st.status == RunStatus::Running && steps < 100) {
    step_exec(st, cfg);
    ++steps;
  }
  CHECK(st.status == RunStatus::Done);
  CHECK(st.dispatched == s.run().dispatched);
}

TEST_CASE("session without a source") {
  Session s;
  CHECK_FALSE(s.loaded());
  CHECK_THROWS(s.run());
}
