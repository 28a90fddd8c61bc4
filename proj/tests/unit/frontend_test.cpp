#include <doctest.h>

#include <fstream>
#include <sstream>

#include "solsem/ast_json.hpp"
#include "solsem/frontend.hpp"

using namespace solsem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string wallet() { return slurp(std::string(SOLSEM_SAMPLES_DIR) + "/wallet.lls"); }

SrcPos error_pos(const std::string& src) {
  try {
    load_program(src, 100);
  } catch (const FrontendError& e) {
    return e.pos;
  }
  FAIL("expected a FrontendError");
  return {};
}

const char* kSmall = R"(
contract A {
  struct Pair { int a; bool b; }
  int public x = 3;
  int[2][3] grid;
  mapping(uint => bool) seen;
  function f(int v) public returns (int) { return v + x; }
}
contract B is A {
  uint public y;
  modifier only() { require(y == 0); _; }
  function g() public only { y = 1; }
}
)";

}  // namespace

TEST_CASE("parses the wallet sample") {
  const SourceProgram src = parse_source(wallet());
  REQUIRE(src.contracts.size() == 1);
  CHECK(src.contracts[0].name == "IcoController");
}

TEST_CASE("binder assigns addresses in declaration order") {
  const Program p = load_program(kSmall, 100);
  CHECK(p.contract_blocks.at("A") == Address{0});
  CHECK(p.structs.at("Pair").addr == Address{1});
  CHECK(p.globals.at("x").addr == Address{2});
  // grid: 2 * (1 + 3) blocks
  CHECK(p.globals.at("grid").addr == Address{3});
  CHECK(p.globals.at("seen").addr == Address{11});
  CHECK(p.functions.at("f").addr == Address{12});
  CHECK(p.functions.at("f").scope.at("v").addr == Address{13});
  CHECK(p.contract_blocks.at("B") == Address{14});
  CHECK(p.registry.at("B") == std::vector<Address>{Address{0}});
  CHECK(p.functions.at("only").is_modifier);
  CHECK(p.symbols.at("f.v") == Address{13});
  CHECK(p.symbols.at("A.x") == Address{2});
  // Return slots descend from N-8.
  CHECK(p.functions.at("f").return_slot == Address{92});
  CHECK(p.globals.at("now").addr == Address{93});
  CHECK(p.globals.at("msg").addr == Address{94});
}

TEST_CASE("binding is deterministic") {
  const Program a = load_program(wallet(), 100);
  const Program b = load_program(wallet(), 100);
  CHECK(a.declarations == b.declarations);
  CHECK(a.symbols == b.symbols);
  CHECK(ast_to_json(a.declarations) == ast_to_json(b.declarations));
}

TEST_CASE("typed AST survives a JSON round trip") {
  for (const std::string& src : {wallet(), std::string(kSmall)}) {
    const Program p = load_program(src, 100);
    const std::string text = ast_to_json(p.declarations);
    const StmtList back = ast_from_json(text);
    CHECK(back == p.declarations);
    CHECK(ast_to_json(back) == text);
  }
  const LType t = LType::map(LType::int64(), LType::array(std::vector<std::uint64_t>{2, 3}, LType::boolean()));
  CHECK(type_from_json(type_to_json(t)) == t);
  CHECK_THROWS_AS(ast_from_json("{\"kind\": \"Nope\"}"), std::invalid_argument);
  CHECK_THROWS_AS(ast_from_json("[{]"), std::invalid_argument);
}

TEST_CASE("errors carry source positions") {
  SUBCASE("unbalanced brace") {
    const SrcPos at = error_pos("contract C {\n  int x;\n  function f() public {\n    x = 1;\n\n");
    CHECK(at.line == 6);
  }
  SUBCASE("unknown identifier") {
    const SrcPos at = error_pos("contract C {\n  function f() public {\n    y = 1;\n  }\n}\n");
    CHECK(at.line == 3);
  }
  SUBCASE("type mismatch") {
    const SrcPos at = error_pos("contract C {\n  int x;\n  function f() public {\n    x = true;\n  }\n}\n");
    CHECK(at.line == 4);
  }
  SUBCASE("unexpected token") {
    const SrcPos at = error_pos("contract C {\n  int x\n}\n");
    CHECK(at.line == 3);
  }
  SUBCASE("duplicate name") {
    const SrcPos at = error_pos("contract C {\n  int x;\n  bool x;\n}\n");
    CHECK(at.line == 3);
  }
}

TEST_CASE("memory too small for the program") {
  CHECK_THROWS_AS(load_program(wallet(), 20), FrontendError);
  CHECK_THROWS_AS(load_program("contract C {}", 8), FrontendError);
  CHECK_NOTHROW(load_program("contract C {}", 9));
}

TEST_CASE("global statements and expressions bind against the program") {
  const Program p = load_program(kSmall, 100);
  const StmtList s = bind_statements(p, parse_statements("x = 4; y = 2;"));
  CHECK(s.size() == 2);
  const LExpr e = bind_expression(p, parse_expression("x < 3"));
  REQUIRE(e.types);
  CHECK(e.types->result == LType::boolean());
  CHECK_THROWS_AS(bind_statements(p, parse_statements("x = true;")), FrontendError);
}

TEST_CASE("entry call names the function") {
  const Program p = load_program(kSmall, 100);
  const LStatement call = entry_call(p, "g");
  CHECK(call.is<st::FunCall>());
  CHECK_THROWS(entry_call(p, "missing"));
}
