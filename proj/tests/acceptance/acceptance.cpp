// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Every tolerance is exact; the time limits below are
// the runtime bounds each check must meet.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "solsem/arith.hpp"
#include "solsem/engine.hpp"
#include "solsem/exec.hpp"
#include "solsem/oracle.hpp"
#include "solsem/session.hpp"
#include "solsem/value.hpp"

using namespace solsem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are reported.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  std::size_t failures_ = 0;
  std::string messages_;
};

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SOLSEM_SAMPLES_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::optional<std::int64_t> int_value(const MemoryValue& v) {
  auto s = concrete_scalar(v);
  if (!s || s->is_bool) return std::nullopt;
  return arith::as_signed(s->type, s->bits);
}

Env frame_env(std::uint64_t gas) {
  Env e;
  e.gas = e.gas_limit = gas;
  e.level = 1;
  e.domain = Address{core_layout::function};
  return e;
}
Env caller_env(std::uint64_t gas) {
  Env e;
  e.gas = e.gas_limit = gas;
  return e;
}

// Independent reference for the array layout: a pre-order walk that lists
// every block of a[d0]...[dn-1] as 'H' (sub-array header) or 'L' (element),
// with the index path of each element.
void preorder(const std::vector<std::uint64_t>& dims, std::size_t level, std::vector<std::uint64_t>& path,
              std::string& kinds, std::map<std::vector<std::uint64_t>, std::uint64_t>& leaves) {
  for (std::uint64_t i = 0; i < dims[level]; ++i) {
    path.push_back(i);
    if (level + 1 == dims.size()) {
      leaves[path] = kinds.size();
      kinds += 'L';
    } else {
      kinds += 'H';
      preorder(dims, level + 1, path, kinds, leaves);
    }
    path.pop_back();
  }
}

// Reads back where init_array put each element by walking the blocks it
// wrote and following the header indices.
bool parse_blocks(const MemoryState& mem, std::size_t& at, const LType& t, std::vector<std::uint64_t>& path,
                  std::map<std::vector<std::uint64_t>, std::uint64_t>& found, std::size_t base) {
  const auto* a = t.as<ty::Array>();
  if (!a) return false;
  for (std::uint64_t i = 0; i < a->length; ++i) {
    path.push_back(i);
    const MemoryValue& v = mem.at({at});
    if (a->element->is<ty::Array>()) {
      const auto* h = v.as<cell::ArrayHeader>();
      if (!h || h->index != i || h->group_type != a->element.get()) return false;
      ++at;
      if (!parse_blocks(mem, at, a->element.get(), path, found, base)) return false;
    } else {
      if (v.is<cell::ArrayHeader>() || v.occupancy != Occupancy::Occupy) return false;
      found[path] = at - base;
      ++at;
    }
    path.pop_back();
  }
  return true;
}

std::string kinds_in_memory(const MemoryState& mem, std::size_t base, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += mem.at({base + i}).is<cell::ArrayHeader>() ? 'H' : 'L';
  return out;
}

// 1 --------------------------------------------------------------------------
Outcome array_layout_example() {
  Checker c;
  const std::vector<std::uint64_t> dims{2, 3, 2};
  const LayoutInfo info = array_layout(dims);
  c.expect(info.array_size == 20, "array_size " + std::to_string(info.array_size));
  c.expect(info.group_sizes == std::vector<std::uint64_t>{10, 3, 1}, "group sizes");
  c.expect(elem_offset({0, 1, 1}, info.group_sizes) == 6, "elem_offset([0,1,1])");

  // Block 0 heads a[0] (blocks 0-9), block 1 heads a[0][0] (blocks 1-3),
  // and so on; a[1] starts at block 10.
  const std::string expected = "HHLLHLLHLLHHLLHLLHLL";
  std::string oracle;
  std::vector<std::uint64_t> path;
  std::map<std::vector<std::uint64_t>, std::uint64_t> leaves;
  preorder(dims, 0, path, oracle, leaves);
  c.expect(oracle == expected, "reference walk " + oracle);

  const Address base{5};
  const LType t = LType::array(dims, LType::int64());
  const MemoryState mem = init_mem(64, standard_library(64)).with_layout({0}, {57});
  auto init = init_var(mem, {}, {}, Access::Public, t, base);
  c.expect(init.has_value(), "init_var failed");
  if (init) {
    c.expect(kinds_in_memory(*init, base.index, 20) == expected, "init_array order " + kinds_in_memory(*init, base.index, 20));
    c.expect(init->at({base.index + 20}).occupancy == Occupancy::Free, "block after the array is occupied");
    const std::vector<std::pair<std::size_t, std::uint64_t>> headers{{0, 0}, {1, 0}, {4, 1}, {7, 2},
                                                                     {10, 1}, {11, 0}, {14, 1}, {17, 2}};
    for (auto [offset, index] : headers) {
      const auto* h = init->at({base.index + offset}).as<cell::ArrayHeader>();
      c.expect(h && h->index == index, "header at offset " + std::to_string(offset));
    }
    c.expect(id_search(t, base, {0, 1, 1}, *init, {}) == Address{base.index + 6}, "id_search a[0][1][1]");
  }
  return c.outcome("size 20, groups [10,3,1], offset 6, order " + expected + ", id_search = base+6");
}

// 2 --------------------------------------------------------------------------
void dimension_vectors(std::vector<std::uint64_t>& dims, std::uint64_t size, std::uint64_t product,
                       const std::function<void(const std::vector<std::uint64_t>&)>& f) {
  for (std::uint64_t d = 1;; ++d) {
    const std::uint64_t p = product * d;
    if (size + p > 64) break;
    dims.push_back(d);
    f(dims);
    dimension_vectors(dims, size + p, p, f);
    dims.pop_back();
  }
}

Outcome layout_agreement() {
  Checker c;
  std::size_t vectors = 0;
  std::size_t elements = 0;
  const MemoryState mem = init_mem(80, standard_library(80)).with_layout({0}, {73});
  const Address base{3};
  std::vector<std::uint64_t> dims;
  dimension_vectors(dims, 0, 1, [&](const std::vector<std::uint64_t>& d) {
    ++vectors;
    const std::string name = "dims#" + std::to_string(vectors);
    const LayoutInfo info = array_layout(d);
    std::string kinds;
    std::vector<std::uint64_t> path;
    std::map<std::vector<std::uint64_t>, std::uint64_t> reference;
    preorder(d, 0, path, kinds, reference);
    c.expect(info.array_size == kinds.size(), name + " size");
    const LType t = LType::array(d, LType::int64());
    auto init = init_var(mem, {}, {}, Access::Public, t, base);
    if (!init) {
      c.expect(false, name + " init failed");
      return;
    }
    c.expect(kinds_in_memory(*init, base.index, kinds.size()) == kinds, name + " block kinds");
    std::map<std::vector<std::uint64_t>, std::uint64_t> placed;
    std::size_t at = base.index;
    path.clear();
    c.expect(parse_blocks(*init, at, t, path, placed, base.index), name + " unreadable layout");
    c.expect(at - base.index == info.array_size, name + " blocks written");
    c.expect(placed.size() == reference.size(), name + " element count");
    for (const auto& [p, offset] : placed) {
      ++elements;
      c.expect(elem_offset(p, info.group_sizes) == offset, name + " elem_offset");
      c.expect(reference.at(p) == offset, name + " reference offset");
      c.expect(id_search(t, base, p, *init, {}) == Address{base.index + offset}, name + " id_search");
    }
  });
  return c.outcome(std::to_string(vectors) + " dimension vectors, " + std::to_string(elements) + " elements");
}

// 3 --------------------------------------------------------------------------
Outcome if_false() {
  Checker c;
  std::mt19937_64 rng(3003);
  std::size_t completed = 0;
  for (int n = 0; n < 500; ++n) {
    const testgen::IfFalseCase k = testgen::random_if_false_case(rng);
    const std::uint64_t gas = std::uniform_int_distribution<std::uint64_t>(1, 400)(rng);
    Env with_if = k.env;
    with_if.gas = with_if.gas_limit = gas + 1;
    Env alone = k.env;
    alone.gas = alone.gas_limit = gas;
    const StmtList branch{LStatement{st::If{make_bool(false), k.then_branch, k.else_branch}}};

    ExecState a = start_exec(k.mem, with_if, k.fenv, {}, branch);
    run_exec(a, {});
    ExecState b = start_exec(k.mem, alone, k.fenv, {}, k.else_branch);
    run_exec(b, {});
    const std::string name = "case " + std::to_string(n);
    c.expect(a.mem == b.mem, name + " final states differ");
    c.expect(a.status == b.status || (k.else_branch.empty() && gas == 0), name + " status");
    c.expect(a.threw == b.threw, name + " throw flag");
    c.expect(a.env.gas == b.env.gas, name + " gas left");
    c.expect(a.dispatched == b.dispatched + 1, name + " dispatch count");
    c.expect(fether(1000, k.mem, with_if, k.fenv, std::nullopt, branch) ==
                 fether(1000, k.mem, alone, k.fenv, std::nullopt, k.else_branch),
             name + " fether results differ");
    if (a.status == RunStatus::Done) ++completed;
  }
  return c.outcome("500 cases equal (" + std::to_string(completed) + " ran to completion)");
}

// 4 --------------------------------------------------------------------------
std::string run_dump(const CoreProgram& p) {
  ExecState s = start_exec(p.mem, p.env, p.fenv, {}, p.prog);
  run_exec(s, {});
  return std::string(to_string(s.status)) + (s.threw ? " threw\n" : "\n") + (s.mem ? dump(*s.mem) : "absent\n");
}

Outcome determinism() {
  Checker c;
  std::mt19937_64 rng(4004);
  for (int n = 0; n < 200; ++n) {
    testgen::TypedProgram p = testgen::random_typed_program(rng);
    auto err = typecheck_program(p.core.prog, testgen::typed_context());
    c.expect(!err, "program " + std::to_string(n) + " ill-typed: " + err.value_or(""));
    c.expect(run_dump(p.core) == run_dump(p.core), "program " + std::to_string(n) + " dumps differ");
  }
  return c.outcome("200 typed programs, identical dumps");
}

// 5 --------------------------------------------------------------------------
Outcome simulation() {
  Checker c;
  const auto corpus = random_core_corpus(5005, 100);
  const SimulationReport r = check_simulation(corpus);
  c.expect(r.checked == 100, "checked " + std::to_string(r.checked));
  for (const auto& d : r.divergences)
    c.expect(false, "program " + std::to_string(d.program) + " step " + std::to_string(d.step) + ": " + d.detail);
  std::size_t finals = 0;
  for (const auto& p : corpus) {
    const RelResult rel = relational_eval(p.mem, p.env, p.fenv, p.prog);
    const auto ex = fether(1000, p.mem, p.env, p.fenv, std::nullopt, p.prog);
    c.expect(rel.final_state.has_value() == ex.has_value(), "final state presence differs");
    if (rel.final_state && ex) c.expect(*rel.final_state == *ex, "final states differ");
    if (ex) ++finals;
  }
  return c.outcome("100 programs, 0 divergences (" + std::to_string(finals) + " with a final state)");
}

// 6 --------------------------------------------------------------------------
Outcome wallet() {
  Checker c;
  const std::string source = slurp("wallet.lls");

  Session stat;
  stat.load_source(source);
  stat.apply_spec(parse_spec_file(slurp("no_in_time.spec")));
  const VerifyReport v = stat.verify();
  c.expect(v.verdict.status == VerdictStatus::Verified, std::string("static verdict ") + to_string(v.verdict.status) +
                                                            " " + v.verdict.diagnostic);

  // Independent re-check: every admissible concrete input ends in the throw state.
  std::size_t inputs = 0;
  for (std::int64_t now = 0; now < 8; ++now)
    for (std::int64_t open = 0; open < 8; ++open)
      for (std::int64_t close = 0; close < 8; ++close) {
        if (!(now < open || now > close)) continue;
        Session s;
        s.load_source(source);
        SpecFile spec = parse_spec_file(slurp("no_in_time.spec"));
        spec.symbols.clear();
        spec.assumptions.clear();
        spec.timestamp = now;
        s.apply_spec(spec);
        s.add_arg("privilegeOpen=" + std::to_string(open));
        s.add_arg("privilegeClose=" + std::to_string(close));
        const RunResult r = s.run();
        ++inputs;
        c.expect(r.final_state && *r.final_state == throw_state(r.initial),
                 "input (" + std::to_string(open) + "," + std::to_string(close) + "," + std::to_string(now) + ")");
      }

  Session conc;
  conc.load_source(source);
  conc.apply_spec(parse_spec_file(slurp("no_in_time_concolic.spec")));
  c.expect(conc.verify().verdict.status == VerdictStatus::Verified, "concolic verdict");
  const RunResult r = conc.run();
  c.expect(r.threw, "concolic run did not throw");
  c.expect(r.final_state && *r.final_state == throw_state(r.initial), "concolic final state is not the throw state");

  // Soft bound on concrete execution speed.
  constexpr int kRuns = 50;
  std::uint64_t statements = 0;
  const auto start = Clock::now();
  for (int i = 0; i < kRuns; ++i) statements += conc.run().dispatched;
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  const double per_statement = ms / static_cast<double>(statements);
  c.expect(per_statement < 10.0, "concrete speed " + std::to_string(per_statement) + " ms/statement");

  char buf[160];
  std::snprintf(buf, sizeof buf, "static verified (%zu path(s)), %zu concrete inputs throw, concolic = throw state, %.4f ms/statement",
                v.verdict.paths, inputs, per_statement);
  return c.outcome(buf);
}

// 7 --------------------------------------------------------------------------
Outcome gas_bound() {
  Checker c;
  const StmtList spin{LStatement{st::LoopWhile{make_bool(true), {LStatement{st::Snil{}}}}}};
  const MemoryState mem = core_memory();
  for (std::uint64_t g : {1u, 10u, 1000u}) {
    ExecState s = start_exec(mem, frame_env(g), caller_env(g), {}, spin);
    run_exec(s, {});
    const std::string name = "gas " + std::to_string(g);
    c.expect(s.dispatched == g, name + " dispatched " + std::to_string(s.dispatched));
    c.expect(s.status == RunStatus::OutOfGas, name + " status " + to_string(s.status));
    c.expect(s.env.gas == 0, name + " gas left");
    c.expect(s.mem && *s.mem == mem, name + " state changed");
  }
  return c.outcome("halts after exactly g statements for g in {1, 10, 1000}");
}

// 8 --------------------------------------------------------------------------
Outcome type_safety() {
  Checker c;
  std::mt19937_64 rng(8008);
  std::map<std::string, int> kinds;
  for (int n = 0; n < 1000; ++n) {
    testgen::Mutant m = testgen::random_mutant(rng);
    ++kinds[m.kind];
    c.expect(typecheck_program(m.prog, testgen::typed_context()).has_value(),
             "mutant " + std::to_string(n) + " (" + m.kind + ") accepted");
  }

  std::map<std::string, int> outcomes;
  for (int n = 0; n < 1000; ++n) {
    testgen::TypedProgram p = testgen::random_typed_program(rng);
    const std::string name = "program " + std::to_string(n);
    auto err = typecheck_program(p.core.prog, testgen::typed_context());
    c.expect(!err, name + " ill-typed: " + err.value_or(""));
    ExecState s = start_exec(p.core.mem, p.core.env, p.core.fenv, {}, p.core.prog);
    run_exec(s, {});
    if (s.status == RunStatus::Failed) {
      ++outcomes["absent"];
      c.expect(!s.diagnostic.empty(), name + " absent without a diagnostic");
      c.expect(!s.mem, name + " failed run kept a state");
      continue;
    }
    c.expect(s.status == RunStatus::Done || s.status == RunStatus::OutOfGas, name + " still running");
    c.expect(s.mem.has_value(), name + " no final state");
    if (!s.mem) continue;
    ++outcomes[s.threw ? "throw" : to_string(s.status)];
    // Every declared block that is occupied holds a value of its declared type.
    for (const auto& [addr, type] : p.declared) {
      const MemoryValue& v = s.mem->at(addr);
      if (v.occupancy == Occupancy::Occupy)
        c.expect(value_has_type(v, type), name + " block " + std::to_string(addr.index) + " lost its type");
    }
    const LType arr = testgen::typed_array_type();
    if (s.mem->at({testgen::typed_layout::array}).occupancy == Occupancy::Occupy) {
      for (std::uint64_t i = 0; i < 2; ++i)
        for (std::uint64_t j = 0; j < 3; ++j) {
          auto a = id_search(arr, {testgen::typed_layout::array}, {i, j}, *s.mem, s.env);
          c.expect(a && value_has_type(s.mem->at(*a), LType::int64()), name + " array element type");
        }
    }
  }
  std::string summary = "1000 mutants rejected (" + std::to_string(kinds.size()) + " flaw kinds); 1000 well-typed:";
  for (const auto& [k, n] : outcomes) summary += " " + k + "=" + std::to_string(n);
  return c.outcome(summary);
}

// 9 --------------------------------------------------------------------------
Outcome modifier_isolation() {
  Checker c;
  const char* src = R"(
contract Guarded {
  uint public owner = 1;
  uint public counter = 0;
  modifier writes() { counter = 99; _; }
  modifier checks() { require(owner == 1); _; }
  function bad() public writes { counter = counter + 1; }
  function good() public checks { counter = counter + 1; }
}
)";
  auto run = [&](const std::string& entry) {
    Session s;
    s.options().entry = entry;
    s.load_source(src);
    const RunResult r = s.run();
    std::optional<std::int64_t> counter;
    if (r.final_state) counter = int_value(r.final_state->at(s.program().globals.at("counter").addr));
    return std::make_tuple(r, counter);
  };
  const auto [bad, bad_counter] = run("bad");
  c.expect(bad.status == RunStatus::Done && !bad.threw, "writing modifier: run did not complete");
  c.expect(bad_counter == 0, "writing modifier: counter changed");
  c.expect(bad.final_state && same_payloads(*bad.final_state, bad.initial), "writing modifier: memory changed");

  const auto [good, good_counter] = run("good");
  c.expect(good.status == RunStatus::Done && !good.threw, "checking modifier: run did not complete");
  c.expect(good_counter == 1, "checking modifier: function did not run");
  return c.outcome("writing modifier skips the function, checking modifier lets it run");
}

// 10 -------------------------------------------------------------------------
// Follows a mapping chain from its head, collecting key -> node.
std::map<std::int64_t, const cell::MapNode*> chain(const MemoryState& mem, const cell::MapNode& head) {
  std::map<std::int64_t, const cell::MapNode*> out;
  std::optional<Address> cur = head.next;
  std::set<std::size_t> seen;
  while (cur && seen.insert(cur->index).second) {
    const auto* node = mem.at(*cur).as<cell::MapNode>();
    if (!node) break;
    if (node->entry) {
      if (auto k = int_value(node->entry->first.get())) out[*k] = node;
    }
    cur = node->next;
  }
  return out;
}

Outcome mappings() {
  Checker c;
  const char* src = R"(
contract Maps {
  mapping(uint => uint) single;
  mapping(uint => mapping(uint => uint)) nested;
  uint public a = 0;
  uint public b = 0;
  uint public d = 0;
  function main() public {
    single[3] = 7;
    a = single[3];
    single[3] = 8;
    single[4] = 9;
    b = single[3] + single[4];
    nested[1][2] = 5;
    nested[1][3] = 6;
    nested[2][2] = 8;
    nested[1][2] = nested[1][2] + 10;
    d = nested[1][2] + nested[1][3] + nested[2][2];
  }
}
)";
  Session s;
  s.options().entry = "main";
  s.load_source(src);
  const RunResult r = s.run();
  c.expect(r.status == RunStatus::Done && r.final_state.has_value(), std::string("run ") + to_string(r.status) + " " + r.diagnostic);
  if (!r.final_state) return c.outcome("");
  const MemoryState& m = *r.final_state;
  const auto& g = s.program().globals;
  c.expect(int_value(m.at(g.at("a").addr)) == 7, "single[3] read after write");
  c.expect(int_value(m.at(g.at("b").addr)) == 17, "overwrite and second key");
  c.expect(int_value(m.at(g.at("d").addr)) == 15 + 6 + 8, "nested reads");

  const auto* single = m.at(g.at("single").addr).as<cell::MapNode>();
  c.expect(single && !single->entry, "single head");
  if (single) {
    const auto nodes = chain(m, *single);
    c.expect(nodes.size() == 2, "single chain length");
    c.expect(nodes.count(3) && int_value(nodes.at(3)->entry->second.get()) == 8, "single[3] node");
    c.expect(nodes.count(4) && int_value(nodes.at(4)->entry->second.get()) == 9, "single[4] node");
  }
  // Outer chain nodes for keys 1 and 2; each value is an inline head whose
  // chain holds the inner entries.
  const auto* nested = m.at(g.at("nested").addr).as<cell::MapNode>();
  c.expect(nested && !nested->entry, "nested head");
  if (nested) {
    const auto outer = chain(m, *nested);
    c.expect(outer.size() == 2, "outer chain length");
    const std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> expected{{1, {{2, 15}, {3, 6}}}, {2, {{2, 8}}}};
    for (const auto& [k1, inner_expected] : expected) {
      if (!outer.count(k1)) {
        c.expect(false, "outer key " + std::to_string(k1) + " missing");
        continue;
      }
      const auto* inline_head = outer.at(k1)->entry->second->as<cell::MapNode>();
      c.expect(inline_head && !inline_head->entry, "outer value is not an inline head");
      if (!inline_head) continue;
      const auto inner = chain(m, *inline_head);
      c.expect(inner.size() == inner_expected.size(), "inner chain length");
      for (const auto& [k2, value] : inner_expected)
        c.expect(inner.count(k2) && int_value(inner.at(k2)->entry->second.get()) == value,
                 "nested[" + std::to_string(k1) + "][" + std::to_string(k2) + "]");
    }
  }
  return c.outcome("l/r round trip, overwrite, 2-level chains {1:{2,3}, 2:{2}}");
}

struct Criterion {
  int number;
  double limit_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 1, array_layout_example}, {2, 10, layout_agreement}, {3, 30, if_false},    {4, 60, determinism},
      {5, 60, simulation},          {6, 120, wallet},          {7, 5, gas_bound},    {8, 60, type_safety},
      {9, 5, modifier_isolation},   {10, 5, mappings},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds >= c.limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    std::printf("%s criterion %d: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.number, o.detail.c_str(), seconds);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
