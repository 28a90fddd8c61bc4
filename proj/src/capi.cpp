#include <cstring>
#include <json.hpp>
#include <sstream>
#include <string>

#include "solsem/ast_json.hpp"
#include "solsem/oracle.hpp"
#include "solsem/session.hpp"
#include "solsem/solsem.h"

using namespace solsem;
using nlohmann::json;

struct ss_session {
  Session session;
  std::optional<std::string> source;
  std::optional<ExecState> stepping;
  ExecConfig step_cfg;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

int usage(const std::string& msg) {
  last_error = msg;
  return SS_USAGE;
}

// Runs f, mapping exceptions to status codes.
template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const FrontendError& e) {
    return usage(e.what());
  } catch (const TypeError& e) {
    return usage(std::string("type error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    last_error = e.what();
    return SS_INTERNAL;
  }
}

std::string step_line(const ExecState& st, const LStatement* executed) {
  std::ostringstream out;
  out << "step " << st.dispatched << ": " << (executed ? statement_name(*executed) : "-") << " status="
      << to_string(st.status) << " gas=" << st.env.gas;
  if (st.threw) out << " threw";
  if (!st.diagnostic.empty()) out << " diagnostic=\"" << st.diagnostic << '"';
  return out.str();
}

}  // namespace

extern "C" {

ss_session* ss_session_new(void) {
  try {
    return new ss_session{};
  } catch (...) {
    last_error = "out of memory";
    return nullptr;
  }
}

void ss_session_free(ss_session* s) { delete s; }

const char* ss_last_error(void) { return last_error.c_str(); }

void ss_free_string(char* str) { std::free(str); }

int ss_set_gas(ss_session* s, uint64_t gas) {
  if (!s) return usage("null session");
  if (gas == 0) return usage("gas must be positive");
  s->session.options().gas = gas;
  return SS_OK;
}

int ss_set_k(ss_session* s, uint64_t k) {
  if (!s) return usage("null session");
  if (k == 0) return usage("k must be positive");
  s->session.options().k = k;
  return SS_OK;
}

int ss_set_memory_size(ss_session* s, size_t blocks) {
  if (!s) return usage("null session");
  return guarded([&] {
    s->session.options().memory_size = blocks;
    if (s->source) s->session.load_source(*s->source);
    return SS_OK;
  });
}

int ss_set_entry(ss_session* s, const char* function) {
  if (!s || !function) return usage("null argument");
  s->session.options().entry = function;
  return SS_OK;
}

int ss_set_block_field(ss_session* s, const char* field, int64_t value) {
  if (!s || !field) return usage("null argument");
  BlockInfo& b = s->session.options().block;
  const std::string f = field;
  if (f != "sender" && value < 0) return usage(f + " must be non-negative");
  if (f == "number") {
    b.number = value;
  } else if (f == "timestamp") {
    b.timestamp = value;
  } else if (f == "sender") {
    b.sender = value;
  } else if (f == "value") {
    b.value = value;
  } else if (f == "gas_price") {
    b.gas_price = value;
  } else {
    return usage("unknown block field " + f);
  }
  return SS_OK;
}

int ss_set_mode(ss_session* s, const char* mode) {
  if (!s || !mode) return usage("null argument");
  const std::string m = mode;
  if (m == "static") {
    s->session.set_mode(Mode::Static);
  } else if (m == "concolic") {
    s->session.set_mode(Mode::Concolic);
  } else if (m == "selective") {
    s->session.set_mode(Mode::Selective);
  } else {
    return usage("mode must be static, concolic or selective");
  }
  return SS_OK;
}

int ss_add_arg(ss_session* s, const char* assignment) {
  if (!s || !assignment) return usage("null argument");
  return guarded([&] {
    s->session.add_arg(assignment);
    return SS_OK;
  });
}

int ss_add_symbolic(ss_session* s, const char* spec) {
  if (!s || !spec) return usage("null argument");
  return guarded([&] {
    s->session.add_symbolic(parse_symbol_spec(spec));
    return SS_OK;
  });
}

int ss_load_source(ss_session* s, const char* text) {
  if (!s || !text) return usage("null argument");
  return guarded([&] {
    s->session.load_source(text);
    s->source = text;
    return SS_OK;
  });
}

int ss_load_spec(ss_session* s, const char* text) {
  if (!s || !text) return usage("null argument");
  return guarded([&] {
    s->session.apply_spec(parse_spec_file(text));
    return SS_OK;
  });
}

int ss_typecheck(ss_session* s, char** out_report) {
  if (!s) return usage("null session");
  return guarded([&] {
    const Program& p = s->session.program();
    std::size_t modifiers = 0;
    for (const auto& [name, f] : p.functions) modifiers += f.is_modifier ? 1 : 0;
    std::ostringstream out;
    out << "well-typed: " << p.contract_blocks.size() << " contracts, " << p.globals.size() << " globals, "
        << p.functions.size() - modifiers << " functions, " << modifiers << " modifiers";
    put(out_report, out.str());
    return SS_OK;
  });
}

int ss_emit_ast(ss_session* s, char** out_json) {
  if (!s) return usage("null session");
  return guarded([&] {
    put(out_json, ast_to_json(s->session.program().declarations));
    return SS_OK;
  });
}

int ss_run(ss_session* s, char** out_dump, char** out_json) {
  if (!s) return usage("null session");
  return guarded([&] {
    const RunResult r = s->session.run();
    json j{{"status", to_string(r.status)},
           {"threw", r.threw},
           {"dispatched", r.dispatched},
           {"gas_left", r.gas_left},
           {"diagnostic", r.diagnostic}};
    put(out_json, j.dump());
    if (!r.final_state || r.status == RunStatus::Failed) {
      last_error = "run failed: " + r.diagnostic;
      put(out_dump, "");
      return SS_INTERNAL;
    }
    put(out_dump, dump(*r.final_state));
    return SS_OK;
  });
}

int ss_step_begin(ss_session* s, char** out_dump) {
  if (!s) return usage("null session");
  return guarded([&] {
    s->stepping = s->session.begin();
    s->step_cfg = s->session.exec_config();
    put(out_dump, s->stepping->mem ? dump(*s->stepping->mem) : "");
    return SS_OK;
  });
}

int ss_step(ss_session* s, char** out_text, int* finished) {
  if (!s || !s->stepping) return usage("stepping has not begun");
  return guarded([&] {
    ExecState& st = *s->stepping;
    const LStatement* next = next_statement(st);
    const std::uint64_t before = st.dispatched;
    step_exec(st, s->step_cfg);
    // Frame exits and completion dispatch nothing; keep going until one
    // statement ran or the machine stopped.
    while (st.dispatched == before && st.status == RunStatus::Running) {
      next = next_statement(st);
      step_exec(st, s->step_cfg);
    }
    const bool ran = st.dispatched > before;
    std::string text = step_line(st, ran ? next : nullptr) + "\n";
    if (st.mem) text += dump(*st.mem);
    put(out_text, text);
    if (finished) *finished = st.status != RunStatus::Running;
    if (st.status == RunStatus::Failed) {
      last_error = "step failed: " + st.diagnostic;
      return SS_INTERNAL;
    }
    return SS_OK;
  });
}

int ss_verify(ss_session* s, char** out_text, char** out_json) {
  if (!s) return usage("null session");
  return guarded([&] {
    const VerifyReport r = s->session.verify();
    const Verdict& v = r.verdict;
    json witness = json::object();
    for (const auto& [name, value] : r.witness) witness[name] = value;
    json j{{"status", to_string(v.status)}, {"paths", v.paths}, {"witness", witness}, {"diagnostic", v.diagnostic}};
    put(out_json, j.dump());
    std::ostringstream text;
    text << to_string(v.status) << " (" << v.paths << (v.paths == 1 ? " path" : " paths") << ")";
    if (!v.diagnostic.empty()) text << ": " << v.diagnostic;
    for (const auto& [name, value] : r.witness) text << "\n  " << name << " = " << value;
    put(out_text, text.str());
    switch (v.status) {
      case VerdictStatus::Verified: return static_cast<int>(SS_OK);
      case VerdictStatus::Refuted:
      case VerdictStatus::Exhausted: return static_cast<int>(SS_NOT_VERIFIED);
      case VerdictStatus::Error: last_error = v.diagnostic; return static_cast<int>(SS_INTERNAL);
    }
    return static_cast<int>(SS_INTERNAL);
  });
}

int ss_oracle(uint64_t seed, size_t count, char** out_text, char** out_json) {
  return guarded([&] {
    const SimulationReport r = check_simulation(random_core_corpus(seed, count));
    json divergences = json::array();
    for (const auto& d : r.divergences)
      divergences.push_back({{"program", d.program}, {"step", d.step}, {"statement", d.statement}, {"detail", d.detail}});
    put(out_json, json{{"seed", seed}, {"checked", r.checked}, {"divergences", divergences}}.dump());
    put(out_text, render_report(r));
    return r.ok() ? static_cast<int>(SS_OK) : static_cast<int>(SS_NOT_VERIFIED);
  });
}

}  // extern "C"
