// Command-line front end. Links only the C interface.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "solsem/solsem.h"

namespace {

constexpr int kUsage = SS_USAGE;

struct Owned {
  char* p = nullptr;
  ~Owned() { ss_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

struct SessionPtr {
  ss_session* s = ss_session_new();
  ~SessionPtr() { ss_session_free(s); }
};

struct Options {
  std::string source;
  std::string spec;
  std::string entry;
  std::string mode;
  std::string dump_file;
  std::vector<std::string> args;
  std::vector<std::string> symbolic;
  std::uint64_t gas = 10000;
  std::uint64_t k = 1000;
  std::size_t mem_size = 100;
  std::int64_t timestamp = 0;
  std::int64_t sender = 1;
  std::int64_t value = 0;
  bool json = false;
  CLI::Option* gas_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* timestamp_opt = nullptr;
  CLI::Option* sender_opt = nullptr;
  CLI::Option* value_opt = nullptr;
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

int report(int code, const std::string& what) {
  std::cerr << "error: " << what << ": " << ss_last_error() << '\n';
  return code;
}

void add_common(CLI::App* cmd, Options& o, bool needs_spec) {
  cmd->add_option("source", o.source, "Source file (.lls)")->required();
  auto* spec = cmd->add_option("--spec", o.spec, "Verification spec file");
  if (needs_spec) spec->required();
  o.gas_opt = cmd->add_option("--gas", o.gas, "Statement budget")->capture_default_str();
  o.k_opt = cmd->add_option("--k", o.k, "Expression recursion budget")->capture_default_str();
  cmd->add_option("--mem-size", o.mem_size, "Memory size in blocks")->capture_default_str();
  cmd->add_option("--entry", o.entry, "Function to call");
  cmd->add_option("--arg", o.args, "NAME=VALUE (entry parameter or state variable)");
  cmd->add_option("--symbolic", o.symbolic, "NAME:kind[:lo..hi] symbolic input");
  cmd->add_option("--mode", o.mode, "static, concolic or selective")
      ->check(CLI::IsMember({"static", "concolic", "selective"}));
  o.timestamp_opt = cmd->add_option("--timestamp", o.timestamp, "Block timestamp (now)");
  o.sender_opt = cmd->add_option("--sender", o.sender, "Transaction sender");
  o.value_opt = cmd->add_option("--value", o.value, "Transaction value (msg.value)");
  cmd->add_option("--dump", o.dump_file, "Also write the memory dump to FILE");
  cmd->add_flag("--json", o.json, "Machine-readable output");
}

// Builds a session: memory size, source, spec, then explicit flags, which
// override the spec file.
int prepare(const Options& o, ss_session* s) {
  if (!s) return report(SS_INTERNAL, "session");
  std::string text;
  if (!read_file(o.source, text)) {
    std::cerr << "error: cannot read " << o.source << '\n';
    return kUsage;
  }
  if (int rc = ss_set_memory_size(s, o.mem_size)) return report(rc, "--mem-size");
  if (int rc = ss_load_source(s, text.c_str())) return report(rc, o.source);
  if (!o.spec.empty()) {
    std::string spec;
    if (!read_file(o.spec, spec)) {
      std::cerr << "error: cannot read " << o.spec << '\n';
      return kUsage;
    }
    if (int rc = ss_load_spec(s, spec.c_str())) return report(rc, o.spec);
  }
  if (o.spec.empty() || o.gas_opt->count())
    if (int rc = ss_set_gas(s, o.gas)) return report(rc, "--gas");
  if (o.spec.empty() || o.k_opt->count())
    if (int rc = ss_set_k(s, o.k)) return report(rc, "--k");
  if (!o.entry.empty())
    if (int rc = ss_set_entry(s, o.entry.c_str())) return report(rc, "--entry");
  if (!o.mode.empty())
    if (int rc = ss_set_mode(s, o.mode.c_str())) return report(rc, "--mode");
  if (o.timestamp_opt->count())
    if (int rc = ss_set_block_field(s, "timestamp", o.timestamp)) return report(rc, "--timestamp");
  if (o.sender_opt->count())
    if (int rc = ss_set_block_field(s, "sender", o.sender)) return report(rc, "--sender");
  if (o.value_opt->count())
    if (int rc = ss_set_block_field(s, "value", o.value)) return report(rc, "--value");
  for (const auto& a : o.args)
    if (int rc = ss_add_arg(s, a.c_str())) return report(rc, "--arg " + a);
  for (const auto& v : o.symbolic)
    if (int rc = ss_add_symbolic(s, v.c_str())) return report(rc, "--symbolic " + v);
  return SS_OK;
}

int write_dump(const Options& o, const std::string& dump) {
  if (o.dump_file.empty()) return SS_OK;
  std::ofstream out(o.dump_file, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << o.dump_file << '\n';
    return kUsage;
  }
  out << dump;
  return SS_OK;
}

int cmd_run(const Options& o) {
  SessionPtr s;
  if (int rc = prepare(o, s.s)) return rc;
  Owned dump, json;
  const int rc = ss_run(s.s, &dump.p, &json.p);
  if (o.json) {
    std::cout << json.str() << '\n';
  } else if (rc == SS_OK) {
    std::cout << dump.str();
  }
  if (rc != SS_OK) return report(rc, "run");
  return write_dump(o, dump.str());
}

int cmd_step(const Options& o) {
  SessionPtr s;
  if (int rc = prepare(o, s.s)) return rc;
  Owned initial;
  if (int rc = ss_step_begin(s.s, &initial.p)) return report(rc, "step");
  std::cout << "initial\n" << initial.str();
  std::string last = initial.str();
  bool running_free = false;
  int finished = 0;
  while (!finished) {
    if (!running_free) {
      std::cout << "[enter/s: step, c: continue, q: quit] " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        running_free = true;
      } else if (line == "q") {
        break;
      } else if (line == "c") {
        running_free = true;
      }
    }
    Owned text;
    const int rc = ss_step(s.s, &text.p, &finished);
    std::cout << '\n' << text.str();
    last = text.str();
    if (rc != SS_OK) return report(rc, "step");
  }
  std::cout << '\n';
  return write_dump(o, last);
}

int cmd_verify(const Options& o) {
  SessionPtr s;
  if (int rc = prepare(o, s.s)) return rc;
  Owned text, json;
  const int rc = ss_verify(s.s, &text.p, &json.p);
  if (rc == SS_USAGE) return report(rc, "verify");
  std::cout << (o.json ? json.str() : text.str()) << '\n';
  if (rc == SS_INTERNAL) std::cerr << "error: " << ss_last_error() << '\n';
  return rc;
}

int cmd_typecheck(const Options& o) {
  SessionPtr s;
  if (int rc = prepare(o, s.s)) return rc;
  Owned text;
  if (int rc = ss_typecheck(s.s, &text.p)) return report(rc, "typecheck");
  std::cout << text.str() << '\n';
  return SS_OK;
}

int cmd_emit_ast(const Options& o) {
  SessionPtr s;
  if (int rc = prepare(o, s.s)) return rc;
  Owned json;
  if (int rc = ss_emit_ast(s.s, &json.p)) return report(rc, "emit-ast");
  std::cout << json.str() << '\n';
  return SS_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable semantics, symbolic execution and verification for a Solidity-like contract language"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "Run the entry function and print the final memory dump");
  add_common(run, o, false);
  auto* step = app.add_subcommand("step", "Execute one statement at a time, printing the memory after each");
  add_common(step, o, false);
  auto* verify = app.add_subcommand("verify", "Check a spec file's postcondition on every path");
  add_common(verify, o, true);
  auto* typecheck = app.add_subcommand("typecheck", "Parse, bind and typecheck a source file");
  add_common(typecheck, o, false);
  auto* emit = app.add_subcommand("emit-ast", "Print the typed declarations as JSON");
  add_common(emit, o, false);
  auto* oracle = app.add_subcommand("oracle", "Compare the interpreter with the relational semantics");
  std::uint64_t seed = 1;
  std::size_t count = 100;
  bool oracle_json = false;
  oracle->add_option("--seed", seed, "Generator seed")->capture_default_str();
  oracle->add_option("--count", count, "Number of random programs")->capture_default_str();
  oracle->add_flag("--json", oracle_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (*run) return cmd_run(o);
  if (*step) return cmd_step(o);
  if (*verify) return cmd_verify(o);
  if (*typecheck) return cmd_typecheck(o);
  if (*emit) return cmd_emit_ast(o);
  if (*oracle) {
    Owned text, json;
    const int rc = ss_oracle(seed, count, &text.p, &json.p);
    if (rc == SS_USAGE || rc == SS_INTERNAL) return report(rc, "oracle");
    std::cout << (oracle_json ? json.str() + "\n" : text.str());
    return rc;
  }
  return kUsage;
}
