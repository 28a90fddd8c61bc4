#include <limits>
#include <set>

#include "solsem/arith.hpp"
#include "solsem/frontend.hpp"
#include "solsem/layout.hpp"

namespace solsem {

namespace {

[[noreturn]] void error_at(SrcPos at, const std::string& why) { throw FrontendError(at, why); }

std::uint64_t blocks_of(const LType& t) {
  if (t.is<ty::Array>()) return array_layout(t.dims()).array_size;
  return 1;
}

struct Lowered {
  LExpr e;
  LType t;
};

bool literal(const SExpr& e) {
  if (e.kind == SExpr::Kind::Number) return true;
  return e.kind == SExpr::Kind::Unary && e.uop == UnOp::Neg && e.kids[0].kind == SExpr::Kind::Number;
}

LExpr constant(LValue v) { return LExpr{ex::Const{std::move(v)}, std::nullopt}; }

class Binder {
 public:
  Binder(Program& p) : p_(p), r_(Reserved::for_size(p.memory_size)) {
    if (p.memory_size <= Reserved::count + 1) error_at({}, "memory size too small");
    next_slot_ = static_cast<std::int64_t>(p.memory_size) - static_cast<std::int64_t>(Reserved::count) - 1;
    for (const auto& s : standard_library(p.memory_size)) {
      const auto& d = std::get<st::StructDecl>(s.node);
      struct_members_[d.type] = d.members;
    }
    for (const auto& [name, info] : p.structs) struct_members_[info.addr] = info.members;
    p_.globals["now"] = VarInfo{r_.now, LType::uint64(), VarKind::Builtin};
    p_.globals["msg"] = VarInfo{r_.msg, LType::structure(r_.msg_type), VarKind::Builtin};
    taken_ = {"now", "msg", "this", "address", "_"};
  }

  // Pass 1: every declaration gets its blocks.
  void allocate(const SourceProgram& src) {
    for (const auto& c : src.contracts) {
      claim(c.name, c.pos);
      const Address block = take(1, c.pos);
      p_.contract_blocks[c.name] = block;
      std::vector<Address> bases;
      for (const auto& b : c.bases) {
        auto it = p_.contract_blocks.find(b);
        if (it == p_.contract_blocks.end() || b == c.name)
          error_at(c.pos, "contract " + c.name + " inherits from undeclared contract " + b);
        bases.push_back(it->second);
      }
      p_.registry[c.name] = bases;
      for (const auto& m : c.members) std::visit([&](const auto& x) { allocate_member(c, x); }, m);
    }
  }

  // Pass 2: lowering, contract by contract.
  void lower(const SourceProgram& src) {
    for (const auto& c : src.contracts) {
      contract_ = p_.contract_blocks.at(c.name);
      st::Contract decl{contract_, c.name, p_.registry.at(c.name), {}};
      StmtList structs, vars, modifiers, functions;
      std::vector<SrcPos> struct_pos, var_pos, modifier_pos, function_pos;
      for (const auto& m : c.members) {
        if (const auto* s = std::get_if<SStruct>(&m)) {
          const StructInfo& info = p_.structs.at(s->name);
          structs.push_back(LStatement{st::StructDecl{info.addr, info.members}});
          struct_pos.push_back(s->pos);
        } else if (const auto* v = std::get_if<SStateVar>(&m)) {
          const VarInfo& info = p_.globals.at(v->name);
          decl.members.emplace_back(v->name, info.addr);
          vars.push_back(LStatement{st::Var{v->access.value_or(Access::Public),
                                            LExpr{ex::Var{info.addr, info.type}, std::nullopt}}});
          if (v->init) {
            fn_ = nullptr;
            assign_value(Lowered{LExpr{ex::Var{info.addr, info.type}, std::nullopt}, info.type}, *v->init, vars, false);
          }
          var_pos.resize(vars.size(), v->pos);
        } else if (const auto* f = std::get_if<SFunction>(&m)) {
          const FunctionInfo& info = p_.functions.at(f->name);
          decl.members.emplace_back(f->name, info.addr);
          (f->is_modifier ? modifiers : functions).push_back(lower_function(*f, info));
          (f->is_modifier ? modifier_pos : function_pos).push_back(f->pos);
        }
      }
      p_.declarations.push_back(LStatement{std::move(decl)});
      positions_.push_back(c.pos);
      for (auto* list : {&structs, &vars, &modifiers, &functions})
        for (auto& s : *list) p_.declarations.push_back(std::move(s));
      for (auto* list : {&struct_pos, &var_pos, &modifier_pos, &function_pos})
        positions_.insert(positions_.end(), list->begin(), list->end());
    }
    fn_ = nullptr;
  }

  void finish() {
    p_.heap_base = Address{next_user_};
    p_.reserved_floor = Address{static_cast<std::size_t>(next_slot_ + 1)};
    if (p_.heap_base.index > p_.reserved_floor.index) error_at({}, "address space exhausted");
  }

  StmtList lower_global(const std::vector<SStmt>& stmts) {
    fn_ = nullptr;
    contract_ = p_.contract_blocks.empty() ? Address{} : p_.contract_blocks.begin()->second;
    StmtList out;
    for (const auto& s : stmts) lower_stmt(s, out);
    return out;
  }

  Lowered expression(const SExpr& e, const std::optional<LType>& hint) { return lower_expr(e, hint); }

 private:
  Program& p_;
  Reserved r_;

 public:
  /// Source position of each lowered declaration, and of each top-level
  /// statement of every function body.
  std::vector<SrcPos> positions_;
  std::map<Address, std::vector<SrcPos>> body_positions_;

 private:
  std::size_t next_user_ = 0;
  std::int64_t next_slot_ = 0;
  std::set<std::string> taken_;
  std::map<Address, std::vector<StructMember>> struct_members_;
  const FunctionInfo* fn_ = nullptr;
  Address contract_;
  // Scope being built during allocation.
  FunctionInfo* building_ = nullptr;
  std::vector<Address>* building_locals_ = nullptr;
  std::map<std::string, std::vector<Address>> locals_;

  void claim(const std::string& name, SrcPos at) {
    if (!taken_.insert(name).second) error_at(at, "duplicate identifier " + name);
  }

  Address take(std::uint64_t n, SrcPos at) {
    const std::size_t base = next_user_;
    next_user_ += n;
    if (static_cast<std::int64_t>(next_user_) > next_slot_ + 1)
      error_at(at, "address space exhausted (memory size " + std::to_string(p_.memory_size) + ")");
    return Address{base};
  }

  Address take_slots(std::uint64_t n, SrcPos at) {
    next_slot_ -= static_cast<std::int64_t>(n);
    if (next_slot_ + 1 < static_cast<std::int64_t>(next_user_))
      error_at(at, "address space exhausted (memory size " + std::to_string(p_.memory_size) + ")");
    return Address{static_cast<std::size_t>(next_slot_ + 1)};
  }

  LType resolve(const SType& t) {
    switch (t.kind) {
      case SType::Kind::Bool: return LType::boolean();
      case SType::Kind::Int: return LType::integer(t.int_type);
      case SType::Kind::Address: return LType::structure(r_.address_type);
      case SType::Kind::Mapping: {
        LType key = resolve(t.children[0]);
        if (key.is<ty::Map>() || key.is<ty::Array>()) error_at(t.pos, "mapping keys must be scalar or struct types");
        return LType::map(std::move(key), resolve(t.children[1]));
      }
      case SType::Kind::Array: {
        LType elem = resolve(t.children[0]);
        if (elem.is<ty::Map>()) error_at(t.pos, "arrays of mappings are not supported");
        return LType::array(t.length, std::move(elem));
      }
      case SType::Kind::Named: {
        auto it = p_.structs.find(t.name);
        if (it == p_.structs.end()) error_at(t.pos, "unknown type " + t.name);
        return LType::structure(it->second.addr);
      }
    }
    error_at(t.pos, "unknown type");
  }

  void allocate_member(const SContract& c, const SStruct& s) {
    claim(s.name, s.pos);
    StructInfo info{take(1, s.pos), {}};
    std::set<std::string> names;
    for (const auto& m : s.members) {
      if (!names.insert(m.name).second) error_at(m.pos, "duplicate member " + m.name);
      LType t = resolve(m.type);
      if (t.is<ty::Array>() || t.is<ty::Map>()) error_at(m.pos, "struct members must be scalar or struct types");
      info.members.push_back({m.name, std::move(t)});
    }
    struct_members_[info.addr] = info.members;
    p_.symbols[s.name] = info.addr;
    p_.structs[s.name] = std::move(info);
    (void)c;
  }

  void allocate_member(const SContract& c, const SStateVar& v) {
    claim(v.name, v.pos);
    LType t = resolve(v.type);
    const Address a = take(blocks_of(t), v.pos);
    p_.globals[v.name] = VarInfo{a, std::move(t), VarKind::Global};
    p_.symbols[v.name] = a;
    p_.symbols[c.name + "." + v.name] = a;
  }

  void allocate_member(const SContract&, const SEvent& e) {
    claim(e.name, e.pos);
    p_.events.push_back(e.name);
  }

  void allocate_member(const SContract& c, const SFunction& f) {
    claim(f.name, f.pos);
    FunctionInfo info;
    info.name = f.name;
    info.contract = c.name;
    info.is_modifier = f.is_modifier;
    info.addr = take(1, f.pos);
    p_.symbols[f.name] = info.addr;
    for (const auto& prm : f.params) {
      if (prm.name.empty()) error_at(prm.pos, "parameters must be named");
      if (info.scope.count(prm.name)) error_at(prm.pos, "duplicate parameter " + prm.name);
      LType t = resolve(prm.type);
      if (t.is<ty::Map>() || t.is<ty::Array>()) error_at(prm.pos, "parameters must be scalar or struct types");
      const Address a = take(1, prm.pos);
      info.params.push_back({prm.name, a, t});
      info.scope[prm.name] = VarInfo{a, t, VarKind::Param};
      p_.symbols[f.name + "." + prm.name] = a;
    }
    for (const auto& rt : f.returns) {
      LType t = resolve(rt);
      if (t.is<ty::Map>() || t.is<ty::Array>()) error_at(rt.pos, "return values must be scalar or struct types");
      info.returns.push_back(std::move(t));
    }
    if (f.is_modifier && !f.returns.empty()) error_at(f.pos, "modifiers have no return values");
    building_ = &info;
    building_locals_ = &locals_[f.name];
    for (const auto& s : f.body) scan_locals(s, false, f.is_modifier);
    building_ = nullptr;
    building_locals_ = nullptr;
    info.return_slot = take_slots(std::max<std::size_t>(1, info.returns.size()), f.pos);
    p_.functions[f.name] = std::move(info);
  }

  void scan_locals(const SStmt& s, bool in_loop, bool in_modifier) {
    switch (s.kind) {
      case SStmt::Kind::VarDecl: {
        if (in_loop) error_at(s.pos, "local variables cannot be declared inside a loop body");
        if (in_modifier) error_at(s.pos, "modifiers cannot declare local variables");
        if (building_->scope.count(s.name)) error_at(s.pos, "duplicate identifier " + s.name);
        LType t = resolve(s.type);
        if (t.is<ty::Map>()) error_at(s.pos, "local mappings are not supported");
        const std::uint64_t n = blocks_of(t);
        const Address a = take(n, s.pos);
        for (std::uint64_t i = 0; i < n; ++i) building_locals_->push_back(Address{a.index + i});
        building_->scope[s.name] = VarInfo{a, std::move(t), VarKind::Local};
        p_.symbols[building_->name + "." + s.name] = a;
        return;
      }
      case SStmt::Kind::Block:
        for (const auto& x : s.body) scan_locals(x, in_loop, in_modifier);
        return;
      case SStmt::Kind::If:
        for (const auto& x : s.body) scan_locals(x, in_loop, in_modifier);
        for (const auto& x : s.orelse) scan_locals(x, in_loop, in_modifier);
        return;
      case SStmt::Kind::While:
        for (const auto& x : s.body) scan_locals(x, true, in_modifier);
        return;
      case SStmt::Kind::For:
        for (const auto& x : s.init) scan_locals(x, in_loop, in_modifier);
        for (const auto& x : s.post) scan_locals(x, true, in_modifier);
        for (const auto& x : s.body) scan_locals(x, true, in_modifier);
        return;
      default: return;
    }
  }

  LStatement lower_function(const SFunction& f, const FunctionInfo& info) {
    fn_ = nullptr;
    std::vector<ModifierCall> mods;
    for (const auto& use : f.modifiers) {
      auto it = p_.functions.find(use.name);
      if (it == p_.functions.end() || !it->second.is_modifier) error_at(use.pos, "unknown modifier " + use.name);
      const FunctionInfo& m = it->second;
      if (m.params.size() != use.args.size()) error_at(use.pos, "modifier " + use.name + " takes " +
                                                                     std::to_string(m.params.size()) + " arguments");
      ModifierCall call{m.addr, {}};
      for (std::size_t i = 0; i < use.args.size(); ++i) call.args.push_back(lower_expr(use.args[i], m.params[i].type).e);
      mods.push_back(std::move(call));
    }
    fn_ = &info;
    StmtList body;
    std::vector<SrcPos>& at = body_positions_[info.addr];
    for (const auto& s : f.body) {
      lower_stmt(s, body);
      at.resize(body.size(), s.pos);
    }
    fn_ = nullptr;
    if (f.is_modifier) return LStatement{st::Modifier{info.addr, info.name, info.params, info.return_slot, std::move(body)}};
    st::Fun out;
    out.addr = info.addr;
    out.name = info.name;
    out.modifiers = std::move(mods);
    out.params = info.params;
    out.returns = info.returns;
    out.return_slot = info.return_slot;
    out.locals = locals_[f.name];
    out.body = std::move(body);
    return LStatement{std::move(out)};
  }

  const VarInfo& lookup(const std::string& name, SrcPos at) const {
    if (fn_) {
      auto it = fn_->scope.find(name);
      if (it != fn_->scope.end()) return it->second;
    }
    auto it = p_.globals.find(name);
    if (it != p_.globals.end()) return it->second;
    if (p_.functions.count(name)) error_at(at, "function " + name + " used as a value; call it instead");
    error_at(at, "unknown identifier " + name);
  }

  LExpr var_expr(const VarInfo& v) const {
    if (v.kind == VarKind::Param) return LExpr{ex::Par{v.addr, v.type}, std::nullopt};
    return LExpr{ex::Var{v.addr, v.type}, std::nullopt};
  }

  Lowered number(const SExpr& e, bool negative, const std::optional<LType>& hint) {
    std::uint64_t v;
    try {
      std::size_t used = 0;
      v = std::stoull(e.text, &used);
      if (used != e.text.size()) throw std::invalid_argument("digits");
    } catch (const std::exception&) {
      error_at(e.pos, "integer literal " + e.text + " is out of range");
    }
    IntType t = negative ? IntType::i64() : IntType::u64();
    if (hint && hint->is<ty::Int>()) t = hint->as<ty::Int>()->type;
    const unsigned w = std::min<unsigned>(t.width, 64);
    std::uint64_t bits = v;
    if (t.is_signed) {
      const std::uint64_t limit = std::uint64_t{1} << (w - 1);
      if (negative ? v > limit : v >= limit) error_at(e.pos, "literal does not fit " + to_string(t));
      bits = negative ? arith::from_signed(t, -static_cast<std::int64_t>(v - 1) - 1) : v;
    } else {
      if (negative) error_at(e.pos, "negative literal for unsigned type " + to_string(t));
      if (w < 64 && v >> w) error_at(e.pos, "literal does not fit " + to_string(t));
    }
    const LType lt = LType::integer(t);
    return {constant(LValue{val::Int{t, bits}}), lt};
  }

  // Flattens base[i][j]... and base.a.b...; returns the innermost base.
  const SExpr& chain(const SExpr& e, SExpr::Kind kind, std::vector<const SExpr*>& parts) {
    const SExpr* cur = &e;
    while (cur->kind == kind) {
      parts.insert(parts.begin(), kind == SExpr::Kind::Index ? &cur->kids[1] : cur);
      cur = &cur->kids[0];
    }
    return *cur;
  }

  Lowered index_expr(const SExpr& e) {
    std::vector<const SExpr*> idx;
    const SExpr& base = chain(e, SExpr::Kind::Index, idx);
    if (base.kind != SExpr::Kind::Ident) error_at(e.pos, "only named arrays and mappings can be indexed");
    const VarInfo& v = lookup(base.text, base.pos);
    if (v.type.is<ty::Array>()) {
      const auto dims = v.type.dims();
      if (dims.size() != idx.size())
        error_at(e.pos, base.text + " needs " + std::to_string(dims.size()) + " indices, got " + std::to_string(idx.size()));
      std::vector<LExpr> indices;
      for (const auto* i : idx) indices.push_back(lower_expr(*i, LType::uint64()).e);
      return {constant(LValue{val::Array{v.type, std::move(indices), v.addr}}), v.type.final_type()};
    }
    if (v.type.is<ty::Map>()) {
      std::vector<LExpr> keys;
      LType cur = v.type;
      for (const auto* k : idx) {
        const auto* m = cur.as<ty::Map>();
        if (!m) error_at(k->pos, "too many keys for mapping " + base.text);
        keys.push_back(lower_expr(*k, m->key.get()).e);
        LType next = m->value.get();
        cur = std::move(next);
      }
      return {constant(LValue{val::Map{v.addr, std::move(keys), v.type, std::nullopt}}), cur};
    }
    error_at(e.pos, base.text + " is neither an array nor a mapping");
  }

  LType member_type(const LType& owner, const std::string& name, SrcPos at) const {
    const auto* s = owner.as<ty::Struct>();
    if (!s) error_at(at, "member access ." + name + " on a non-struct value");
    auto it = struct_members_.find(s->type);
    if (it == struct_members_.end()) error_at(at, "unknown struct type");
    for (const auto& m : it->second)
      if (m.name == name) return m.type;
    error_at(at, "no member named " + name);
  }

  Lowered member_expr(const SExpr& e, std::vector<std::string>* names_out = nullptr) {
    std::vector<const SExpr*> parts;
    const SExpr& base = chain(e, SExpr::Kind::Member, parts);
    if (base.kind != SExpr::Kind::Ident) error_at(e.pos, "member access needs a named struct value");
    const VarInfo& v = lookup(base.text, base.pos);
    std::vector<std::string> names;
    LType cur = v.type;
    for (const auto* p : parts) {
      cur = member_type(cur, p->text, p->pos);
      names.push_back(p->text);
    }
    if (names_out) *names_out = names;
    return {constant(LValue{val::Field{cur, v.addr, std::move(names), std::nullopt}}), cur};
  }

  Lowered lower_expr(const SExpr& e, const std::optional<LType>& hint) {
    switch (e.kind) {
      case SExpr::Kind::Number: return number(e, false, hint);
      case SExpr::Kind::Bool: return {constant(LValue{val::Bool{e.bit}}), LType::boolean()};
      case SExpr::Kind::Ident: {
        const VarInfo& v = lookup(e.text, e.pos);
        return {var_expr(v), v.type};
      }
      case SExpr::Kind::This:
        return {LExpr{ex::Con{contract_}, std::nullopt}, LType::eaddr(contract_)};
      case SExpr::Kind::Unary: {
        if (e.uop == UnOp::Neg && e.kids[0].kind == SExpr::Kind::Number) return number(e.kids[0], true, hint);
        Lowered x = lower_expr(e.kids[0], e.uop == UnOp::Not ? std::optional<LType>(LType::boolean()) : hint);
        return {make_uop(e.uop, std::move(x.e)), x.t};
      }
      case SExpr::Kind::Binary: {
        const BinOp op = e.bop;
        const bool logical = arith::is_logical(op);
        Lowered l, r;
        if (logical) {
          l = lower_expr(e.kids[0], LType::boolean());
          r = lower_expr(e.kids[1], LType::boolean());
        } else if (literal(e.kids[0]) && !literal(e.kids[1])) {
          r = lower_expr(e.kids[1], std::nullopt);
          l = lower_expr(e.kids[0], r.t);
        } else {
          l = lower_expr(e.kids[0], arith::is_arithmetic(op) ? hint : std::nullopt);
          r = lower_expr(e.kids[1], l.t);
        }
        const LType result = arith::is_arithmetic(op) ? l.t : LType::boolean();
        return {make_bop(op, std::move(l.e), std::move(r.e)), result};
      }
      case SExpr::Kind::Index: return index_expr(e);
      case SExpr::Kind::Member: return member_expr(e);
      case SExpr::Kind::Call:
        error_at(e.pos, "calls are only allowed as statements or as a whole right-hand side");
      case SExpr::Kind::Tuple: error_at(e.pos, "tuples are only allowed in return statements");
    }
    error_at(e.pos, "unsupported expression");
  }

  Lowered lvalue(const SExpr& e) {
    switch (e.kind) {
      case SExpr::Kind::Ident: {
        const VarInfo& v = lookup(e.text, e.pos);
        if (v.kind == VarKind::Builtin && e.text == "msg") error_at(e.pos, "msg cannot be assigned");
        return {var_expr(v), v.type};
      }
      case SExpr::Kind::Index: return index_expr(e);
      case SExpr::Kind::Member: error_at(e.pos, "assignment to struct members is not supported");
      default: error_at(e.pos, "left-hand side is not assignable");
    }
  }

  const FunctionInfo* called_function(const SExpr& call) const {
    if (call.kind != SExpr::Kind::Call || call.kids[0].kind != SExpr::Kind::Ident) return nullptr;
    auto it = p_.functions.find(call.kids[0].text);
    if (it == p_.functions.end()) return nullptr;
    if (it->second.is_modifier) error_at(call.pos, "modifier " + it->second.name + " cannot be called directly");
    return &it->second;
  }

  LStatement call_of(const FunctionInfo& f, const SExpr& call) {
    const std::size_t n = call.kids.size() - 1;
    if (n != f.params.size())
      error_at(call.pos, f.name + " takes " + std::to_string(f.params.size()) + " arguments, got " + std::to_string(n));
    std::vector<LExpr> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(lower_expr(call.kids[i + 1], f.params[i].type).e);
    return LStatement{st::FunCall{fun_expr(f), std::move(args)}};
  }

  LExpr fun_expr(const FunctionInfo& f) const {
    return LExpr{ex::Fun{f.addr, f.returns.empty() ? LType::unit() : f.returns.front()}, std::nullopt};
  }

  const FunctionInfo& value_call(const SExpr& call) {
    const FunctionInfo* f = called_function(call);
    if (!f) error_at(call.pos, "only calls to contract functions can produce values");
    if (f->returns.size() != 1) error_at(call.pos, f->name + " does not return exactly one value");
    return *f;
  }

  void assign_value(const Lowered& lhs, const SExpr& value, StmtList& out, bool calls_allowed = true) {
    if (value.kind == SExpr::Kind::Call) {
      if (!calls_allowed) error_at(value.pos, "initializers cannot call functions");
      const FunctionInfo& f = value_call(value);
      out.push_back(call_of(f, value));
      out.push_back(LStatement{st::Assign{lhs.e, fun_expr(f)}});
      return;
    }
    out.push_back(LStatement{st::Assign{lhs.e, lower_expr(value, lhs.t).e}});
  }

  void lower_call_stmt(const SExpr& call, StmtList& out) {
    const SExpr& callee = call.kids[0];
    if (callee.kind == SExpr::Kind::Ident) {
      for (const auto& ev : p_.events)
        if (ev == callee.text) return out.push_back(LStatement{st::Snil{}});
      const FunctionInfo* f = called_function(call);
      if (!f) error_at(callee.pos, "unknown function " + callee.text);
      out.push_back(call_of(*f, call));
      return;
    }
    if (callee.kind == SExpr::Kind::Member && (callee.text == "transfer" || callee.text == "send")) {
      if (call.kids.size() != 2) error_at(call.pos, callee.text + " takes one argument");
      SExpr target = callee;
      target.text = "send";
      Lowered fid = member_expr(target);
      if (!fid.t.is<ty::Fid>()) error_at(callee.pos, callee.text + " is not a function member");
      std::vector<LExpr> args;
      args.push_back(lower_expr(call.kids[1], LType::uint64()).e);
      out.push_back(LStatement{st::FunCall{std::move(fid.e), std::move(args)}});
      return;
    }
    error_at(call.pos, "unsupported call");
  }

  LStatement single(const SStmt& s, const char* what) {
    StmtList tmp;
    lower_stmt(s, tmp);
    if (tmp.size() != 1) error_at(s.pos, std::string("for-loop ") + what + " must be a single simple statement");
    return tmp.front();
  }

  StmtList lower_list(const std::vector<SStmt>& ss) {
    StmtList out;
    for (const auto& s : ss) lower_stmt(s, out);
    return out;
  }

  void lower_stmt(const SStmt& s, StmtList& out) {
    switch (s.kind) {
      case SStmt::Kind::Empty: return;
      case SStmt::Kind::Block:
        for (const auto& x : s.body) lower_stmt(x, out);
        return;
      case SStmt::Kind::VarDecl: {
        if (!fn_) error_at(s.pos, "declarations are only allowed inside functions");
        const VarInfo& v = fn_->scope.at(s.name);
        out.push_back(LStatement{st::Var{std::nullopt, LExpr{ex::Var{v.addr, v.type}, std::nullopt}}});
        if (s.expr) assign_value(Lowered{var_expr(v), v.type}, *s.expr, out);
        return;
      }
      case SStmt::Kind::Assign: return assign_value(lvalue(*s.target), *s.expr, out);
      case SStmt::Kind::CompoundAssign: {
        Lowered lhs = lvalue(*s.target);
        Lowered rhs = lower_expr(*s.expr, lhs.t);
        out.push_back(LStatement{st::Assign{lhs.e, make_bop(s.op, lhs.e, std::move(rhs.e))}});
        return;
      }
      case SStmt::Kind::Call: return lower_call_stmt(*s.expr, out);
      case SStmt::Kind::If:
        out.push_back(LStatement{st::If{lower_expr(*s.expr, LType::boolean()).e, lower_list(s.body), lower_list(s.orelse)}});
        return;
      case SStmt::Kind::While:
        out.push_back(LStatement{st::LoopWhile{lower_expr(*s.expr, LType::boolean()).e, lower_list(s.body)}});
        return;
      case SStmt::Kind::For: {
        LStatement init{st::Snil{}};
        if (!s.init.empty()) {
          const SStmt& i = s.init.front();
          if (i.kind == SStmt::Kind::VarDecl) {
            SStmt decl = i;
            decl.expr.reset();
            lower_stmt(decl, out);
            if (i.expr) {
              SStmt assign;
              assign.kind = SStmt::Kind::Assign;
              assign.pos = i.pos;
              SExpr name;
              name.kind = SExpr::Kind::Ident;
              name.text = i.name;
              name.pos = i.pos;
              assign.target = name;
              assign.expr = i.expr;
              init = single(assign, "init");
            }
          } else {
            init = single(i, "init");
          }
        }
        LStatement post{st::Snil{}};
        if (!s.post.empty()) post = single(s.post.front(), "post");
        LExpr cond = s.expr ? lower_expr(*s.expr, LType::boolean()).e : make_bool(true);
        out.push_back(LStatement{st::LoopFor{std::move(cond), std::move(init), lower_list(s.body), std::move(post)}});
        return;
      }
      case SStmt::Kind::Return: {
        if (!fn_ || fn_->is_modifier) error_at(s.pos, "return outside a function");
        if (!s.expr) error_at(s.pos, "return needs a value");
        if (s.expr->kind == SExpr::Kind::Tuple) {
          if (s.expr->kids.size() != fn_->returns.size()) error_at(s.pos, "wrong number of return values");
          std::vector<LExpr> values;
          for (std::size_t i = 0; i < s.expr->kids.size(); ++i)
            values.push_back(lower_expr(s.expr->kids[i], fn_->returns[i]).e);
          out.push_back(LStatement{st::Returns{std::move(values)}});
          return;
        }
        if (fn_->returns.size() != 1) error_at(s.pos, fn_->name + " does not return exactly one value");
        if (s.expr->kind == SExpr::Kind::Call) {
          const FunctionInfo& f = value_call(*s.expr);
          out.push_back(call_of(f, *s.expr));
          out.push_back(LStatement{st::Return{fun_expr(f)}});
          return;
        }
        out.push_back(LStatement{st::Return{lower_expr(*s.expr, fn_->returns.front()).e}});
        return;
      }
      case SStmt::Kind::Throw: out.push_back(LStatement{st::Throw{}}); return;
      case SStmt::Kind::Require: {
        LExpr c = lower_expr(*s.expr, LType::boolean()).e;
        StmtList fail{LStatement{st::Throw{}}};
        out.push_back(LStatement{st::If{make_uop(UnOp::Not, std::move(c)), std::move(fail), {}}});
        return;
      }
      case SStmt::Kind::Placeholder:
        if (!fn_ || !fn_->is_modifier) error_at(s.pos, "_ is only allowed inside a modifier");
        out.push_back(LStatement{st::Assign{make_var(r_.modifier_flag, LType::boolean()), make_bool(true)}});
        return;
      case SStmt::Kind::Emit: out.push_back(LStatement{st::Snil{}}); return;
    }
  }
};

StmtList* body_of(LStatement& s) {
  if (auto* f = std::get_if<st::Fun>(&s.node)) return &f->body;
  if (auto* m = std::get_if<st::Modifier>(&s.node)) return &m->body;
  return nullptr;
}

std::optional<Address> callable_addr(const LStatement& s) {
  if (const auto* f = s.as<st::Fun>()) return f->addr;
  if (const auto* m = s.as<st::Modifier>()) return m->addr;
  return std::nullopt;
}

// Reports the statement whose check failed: the shortest body prefix that
// still fails locates it.
SrcPos failing_statement(const LStatement& decl, const TypeContext& ctx, SrcPos fallback,
                         const std::vector<SrcPos>& body_pos) {
  LStatement probe = decl;
  StmtList* body = body_of(probe);
  if (!body) return fallback;
  const StmtList full = *body;
  for (std::size_t n = 0; n <= full.size() && n <= body_pos.size(); ++n) {
    body->assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
    StmtList one{probe};
    TypeContext scratch = ctx;
    if (typecheck_stmts(one, scratch)) return n == 0 ? fallback : body_pos[n - 1];
  }
  return fallback;
}

void check_types(Program& p, const Binder& b) {
  TypeContext ctx = TypeContext::with_stdlib(p.memory_size);
  for (std::size_t i = 0; i < p.declarations.size(); ++i) {
    StmtList one{p.declarations[i]};
    const TypeContext before = ctx;
    if (auto err = typecheck_stmts(one, ctx)) {
      const SrcPos decl_pos = i < b.positions_.size() ? b.positions_[i] : SrcPos{};
      SrcPos at = decl_pos;
      if (auto addr = callable_addr(p.declarations[i])) {
        auto it = b.body_positions_.find(*addr);
        if (it != b.body_positions_.end()) at = failing_statement(p.declarations[i], before, decl_pos, it->second);
      }
      throw FrontendError(at, "type error: " + *err);
    }
    p.declarations[i] = std::move(one.front());
  }
  p.types = std::move(ctx);
}

}  // namespace

Program bind_program(const SourceProgram& source, std::size_t memory_size) {
  Program p;
  p.memory_size = memory_size;
  if (memory_size <= Reserved::count + 1) throw FrontendError({}, "memory size " + std::to_string(memory_size) + " is too small");
  Binder b(p);
  b.allocate(source);
  b.finish();
  b.lower(source);
  p.symbols["now"] = p.globals.at("now").addr;
  p.symbols["msg"] = p.globals.at("msg").addr;
  for (const auto& [name, a] : p.contract_blocks) p.symbols[name] = a;
  check_types(p, b);
  return p;
}

Program load_program(const std::string& text, std::size_t memory_size) {
  return bind_program(parse_source(text), memory_size);
}

StmtList bind_statements(const Program& prog, const std::vector<SStmt>& stmts) {
  Program scratch = prog;
  Binder b(scratch);
  StmtList out = b.lower_global(stmts);
  TypeContext ctx = prog.types;
  if (auto err = typecheck_stmts(out, ctx)) throw FrontendError({}, "type error: " + *err);
  return out;
}

LExpr bind_expression(const Program& prog, const SExpr& e, const std::optional<LType>& hint) {
  Program scratch = prog;
  Binder b(scratch);
  b.lower_global({});
  LExpr out = b.expression(e, hint).e;
  try {
    typecheck_expr(out, prog.types);
  } catch (const TypeError& err) {
    throw FrontendError(e.pos, std::string("type error: ") + err.what());
  }
  return out;
}

LStatement entry_call(const Program& prog, const std::string& entry, std::vector<LExpr> args) {
  auto it = prog.functions.find(entry);
  if (it == prog.functions.end() || it->second.is_modifier) throw FrontendError({}, "no function named " + entry);
  const FunctionInfo& f = it->second;
  LExpr callee{ex::Fun{f.addr, f.returns.empty() ? LType::unit() : f.returns.front()}, std::nullopt};
  if (args.size() != f.params.size())
    throw FrontendError({}, entry + " takes " + std::to_string(f.params.size()) + " arguments, got " +
                                std::to_string(args.size()));
  return LStatement{st::FunCall{std::move(callee), std::move(args)}};
}

}  // namespace solsem
