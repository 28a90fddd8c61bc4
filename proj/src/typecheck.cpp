#include "solsem/typecheck.hpp"

#include "solsem/memory.hpp"

namespace solsem {

TypeContext TypeContext::with_stdlib(std::size_t memory_size) {
  TypeContext ctx;
  for (const auto& s : standard_library(memory_size)) {
    const auto& d = std::get<st::StructDecl>(s.node);
    ctx.structs[d.type] = d.members;
  }
  const Reserved r = Reserved::for_size(memory_size);
  ctx.variables[r.msg] = LType::structure(r.msg_type);
  ctx.variables[r.now] = LType::uint64();
  ctx.variables[r.throw_flag] = LType::boolean();
  ctx.variables[r.modifier_flag] = LType::boolean();
  return ctx;
}

namespace {

[[noreturn]] void reject(const std::string& why) { throw TypeError(why); }

bool is_int(const LType& t) { return t.is<ty::Int>(); }

LType checked(Box<LExpr>& slot, const TypeContext& ctx) {
  LExpr e = slot.get();
  const LType result = typecheck_expr(e, ctx).result;
  slot = std::move(e);
  return result;
}

LType field_type(const val::Field& f, const TypeContext& ctx) {
  auto var = ctx.variables.find(f.head);
  if (var == ctx.variables.end()) return f.result;
  LType cur = var->second;
  for (const auto& name : f.members) {
    const auto* s = cur.as<ty::Struct>();
    if (!s) reject("field access ." + name + " on a non-struct value");
    auto decl = ctx.structs.find(s->type);
    if (decl == ctx.structs.end()) reject("struct type " + to_string(s->type) + " is not declared");
    const StructMember* found = nullptr;
    for (const auto& m : decl->second)
      if (m.name == name) found = &m;
    if (!found) reject("struct has no member " + name);
    cur = found->type;
  }
  if (cur != f.result) reject("field " + f.members.back() + " has type " + to_string(cur) + ", annotated as " +
                              to_string(f.result));
  return cur;
}

TypePair check_value(LValue& v, const TypeContext& ctx) {
  if (v.as<val::Bool>()) return {LType::boolean(), LType::boolean()};
  if (const auto* i = v.as<val::Int>()) {
    if (!i->type.valid()) reject("invalid integer width " + std::to_string(i->type.width));
    return {LType::integer(i->type), LType::integer(i->type)};
  }
  if (auto* a = std::get_if<val::Array>(&v.node)) {
    const auto dims = a->array_type.dims();
    if (dims.empty()) reject("indexing a non-array type");
    if (dims.size() != a->indices.size())
      reject("array access needs " + std::to_string(dims.size()) + " indices, got " +
             std::to_string(a->indices.size()));
    for (auto& idx : a->indices)
      if (!is_int(typecheck_expr(idx, ctx).result)) reject("array index must be an integer");
    return {a->array_type, a->array_type.final_type()};
  }
  if (auto* m = std::get_if<val::Map>(&v.node)) {
    if (m->keys.empty()) reject("mapping access without a key");
    LType cur = m->map_type;
    for (auto& k : m->keys) {
      const auto* mt = cur.as<ty::Map>();
      if (!mt) reject("too many keys for mapping type " + to_string(m->map_type));
      const LType kt = typecheck_expr(k, ctx).result;
      if (kt != mt->key.get()) reject("mapping key has type " + to_string(kt) + ", expected " + to_string(mt->key.get()));
      LType next = mt->value.get();
      cur = std::move(next);
    }
    return {m->map_type, cur};
  }
  if (const auto* s = v.as<val::Struct>()) {
    if (!ctx.structs.count(s->type)) reject("struct type " + to_string(s->type) + " is not declared");
    return {LType::structure(s->type), LType::structure(s->type)};
  }
  auto& f = std::get<val::Field>(v.node);
  if (f.members.empty()) reject("field access with an empty member path");
  if (f.args) {
    if (!f.result.is<ty::Fid>()) reject("only function members can be called");
    for (auto& a : *f.args) typecheck_expr(a, ctx);
  }
  const LType t = field_type(f, ctx);
  return {t, t};
}

TypePair check_bop(ex::Bop& b, const TypeContext& ctx) {
  const LType l = checked(b.lhs, ctx);
  const LType r = checked(b.rhs, ctx);
  switch (b.op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod:
      if (!is_int(l) || l != r)
        reject(std::string("operator ") + to_string(b.op) + " needs two integers of one type, got " + to_string(l) +
               " and " + to_string(r));
      return {l, l};
    case BinOp::Lt:
    case BinOp::Gt:
    case BinOp::Le:
    case BinOp::Ge:
      if (!is_int(l) || l != r)
        reject(std::string("comparison ") + to_string(b.op) + " needs two integers of one type, got " + to_string(l) +
               " and " + to_string(r));
      return {l, LType::boolean()};
    case BinOp::Eq:
    case BinOp::Ne:
      if (l != r) reject("equality between " + to_string(l) + " and " + to_string(r));
      return {l, LType::boolean()};
    case BinOp::And:
    case BinOp::Or:
      if (!l.is<ty::Bool>() || !r.is<ty::Bool>()) reject(std::string("operator ") + to_string(b.op) + " needs Bool operands");
      return {l, LType::boolean()};
  }
  reject("unknown operator");
}

TypePair check_node(LExpr& e, const TypeContext& ctx) {
  if (auto* c = std::get_if<ex::Const>(&e.node)) return check_value(c->value, ctx);
  if (const auto* v = e.as<ex::Var>()) return {v->type, v->type};
  if (const auto* p = e.as<ex::Par>()) return {p->type, p->type};
  if (const auto* f = e.as<ex::Fun>()) return {LType::fid(f->addr), f->type};
  if (const auto* c = e.as<ex::Con>()) return {LType::eaddr(c->addr), LType::eaddr(c->addr)};
  if (auto* s = std::get_if<ex::Struct>(&e.node)) {
    auto decl = ctx.structs.find(s->type);
    if (decl == ctx.structs.end()) reject("struct type " + to_string(s->type) + " is not declared");
    if (decl->second.size() != s->fields.size())
      reject("struct literal has " + std::to_string(s->fields.size()) + " fields, type has " +
             std::to_string(decl->second.size()));
    for (std::size_t i = 0; i < s->fields.size(); ++i) {
      const LType t = typecheck_expr(s->fields[i], ctx).result;
      if (t != decl->second[i].type)
        reject("field " + decl->second[i].name + " has type " + to_string(t) + ", expected " +
               to_string(decl->second[i].type));
    }
    return {LType::structure(s->type), LType::structure(s->type)};
  }
  if (auto* b = std::get_if<ex::Bop>(&e.node)) return check_bop(*b, ctx);
  if (auto* u = std::get_if<ex::Uop>(&e.node)) {
    const LType t = checked(u->operand, ctx);
    if (u->op == UnOp::Not) {
      if (!t.is<ty::Bool>()) reject("! needs a Bool operand");
    } else {
      const auto* i = t.as<ty::Int>();
      if (!i || !i->type.is_signed) reject("unary - needs a signed integer operand");
    }
    return {t, t};
  }
  reject("modifier expressions have no value");
}

void check_condition(LExpr& c, const TypeContext& ctx, const char* where) {
  if (!typecheck_expr(c, ctx).result.is<ty::Bool>()) reject(std::string(where) + ": condition must be Bool");
}

void check_list(StmtList& stmts, TypeContext& ctx);

void check_boxed(Box<LStatement>& slot, TypeContext& ctx) {
  StmtList one{slot.get()};
  check_list(one, ctx);
  slot = std::move(one.front());
}

bool assignable(const LExpr& lhs) {
  if (lhs.as<ex::Var>() || lhs.as<ex::Par>()) return true;
  if (const auto* c = lhs.as<ex::Const>())
    return c->value.as<val::Array>() || c->value.as<val::Map>() || c->value.as<val::Field>();
  return false;
}

void check_statement(LStatement& s, TypeContext& ctx) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, st::Var>) {
          const auto* v = n.var.template as<ex::Var>();
          if (!v || !v->addr) reject("Var: declaration needs a variable with an address");
          ctx.variables[*v->addr] = v->type;
          typecheck_expr(n.var, ctx);
        } else if constexpr (std::is_same_v<T, st::StructDecl>) {
          for (const auto& m : n.members)
            if (const auto* st = m.type.template as<ty::Struct>(); st && !ctx.structs.count(st->type) && st->type != n.type)
              reject("member " + m.name + " uses an undeclared struct type");
          ctx.structs[n.type] = n.members;
        } else if constexpr (std::is_same_v<T, st::Assign>) {
          if (!assignable(n.lhs)) reject("Assign: left-hand side is not assignable");
          const LType r = typecheck_expr(n.rhs, ctx).result;
          const auto* rc = n.rhs.template as<ex::Const>();
          if (rc && rc->value.template as<val::Field>() && rc->value.template as<val::Field>()->args) {
            typecheck_expr(n.lhs, ctx);
            return;
          }
          const LType l = typecheck_expr(n.lhs, ctx).result;
          if (l != r) reject("Assign: cannot store " + to_string(r) + " into " + to_string(l));
        } else if constexpr (std::is_same_v<T, st::Return>) {
          const LType t = typecheck_expr(n.value, ctx).result;
          if (!ctx.returns) reject("Return outside a function");
          if (ctx.returns->size() != 1 || ctx.returns->front() != t)
            reject("Return: value of type " + to_string(t) + " does not match the declared returns");
        } else if constexpr (std::is_same_v<T, st::Returns>) {
          if (!ctx.returns) reject("Returns outside a function");
          if (ctx.returns->size() != n.values.size()) reject("Returns: wrong number of values");
          for (std::size_t i = 0; i < n.values.size(); ++i)
            if (typecheck_expr(n.values[i], ctx).result != (*ctx.returns)[i])
              reject("Returns: value " + std::to_string(i) + " has the wrong type");
        } else if constexpr (std::is_same_v<T, st::Modifier>) {
          for (const auto& p : n.params) ctx.variables[p.addr] = p.type;
          TypeContext inner = ctx;
          inner.returns.reset();
          check_list(n.body, inner);
          ctx.functions[n.addr] = FunctionSignature{{}, {LType::boolean()}};
          for (const auto& p : n.params) ctx.functions[n.addr].params.push_back(p.type);
        } else if constexpr (std::is_same_v<T, st::Fun>) {
          FunctionSignature sig{{}, n.returns};
          for (const auto& p : n.params) {
            sig.params.push_back(p.type);
            ctx.variables[p.addr] = p.type;
          }
          ctx.functions[n.addr] = sig;
          for (auto& mc : n.modifiers) {
            auto m = ctx.functions.find(mc.modifier);
            if (m == ctx.functions.end()) reject("function " + n.name + " uses an undeclared modifier");
            if (m->second.params.size() != mc.args.size()) reject("modifier called with the wrong number of arguments");
            for (std::size_t i = 0; i < mc.args.size(); ++i)
              if (typecheck_expr(mc.args[i], ctx).result != m->second.params[i])
                reject("modifier argument " + std::to_string(i) + " has the wrong type");
          }
          TypeContext inner = ctx;
          inner.returns = n.returns;
          check_list(n.body, inner);
        } else if constexpr (std::is_same_v<T, st::LoopFor>) {
          check_boxed(n.init, ctx);
          check_condition(n.cond, ctx, "LoopFor");
          check_list(n.body, ctx);
          check_boxed(n.post, ctx);
        } else if constexpr (std::is_same_v<T, st::LoopWhile>) {
          check_condition(n.cond, ctx, "LoopWhile");
          check_list(n.body, ctx);
        } else if constexpr (std::is_same_v<T, st::If>) {
          check_condition(n.cond, ctx, "If");
          check_list(n.then_branch, ctx);
          check_list(n.else_branch, ctx);
        } else if constexpr (std::is_same_v<T, st::FunCall>) {
          const TypePair callee = typecheck_expr(n.callee, ctx);
          std::optional<Address> target;
          if (const auto* f = n.callee.template as<ex::Fun>()) {
            target = f->addr;
          } else if (const auto* fid = callee.result.template as<ty::Fid>()) {
            target = fid->fn;
          } else {
            reject("FunCall: callee is not a function");
          }
          std::vector<LType> args;
          for (auto& a : n.args) args.push_back(typecheck_expr(a, ctx).result);
          if (!n.callee.template as<ex::Fun>()) return;
          if (!target) return;
          auto sig = ctx.functions.find(*target);
          if (sig == ctx.functions.end()) return;
          if (sig->second.params != args) reject("FunCall: arguments do not match the parameters");
        }
      },
      s.node);
}

void check_list(StmtList& stmts, TypeContext& ctx) {
  for (auto& s : stmts) check_statement(s, ctx);
}

}  // namespace

TypePair typecheck_expr(LExpr& e, const TypeContext& ctx) {
  TypePair t = check_node(e, ctx);
  e.types = t;
  return t;
}

std::optional<std::string> typecheck_stmts(StmtList& stmts, TypeContext& ctx) {
  try {
    check_list(stmts, ctx);
  } catch (const TypeError& err) {
    return std::string(err.what());
  }
  return std::nullopt;
}

std::optional<std::string> typecheck_program(StmtList& stmts, TypeContext ctx) { return typecheck_stmts(stmts, ctx); }

}  // namespace solsem
