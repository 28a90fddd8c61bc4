#include "solsem/expr.hpp"

#include "solsem/arith.hpp"
#include "solsem/value.hpp"

namespace solsem {

std::optional<Address> ese_l(std::uint64_t k, const LExpr& e, const MemoryState& mem, const BlockInfo& b,
                             const Env& env, Decider* decider) {
  if (k == 0) return std::nullopt;
  if (const auto* c = e.as<ex::Const>()) {
    if (const auto* arr = c->value.as<val::Array>()) {
      const auto dims = arr->array_type.dims();
      if (dims.size() != arr->indices.size()) return std::nullopt;
      std::vector<std::uint64_t> path;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        auto iv = ese_r(k - 1, arr->indices[i], mem, b, env, decider);
        if (!iv) return std::nullopt;
        auto idx = concretize_index(*iv, dims[i], decider);
        if (!idx) return std::nullopt;
        path.push_back(*idx);
      }
      return id_search(arr->array_type, arr->base, path, mem, env);
    }
    if (const auto* map = c->value.as<val::Map>()) {
      std::vector<MemoryValue> keys;
      for (const auto& ke : map->keys) {
        auto kv = ese_r(k - 1, ke, mem, b, env, decider);
        if (!kv) return std::nullopt;
        keys.push_back(std::move(*kv));
      }
      return id_map_path(keys, map->base, mem, env, decider);
    }
    return std::nullopt;
  }
  if (const auto* v = e.as<ex::Var>()) return v->addr;
  if (const auto* f = e.as<ex::Fun>()) return f->addr;
  if (const auto* c = e.as<ex::Con>()) return c->addr;
  if (const auto* p = e.as<ex::Par>()) return p->addr;
  return std::nullopt;
}

namespace {

std::optional<MemoryValue> read_at(const std::optional<Address>& a, const MemoryState& mem, const BlockInfo& b,
                                   const Env& env) {
  if (!a) return std::nullopt;
  return read(mem, *a, AccessMode::Chck, env, b);
}

std::optional<MemoryValue> eval_struct(std::uint64_t k, const ex::Struct& s, const MemoryState& mem,
                                       const BlockInfo& b, const Env& env, Decider* decider) {
  auto type_block = read(mem, s.type, AccessMode::Chck, env, b);
  if (!type_block) return std::nullopt;
  const auto* decl = type_block->as<cell::StructType>();
  if (!decl || decl->members.size() != s.fields.size()) return std::nullopt;
  cell::StructInstance inst{s.type, {}};
  for (std::size_t i = 0; i < s.fields.size(); ++i) {
    auto v = ese_r(k - 1, s.fields[i], mem, b, env, decider);
    if (!v || !value_has_type(*v, decl->members[i].type)) return std::nullopt;
    inst.members.push_back(std::move(*v));
  }
  return MemoryValue::make(std::move(inst), env);
}

}  // namespace

std::optional<MemoryValue> ese_r(std::uint64_t k, const LExpr& e, const MemoryState& mem, const BlockInfo& b,
                                 const Env& env, Decider* decider) {
  if (k == 0) return std::nullopt;
  struct V {
    std::uint64_t k;
    const MemoryState& mem;
    const BlockInfo& b;
    const Env& env;
    Decider* decider;

    std::optional<MemoryValue> operator()(const ex::Const& c) const { return esv(k - 1, c.value, mem, b, env, decider); }
    std::optional<MemoryValue> operator()(const ex::Var& v) const { return read_at(v.addr, mem, b, env); }
    std::optional<MemoryValue> operator()(const ex::Con& c) const { return read_at(c.addr, mem, b, env); }
    std::optional<MemoryValue> operator()(const ex::Par& p) const { return read_at(p.addr, mem, b, env); }
    std::optional<MemoryValue> operator()(const ex::Fun& f) const {
      auto fn = read_at(f.addr, mem, b, env);
      if (!fn) return std::nullopt;
      const auto* info = fn->as<cell::Function>();
      if (!info) return std::nullopt;
      return read(mem, info->return_slot, AccessMode::Chck, env, b);
    }
    std::optional<MemoryValue> operator()(const ex::Struct& s) const { return eval_struct(k, s, mem, b, env, decider); }
    std::optional<MemoryValue> operator()(const ex::Bop& op) const {
      auto lhs = ese_r(k - 1, *op.lhs, mem, b, env, decider);
      auto rhs = ese_r(k - 1, *op.rhs, mem, b, env, decider);
      return eval_bop(op.op, lhs, rhs, decider);
    }
    std::optional<MemoryValue> operator()(const ex::Uop& op) const {
      return eval_uop(op.op, ese_r(k - 1, *op.operand, mem, b, env, decider));
    }
    std::optional<MemoryValue> operator()(const ex::Modifier&) const { return std::nullopt; }
  };
  return std::visit(V{k, mem, b, env, decider}, e.node);
}

namespace {

MemoryValue result_tag(const MemoryValue& from) {
  MemoryValue tag = from;
  tag.access = Access::Public;
  tag.occupancy = Occupancy::Occupy;
  return tag;
}

std::optional<Scalar> shape_of(const MemoryValue& v) {
  if (v.is<cell::Bool>()) return Scalar::boolean(false);
  if (const auto* i = v.as<cell::Int>()) return Scalar::integer(i->type, 0);
  return std::nullopt;
}

bool operator_accepts(BinOp op, const Scalar& shape) {
  if (shape.is_bool) return op == BinOp::And || op == BinOp::Or || op == BinOp::Eq || op == BinOp::Ne;
  return !arith::is_logical(op) && shape.type.arithmetic();
}

}  // namespace

std::optional<MemoryValue> eval_bop(BinOp op, const std::optional<MemoryValue>& lhs,
                                    const std::optional<MemoryValue>& rhs, Decider* decider) {
  if (!lhs || !rhs) return std::nullopt;
  const MemoryValue tag = result_tag(*lhs);
  auto ls = shape_of(*lhs);
  auto rs = shape_of(*rhs);
  if (!ls || !rs) {
    if (op != BinOp::Eq && op != BinOp::Ne) return std::nullopt;
    if (lhs->payload.index() != rhs->payload.index()) return std::nullopt;
    auto eq = payload_equal(*lhs, *rhs, decider);
    if (!eq) return std::nullopt;
    return scalar_cell(Scalar::boolean(op == BinOp::Eq ? *eq : !*eq), tag);
  }
  if (*ls != *rs || !operator_accepts(op, *ls)) return std::nullopt;
  auto lc = concrete_scalar(*lhs);
  auto rc = concrete_scalar(*rhs);
  if (lc && rc) {
    auto r = arith::binary(op, *lc, *rc);
    if (!r) return std::nullopt;
    return scalar_cell(*r, tag);
  }
  Sym lt = scalar_term(*lhs);
  Sym rt = scalar_term(*rhs);
  if (!lt || !rt) return std::nullopt;
  if (op == BinOp::Div || op == BinOp::Mod) {
    if (rc) {
      if (rc->bits == 0) return std::nullopt;
    } else {
      if (!decider) return std::nullopt;
      auto zero = decider->decide(sym_binary(BinOp::Eq, rt, sym_const(Scalar::integer(rs->type, 0))));
      if (!zero || *zero) return std::nullopt;
    }
  }
  Scalar shape = arith::is_comparison(op) ? Scalar::boolean(false) : *ls;
  return symbolic_cell(sym_binary(op, lt, rt), shape, tag);
}

std::optional<MemoryValue> eval_uop(UnOp op, const std::optional<MemoryValue>& v) {
  if (!v) return std::nullopt;
  auto shape = shape_of(*v);
  if (!shape) return std::nullopt;
  if (op == UnOp::Not ? !shape->is_bool : (shape->is_bool || !shape->type.is_signed || !shape->type.arithmetic()))
    return std::nullopt;
  const MemoryValue tag = result_tag(*v);
  if (auto c = concrete_scalar(*v)) {
    auto r = arith::unary(op, *c);
    if (!r) return std::nullopt;
    return scalar_cell(*r, tag);
  }
  Sym t = scalar_term(*v);
  if (!t) return std::nullopt;
  return symbolic_cell(sym_unary(op, t), *shape, tag);
}

std::optional<bool> extract_bool(const std::optional<MemoryValue>& v) {
  if (!v) return std::nullopt;
  const auto* b = v->as<cell::Bool>();
  if (!b || b->sym) return std::nullopt;
  return b->bit;
}

std::shared_ptr<const StmtList> extract_stt(const std::optional<MemoryValue>& v) {
  if (!v) return nullptr;
  if (const auto* f = v->as<cell::Function>()) return f->body;
  if (const auto* b = v->as<cell::Body>()) return b->body;
  return nullptr;
}

}  // namespace solsem
