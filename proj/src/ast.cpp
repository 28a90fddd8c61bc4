#include "solsem/ast.hpp"

#include <stdexcept>

namespace solsem {

const char* to_string(Access a) {
  switch (a) {
    case Access::Public: return "public";
    case Access::Private: return "private";
    case Access::Internal: return "internal";
  }
  return "?";
}

const char* to_string(Occupancy o) { return o == Occupancy::Occupy ? "occupy" : "free"; }

std::string to_string(IntType t) {
  return std::string(t.is_signed ? "int" : "uint") + std::to_string(t.width);
}

LType LType::array(const std::vector<std::uint64_t>& dims, LType element) {
  LType t = std::move(element);
  for (auto it = dims.rbegin(); it != dims.rend(); ++it) t = array(*it, std::move(t));
  return t;
}

std::vector<std::uint64_t> LType::dims() const {
  std::vector<std::uint64_t> out;
  const LType* t = this;
  while (auto* a = t->as<ty::Array>()) {
    out.push_back(a->length);
    t = &a->element.get();
  }
  return out;
}

const LType& LType::final_type() const {
  const LType* t = this;
  while (auto* a = t->as<ty::Array>()) t = &a->element.get();
  return *t;
}

std::size_t LType::map_depth() const {
  std::size_t depth = 0;
  const LType* t = this;
  while (auto* m = t->as<ty::Map>()) {
    ++depth;
    t = &m->value.get();
  }
  return depth;
}

std::string to_string(const LType& t) {
  struct V {
    std::string operator()(const ty::Bool&) const { return "bool"; }
    std::string operator()(const ty::Int& i) const { return to_string(i.type); }
    std::string operator()(const ty::Array& a) const {
      return to_string(a.element.get()) + "[" + std::to_string(a.length) + "]";
    }
    std::string operator()(const ty::Map& m) const {
      return "mapping(" + to_string(m.key.get()) + "=>" + to_string(m.value.get()) + ")";
    }
    std::string operator()(const ty::Fid& f) const { return "fid(" + (f.fn ? to_string(*f.fn) : "?") + ")"; }
    std::string operator()(const ty::Struct& s) const { return "struct(" + to_string(s.type) + ")"; }
    std::string operator()(const ty::Eaddr& e) const { return "eaddr(" + (e.addr ? to_string(*e.addr) : "?") + ")"; }
    std::string operator()(const ty::Unit&) const { return "unit"; }
  };
  return std::visit(V{}, t.node);
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

const char* to_string(UnOp op) { return op == UnOp::Not ? "!" : "-"; }

namespace val {
bool operator==(const Array& a, const Array& b) {
  return a.array_type == b.array_type && a.indices == b.indices && a.base == b.base;
}
bool operator==(const Map& a, const Map& b) {
  return a.base == b.base && a.keys == b.keys && a.map_type == b.map_type && a.next == b.next;
}
bool operator==(const Field& a, const Field& b) {
  return a.result == b.result && a.head == b.head && a.members == b.members && a.args == b.args;
}
}  // namespace val

namespace ex {
bool operator==(const Struct& a, const Struct& b) { return a.type == b.type && a.fields == b.fields; }
}  // namespace ex

namespace st {
bool operator==(const Modifier& a, const Modifier& b) {
  return a.addr == b.addr && a.name == b.name && a.params == b.params && a.return_slot == b.return_slot &&
         a.body == b.body;
}
bool operator==(const Fun& a, const Fun& b) {
  return a.addr == b.addr && a.name == b.name && a.modifiers == b.modifiers && a.params == b.params &&
         a.returns == b.returns && a.return_slot == b.return_slot && a.locals == b.locals && a.body == b.body;
}
bool operator==(const LoopFor& a, const LoopFor& b) {
  return a.cond == b.cond && a.init == b.init && a.body == b.body && a.post == b.post;
}
bool operator==(const LoopWhile& a, const LoopWhile& b) { return a.cond == b.cond && a.body == b.body; }
bool operator==(const If& a, const If& b) {
  return a.cond == b.cond && a.then_branch == b.then_branch && a.else_branch == b.else_branch;
}
}  // namespace st

LExpr make_bool(bool b) { return LExpr{ex::Const{LValue{val::Bool{b}}}, std::nullopt}; }

LExpr make_int(std::int64_t v, IntType t) {
  std::uint64_t bits = static_cast<std::uint64_t>(v);
  if (t.width < 64) bits &= (std::uint64_t{1} << t.width) - 1;
  return LExpr{ex::Const{LValue{val::Int{t, bits}}}, std::nullopt};
}

LExpr make_var(Address a, LType t) { return LExpr{ex::Var{a, std::move(t)}, std::nullopt}; }

LExpr make_bop(BinOp op, LExpr lhs, LExpr rhs) {
  return LExpr{ex::Bop{op, std::move(lhs), std::move(rhs)}, std::nullopt};
}

LExpr make_uop(UnOp op, LExpr e) { return LExpr{ex::Uop{op, std::move(e)}, std::nullopt}; }

const char* statement_name(const LStatement& s) {
  static constexpr const char* names[] = {"Contract", "Modifier", "Var",     "Struct",    "Assign",
                                          "Return",   "Returns",  "Throw",   "Snil",      "FunStop",
                                          "Fun",      "LoopFor",  "LoopWhile", "FunCall", "If"};
  return names[s.node.index()];
}

namespace {
void flatten(const StmtTree& tree, StmtList& out) {
  if (auto* leaf = std::get_if<LStatement>(&tree.node)) {
    out.push_back(*leaf);
    return;
  }
  for (const auto& child : std::get<std::vector<StmtTree>>(tree.node)) flatten(child, out);
}
}  // namespace

StmtList normalize_seq(const StmtTree& tree) {
  StmtList out;
  flatten(tree, out);
  return out;
}

StmtList normalize_seq(const StmtList& list) { return list; }

}  // namespace solsem
