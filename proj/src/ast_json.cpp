#include "solsem/ast_json.hpp"

#include <stdexcept>

#include <json.hpp>

namespace solsem {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& why) { throw std::invalid_argument("AST JSON: " + why); }

json addr(Address a) { return a.index; }
json opt_addr(const std::optional<Address>& a) { return a ? json(a->index) : json(nullptr); }
Address get_addr(const json& j) {
  if (!j.is_number_unsigned() && !j.is_number_integer()) bad("expected an address");
  return Address{j.get<std::size_t>()};
}
std::optional<Address> get_opt_addr(const json& j) {
  if (j.is_null()) return std::nullopt;
  return get_addr(j);
}
const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field ") + name);
  return *it;
}

const char* access_name(Access a) { return to_string(a); }
Access access_from(const std::string& s) {
  if (s == "public") return Access::Public;
  if (s == "private") return Access::Private;
  if (s == "internal") return Access::Internal;
  bad("unknown access " + s);
}

json type_json(const LType& t) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ty::Bool>) return {{"kind", "bool"}};
        if constexpr (std::is_same_v<T, ty::Int>)
          return {{"kind", "int"}, {"width", n.type.width}, {"signed", n.type.is_signed}};
        if constexpr (std::is_same_v<T, ty::Array>)
          return {{"kind", "array"}, {"length", n.length}, {"element", type_json(n.element.get())}};
        if constexpr (std::is_same_v<T, ty::Map>)
          return {{"kind", "map"}, {"key", type_json(n.key.get())}, {"value", type_json(n.value.get())}};
        if constexpr (std::is_same_v<T, ty::Fid>) return {{"kind", "fid"}, {"fn", opt_addr(n.fn)}};
        if constexpr (std::is_same_v<T, ty::Struct>) return {{"kind", "struct"}, {"type", addr(n.type)}};
        if constexpr (std::is_same_v<T, ty::Eaddr>) return {{"kind", "eaddr"}, {"addr", opt_addr(n.addr)}};
        if constexpr (std::is_same_v<T, ty::Unit>) return {{"kind", "unit"}};
      },
      t.node);
}

LType type_of(const json& j) {
  const std::string k = field(j, "kind").get<std::string>();
  if (k == "bool") return LType::boolean();
  if (k == "int")
    return LType::integer(IntType{field(j, "width").get<std::uint16_t>(), field(j, "signed").get<bool>()});
  if (k == "array") return LType::array(field(j, "length").get<std::uint64_t>(), type_of(field(j, "element")));
  if (k == "map") return LType::map(type_of(field(j, "key")), type_of(field(j, "value")));
  if (k == "fid") return LType::fid(get_opt_addr(field(j, "fn")));
  if (k == "struct") return LType::structure(get_addr(field(j, "type")));
  if (k == "eaddr") return LType::eaddr(get_opt_addr(field(j, "addr")));
  if (k == "unit") return LType::unit();
  bad("unknown type kind " + k);
}

json expr_json(const LExpr& e);
LExpr expr_of(const json& j);

json exprs_json(const std::vector<LExpr>& es) {
  json out = json::array();
  for (const auto& e : es) out.push_back(expr_json(e));
  return out;
}
std::vector<LExpr> exprs_of(const json& j) {
  std::vector<LExpr> out;
  for (const auto& e : j) out.push_back(expr_of(e));
  return out;
}

json value_json(const LValue& v) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, val::Bool>) return {{"kind", "Vbool"}, {"bit", n.bit}};
        if constexpr (std::is_same_v<T, val::Int>)
          return {{"kind", "Vint"}, {"type", type_json(LType::integer(n.type))}, {"bits", std::to_string(n.bits)}};
        if constexpr (std::is_same_v<T, val::Array>)
          return {{"kind", "Varray"},
                  {"array_type", type_json(n.array_type)},
                  {"indices", exprs_json(n.indices)},
                  {"base", addr(n.base)}};
        if constexpr (std::is_same_v<T, val::Map>)
          return {{"kind", "Vmap"},
                  {"base", addr(n.base)},
                  {"keys", exprs_json(n.keys)},
                  {"map_type", type_json(n.map_type)},
                  {"next", opt_addr(n.next)}};
        if constexpr (std::is_same_v<T, val::Struct>)
          return {{"kind", "Vstruct"}, {"type", addr(n.type)}, {"instance", addr(n.instance)}};
        if constexpr (std::is_same_v<T, val::Field>)
          return {{"kind", "Vfield"},
                  {"result", type_json(n.result)},
                  {"head", addr(n.head)},
                  {"members", n.members},
                  {"args", n.args ? exprs_json(*n.args) : json(nullptr)}};
      },
      v.node);
}

LValue value_of(const json& j) {
  const std::string k = field(j, "kind").get<std::string>();
  if (k == "Vbool") return {val::Bool{field(j, "bit").get<bool>()}};
  if (k == "Vint") {
    const LType t = type_of(field(j, "type"));
    if (!t.is<ty::Int>()) bad("Vint needs an int type");
    return {val::Int{t.as<ty::Int>()->type, std::stoull(field(j, "bits").get<std::string>())}};
  }
  if (k == "Varray")
    return {val::Array{type_of(field(j, "array_type")), exprs_of(field(j, "indices")), get_addr(field(j, "base"))}};
  if (k == "Vmap")
    return {val::Map{get_addr(field(j, "base")), exprs_of(field(j, "keys")), type_of(field(j, "map_type")),
                     get_opt_addr(field(j, "next"))}};
  if (k == "Vstruct") return {val::Struct{get_addr(field(j, "type")), get_addr(field(j, "instance"))}};
  if (k == "Vfield") {
    val::Field f{type_of(field(j, "result")), get_addr(field(j, "head")),
                 field(j, "members").get<std::vector<std::string>>(), std::nullopt};
    if (!field(j, "args").is_null()) f.args = exprs_of(field(j, "args"));
    return {std::move(f)};
  }
  bad("unknown value kind " + k);
}

json expr_json(const LExpr& e) {
  json out = std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ex::Const>) return {{"kind", "Econst"}, {"value", value_json(n.value)}};
        if constexpr (std::is_same_v<T, ex::Var>)
          return {{"kind", "Evar"}, {"addr", opt_addr(n.addr)}, {"type", type_json(n.type)}};
        if constexpr (std::is_same_v<T, ex::Fun>)
          return {{"kind", "Efun"}, {"addr", opt_addr(n.addr)}, {"type", type_json(n.type)}};
        if constexpr (std::is_same_v<T, ex::Con>) return {{"kind", "Econ"}, {"addr", opt_addr(n.addr)}};
        if constexpr (std::is_same_v<T, ex::Par>)
          return {{"kind", "Epar"}, {"addr", opt_addr(n.addr)}, {"type", type_json(n.type)}};
        if constexpr (std::is_same_v<T, ex::Struct>)
          return {{"kind", "Estruct"}, {"type", addr(n.type)}, {"fields", exprs_json(n.fields)}};
        if constexpr (std::is_same_v<T, ex::Bop>)
          return {{"kind", "Ebop"}, {"op", to_string(n.op)}, {"lhs", expr_json(n.lhs.get())}, {"rhs", expr_json(n.rhs.get())}};
        if constexpr (std::is_same_v<T, ex::Uop>)
          return {{"kind", "Euop"}, {"op", to_string(n.op)}, {"operand", expr_json(n.operand.get())}};
        if constexpr (std::is_same_v<T, ex::Modifier>) return {{"kind", "Emodifier"}};
      },
      e.node);
  out["types"] = e.types ? json::array({type_json(e.types->source), type_json(e.types->result)}) : json(nullptr);
  return out;
}

BinOp binop_of(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(BinOp::Or); ++i) {
    const auto op = static_cast<BinOp>(i);
    if (s == to_string(op)) return op;
  }
  bad("unknown binary operator " + s);
}

UnOp unop_of(const std::string& s) {
  if (s == to_string(UnOp::Not)) return UnOp::Not;
  if (s == to_string(UnOp::Neg)) return UnOp::Neg;
  bad("unknown unary operator " + s);
}

LExpr expr_of(const json& j) {
  const std::string k = field(j, "kind").get<std::string>();
  LExpr e;
  if (k == "Econst") e.node = ex::Const{value_of(field(j, "value"))};
  else if (k == "Evar") e.node = ex::Var{get_opt_addr(field(j, "addr")), type_of(field(j, "type"))};
  else if (k == "Efun") e.node = ex::Fun{get_opt_addr(field(j, "addr")), type_of(field(j, "type"))};
  else if (k == "Econ") e.node = ex::Con{get_opt_addr(field(j, "addr"))};
  else if (k == "Epar") e.node = ex::Par{get_opt_addr(field(j, "addr")), type_of(field(j, "type"))};
  else if (k == "Estruct") e.node = ex::Struct{get_addr(field(j, "type")), exprs_of(field(j, "fields"))};
  else if (k == "Ebop")
    e.node = ex::Bop{binop_of(field(j, "op").get<std::string>()), expr_of(field(j, "lhs")), expr_of(field(j, "rhs"))};
  else if (k == "Euop") e.node = ex::Uop{unop_of(field(j, "op").get<std::string>()), expr_of(field(j, "operand"))};
  else if (k == "Emodifier") e.node = ex::Modifier{};
  else bad("unknown expression kind " + k);
  if (auto t = j.find("types"); t != j.end() && !t->is_null()) {
    if (!t->is_array() || t->size() != 2) bad("types must be a pair");
    e.types = TypePair{type_of((*t)[0]), type_of((*t)[1])};
  }
  return e;
}

json params_json(const std::vector<Param>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back({{"name", p.name}, {"addr", addr(p.addr)}, {"type", type_json(p.type)}});
  return out;
}
std::vector<Param> params_of(const json& j) {
  std::vector<Param> out;
  for (const auto& p : j)
    out.push_back({field(p, "name").get<std::string>(), get_addr(field(p, "addr")), type_of(field(p, "type"))});
  return out;
}

json addrs_json(const std::vector<Address>& as) {
  json out = json::array();
  for (Address a : as) out.push_back(a.index);
  return out;
}
std::vector<Address> addrs_of(const json& j) {
  std::vector<Address> out;
  for (const auto& a : j) out.push_back(get_addr(a));
  return out;
}

json list_json(const StmtList& l);
StmtList list_of(const json& j);

json stmt_json(const LStatement& s) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, st::Contract>) {
          json members = json::array();
          for (const auto& [name, a] : n.members) members.push_back({{"name", name}, {"addr", addr(a)}});
          return {{"kind", "Contract"},
                  {"addr", addr(n.addr)},
                  {"name", n.name},
                  {"inherits", addrs_json(n.inherits)},
                  {"members", members}};
        }
        if constexpr (std::is_same_v<T, st::Modifier>)
          return {{"kind", "Modifier"},         {"addr", addr(n.addr)},
                  {"name", n.name},             {"params", params_json(n.params)},
                  {"return_slot", addr(n.return_slot)}, {"body", list_json(n.body)}};
        if constexpr (std::is_same_v<T, st::Var>)
          return {{"kind", "Var"},
                  {"access", n.access ? json(access_name(*n.access)) : json(nullptr)},
                  {"var", expr_json(n.var)}};
        if constexpr (std::is_same_v<T, st::StructDecl>) {
          json members = json::array();
          for (const auto& m : n.members) members.push_back({{"name", m.name}, {"type", type_json(m.type)}});
          return {{"kind", "StructDecl"}, {"type", addr(n.type)}, {"members", members}};
        }
        if constexpr (std::is_same_v<T, st::Assign>)
          return {{"kind", "Assign"}, {"lhs", expr_json(n.lhs)}, {"rhs", expr_json(n.rhs)}};
        if constexpr (std::is_same_v<T, st::Return>) return {{"kind", "Return"}, {"value", expr_json(n.value)}};
        if constexpr (std::is_same_v<T, st::Returns>) return {{"kind", "Returns"}, {"values", exprs_json(n.values)}};
        if constexpr (std::is_same_v<T, st::Throw>) return {{"kind", "Throw"}};
        if constexpr (std::is_same_v<T, st::Snil>) return {{"kind", "Snil"}};
        if constexpr (std::is_same_v<T, st::FunStop>) return {{"kind", "FunStop"}};
        if constexpr (std::is_same_v<T, st::Fun>) {
          json mods = json::array();
          for (const auto& m : n.modifiers) mods.push_back({{"modifier", addr(m.modifier)}, {"args", exprs_json(m.args)}});
          json rets = json::array();
          for (const auto& r : n.returns) rets.push_back(type_json(r));
          return {{"kind", "Fun"},          {"addr", addr(n.addr)},
                  {"name", n.name},         {"modifiers", mods},
                  {"params", params_json(n.params)}, {"returns", rets},
                  {"return_slot", addr(n.return_slot)}, {"locals", addrs_json(n.locals)},
                  {"body", list_json(n.body)}};
        }
        if constexpr (std::is_same_v<T, st::LoopFor>)
          return {{"kind", "LoopFor"},
                  {"cond", expr_json(n.cond)},
                  {"init", stmt_json(n.init.get())},
                  {"body", list_json(n.body)},
                  {"post", stmt_json(n.post.get())}};
        if constexpr (std::is_same_v<T, st::LoopWhile>)
          return {{"kind", "LoopWhile"}, {"cond", expr_json(n.cond)}, {"body", list_json(n.body)}};
        if constexpr (std::is_same_v<T, st::FunCall>)
          return {{"kind", "FunCall"}, {"callee", expr_json(n.callee)}, {"args", exprs_json(n.args)}};
        if constexpr (std::is_same_v<T, st::If>)
          return {{"kind", "If"},
                  {"cond", expr_json(n.cond)},
                  {"then", list_json(n.then_branch)},
                  {"else", list_json(n.else_branch)}};
      },
      s.node);
}

LStatement stmt_of(const json& j) {
  const std::string k = field(j, "kind").get<std::string>();
  if (k == "Contract") {
    st::Contract c{get_addr(field(j, "addr")), field(j, "name").get<std::string>(), addrs_of(field(j, "inherits")), {}};
    for (const auto& m : field(j, "members"))
      c.members.emplace_back(field(m, "name").get<std::string>(), get_addr(field(m, "addr")));
    return {std::move(c)};
  }
  if (k == "Modifier")
    return {st::Modifier{get_addr(field(j, "addr")), field(j, "name").get<std::string>(), params_of(field(j, "params")),
                         get_addr(field(j, "return_slot")), list_of(field(j, "body"))}};
  if (k == "Var") {
    std::optional<Access> a;
    if (!field(j, "access").is_null()) a = access_from(field(j, "access").get<std::string>());
    return {st::Var{a, expr_of(field(j, "var"))}};
  }
  if (k == "StructDecl") {
    st::StructDecl d{get_addr(field(j, "type")), {}};
    for (const auto& m : field(j, "members"))
      d.members.push_back({field(m, "name").get<std::string>(), type_of(field(m, "type"))});
    return {std::move(d)};
  }
  if (k == "Assign") return {st::Assign{expr_of(field(j, "lhs")), expr_of(field(j, "rhs"))}};
  if (k == "Return") return {st::Return{expr_of(field(j, "value"))}};
  if (k == "Returns") return {st::Returns{exprs_of(field(j, "values"))}};
  if (k == "Throw") return {st::Throw{}};
  if (k == "Snil") return {st::Snil{}};
  if (k == "FunStop") return {st::FunStop{}};
  if (k == "Fun") {
    st::Fun f;
    f.addr = get_addr(field(j, "addr"));
    f.name = field(j, "name").get<std::string>();
    for (const auto& m : field(j, "modifiers"))
      f.modifiers.push_back({get_addr(field(m, "modifier")), exprs_of(field(m, "args"))});
    f.params = params_of(field(j, "params"));
    for (const auto& r : field(j, "returns")) f.returns.push_back(type_of(r));
    f.return_slot = get_addr(field(j, "return_slot"));
    f.locals = addrs_of(field(j, "locals"));
    f.body = list_of(field(j, "body"));
    return {std::move(f)};
  }
  if (k == "LoopFor")
    return {st::LoopFor{expr_of(field(j, "cond")), stmt_of(field(j, "init")), list_of(field(j, "body")),
                        stmt_of(field(j, "post"))}};
  if (k == "LoopWhile") return {st::LoopWhile{expr_of(field(j, "cond")), list_of(field(j, "body"))}};
  if (k == "FunCall") return {st::FunCall{expr_of(field(j, "callee")), exprs_of(field(j, "args"))}};
  if (k == "If") return {st::If{expr_of(field(j, "cond")), list_of(field(j, "then")), list_of(field(j, "else"))}};
  bad("unknown statement kind " + k);
}

json list_json(const StmtList& l) {
  json out = json::array();
  for (const auto& s : l) out.push_back(stmt_json(s));
  return out;
}

StmtList list_of(const json& j) {
  if (!j.is_array()) bad("statement list must be an array");
  StmtList out;
  for (const auto& s : j) out.push_back(stmt_of(s));
  return out;
}

}  // namespace

std::string ast_to_json(const StmtList& prog, int indent) { return list_json(prog).dump(indent); }

StmtList ast_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(e.what());
  }
  try {
    return list_of(j);
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

std::string type_to_json(const LType& t) { return type_json(t).dump(); }

LType type_from_json(const std::string& text) {
  try {
    return type_of(json::parse(text));
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

}  // namespace solsem
