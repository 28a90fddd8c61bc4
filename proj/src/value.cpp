#include "solsem/value.hpp"

#include <functional>

#include "solsem/arith.hpp"
#include "solsem/expr.hpp"
#include "solsem/layout.hpp"

namespace solsem {

std::optional<Scalar> concrete_scalar(const MemoryValue& v) {
  if (const auto* b = v.as<cell::Bool>()) {
    if (b->sym || !b->bit) return std::nullopt;
    return Scalar::boolean(*b->bit);
  }
  if (const auto* i = v.as<cell::Int>()) {
    if (i->sym || !i->bits) return std::nullopt;
    return Scalar::integer(i->type, *i->bits);
  }
  return std::nullopt;
}

namespace {
std::optional<Scalar> scalar_shape(const MemoryValue& v) {
  if (v.is<cell::Bool>()) return Scalar::boolean(false);
  if (const auto* i = v.as<cell::Int>()) return Scalar::integer(i->type, 0);
  return std::nullopt;
}
}  // namespace

Sym scalar_term(const MemoryValue& v) {
  if (const auto* b = v.as<cell::Bool>()) {
    if (b->sym) return b->sym;
    if (b->bit) return sym_const(Scalar::boolean(*b->bit));
  }
  if (const auto* i = v.as<cell::Int>()) {
    if (i->sym) return i->sym;
    if (i->bits) return sym_const(Scalar::integer(i->type, *i->bits));
  }
  return {};
}

MemoryValue scalar_cell(const Scalar& s, const MemoryValue& tag) {
  MemoryValue out = tag;
  if (s.is_bool)
    out.payload = cell::Bool{s.truth(), {}};
  else
    out.payload = cell::Int{s.type, s.bits, {}};
  return out;
}

MemoryValue symbolic_cell(const Sym& term, const Scalar& shape, const MemoryValue& tag) {
  MemoryValue out = tag;
  if (shape.is_bool)
    out.payload = cell::Bool{std::nullopt, term};
  else
    out.payload = cell::Int{shape.type, std::nullopt, term};
  return out;
}

std::optional<bool> decide_truth(const MemoryValue& v, Decider* decider) {
  const auto* b = v.as<cell::Bool>();
  if (!b) return std::nullopt;
  if (b->sym) {
    if (!decider) return std::nullopt;
    return decider->decide(b->sym);
  }
  return b->bit;
}

std::optional<std::uint64_t> concretize_index(const MemoryValue& v, std::uint64_t bound, Decider* decider) {
  const auto* i = v.as<cell::Int>();
  if (!i) return std::nullopt;
  if (!i->sym) {
    if (!i->bits) return std::nullopt;
    if (i->type.is_signed && arith::as_signed(i->type, *i->bits) < 0) return std::nullopt;
    if (*i->bits >= bound) return std::nullopt;
    return *i->bits;
  }
  if (!decider) return std::nullopt;
  const std::uint64_t limit = std::min<std::uint64_t>(bound, arith::mask(i->type));
  for (std::uint64_t c = 0; c < limit; ++c) {
    auto hit = decider->decide(sym_binary(BinOp::Eq, i->sym, sym_const(Scalar::integer(i->type, c))));
    if (!hit) return std::nullopt;
    if (*hit) return c;
  }
  return std::nullopt;
}

namespace {

std::optional<bool> all_equal(const std::vector<MemoryValue>& a, const std::vector<MemoryValue>& b, Decider* d) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto eq = payload_equal(a[i], b[i], d);
    if (!eq || !*eq) return eq;
  }
  return true;
}

}  // namespace

std::optional<bool> payload_equal(const MemoryValue& a, const MemoryValue& b, Decider* decider) {
  auto sa = scalar_shape(a);
  auto sb = scalar_shape(b);
  if (sa && sb) {
    if (*sa != *sb) return false;
    Sym ta = scalar_term(a);
    Sym tb = scalar_term(b);
    if (!ta || !tb) return a.payload == b.payload;
    auto ca = concrete_scalar(a);
    auto cb = concrete_scalar(b);
    if (ca && cb) return *ca == *cb;
    if (!decider) return std::nullopt;
    return decider->decide(sym_binary(BinOp::Eq, ta, tb));
  }
  if (a.payload.index() != b.payload.index()) return false;
  if (const auto* x = a.as<cell::StructInstance>()) {
    const auto* y = b.as<cell::StructInstance>();
    if (x->type != y->type) return false;
    return all_equal(x->members, y->members, decider);
  }
  if (const auto* x = a.as<cell::Fid>()) {
    const auto* y = b.as<cell::Fid>();
    if (x->fn != y->fn || x->receiver != y->receiver || x->args.has_value() != y->args.has_value()) return false;
    return x->args ? all_equal(*x->args, *y->args, decider) : true;
  }
  if (const auto* x = a.as<cell::MapNode>()) {
    const auto* y = b.as<cell::MapNode>();
    if (x->head != y->head || x->key_type != y->key_type || x->value_type != y->value_type || x->next != y->next ||
        x->entry.has_value() != y->entry.has_value())
      return false;
    if (!x->entry) return true;
    auto k = payload_equal(x->entry->first.get(), y->entry->first.get(), decider);
    if (!k || !*k) return k;
    return payload_equal(x->entry->second.get(), y->entry->second.get(), decider);
  }
  return a.payload == b.payload;
}

namespace {

MemoryValue::Payload default_payload_at(const LType& t, const MemoryState& mem, int depth) {
  if (t.is<ty::Bool>()) return cell::Bool{};
  if (const auto* i = t.as<ty::Int>()) return cell::Int{i->type, std::nullopt, {}};
  if (const auto* f = t.as<ty::Fid>()) return cell::Fid{f->fn, std::nullopt, std::nullopt};
  if (const auto* m = t.as<ty::Map>()) return cell::MapNode{{}, std::nullopt, m->key.get(), m->value.get(), std::nullopt};
  if (const auto* s = t.as<ty::Struct>()) {
    cell::StructInstance inst{s->type, {}};
    if (depth > 16 || !mem.contains(s->type)) return inst;
    const auto* decl = mem.at(s->type).as<cell::StructType>();
    if (!decl) return inst;
    for (const auto& member : decl->members) {
      MemoryValue v;
      v.payload = default_payload_at(member.type, mem, depth + 1);
      v.occupancy = Occupancy::Occupy;
      inst.members.push_back(std::move(v));
    }
    return inst;
  }
  return cell::Undef{};
}

// nullopt: lookup failed; inner nullopt: chain searched, key not present.
std::optional<std::optional<Address>> search_chain(const MemoryValue& key, std::optional<Address> first,
                                                   const MemoryState& mem, const Env& env, Decider* d) {
  std::optional<Address> cur = first;
  for (std::size_t steps = 0; cur; ++steps) {
    if (steps >= mem.size()) return std::nullopt;
    auto block = read(mem, *cur, AccessMode::Chck, env, {});
    if (!block) return std::nullopt;
    const auto* node = block->as<cell::MapNode>();
    if (!node) return std::nullopt;
    if (node->entry) {
      auto eq = payload_equal(node->entry->first.get(), key, d);
      if (!eq) return std::nullopt;
      if (*eq) return std::optional<Address>{*cur};
    }
    cur = node->next;
  }
  return std::optional<Address>{};
}

}  // namespace

MemoryValue::Payload default_payload(const LType& t, const MemoryState& mem) { return default_payload_at(t, mem, 0); }

bool value_has_type(const MemoryValue& v, const LType& t) {
  if (t.is<ty::Bool>()) return v.is<cell::Bool>();
  if (const auto* i = t.as<ty::Int>()) {
    const auto* c = v.as<cell::Int>();
    return c && c->type == i->type;
  }
  if (const auto* s = t.as<ty::Struct>()) {
    const auto* c = v.as<cell::StructInstance>();
    return c && c->type == s->type;
  }
  if (t.is<ty::Map>()) return v.is<cell::MapNode>();
  if (t.is<ty::Fid>()) return v.is<cell::Fid>();
  return true;
}

std::optional<MemoryValue> esv(std::uint64_t k, const LValue& v, const MemoryState& mem, const BlockInfo& b,
                               const Env& env, Decider* decider) {
  if (k == 0) return std::nullopt;
  if (const auto* x = v.as<val::Bool>()) return MemoryValue::make(cell::Bool{x->bit, {}}, env);
  if (const auto* x = v.as<val::Int>()) return MemoryValue::make(cell::Int{x->type, x->bits, {}}, env);
  if (const auto* x = v.as<val::Array>()) {
    const auto dims = x->array_type.dims();
    if (dims.size() != x->indices.size()) return std::nullopt;
    std::vector<std::uint64_t> path;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      auto iv = ese_r(k - 1, x->indices[i], mem, b, env, decider);
      if (!iv) return std::nullopt;
      auto idx = concretize_index(*iv, dims[i], decider);
      if (!idx) return std::nullopt;
      path.push_back(*idx);
    }
    auto addr = id_search(x->array_type, x->base, path, mem, env);
    if (!addr) return std::nullopt;
    return read(mem, *addr, AccessMode::Chck, env, b);
  }
  if (const auto* x = v.as<val::Map>()) {
    std::vector<MemoryValue> keys;
    for (const auto& ke : x->keys) {
      auto kv = ese_r(k - 1, ke, mem, b, env, decider);
      if (!kv) return std::nullopt;
      keys.push_back(std::move(*kv));
    }
    auto addr = id_map_path(keys, x->base, mem, env, decider);
    if (!addr) return std::nullopt;
    auto node = read(mem, *addr, AccessMode::Chck, env, b);
    if (!node) return std::nullopt;
    const auto* n = node->as<cell::MapNode>();
    if (!n || !n->entry) return std::nullopt;
    return n->entry->second.get();
  }
  if (const auto* x = v.as<val::Struct>()) {
    auto inst = read(mem, x->instance, AccessMode::Chck, env, b);
    if (!inst) return std::nullopt;
    const auto* s = inst->as<cell::StructInstance>();
    if (!s || s->type != x->type) return std::nullopt;
    return inst;
  }
  const auto& f = std::get<val::Field>(v.node);
  std::optional<std::vector<MemoryValue>> args;
  if (f.args) {
    args.emplace();
    for (const auto& a : *f.args) {
      auto av = ese_r(k - 1, a, mem, b, env, decider);
      if (!av) return std::nullopt;
      args->push_back(std::move(*av));
    }
  }
  return resolve_field(f.head, f.members, args, mem, env, b);
}

std::optional<Address> id_search(const LType& array_type, Address base, const std::vector<std::uint64_t>& path,
                                 const MemoryState& mem, const Env&) {
  const auto dims = array_type.dims();
  if (dims.empty() || dims.size() != path.size()) return std::nullopt;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (path[i] >= dims[i]) return std::nullopt;
  const LayoutInfo layout = array_layout(dims);
  const std::uint64_t offset = elem_offset(path, layout.group_sizes);
  if (offset >= layout.array_size) return std::nullopt;
  return address_offset(OffsetOp::Add, static_cast<std::int64_t>(offset), base, mem.size());
}

std::optional<Address> id_map(const MemoryValue& key, Address base, const LType& key_type, const LType& value_type,
                              const MemoryState& mem, const Env& env, Decider* decider) {
  auto head = read(mem, base, AccessMode::Chck, env, {});
  if (!head) return std::nullopt;
  const auto* h = head->as<cell::MapNode>();
  if (!h || h->key_type != key_type || h->value_type != value_type) return std::nullopt;
  auto hit = search_chain(key, h->next, mem, env, decider);
  if (!hit) return std::nullopt;
  return *hit;
}

std::optional<Address> id_map_path(const std::vector<MemoryValue>& keys, Address base, const MemoryState& mem,
                                   const Env& env, Decider* decider) {
  if (keys.empty()) return std::nullopt;
  auto head = read(mem, base, AccessMode::Chck, env, {});
  if (!head) return std::nullopt;
  const auto* h = head->as<cell::MapNode>();
  if (!h) return std::nullopt;
  auto addr = id_map(keys[0], base, h->key_type, h->value_type, mem, env, decider);
  for (std::size_t i = 1; addr && i < keys.size(); ++i) {
    auto node = read(mem, *addr, AccessMode::Chck, env, {});
    if (!node) return std::nullopt;
    const auto* n = node->as<cell::MapNode>();
    if (!n || !n->entry) return std::nullopt;
    const auto* inner = n->entry->second->as<cell::MapNode>();
    if (!inner) return std::nullopt;
    auto hit = search_chain(keys[i], inner->next, mem, env, decider);
    if (!hit) return std::nullopt;
    addr = *hit;
  }
  return addr;
}

namespace {

using PersistHead = std::function<std::optional<MemoryState>(const MemoryState&, const cell::MapNode&)>;

MemoryValue tagged(MemoryValue::Payload p, const MemoryValue& tag) {
  MemoryValue v = tag;
  v.payload = std::move(p);
  v.occupancy = Occupancy::Occupy;
  return v;
}

// Persists a new inner head stored as the value of the node at `node_addr`.
PersistHead persist_inside(Address node_addr, const Env& env) {
  return [node_addr, env](const MemoryState& m, const cell::MapNode& inner) -> std::optional<MemoryState> {
    MemoryValue block = m.at(node_addr);
    const auto* node = block.as<cell::MapNode>();
    if (!node || !node->entry) return std::nullopt;
    cell::MapNode updated = *node;
    updated.entry->second = tagged(inner, updated.entry->second.get());
    block.payload = std::move(updated);
    return write(m, node_addr, block, AccessMode::Chck, env, {});
  };
}

std::optional<MemoryState> store_level(const MemoryState& mem, cell::MapNode head, const PersistHead& persist_head,
                                       const MemoryValue& tag, const std::vector<MemoryValue>& keys, std::size_t i,
                                       const MemoryValue& value, const Env& env, Decider* d) {
  const bool last = i + 1 == keys.size();
  const auto* inner_type = head.value_type.as<ty::Map>();
  if (!last && !inner_type) return std::nullopt;
  auto hit = search_chain(keys[i], head.next, mem, env, d);
  if (!hit) return std::nullopt;
  if (*hit) {
    const Address at = **hit;
    MemoryValue block = mem.at(at);
    cell::MapNode node = *block.as<cell::MapNode>();
    if (last) {
      node.entry->second = value;
      block.payload = std::move(node);
      return write(mem, at, block, AccessMode::Chck, env, {});
    }
    const auto* inner = node.entry->second->as<cell::MapNode>();
    if (!inner) return std::nullopt;
    return store_level(mem, *inner, persist_inside(at, env), tag, keys, i + 1, value, env, d);
  }
  auto alloc = allocate(mem, 1);
  if (!alloc) return std::nullopt;
  const Address at = alloc->first;
  MemoryValue second = last ? value
                            : tagged(cell::MapNode{at, std::nullopt, inner_type->key.get(), inner_type->value.get(),
                                                   std::nullopt},
                                     tag);
  cell::MapNode node{head.head, std::make_pair(Box<MemoryValue>(keys[i]), Box<MemoryValue>(second)), head.key_type,
                     head.value_type, head.next};
  auto m = write_dir(alloc->second, at, tagged(node, tag));
  head.next = at;
  m = persist_head(*m, head);
  if (!m || last) return m;
  return store_level(*m, *second.as<cell::MapNode>(), persist_inside(at, env), tag, keys, i + 1, value, env, d);
}

}  // namespace

std::optional<MemoryState> map_store(const MemoryState& mem, Address base, const std::vector<MemoryValue>& keys,
                                     const MemoryValue& value, const Env& env, Decider* decider) {
  if (keys.empty()) return std::nullopt;
  auto head_block = read(mem, base, AccessMode::Chck, env, {});
  if (!head_block) return std::nullopt;
  const auto* head = head_block->as<cell::MapNode>();
  if (!head) return std::nullopt;
  PersistHead persist = [base, env](const MemoryState& m, const cell::MapNode& h) -> std::optional<MemoryState> {
    MemoryValue block = m.at(base);
    block.payload = h;
    return write(m, base, block, AccessMode::Chck, env, {});
  };
  return store_level(mem, *head, persist, *head_block, keys, 0, value, env, decider);
}

std::optional<MemoryValue> resolve_field(Address head, const std::vector<std::string>& members,
                                         const std::optional<std::vector<MemoryValue>>& args, const MemoryState& mem,
                                         const Env& env, const BlockInfo& b) {
  if (members.empty()) return std::nullopt;
  auto head_value = read(mem, head, AccessMode::Chck, env, b);
  if (!head_value || !head_value->is<cell::StructInstance>()) return std::nullopt;
  MemoryValue dad = *head_value;
  MemoryValue current = *head_value;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto* inst = current.as<cell::StructInstance>();
    if (!inst) return std::nullopt;
    auto type_block = read(mem, inst->type, AccessMode::Chck, env, b);
    if (!type_block) return std::nullopt;
    const auto* decl = type_block->as<cell::StructType>();
    if (!decl || decl->type != inst->type) return std::nullopt;
    std::size_t j = 0;
    while (j < decl->members.size() && decl->members[j].name != members[i]) ++j;
    if (j == decl->members.size() || j >= inst->members.size()) return std::nullopt;
    dad = current;
    MemoryValue next = inst->members[j];
    current = std::move(next);
  }
  if (const auto* fid = current.as<cell::Fid>()) {
    cell::Fid bound = *fid;
    if (members.size() == 1) bound.receiver = head;
    std::vector<MemoryValue> bound_args{dad};
    if (args) bound_args.insert(bound_args.end(), args->begin(), args->end());
    bound.args = std::move(bound_args);
    current.payload = std::move(bound);
  }
  return current;
}

}  // namespace solsem
