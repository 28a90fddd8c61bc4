#include "solsem/memory.hpp"

#include <sstream>
#include <stdexcept>

#include "solsem/arith.hpp"

namespace solsem {

namespace cell {
bool operator==(const Fid& a, const Fid& b) {
  return a.fn == b.fn && a.receiver == b.receiver && a.args == b.args;
}
bool operator==(const StructInstance& a, const StructInstance& b) {
  return a.type == b.type && a.members == b.members;
}
namespace {
bool same_body(const std::shared_ptr<const StmtList>& a, const std::shared_ptr<const StmtList>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}
}  // namespace
bool operator==(const Function& a, const Function& b) {
  return a.returns == b.returns && a.params == b.params && a.return_slot == b.return_slot &&
         a.modifiers == b.modifiers && a.locals == b.locals && same_body(a.body, b.body);
}
bool operator==(const Body& a, const Body& b) { return same_body(a.body, b.body); }
}  // namespace cell

MemoryValue MemoryValue::make(Payload p, const Env& env, Access access) {
  MemoryValue v;
  v.payload = std::move(p);
  v.domain = env.domain;
  v.level = env.level;
  v.access = access;
  v.occupancy = Occupancy::Occupy;
  return v;
}

bool same_payload(const MemoryValue& a, const MemoryValue& b) { return a.payload == b.payload; }

bool same_payloads(const MemoryState& a, const MemoryState& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_payload(a.at({i}), b.at({i}))) return false;
  }
  return true;
}

namespace {

std::string render_value(const MemoryValue& v) { return render_payload(v.payload); }

template <class T, class F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

std::string opt_addr(const std::optional<Address>& a) { return a ? to_string(*a) : "-"; }

std::string render_int(const cell::Int& i) {
  std::string body;
  if (i.sym)
    body = "{" + to_string(i.sym) + "}";
  else if (!i.bits)
    body = "?";
  else if (i.type.is_signed)
    body = std::to_string(arith::as_signed(i.type, *i.bits));
  else
    body = std::to_string(*i.bits);
  return "int(" + to_string(i.type) + " " + body + ")";
}

struct PayloadRenderer {
  std::string operator()(const cell::Undef&) const { return "undef"; }
  std::string operator()(const cell::Bool& b) const {
    if (b.sym) return "bool({" + to_string(b.sym) + "})";
    if (!b.bit) return "bool(?)";
    return *b.bit ? "bool(true)" : "bool(false)";
  }
  std::string operator()(const cell::Int& i) const { return render_int(i); }
  std::string operator()(const cell::Fid& f) const {
    std::string args = f.args ? "[" + join(*f.args, render_value) + "]" : "-";
    return "fid(fn=" + opt_addr(f.fn) + " recv=" + opt_addr(f.receiver) + " args=" + args + ")";
  }
  std::string operator()(const cell::Contract& c) const {
    return "contract(" + to_string(c.contract) + " members=[" +
           join(c.members, [](const auto& m) { return m.first + to_string(m.second); }) + "] inherits=[" +
           join(c.inherits, [](Address a) { return to_string(a); }) + "])";
  }
  std::string operator()(const cell::StructType& s) const {
    return "struct_type(" + to_string(s.type) + " [" +
           join(s.members, [](const StructMember& m) { return m.name + ":" + to_string(m.type); }) + "])";
  }
  std::string operator()(const cell::StructInstance& s) const {
    return "struct(" + to_string(s.type) + " {" + join(s.members, render_value) + "})";
  }
  std::string operator()(const cell::MapNode& m) const {
    std::string entry = m.entry ? "key=" + render_value(m.entry->first.get()) +
                                      " value=" + render_value(m.entry->second.get())
                                : "entry=-";
    return "map(head=" + to_string(m.head) + " " + entry + " ktype=" + to_string(m.key_type) +
           " vtype=" + to_string(m.value_type) + " next=" + opt_addr(m.next) + ")";
  }
  std::string operator()(const cell::Function& f) const {
    return "function(params=[" + join(f.params, [](const Param& p) { return to_string(p.addr); }) +
           "] ret=" + to_string(f.return_slot) + " returns=[" +
           join(f.returns, [](const LType& t) { return to_string(t); }) + "] modifiers=" +
           std::to_string(f.modifiers.size()) + " body=" + std::to_string(f.body ? f.body->size() : 0) + ")";
  }
  std::string operator()(const cell::Body& b) const {
    return "body(" + std::to_string(b.body ? b.body->size() : 0) + ")";
  }
  std::string operator()(const cell::ArrayHeader& h) const {
    return "array_header(" + to_string(h.group_type) + " #" + std::to_string(h.index) + ")";
  }
};

}  // namespace

std::string render_payload(const MemoryValue::Payload& p) { return std::visit(PayloadRenderer{}, p); }

Reserved Reserved::for_size(std::size_t n) {
  if (n < count) throw std::invalid_argument("memory size " + std::to_string(n) + " cannot hold reserved blocks");
  return Reserved{{n - 1}, {n - 2}, {n - 3}, {n - 4}, {n - 5}, {n - 6}, {n - 7}};
}

namespace {
std::shared_ptr<const MemoryValue> shared_free_block() {
  static const auto block = std::make_shared<const MemoryValue>();
  return block;
}
}  // namespace

MemoryState::MemoryState(std::size_t size)
    : blocks_(size, shared_free_block()),
      reserved_(Reserved::for_size(size)),
      reserved_floor_{size - Reserved::count},
      heap_base_{0},
      symbols_(std::make_shared<const SymbolTable>()) {}

MemoryState MemoryState::with_block(Address a, MemoryValue v) const {
  MemoryState out = *this;
  out.blocks_.at(a.index) = std::make_shared<const MemoryValue>(std::move(v));
  return out;
}

MemoryState MemoryState::with_layout(Address heap_base, Address reserved_floor) const {
  MemoryState out = *this;
  out.heap_base_ = heap_base;
  out.reserved_floor_ = reserved_floor;
  return out;
}

MemoryState MemoryState::with_symbols(SymbolTable table) const {
  MemoryState out = *this;
  out.symbols_ = std::make_shared<const SymbolTable>(std::move(table));
  return out;
}

const MemoryState::SymbolTable& MemoryState::symbols() const { return *symbols_; }

std::optional<Address> MemoryState::lookup(const std::string& name) const {
  auto it = symbols_->find(name);
  if (it == symbols_->end()) return std::nullopt;
  return it->second;
}

bool operator==(const MemoryState& a, const MemoryState& b) {
  if (a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
    if (a.blocks_[i] != b.blocks_[i] && !(*a.blocks_[i] == *b.blocks_[i])) return false;
  }
  return true;
}

bool access_permitted(const MemoryValue& block, const Env& env) {
  if (block.occupancy != Occupancy::Occupy) return false;
  return block.access == Access::Public || block.domain == env.domain;
}

std::optional<MemoryValue> read(const MemoryState& mem, Address a, AccessMode mode, const Env& env,
                                const BlockInfo&) {
  if (!mem.contains(a)) return std::nullopt;
  const MemoryValue& block = mem.at(a);
  if (mode == AccessMode::Chck && !access_permitted(block, env)) return std::nullopt;
  return block;
}

std::optional<MemoryState> write(const MemoryState& mem, Address a, const MemoryValue& v, AccessMode mode,
                                 const Env& env, const BlockInfo&) {
  if (!mem.contains(a)) return std::nullopt;
  if (mode == AccessMode::Dir) return mem.with_block(a, v);
  const MemoryValue& old = mem.at(a);
  if (!access_permitted(old, env)) return std::nullopt;
  MemoryValue next = v;
  next.domain = old.domain;
  next.access = old.access;
  next.occupancy = Occupancy::Occupy;
  return mem.with_block(a, std::move(next));
}

std::optional<Address> address_offset(OffsetOp op, std::int64_t offset, Address a, std::size_t memory_size) {
  const auto base = static_cast<std::int64_t>(a.index);
  const std::int64_t target = op == OffsetOp::Add ? base + offset : base - offset;
  if (target < 0 || static_cast<std::uint64_t>(target) >= memory_size) return std::nullopt;
  return Address{static_cast<std::size_t>(target)};
}

namespace {
MemoryValue occupied_undef() {
  MemoryValue v;
  v.occupancy = Occupancy::Occupy;
  return v;
}
}  // namespace

std::optional<MemoryState> allocate_at(const MemoryState& mem, Address base, std::size_t n) {
  if (n == 0) return std::nullopt;
  if (base.index + n > mem.reserved_floor().index) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (mem.at({base.index + i}).occupancy != Occupancy::Free) return std::nullopt;
  }
  MemoryState out = mem;
  for (std::size_t i = 0; i < n; ++i) out = out.with_block({base.index + i}, occupied_undef());
  return out;
}

std::optional<std::pair<Address, MemoryState>> allocate(const MemoryState& mem, std::size_t n) {
  if (n == 0) return std::nullopt;
  const std::size_t end = mem.reserved_floor().index;
  std::size_t run = 0;
  for (std::size_t i = mem.heap_base().index; i < end; ++i) {
    run = mem.at({i}).occupancy == Occupancy::Free ? run + 1 : 0;
    if (run == n) {
      Address base{i + 1 - n};
      return std::make_pair(base, *allocate_at(mem, base, n));
    }
  }
  return std::nullopt;
}

std::optional<MemoryState> free_mem(const MemoryState& mem, Address a) {
  if (!mem.contains(a) || mem.is_reserved(a)) return std::nullopt;
  if (mem.at(a).occupancy == Occupancy::Free) return std::nullopt;
  return mem.with_block(a, MemoryValue::free_block());
}

StmtList standard_library(std::size_t memory_size) {
  const Reserved r = Reserved::for_size(memory_size);
  st::StructDecl address{r.address_type,
                         {{"addr", LType::int64()},
                          {"balance", LType::int64()},
                          {"send", LType::fid(r.send_fn)},
                          {"gas", LType::int64()}}};
  st::StructDecl msg{r.msg_type,
                     {{"sender", LType::structure(r.address_type)},
                      {"value", LType::uint64()},
                      {"gas", LType::uint64()}}};
  return {LStatement{address}, LStatement{msg}};
}

MemoryState init_mem(std::size_t size, const StmtList& stdlib) {
  if (size <= Reserved::count) {
    throw std::invalid_argument("memory size " + std::to_string(size) + " leaves no user blocks (need > " +
                                std::to_string(Reserved::count) + ")");
  }
  MemoryState mem(size);
  const Reserved& r = mem.reserved();
  Env sys;
  sys.domain = r.throw_flag;
  mem = mem.with_block(r.throw_flag, MemoryValue::make(cell::Bool{false, {}}, sys));
  sys.domain = r.modifier_flag;
  mem = mem.with_block(r.modifier_flag, MemoryValue::make(cell::Bool{false, {}}, sys));
  sys.domain = r.send_fn;
  mem = mem.with_block(r.send_fn, MemoryValue::make(cell::Fid{r.send_fn, std::nullopt, std::nullopt}, sys));
  for (const LStatement& s : stdlib) {
    const auto* decl = s.as<st::StructDecl>();
    if (!decl) throw std::invalid_argument("standard library may only contain struct declarations");
    if (!mem.contains(decl->type)) throw std::invalid_argument("standard library struct outside memory");
    sys.domain = decl->type;
    mem = mem.with_block(decl->type, MemoryValue::make(cell::StructType{decl->type, decl->members}, sys));
  }
  return mem;
}

std::string dump_line(const MemoryState& mem, Address a) {
  const MemoryValue& v = mem.at(a);
  std::ostringstream out;
  out << a.index << '\t' << to_string(v.occupancy) << '\t' << to_string(v.access) << '\t' << to_string(v.domain)
      << '\t' << render_payload(v.payload);
  return out.str();
}

std::string dump(const MemoryState& mem) {
  std::string out;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    out += dump_line(mem, {i});
    out += '\n';
  }
  return out;
}

}  // namespace solsem
