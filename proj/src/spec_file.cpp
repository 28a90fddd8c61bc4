#include <sstream>

#include "solsem/session.hpp"

namespace solsem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t to_int(const std::string& s, SrcPos at) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FrontendError(at, "expected an integer, got '" + s + "'");
  }
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s, SrcPos at) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw FrontendError(at, "expected a range lo..hi, got '" + s + "'");
  const auto lo = to_int(trim(s.substr(0, dots)), at);
  const auto hi = to_int(trim(s.substr(dots + 2)), at);
  if (hi < lo) throw FrontendError(at, "empty range " + s);
  return {lo, hi};
}

SymbolSpec symbol_from(const std::string& name, const std::string& kind, const std::string& range, SrcPos at) {
  SymbolSpec s;
  s.name = name;
  if (name.empty()) throw FrontendError(at, "symbol needs a name");
  if (kind == "bool") {
    s.is_bool = true;
  } else if (kind != "int" && kind != "uint") {
    throw FrontendError(at, "symbol kind must be bool, int or uint, got '" + kind + "'");
  }
  if (!range.empty()) s.range = parse_range(range, at);
  if (kind == "uint" && s.range && s.range->first < 0) throw FrontendError(at, "uint symbol with a negative bound");
  return s;
}

}  // namespace

SymbolSpec parse_symbol_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ':')) parts.push_back(trim(piece));
  if (parts.size() < 2 || parts.size() > 3) throw FrontendError({}, "symbolic input must look like NAME:kind[:lo..hi]");
  return symbol_from(parts[0], parts[1], parts.size() == 3 ? parts[2] : "", {});
}

Mode parse_mode(const std::string& s, SrcPos at) {
  if (s == "static") return Mode::Static;
  if (s == "concolic") return Mode::Concolic;
  if (s == "selective") return Mode::Selective;
  throw FrontendError(at, "mode must be static, concolic or selective");
}

SpecFile parse_spec_file(const std::string& text) {
  SpecFile spec;
  std::stringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const SrcPos at{line_no, 1};
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto sp = line.find_first_of(" \t");
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    auto words = [&] {
      std::vector<std::string> out;
      std::stringstream ws(rest);
      std::string w;
      while (ws >> w) out.push_back(w);
      return out;
    };
    auto need = [&](bool ok) {
      if (!ok) throw FrontendError(at, "malformed '" + key + "' line");
    };
    if (key == "entry") {
      need(!rest.empty());
      spec.entry = rest;
    } else if (key == "gas" || key == "k") {
      const auto v = to_int(rest, at);
      need(v >= 0);
      (key == "gas" ? spec.gas : spec.k) = static_cast<std::uint64_t>(v);
    } else if (key == "sender") {
      spec.sender = to_int(rest, at);
    } else if (key == "value") {
      spec.value = to_int(rest, at);
    } else if (key == "timestamp") {
      spec.timestamp = to_int(rest, at);
    } else if (key == "mode") {
      spec.mode = parse_mode(rest, at);
    } else if (key == "pre") {
      need(!rest.empty());
      spec.pre.push_back(rest);
    } else if (key == "arg") {
      need(rest.find('=') != std::string::npos);
      spec.args.push_back(rest);
    } else if (key == "symbolic") {
      const auto w = words();
      need(w.size() == 2 || w.size() == 3);
      spec.symbols.push_back(symbol_from(w[0], w[1], w.size() == 3 ? w[2] : "", at));
    } else if (key == "assume") {
      need(!rest.empty());
      spec.assumptions.push_back(rest);
    } else if (key == "post") {
      const auto w = words();
      need(!w.empty());
      PostClause p;
      if (w[0] == "throw" && w.size() == 1) {
        p.kind = PostClause::Kind::Throw;
      } else if (w[0] == "nothrow" && w.size() == 1) {
        p.kind = PostClause::Kind::NoThrow;
      } else if (w[0] == "equals" && w.size() == 3) {
        p.kind = PostClause::Kind::Equals;
        p.name = w[1];
        p.value = w[2];
      } else if (w[0] == "unchanged" && w.size() == 2) {
        p.kind = PostClause::Kind::Unchanged;
        p.name = w[1];
      } else {
        throw FrontendError(at, "post must be 'throw', 'nothrow', 'equals NAME VALUE' or 'unchanged NAME'");
      }
      spec.post.push_back(std::move(p));
    } else if (key == "summary") {
      const auto open = rest.find('{');
      const auto close = rest.rfind('}');
      need(open != std::string::npos && close != std::string::npos && close > open);
      const std::string name = trim(rest.substr(0, open));
      need(!name.empty());
      spec.summaries.emplace_back(name, rest.substr(open + 1, close - open - 1));
    } else {
      throw FrontendError(at, "unknown directive '" + key + "'");
    }
  }
  return spec;
}

}  // namespace solsem
