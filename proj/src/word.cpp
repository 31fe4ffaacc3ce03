#include "rsolv/word.hpp"

#include <cctype>
#include <sstream>

namespace rsolv {

Word free_reduce(const std::vector<Syllable>& raw) {
  Word out;
  for (const auto& s : raw) {
    if (s.exp == 0) continue;
    if (!out.syls.empty() && out.syls.back().gen == s.gen) {
      out.syls.back().exp += s.exp;
      if (out.syls.back().exp == 0) out.syls.pop_back();
    } else {
      out.syls.push_back(s);
    }
  }
  return out;
}

Word word_mul(const Word& a, const Word& b) {
  std::vector<Syllable> raw = a.syls;
  raw.insert(raw.end(), b.syls.begin(), b.syls.end());
  return free_reduce(raw);
}

Word word_inv(const Word& a) {
  std::vector<Syllable> raw;
  raw.reserve(a.syls.size());
  for (auto it = a.syls.rbegin(); it != a.syls.rend(); ++it)
    raw.push_back({it->gen, -it->exp});
  return free_reduce(raw);
}

Word word_pow(const Word& a, const Int& k) {
  if (k == 0) return {};
  Word base = k < 0 ? word_inv(a) : a;
  Int n = iabs(k);
  Word out;
  for (Int i = 0; i < n; ++i) out = word_mul(out, base);
  return out;
}

Word word_conj(const Word& u, const Word& v) {
  return word_mul(word_mul(word_inv(v), u), v);
}

Word word_comm(const Word& u, const Word& v) {
  return word_mul(word_mul(word_inv(u), word_inv(v)), word_mul(u, v));
}

namespace {

struct Parser {
  const std::string& text;
  const std::vector<std::string>& gens;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("word parse error at position " + std::to_string(pos) + ": " + what +
                     " in \"" + text + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }

  bool at_atom_start() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || c == '[';
  }

  Int parse_int() {
    skip_ws();
    size_t start = pos;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      { pos = start; fail("expected integer exponent"); }
    Int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      ++pos;
    }
    return neg ? Int(-v) : v;
  }

  Word parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Word w = parse_word_expr();
      if (!eat(')')) fail("expected ')'");
      return w;
    }
    if (c == '[') {
      ++pos;
      Word u = parse_word_expr();
      if (!eat(',')) fail("expected ',' in commutator");
      Word v = parse_word_expr();
      if (!eat(']')) fail("expected ']'");
      return word_comm(u, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      ++pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      std::string name = text.substr(start, pos - start);
      for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i] == name) return Word{{{static_cast<int>(i), 1}}};
      pos = start;
      fail("undeclared generator '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Word parse_factor() {
    Word w = parse_atom();
    while (eat('^')) {
      skip_ws();
      if (pos < text.size() &&
          (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '-' ||
           text[pos] == '+')) {
        w = word_pow(w, parse_int());
      } else {
        Word v = parse_atom();
        w = word_conj(w, v);
      }
    }
    return w;
  }

  Word parse_word_expr() {
    skip_ws();
    // "1" denotes the empty word
    if (pos < text.size() && text[pos] == '1') {
      ++pos;
      return {};
    }
    Word w = parse_factor();
    for (;;) {
      if (eat('*')) {
        w = word_mul(w, parse_factor());
      } else if (at_atom_start()) {
        w = word_mul(w, parse_factor());
      } else {
        break;
      }
    }
    return w;
  }
};

}  // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& gens) {
  Parser p{text, gens};
  p.skip_ws();
  if (p.pos == text.size()) return {};
  Word w = p.parse_word_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return w;
}

std::string serialize_word(const Word& w, const std::vector<std::string>& gens) {
  if (w.syls.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : w.syls) {
    if (!first) os << "*";
    first = false;
    os << gens.at(static_cast<size_t>(s.gen)) << "^" << s.exp.str();
  }
  return os.str();
}

int Presentation::gen_index(const std::string& s) const {
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i] == s) return static_cast<int>(i);
  return -1;
}

namespace {

// Splits on commas that are not nested inside brackets or parentheses.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Presentation parse_presentation_text(const std::string& text) {
  Presentation p;
  size_t kw = text.find("group");
  if (kw == std::string::npos) throw InputError("presentation text must start with 'group'");
  size_t open = text.find('{', kw);
  size_t close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw InputError("presentation text: missing braces");
  p.name = trim(text.substr(kw + 5, open - kw - 5));
  if (p.name.empty()) throw InputError("presentation text: missing group name");

  std::string body = text.substr(open + 1, close - open - 1);
  std::vector<std::pair<std::string, std::string>> relation_texts;
  for (const std::string& field_raw : [&] {
         std::vector<std::string> fields;
         std::string cur;
         for (char c : body) {
           if (c == ';') {
             fields.push_back(cur);
             cur.clear();
           } else
             cur += c;
         }
         if (!trim(cur).empty()) fields.push_back(cur);
         return fields;
       }()) {
    std::string field = trim(field_raw);
    if (field.empty()) continue;
    size_t colon = field.find(':');
    if (colon == std::string::npos) throw InputError("presentation field missing ':': " + field);
    std::string key = trim(field.substr(0, colon));
    std::string val = trim(field.substr(colon + 1));
    if (key == "gens") {
      for (const auto& g : split_top_level(val)) {
        std::string name = trim(g);
        if (name.empty()) throw InputError("empty generator name");
        if (p.gen_index(name) >= 0) throw InputError("duplicate generator '" + name + "'");
        p.gens.push_back(name);
      }
    } else if (key == "rels") {
      for (const auto& r : split_top_level(val)) {
        std::string rel = trim(r);
        if (rel.empty()) continue;
        size_t eq = rel.find('=');
        if (eq == std::string::npos)
          relation_texts.emplace_back(rel, "");
        else
          relation_texts.emplace_back(trim(rel.substr(0, eq)), trim(rel.substr(eq + 1)));
      }
    } else if (key == "class") {
      p.declared_class = std::stoi(val);
    } else if (key == "orders") {
      if (p.gens.empty()) throw InputError("'orders' must come after 'gens'");
      if (p.orders.empty()) p.orders.assign(p.gens.size(), Int(0));
      for (const auto& o : split_top_level(val)) {
        std::string item = trim(o);
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw InputError("order entry must be gen=N: " + item);
        std::string g = trim(item.substr(0, eq));
        int gi = p.gen_index(g);
        if (gi < 0) throw InputError("order for undeclared generator '" + g + "'");
        p.orders[static_cast<size_t>(gi)] = Int(trim(item.substr(eq + 1)));
      }
    } else {
      throw InputError("unknown presentation field '" + key + "'");
    }
  }
  if (p.gens.empty()) throw InputError("presentation has no generators");
  if (p.orders.empty()) p.orders.assign(p.gens.size(), Int(0));
  for (auto& [lhs, rhs] : relation_texts)
    p.rels.push_back({parse_word(lhs, p.gens), parse_word(rhs, p.gens)});
  return p;
}

std::string serialize_presentation_text(const Presentation& p) {
  std::ostringstream os;
  os << "group " << p.name << " { gens: ";
  for (size_t i = 0; i < p.gens.size(); ++i) os << (i ? ", " : "") << p.gens[i];
  if (!p.rels.empty()) {
    os << "; rels: ";
    for (size_t i = 0; i < p.rels.size(); ++i) {
      if (i) os << ", ";
      os << serialize_word(p.rels[i].lhs, p.gens);
      if (!p.rels[i].rhs.empty()) os << " = " << serialize_word(p.rels[i].rhs, p.gens);
    }
  }
  bool any_finite = false;
  for (const auto& e : p.orders) any_finite |= (e != 0);
  if (any_finite) {
    os << "; orders: ";
    bool first = true;
    for (size_t i = 0; i < p.gens.size(); ++i) {
      if (p.orders[i] == 0) continue;
      if (!first) os << ", ";
      first = false;
      os << p.gens[i] << "=" << p.orders[i].str();
    }
  }
  if (p.declared_class) os << "; class: " << *p.declared_class;
  os << " }";
  return os.str();
}

}  // namespace rsolv
