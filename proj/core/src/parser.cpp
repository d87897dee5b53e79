#include "lpfd/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <vector>

namespace lpfd {

namespace {

enum class tok {
  ident, lbrace, rbrace, comma, lparen, rparen, lbrack, rbrack, semi,
  lt, gt, tilde, amp, pipe, arrow, atsign, colon, end
};

struct token {
  tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<token> lex(std::string_view text) {
  std::vector<token> out;
  std::size_t i = 0;
  auto push = [&](tok k, std::size_t pos, std::string t = {}) {
    out.push_back({k, std::move(t), pos});
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t pos = i;
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      push(tok::ident, pos, std::string(text.substr(i, j - i)));
      i = j;
      continue;
    }
    switch (c) {
      case '{': push(tok::lbrace, pos); break;
      case '}': push(tok::rbrace, pos); break;
      case ',': push(tok::comma, pos); break;
      case '(': push(tok::lparen, pos); break;
      case ')': push(tok::rparen, pos); break;
      case '[': push(tok::lbrack, pos); break;
      case ']': push(tok::rbrack, pos); break;
      case ';': push(tok::semi, pos); break;
      case '<': push(tok::lt, pos); break;
      case '>': push(tok::gt, pos); break;
      case '~': push(tok::tilde, pos); break;
      case '&': push(tok::amp, pos); break;
      case '|': push(tok::pipe, pos); break;
      case '@': push(tok::atsign, pos); break;
      case ':': push(tok::colon, pos); break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(tok::arrow, pos);
          ++i;
          break;
        }
        throw parse_error("stray '-'", pos);
      default:
        throw parse_error(std::string("unexpected character '") + c + "'", pos);
    }
    ++i;
  }
  out.push_back({tok::end, {}, text.size()});
  return out;
}

// Untyped syntax tree; names stay strings until a vocabulary binds them.
struct cst {
  fkind kind;
  std::string name;                    // predicate / nominal / dep target
  std::vector<std::string> args;       // predicate arguments
  std::vector<std::string> xs, ys, zs; // modality indices / dep subscript / targets
  std::unique_ptr<cst> lhs, rhs;
  std::size_t pos = 0;
};

class parser {
public:
  explicit parser(std::string_view text) : toks_(lex(text)) {}

  std::unique_ptr<cst> parse() {
    auto f = parse_implies();
    expect(tok::end, "trailing input after formula");
    return f;
  }

private:
  const token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool match(tok k) {
    if (peek().kind != k) return false;
    advance();
    return true;
  }
  void expect(tok k, const char* what) {
    if (!match(k)) throw parse_error(what, peek().pos);
  }

  std::unique_ptr<cst> node(fkind k) {
    auto n = std::make_unique<cst>();
    n->kind = k;
    n->pos = peek().pos;
    return n;
  }

  std::vector<std::string> parse_set() {
    expect(tok::lbrace, "expected '{'");
    std::vector<std::string> out;
    if (match(tok::rbrace)) return out;
    for (;;) {
      if (peek().kind != tok::ident) throw parse_error("expected variable name", peek().pos);
      out.push_back(advance().text);
      if (match(tok::rbrace)) return out;
      expect(tok::comma, "expected ',' or '}' in set");
    }
  }

  std::unique_ptr<cst> parse_implies() {
    auto lhs = parse_or();
    if (match(tok::arrow)) {
      auto n = node(fkind::implies);
      n->lhs = std::move(lhs);
      n->rhs = parse_implies();  // right-associative
      return n;
    }
    return lhs;
  }

  std::unique_ptr<cst> parse_or() {
    auto lhs = parse_and();
    while (match(tok::pipe)) {
      auto n = node(fkind::disj);
      n->lhs = std::move(lhs);
      n->rhs = parse_and();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<cst> parse_and() {
    auto lhs = parse_unary();
    while (match(tok::amp)) {
      auto n = node(fkind::conj);
      n->lhs = std::move(lhs);
      n->rhs = parse_unary();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<cst> parse_modality(fkind kind, tok close, const char* what) {
    auto n = node(kind);
    advance();
    n->xs = parse_set();
    expect(tok::semi, "expected ';' between modality sets");
    n->ys = parse_set();
    expect(tok::semi, "expected ';' between modality sets");
    n->zs = parse_set();
    expect(close, what);
    n->lhs = parse_unary();
    return n;
  }

  std::unique_ptr<cst> parse_unary() {
    switch (peek().kind) {
      case tok::tilde: {
        auto n = node(fkind::neg);
        advance();
        n->lhs = parse_unary();
        return n;
      }
      case tok::lbrack:
        return parse_modality(fkind::box, tok::rbrack, "expected ']'");
      case tok::lt:
        return parse_modality(fkind::diamond, tok::gt, "expected '>'");
      case tok::atsign: {
        auto n = node(fkind::at);
        advance();
        if (peek().kind != tok::ident) throw parse_error("expected nominal after '@'", peek().pos);
        n->name = advance().text;
        n->lhs = parse_unary();
        return n;
      }
      default:
        return parse_primary();
    }
  }

  std::unique_ptr<cst> parse_primary() {
    if (match(tok::lparen)) {
      auto inner = parse_implies();
      expect(tok::rparen, "expected ')'");
      return inner;
    }
    if (peek().kind != tok::ident)
      throw parse_error("expected a formula", peek().pos);
    token id = advance();
    bool braced = peek().kind == tok::lbrace;
    if (id.text == "top") return node(fkind::top);
    if (id.text == "bot") return node(fkind::bot);
    if (id.text == "nom" && peek().kind == tok::colon) {
      advance();
      if (peek().kind != tok::ident) throw parse_error("expected nominal after 'nom:'", peek().pos);
      auto n = node(fkind::nominal);
      n->name = advance().text;
      return n;
    }
    if (id.text == "D" && braced) {
      auto n = node(fkind::dep);
      n->xs = parse_set();
      if (peek().kind == tok::lbrace) {
        n->kind = fkind::dep_set;
        n->zs = parse_set();  // targets travel in zs until binding
        return n;
      }
      if (peek().kind != tok::ident)
        throw parse_error("expected dependence target", peek().pos);
      n->name = advance().text;
      return n;
    }
    if (braced && (id.text == "wPa" || id.text == "sPa" || id.text == "Na" ||
                   id.text == "p" || id.text == "Core")) {
      fkind k = id.text == "wPa"  ? fkind::wpa
                : id.text == "sPa" ? fkind::spa
                : id.text == "Na"  ? fkind::na
                : id.text == "p"   ? fkind::coal_atom
                                   : fkind::core_x;
      auto n = node(k);
      n->xs = parse_set();
      if (k == fkind::core_x) {
        if (peek().kind != tok::ident)
          throw parse_error("expected nominal after 'Core{...}'", peek().pos);
        n->name = advance().text;
      }
      return n;
    }
    if (peek().kind == tok::lparen) {
      auto n = node(fkind::pred);
      n->name = id.text;
      advance();
      if (!match(tok::rparen)) {
        for (;;) {
          if (peek().kind != tok::ident)
            throw parse_error("expected variable in predicate application", peek().pos);
          n->args.push_back(advance().text);
          if (match(tok::rparen)) break;
          expect(tok::comma, "expected ',' or ')' in predicate application");
        }
      }
      return n;
    }
    throw parse_error("unexpected identifier '" + id.text + "'", id.pos);
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
};

// ---- vocabulary inference ---------------------------------------------------

struct name_pool {
  std::vector<std::string> vars;
  std::vector<predicate_info> preds;
  std::vector<std::string> noms;

  void add_var(const std::string& n) {
    for (const auto& v : vars)
      if (v == n) return;
    vars.push_back(n);
  }
  void add_pred(const std::string& n, int arity, std::size_t pos) {
    for (const auto& p : preds) {
      if (p.name != n) continue;
      if (p.arity != arity)
        throw parse_error("predicate '" + n + "' used with inconsistent arity", pos);
      return;
    }
    preds.push_back({n, arity});
  }
  void add_nom(const std::string& n) {
    for (const auto& m : noms)
      if (m == n) return;
    noms.push_back(n);
  }
};

void collect_names(const cst& n, name_pool& pool) {
  for (const auto& v : n.xs) pool.add_var(v);
  for (const auto& v : n.ys) pool.add_var(v);
  for (const auto& v : n.zs) pool.add_var(v);
  switch (n.kind) {
    case fkind::pred:
      pool.add_pred(n.name, static_cast<int>(n.args.size()), n.pos);
      for (const auto& a : n.args) pool.add_var(a);
      break;
    case fkind::dep:
      pool.add_var(n.name);
      break;
    case fkind::nominal:
    case fkind::at:
    case fkind::core_x:
      pool.add_nom(n.name);
      break;
    default:
      break;
  }
  if (n.lhs) collect_names(*n.lhs, pool);
  if (n.rhs) collect_names(*n.rhs, pool);
}

// ---- binding ----------------------------------------------------------------

var_set bind_set(const std::vector<std::string>& names, const vocabulary& voc,
                 std::size_t pos) {
  var_set out;
  for (const auto& n : names) {
    auto v = voc.find_variable(n);
    if (!v) throw parse_error("unknown variable '" + n + "'", pos);
    out.insert(*v);
  }
  return out;
}

formula bind(const cst& n, const vocab_ptr& voc) {
  switch (n.kind) {
    case fkind::pred: {
      auto p = voc->find_predicate(n.name);
      if (!p) throw parse_error("unknown predicate '" + n.name + "'", n.pos);
      std::vector<var_id> args;
      for (const auto& a : n.args) {
        auto v = voc->find_variable(a);
        if (!v) throw parse_error("unknown variable '" + a + "'", n.pos);
        args.push_back(*v);
      }
      return pred(voc, *p, std::move(args));
    }
    case fkind::dep: {
      auto t = voc->find_variable(n.name);
      if (!t) throw parse_error("unknown variable '" + n.name + "'", n.pos);
      return dep(voc, bind_set(n.xs, *voc, n.pos), *t);
    }
    case fkind::dep_set:
      return dep_set(voc, bind_set(n.xs, *voc, n.pos), bind_set(n.zs, *voc, n.pos));
    case fkind::nominal: {
      auto i = voc->find_nominal(n.name);
      if (!i) throw parse_error("unknown nominal '" + n.name + "'", n.pos);
      return nominal(voc, *i);
    }
    case fkind::top: return top(voc);
    case fkind::bot: return bot(voc);
    case fkind::neg: return lnot(bind(*n.lhs, voc));
    case fkind::conj: return land(bind(*n.lhs, voc), bind(*n.rhs, voc));
    case fkind::disj: return lor(bind(*n.lhs, voc), bind(*n.rhs, voc));
    case fkind::implies: return implies(bind(*n.lhs, voc), bind(*n.rhs, voc));
    case fkind::box:
      return box(bind_set(n.xs, *voc, n.pos), bind_set(n.ys, *voc, n.pos),
                 bind_set(n.zs, *voc, n.pos), bind(*n.lhs, voc));
    case fkind::diamond:
      return dia(bind_set(n.xs, *voc, n.pos), bind_set(n.ys, *voc, n.pos),
                 bind_set(n.zs, *voc, n.pos), bind(*n.lhs, voc));
    case fkind::at: {
      auto i = voc->find_nominal(n.name);
      if (!i) throw parse_error("unknown nominal '" + n.name + "'", n.pos);
      return at(*i, bind(*n.lhs, voc));
    }
    case fkind::wpa:
    case fkind::spa:
    case fkind::na:
    case fkind::coal_atom: {
      var_set s = bind_set(n.xs, *voc, n.pos);
      if (s.empty()) throw parse_error("coalition must be non-empty", n.pos);
      fnode f{.kind = n.kind, .voc = voc};
      f.xs = s;
      return formula(std::make_shared<const fnode>(std::move(f)));
    }
    case fkind::core_x: {
      var_set s = bind_set(n.xs, *voc, n.pos);
      if (s.empty()) throw parse_error("coalition must be non-empty", n.pos);
      auto i = voc->find_nominal(n.name);
      if (!i) throw parse_error("unknown nominal '" + n.name + "'", n.pos);
      fnode f{.kind = fkind::core_x, .voc = voc};
      f.xs = s;
      f.sym = *i;
      return formula(std::make_shared<const fnode>(std::move(f)));
    }
  }
  throw parse_error("unreachable syntax node", n.pos);
}

}  // namespace

formula parse_formula(std::string_view text, const vocab_ptr& voc) {
  parser p(text);
  auto tree = p.parse();
  return bind(*tree, voc);
}

std::pair<formula, vocab_ptr> parse_formula_infer(std::string_view text) {
  parser p(text);
  auto tree = p.parse();
  name_pool pool;
  collect_names(*tree, pool);
  if (pool.vars.empty()) pool.vars.push_back("x");
  auto voc = std::make_shared<const vocabulary>(pool.vars, pool.preds, pool.noms);
  return {bind(*tree, voc), voc};
}

}  // namespace lpfd
