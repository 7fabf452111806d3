#include "mulmatch/smtlib.hpp"

#include <cassert>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mulmatch/errors.hpp"

namespace mulmatch {

namespace {

struct Token {
  enum class Type { LParen, RParen, Symbol, String, End };
  Type type = Type::End;
  std::string text;
  int line = 1, col = 1;
  size_t begin = 0, end = 0;  // byte offsets into the input
};

// parses the printer's provenance comment ("learned long x=10 y=10")
std::optional<LearnedInfo> parse_learned_comment(const std::string& body) {
  std::istringstream in(body);
  std::string tag, source, xs, ys;
  if (!(in >> tag >> source >> xs >> ys) || tag != "learned")
    return std::nullopt;
  LearnedInfo info;
  if (source == "long")
    info.source = MatchSource::Long;
  else if (source == "wallace")
    info.source = MatchSource::Wallace;
  else
    return std::nullopt;
  if (xs.rfind("x=", 0) != 0 || ys.rfind("y=", 0) != 0) return std::nullopt;
  try {
    info.x_width = static_cast<uint32_t>(std::stoul(xs.substr(2)));
    info.y_width = static_cast<uint32_t>(std::stoul(ys.substr(2)));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return info;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  const Token& peek() {
    if (!has_) {
      tok_ = scan();
      has_ = true;
    }
    return tok_;
  }
  Token next() {
    peek();
    has_ = false;
    return tok_;
  }
  // provenance comment seen most recently; cleared on take
  std::optional<LearnedInfo> take_learned() {
    auto r = learned_;
    learned_.reset();
    return r;
  }

 private:
  static bool is_symbol_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' &&
           c != ')' && c != ';' && c != '"' && c != '|';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        size_t start = pos_ + 1;
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        if (auto info = parse_learned_comment(
                text_.substr(start, pos_ - start)))
          learned_ = info;
      } else {
        return;
      }
    }
  }

  Token scan() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.col = col_;
    t.begin = pos_;
    if (pos_ >= text_.size()) {
      t.end = pos_;
      return t;
    }
    char c = text_[pos_];
    if (c == '(') {
      t.type = Token::Type::LParen;
      t.text = "(";
      advance();
    } else if (c == ')') {
      t.type = Token::Type::RParen;
      t.text = ")";
      advance();
    } else if (c == '"') {
      t.type = Token::Type::String;
      advance();
      std::string body;
      while (true) {
        if (pos_ >= text_.size())
          throw ParseError("unterminated string", t.line, t.col);
        char d = text_[pos_];
        advance();
        if (d == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            body += '"';
            advance();
            continue;
          }
          break;
        }
        body += d;
      }
      t.text = body;
    } else if (c == '|') {
      t.type = Token::Type::Symbol;
      advance();
      std::string body;
      while (true) {
        if (pos_ >= text_.size())
          throw ParseError("unterminated quoted symbol", t.line, t.col);
        char d = text_[pos_];
        advance();
        if (d == '|') break;
        body += d;
      }
      t.text = body;
    } else {
      t.type = Token::Type::Symbol;
      std::string body;
      while (pos_ < text_.size() && is_symbol_char(text_[pos_])) {
        body += text_[pos_];
        advance();
      }
      t.text = body;
    }
    t.end = pos_;
    return t;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
  bool has_ = false;
  std::optional<LearnedInfo> learned_;
};

class Parser {
 public:
  Parser(TermStore& store, const std::string& text)
      : store_(store), text_(text), lex_(text) {}

  Script run() {
    while (lex_.peek().type != Token::Type::End) command();
    return std::move(script_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.col);
  }
  [[noreturn]] void unsupported(const std::string& msg, const Token& at) {
    throw UnsupportedFeature(msg, at.line, at.col);
  }

  Token expect(Token::Type type, const char* what) {
    Token t = lex_.next();
    if (t.type != type) fail(std::string("expected ") + what, t);
    return t;
  }

  Token expect_symbol(const char* what) {
    return expect(Token::Type::Symbol, what);
  }

  uint64_t numeral(const Token& t) {
    if (t.type != Token::Type::Symbol || t.text.empty()) fail("expected numeral", t);
    uint64_t v = 0;
    for (char c : t.text) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail("expected numeral", t);
      if (v > (UINT64_MAX - (c - '0')) / 10) fail("numeral out of range", t);
      v = v * 10 + (c - '0');
    }
    return v;
  }

  void command() {
    Token open = expect(Token::Type::LParen, "(");
    std::optional<LearnedInfo> pending = lex_.take_learned();
    Token head = expect_symbol("command name");
    const std::string& cmd = head.text;
    if (cmd == "set-logic") {
      script_.logic = expect_symbol("logic name").text;
      expect(Token::Type::RParen, ")");
    } else if (cmd == "set-info" || cmd == "set-option") {
      // semantically inert; preserved verbatim
      int depth = 1;
      size_t end = head.end;
      while (depth > 0) {
        Token t = lex_.next();
        if (t.type == Token::Type::End) fail("unterminated command", open);
        if (t.type == Token::Type::LParen) ++depth;
        if (t.type == Token::Type::RParen) --depth;
        end = t.end;
      }
      script_.prelude.push_back(text_.substr(open.begin, end - open.begin));
    } else if (cmd == "declare-fun" || cmd == "declare-const") {
      Token name = expect_symbol("name");
      if (cmd == "declare-fun") {
        expect(Token::Type::LParen, "(");
        if (lex_.peek().type != Token::Type::RParen)
          unsupported("uninterpreted function of non-zero arity", name);
        lex_.next();
      }
      Sort sort = parse_sort();
      expect(Token::Type::RParen, ")");
      if (globals_.count(name.text)) fail("redeclared: " + name.text, name);
      globals_[name.text] = store_.var(name.text, sort.width, sort.boolean);
      script_.declarations.push_back({name.text, sort.width, sort.boolean});
    } else if (cmd == "assert") {
      TermId t = term();
      expect(Token::Type::RParen, ")");
      if (!store_.is_bool(t)) fail("assert needs a Boolean term", head);
      if (pending) {
        script_.learned.push_back(t);
        script_.learned_meta.push_back(*pending);
      } else {
        script_.assertions.push_back(t);
      }
    } else if (cmd == "check-sat") {
      expect(Token::Type::RParen, ")");
      script_.has_check_sat = true;
    } else if (cmd == "exit") {
      expect(Token::Type::RParen, ")");
      script_.has_exit = true;
    } else {
      unsupported("command " + cmd, head);
    }
  }

  Sort parse_sort() {
    Token t = lex_.next();
    if (t.type == Token::Type::Symbol && t.text == "Bool")
      return Sort{1, true};
    if (t.type == Token::Type::LParen) {
      Token u = expect_symbol("_");
      if (u.text == "_") {
        Token name = expect_symbol("sort name");
        if (name.text == "BitVec") {
          uint64_t w = numeral(lex_.next());
          if (w == 0 || w > (1u << 24)) fail("bad bit-vector width", name);
          expect(Token::Type::RParen, ")");
          return Sort{static_cast<uint32_t>(w), false};
        }
        unsupported("sort " + name.text, name);
      }
      unsupported("sort", u);
    }
    if (t.type == Token::Type::Symbol) unsupported("sort " + t.text, t);
    fail("expected sort", t);
  }

  TermId constant_from_binary(const std::string& bits, const Token& at) {
    if (bits.empty()) fail("empty bit-vector literal", at);
    for (char c : bits)
      if (c != '0' && c != '1') fail("bad bit-vector literal", at);
    return store_.constant(BitVec::from_binary(bits));
  }

  TermId symbol_term(const Token& t) {
    const std::string& s = t.text;
    if (s.rfind("#b", 0) == 0) return constant_from_binary(s.substr(2), t);
    if (s.rfind("#x", 0) == 0) {
      std::string bits;
      for (size_t i = 2; i < s.size(); ++i) {
        int d;
        char c = std::tolower(static_cast<unsigned char>(s[i]));
        if (c >= '0' && c <= '9')
          d = c - '0';
        else if (c >= 'a' && c <= 'f')
          d = c - 'a' + 10;
        else
          fail("bad hex literal", t);
        for (int bit = 3; bit >= 0; --bit) bits += ((d >> bit) & 1) ? '1' : '0';
      }
      return constant_from_binary(bits, t);
    }
    if (s == "true" || s == "false")
      unsupported("Boolean constant " + s, t);
    for (auto scope = lets_.rbegin(); scope != lets_.rend(); ++scope) {
      auto it = scope->find(s);
      if (it != scope->end()) return it->second;
    }
    auto it = globals_.find(s);
    if (it != globals_.end()) return it->second;
    fail("unknown symbol " + s, t);
  }

  // (_ bvN w) in term position
  TermId indexed_literal(const Token& at) {
    Token name = expect_symbol("bv literal");
    if (name.text.rfind("bv", 0) != 0) unsupported("term (_ " + name.text + " ...)", name);
    Token numTok = name;
    numTok.text = name.text.substr(2);
    uint64_t value = numeral(numTok);
    uint64_t w = numeral(lex_.next());
    if (w == 0 || w > (1u << 24)) fail("bad bit-vector width", at);
    expect(Token::Type::RParen, ")");
    return store_.constant(
        BitVec::from_u64(static_cast<uint32_t>(w), value));
  }

  // ((_ extract hi lo) t)
  TermId indexed_application(const Token& at) {
    expect_symbol("_");
    Token name = expect_symbol("indexed operator");
    if (name.text != "extract")
      unsupported("operator (_ " + name.text + " ...)", name);
    uint64_t hi = numeral(lex_.next());
    uint64_t lo = numeral(lex_.next());
    expect(Token::Type::RParen, ")");
    TermId arg = term();
    expect(Token::Type::RParen, ")");
    try {
      return store_.extract(static_cast<uint32_t>(hi),
                            static_cast<uint32_t>(lo), arg);
    } catch (const WidthMismatch& e) {
      fail(e.what(), at);
    }
  }

  TermId term() {
    Token t = lex_.next();
    if (t.type == Token::Type::Symbol) return symbol_term(t);
    if (t.type != Token::Type::LParen) fail("expected term", t);

    if (lex_.peek().type == Token::Type::LParen) {
      lex_.next();
      return indexed_application(t);
    }
    Token head = expect_symbol("operator");
    const std::string& op = head.text;
    if (op == "_") return indexed_literal(t);
    if (op == "let") return let_term();
    if (op == "forall" || op == "exists" || op == "ite" || op == "select" ||
        op == "store")
      unsupported("term " + op, head);

    std::vector<TermId> args;
    while (lex_.peek().type != Token::Type::RParen) {
      if (lex_.peek().type == Token::Type::End) fail("unterminated term", t);
      args.push_back(term());
    }
    lex_.next();
    try {
      return apply(op, args, head);
    } catch (const WidthMismatch& e) {
      fail(e.what(), head);
    }
  }

  TermId let_term() {
    expect(Token::Type::LParen, "(");
    // bindings are parallel: right-hand sides see only the outer scope
    std::map<std::string, TermId> scope;
    while (lex_.peek().type != Token::Type::RParen) {
      expect(Token::Type::LParen, "(");
      Token name = expect_symbol("binding name");
      TermId value = term();
      expect(Token::Type::RParen, ")");
      if (!scope.emplace(name.text, value).second)
        fail("duplicate let binding " + name.text, name);
    }
    lex_.next();
    lets_.push_back(std::move(scope));
    TermId body = term();
    lets_.pop_back();
    expect(Token::Type::RParen, ")");
    return body;
  }

  TermId apply(const std::string& op, const std::vector<TermId>& args,
               const Token& at) {
    auto need = [&](size_t lo, size_t hi) {
      if (args.size() < lo || args.size() > hi)
        fail("wrong arity for " + op, at);
    };
    auto fold = [&](auto make) {
      TermId acc = args[0];
      for (size_t i = 1; i < args.size(); ++i) acc = make(acc, args[i]);
      return acc;
    };
    if (op == "bvadd") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bv_add(a, b); }); }
    if (op == "bvmul") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bv_mul(a, b); }); }
    if (op == "bvand") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bv_and(a, b); }); }
    if (op == "bvor") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bv_or(a, b); }); }
    if (op == "bvxor") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bv_xor(a, b); }); }
    if (op == "bvnot") { need(1, 1); return store_.bv_not(args[0]); }
    if (op == "concat") {
      need(2, SIZE_MAX);
      // right fold: (concat a b c) = a • (b • c), so a leading zero
      // constant wraps the rest exactly like a zero extension
      TermId acc = args.back();
      for (size_t i = args.size() - 1; i-- > 0;) acc = store_.concat(args[i], acc);
      return acc;
    }
    if (op == "=") { need(2, 2); return store_.eq(args[0], args[1]); }
    if (op == "distinct") {
      need(2, 2);
      return store_.bool_not(store_.eq(args[0], args[1]));
    }
    if (op == "not") { need(1, 1); return store_.bool_not(args[0]); }
    if (op == "and") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bool_and(a, b); }); }
    if (op == "or") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bool_or(a, b); }); }
    if (op == "xor") { need(2, SIZE_MAX); return fold([&](TermId a, TermId b) { return store_.bool_xor(a, b); }); }
    unsupported("operator " + op, at);
  }

  TermStore& store_;
  const std::string& text_;
  Lexer lex_;
  Script script_;
  std::map<std::string, TermId> globals_;
  std::vector<std::map<std::string, TermId>> lets_;
};

}  // namespace

Script parse(TermStore& s, const std::string& text) {
  return Parser(s, text).run();
}

Script parse_file(TermStore& s, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(s, buf.str());
}

namespace {

const char* op_name(Kind k) {
  switch (k) {
    case Kind::Concat: return "concat";
    case Kind::BvAdd: return "bvadd";
    case Kind::BvMul: return "bvmul";
    case Kind::BvAnd: return "bvand";
    case Kind::BvOr: return "bvor";
    case Kind::BvXor: return "bvxor";
    case Kind::BvNot: return "bvnot";
    case Kind::Eq: return "=";
    case Kind::BoolNot: return "not";
    case Kind::BoolAnd: return "and";
    case Kind::BoolOr: return "or";
    case Kind::BoolXor: return "xor";
    default: return nullptr;
  }
}

// re-quotes names the lexer unwrapped from |...|
std::string format_symbol(const std::string& name) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) &&
        extra.find(c) == std::string::npos)
      simple = false;
  return simple ? name : "|" + name + "|";
}

class AssertPrinter {
 public:
  AssertPrinter(const TermStore& s, const std::set<std::string>& taken)
      : store_(s), taken_(taken) {}

  void print(std::ostream& out, TermId root) {
    fanout_.clear();
    names_.clear();
    order_.clear();
    count_fanout(root);
    collect_shared(root);
    out << "(assert ";
    for (TermId t : order_) {
      out << "(let ((" << names_.at(t) << ' ';
      render_node(out, t);
      out << ")) ";
    }
    render(out, root);
    for (size_t i = 0; i < order_.size(); ++i) out << ')';
    out << ")\n";
  }

 private:
  void count_fanout(TermId root) {
    std::vector<TermId> stack{root};
    std::set<TermId> expanded;
    while (!stack.empty()) {
      TermId t = stack.back();
      stack.pop_back();
      if (!expanded.insert(t).second) continue;
      const Node& n = store_.node(t);
      for (TermId child : {n.a, n.b}) {
        if (!child.valid()) continue;
        ++fanout_[child];
        stack.push_back(child);
      }
    }
  }

  bool is_leaf(TermId t) const {
    Kind k = store_.kind(t);
    return k == Kind::Var || k == Kind::Const;
  }

  // post-order over shared nodes so bindings only reference earlier ones
  void collect_shared(TermId root) {
    std::set<TermId> visited;
    std::function<void(TermId)> walk = [&](TermId t) {
      if (!visited.insert(t).second) return;
      const Node& n = store_.node(t);
      if (n.a.valid()) walk(n.a);
      if (n.b.valid()) walk(n.b);
      if (!is_leaf(t) && fanout_[t] > 1) {
        names_[t] = fresh_name();
        order_.push_back(t);
      }
    };
    walk(root);
  }

  std::string fresh_name() {
    while (true) {
      std::string name = "t!" + std::to_string(counter_++);
      if (!taken_.count(name)) return name;
    }
  }

  void render(std::ostream& out, TermId t) {
    auto it = names_.find(t);
    if (it != names_.end()) {
      out << it->second;
      return;
    }
    render_node(out, t);
  }

  void render_node(std::ostream& out, TermId t) {
    const Node& n = store_.node(t);
    switch (n.kind) {
      case Kind::Var:
        out << format_symbol(store_.var_name(t));
        return;
      case Kind::Const:
        out << "#b" << store_.const_value(t).to_binary();
        return;
      case Kind::Extract:
        out << "((_ extract " << n.aux0 << ' ' << n.aux1 << ") ";
        render(out, n.a);
        out << ')';
        return;
      case Kind::BvNot:
      case Kind::BoolNot:
        out << '(' << op_name(n.kind) << ' ';
        render(out, n.a);
        out << ')';
        return;
      default:
        out << '(' << op_name(n.kind) << ' ';
        render(out, n.a);
        out << ' ';
        render(out, n.b);
        out << ')';
        return;
    }
  }

  const TermStore& store_;
  const std::set<std::string>& taken_;
  std::map<TermId, int> fanout_;
  std::map<TermId, std::string> names_;
  std::vector<TermId> order_;
  int counter_ = 0;
};

}  // namespace

std::string print(const TermStore& s, const Script& script) {
  std::ostringstream out;
  if (!script.logic.empty()) out << "(set-logic " << script.logic << ")\n";
  for (const std::string& line : script.prelude) out << line << '\n';
  std::set<std::string> taken;
  for (const Declaration& d : script.declarations) {
    taken.insert(d.name);
    out << "(declare-fun " << format_symbol(d.name) << " () ";
    if (d.boolean)
      out << "Bool";
    else
      out << "(_ BitVec " << d.width << ")";
    out << ")\n";
  }
  AssertPrinter printer(s, taken);
  for (TermId a : script.assertions) printer.print(out, a);
  assert(script.learned.size() == script.learned_meta.size());
  for (size_t i = 0; i < script.learned.size(); ++i) {
    const LearnedInfo& m = script.learned_meta[i];
    out << "; learned "
        << (m.source == MatchSource::Long ? "long" : "wallace") << " x="
        << m.x_width << " y=" << m.y_width << '\n';
    printer.print(out, script.learned[i]);
  }
  if (script.has_check_sat) out << "(check-sat)\n";
  if (script.has_exit) out << "(exit)\n";
  return out.str();
}

void print_file(const TermStore& s, const Script& script,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << print(s, script);
}

namespace {

// 1-bit bit-vector view of a Boolean term built from (= b #b1) atoms and
// gates over them; nullopt when any leaf has no such view
std::optional<TermId> lift_to_bv(TermStore& s, TermId t,
                                 std::map<TermId, std::optional<TermId>>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  std::optional<TermId> out;
  const Node& n = s.node(t);
  switch (n.kind) {
    case Kind::Eq: {
      auto one_side = [&](TermId cst, TermId other) -> std::optional<TermId> {
        if (s.kind(cst) != Kind::Const || s.width(cst) != 1) return std::nullopt;
        if (s.const_value(cst).is_zero()) return std::nullopt;
        if (s.is_bool(other) || s.width(other) != 1) return std::nullopt;
        return other;
      };
      out = one_side(n.a, n.b);
      if (!out) out = one_side(n.b, n.a);
      break;
    }
    case Kind::BoolNot: {
      if (auto a = lift_to_bv(s, n.a, memo)) out = s.bv_not(*a);
      break;
    }
    case Kind::BoolAnd:
    case Kind::BoolOr:
    case Kind::BoolXor: {
      auto a = lift_to_bv(s, n.a, memo);
      auto b = a ? lift_to_bv(s, n.b, memo) : std::nullopt;
      if (a && b) {
        Kind k = n.kind == Kind::BoolAnd  ? Kind::BvAnd
                 : n.kind == Kind::BoolOr ? Kind::BvOr
                                          : Kind::BvXor;
        TermId args[2] = {*a, *b};
        out = s.mk_term(k, args);
      }
      break;
    }
    default:
      break;
  }
  memo[t] = out;
  return out;
}

TermId rewrite_bool(TermStore& s, TermId t, std::map<TermId, TermId>& memo,
                    std::map<TermId, std::optional<TermId>>& lifts) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  const Node n = s.node(t);  // copy: rewrites may grow the node pool
  TermId out = t;
  bool gate = n.kind == Kind::BoolAnd || n.kind == Kind::BoolOr ||
              n.kind == Kind::BoolXor || n.kind == Kind::BoolNot;
  if (gate) {
    if (auto lifted = lift_to_bv(s, t, lifts)) {
      out = s.eq(*lifted, s.constant(BitVec::from_u64(1, 1)));
      memo[t] = out;
      return out;
    }
  }
  if (n.a.valid()) {
    TermId a = rewrite_bool(s, n.a, memo, lifts);
    TermId b = n.b.valid() ? rewrite_bool(s, n.b, memo, lifts) : TermId{};
    if (a != n.a || (n.b.valid() && b != n.b)) {
      switch (n.kind) {
        case Kind::Extract:
          out = s.extract(n.aux0, n.aux1, a);
          break;
        case Kind::BvNot:
          out = s.bv_not(a);
          break;
        case Kind::BoolNot:
          out = s.bool_not(a);
          break;
        case Kind::Concat:
          out = s.concat(a, b);
          break;
        case Kind::Eq:
          out = s.eq(a, b);
          break;
        default: {
          TermId args[2] = {a, b};
          out = s.mk_term(n.kind, args);
          break;
        }
      }
    }
  }
  memo[t] = out;
  return out;
}

}  // namespace

Script normalize_bool(TermStore& s, const Script& script) {
  Script out = script;
  std::map<TermId, TermId> memo;
  std::map<TermId, std::optional<TermId>> lifts;
  for (TermId& a : out.assertions) a = rewrite_bool(s, a, memo, lifts);
  for (TermId& a : out.learned) a = rewrite_bool(s, a, memo, lifts);
  return out;
}

}  // namespace mulmatch
