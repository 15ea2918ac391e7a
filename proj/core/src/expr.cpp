#include "normpar/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>

#include "normpar/error.hpp"

namespace normpar {

ExprPtr ExprNode::make_literal(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::literal;
  n->number = v;
  return n;
}

ExprPtr ExprNode::make_constant(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::constant;
  n->name = std::move(name);
  return n;
}

ExprPtr ExprNode::make_variable(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::variable;
  n->name = std::move(name);
  return n;
}

ExprPtr ExprNode::make_negate(ExprPtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::unary_minus;
  n->children.push_back(std::move(operand));
  return n;
}

ExprPtr ExprNode::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::binary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return n;
}

ExprPtr ExprNode::make_call(Builtin fn, std::vector<ExprPtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::call;
  n->fn = fn;
  n->children = std::move(args);
  return n;
}

namespace {

struct BuiltinInfo {
  Builtin fn;
  const char* name;
  std::size_t arity;
};

constexpr std::array<BuiltinInfo, 10> kBuiltins{{
    {Builtin::exp, "exp", 1},
    {Builtin::sin, "sin", 1},
    {Builtin::cos, "cos", 1},
    {Builtin::abs, "abs", 1},
    {Builtin::conj, "conj", 1},
    {Builtin::re, "re", 1},
    {Builtin::im, "im", 1},
    {Builtin::sqrt, "sqrt", 1},
    {Builtin::min, "min", 2},
    {Builtin::max, "max", 2},
}};

std::optional<Builtin> lookup_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return b.fn;
  }
  return std::nullopt;
}

bool is_constant_name(std::string_view name) { return name == "i" || name == "pi" || name == "e"; }

// Names that look like host variables (n, x1, x2, ...) get a more specific
// error than arbitrary unknown identifiers.
bool looks_like_variable(std::string_view name) {
  if (name == "n") return true;
  if (name.size() >= 2 && name[0] == 'x') {
    for (std::size_t k = 1; k < name.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
    }
    return true;
  }
  return false;
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok type;
  std::size_t pos;  // 1-based
  std::string text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < src_.size()) {
      const char c = src_[k];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++k;
        continue;
      }
      const std::size_t pos = k + 1;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(lex_number(k));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = k;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
        out.push_back({Tok::ident, pos, std::string(src_.substr(k, j - k))});
        k = j;
        continue;
      }
      Tok t;
      switch (c) {
        case '+': t = Tok::plus; break;
        case '-': t = Tok::minus; break;
        case '*': t = Tok::star; break;
        case '/': t = Tok::slash; break;
        case '^': t = Tok::caret; break;
        case '(': t = Tok::lparen; break;
        case ')': t = Tok::rparen; break;
        case ',': t = Tok::comma; break;
        default:
          throw ParseError(ParseErrorKind::lexical, pos, std::string("unexpected character '") + c + "'");
      }
      out.push_back({t, pos, std::string(1, c)});
      ++k;
    }
    out.push_back({Tok::end, src_.size() + 1, ""});
    return out;
  }

 private:
  Token lex_number(std::size_t& k) {
    const std::size_t start = k;
    auto digits = [&] {
      std::size_t n = 0;
      while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
        ++k;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (k < src_.size() && src_[k] == '.') {
      ++k;
      n += digits();
    }
    if (n == 0) throw ParseError(ParseErrorKind::lexical, start + 1, "malformed number");
    // Exponent suffix only when digits follow, so that "2e" stays "2" "e".
    if (k < src_.size() && (src_[k] == 'e' || src_[k] == 'E')) {
      std::size_t j = k + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        k = j;
        digits();
      }
    }
    Token t{Tok::number, start + 1, std::string(src_.substr(start, k - start))};
    const char* first = src_.data() + start;
    const char* last = src_.data() + k;
    auto [ptr, ec] = std::from_chars(first, last, t.value);
    if (ec != std::errc() || ptr != last) throw ParseError(ParseErrorKind::lexical, start + 1, "malformed number");
    return t;
  }

  std::string_view src_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::set<std::string, std::less<>>& vars) : toks_(std::move(toks)), vars_(vars) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (peek().type != Tok::end) fail(peek(), "unexpected token '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    if (t.type == Tok::end) throw ParseError(ParseErrorKind::syntax, t.pos, "unexpected end of input");
    throw ParseError(ParseErrorKind::syntax, t.pos, msg);
  }

  void expect(Tok type, const char* what) {
    if (peek().type != type) fail(peek(), std::string("expected ") + what);
    ++at_;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      const BinaryOp op = next().type == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      lhs = ExprNode::make_binary(op, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (peek().type == Tok::star || peek().type == Tok::slash) {
      const BinaryOp op = next().type == Tok::star ? BinaryOp::mul : BinaryOp::div;
      lhs = ExprNode::make_binary(op, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek().type == Tok::minus) {
      next();
      return ExprNode::make_negate(unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (peek().type == Tok::caret) {
      next();
      return ExprNode::make_binary(BinaryOp::pow, base, unary());
    }
    return base;
  }

  ExprPtr primary() {
    const Token& t = next();
    switch (t.type) {
      case Tok::number:
        return ExprNode::make_literal(t.value);
      case Tok::lparen: {
        ExprPtr inner = expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident:
        return identifier(t);
      default:
        --at_;
        fail(t, "unexpected token '" + t.text + "'");
    }
  }

  ExprPtr identifier(const Token& t) {
    if (peek().type == Tok::lparen) {
      auto fn = lookup_builtin(t.text);
      if (!fn) throw ParseError(ParseErrorKind::unknown_identifier, t.pos, "unknown function '" + t.text + "'");
      next();
      std::vector<ExprPtr> args;
      if (peek().type != Tok::rparen) {
        args.push_back(expr());
        while (peek().type == Tok::comma) {
          next();
          args.push_back(expr());
        }
      }
      expect(Tok::rparen, "')'");
      if (args.size() != builtin_arity(*fn)) {
        throw ParseError(ParseErrorKind::arity, t.pos,
                         t.text + " expects " + std::to_string(builtin_arity(*fn)) + " argument(s), got " +
                             std::to_string(args.size()));
      }
      return ExprNode::make_call(*fn, std::move(args));
    }
    if (is_constant_name(t.text)) return ExprNode::make_constant(t.text);
    if (vars_.count(t.text) != 0) return ExprNode::make_variable(t.text);
    if (lookup_builtin(t.text)) throw ParseError(ParseErrorKind::syntax, t.pos, "function '" + t.text + "' needs arguments");
    if (looks_like_variable(t.text)) {
      throw ParseError(ParseErrorKind::undeclared_variable, t.pos, "undeclared variable '" + t.text + "'");
    }
    throw ParseError(ParseErrorKind::unknown_identifier, t.pos, "unknown identifier '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const std::set<std::string, std::less<>>& vars_;
};

bool is_real(Complex z) { return z.imag() == 0.0; }

Complex integer_power(Complex base, long long k) {
  const bool invert = k < 0;
  unsigned long long m = invert ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Complex acc{1.0, 0.0};
  while (m != 0) {
    if (m & 1ULL) acc *= base;
    base *= base;
    m >>= 1;
  }
  if (invert) {
    if (acc == Complex{}) throw EvalError(EvalErrorKind::division_by_zero, "division by zero in negative power");
    acc = 1.0 / acc;
  }
  return acc;
}

// Principal branch a^b = exp(b log a); integer exponents are single-valued and
// computed by repeated squaring.
Complex principal_power(Complex a, Complex b) {
  if (is_real(b) && std::abs(b.real()) <= 1024.0 && std::nearbyint(b.real()) == b.real()) {
    return integer_power(a, static_cast<long long>(b.real()));
  }
  if (a == Complex{}) {
    if (b.real() > 0.0) return Complex{};
    throw EvalError(EvalErrorKind::domain, "0 raised to a power with non-positive real part");
  }
  if (is_real(a) && is_real(b) && a.real() > 0.0) return std::pow(a.real(), b.real());
  return std::exp(b * std::log(a));
}

Complex eval_node(const ExprNode& node, const Bindings& bindings) {
  Complex out;
  switch (node.kind) {
    case NodeKind::literal:
      out = node.number;
      break;
    case NodeKind::constant:
      if (node.name == "i") out = Complex{0.0, 1.0};
      else if (node.name == "pi") out = std::numbers::pi;
      else out = std::numbers::e;
      break;
    case NodeKind::variable: {
      auto it = bindings.find(node.name);
      if (it == bindings.end()) throw EvalError(EvalErrorKind::unbound_variable, "unbound variable '" + node.name + "'");
      out = it->second;
      break;
    }
    case NodeKind::unary_minus:
      out = -eval_node(*node.children[0], bindings);
      break;
    case NodeKind::binary: {
      const Complex a = eval_node(*node.children[0], bindings);
      const Complex b = eval_node(*node.children[1], bindings);
      switch (node.op) {
        case BinaryOp::add: out = a + b; break;
        case BinaryOp::sub: out = a - b; break;
        case BinaryOp::mul: out = a * b; break;
        case BinaryOp::div:
          if (b == Complex{}) throw EvalError(EvalErrorKind::division_by_zero, "division by zero");
          out = a / b;
          break;
        case BinaryOp::pow: out = principal_power(a, b); break;
      }
      break;
    }
    case NodeKind::call: {
      const Complex a = eval_node(*node.children[0], bindings);
      switch (node.fn) {
        case Builtin::exp: out = std::exp(a); break;
        case Builtin::sin: out = std::sin(a); break;
        case Builtin::cos: out = std::cos(a); break;
        case Builtin::abs: out = std::abs(a); break;
        case Builtin::conj: out = std::conj(a); break;
        case Builtin::re: out = a.real(); break;
        case Builtin::im: out = a.imag(); break;
        case Builtin::sqrt: out = std::sqrt(a); break;
        case Builtin::min:
        case Builtin::max: {
          const Complex b = eval_node(*node.children[1], bindings);
          if (!is_real(a) || !is_real(b)) {
            throw EvalError(EvalErrorKind::domain, std::string(builtin_name(node.fn)) + " requires real operands");
          }
          out = node.fn == Builtin::min ? std::min(a.real(), b.real()) : std::max(a.real(), b.real());
          break;
        }
      }
      break;
    }
  }
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
    throw EvalError(EvalErrorKind::domain, "non-finite intermediate result");
  }
  // Adding +0 clears negative zeros so branch cuts follow arg in (-pi, pi].
  return {out.real() + 0.0, out.imag() + 0.0};
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void collect_variables(const ExprNode& node, std::set<std::string>& out) {
  if (node.kind == NodeKind::variable) out.insert(node.name);
  for (const auto& c : node.children) collect_variables(*c, out);
}

}  // namespace

const char* builtin_name(Builtin fn) {
  for (const auto& b : kBuiltins) {
    if (b.fn == fn) return b.name;
  }
  return "?";
}

std::size_t builtin_arity(Builtin fn) {
  for (const auto& b : kBuiltins) {
    if (b.fn == fn) return b.arity;
  }
  return 0;
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::literal:
      if (a.number != b.number) return false;
      break;
    case NodeKind::constant:
    case NodeKind::variable:
      if (a.name != b.name) return false;
      break;
    case NodeKind::binary:
      if (a.op != b.op) return false;
      break;
    case NodeKind::call:
      if (a.fn != b.fn) return false;
      break;
    case NodeKind::unary_minus:
      break;
  }
  for (std::size_t k = 0; k < a.children.size(); ++k) {
    if (!same_tree(*a.children[k], *b.children[k])) return false;
  }
  return true;
}

std::string print_tree(const ExprNode& node) {
  switch (node.kind) {
    case NodeKind::literal:
      return format_number(node.number);
    case NodeKind::constant:
    case NodeKind::variable:
      return node.name;
    case NodeKind::unary_minus:
      return "(-" + print_tree(*node.children[0]) + ")";
    case NodeKind::binary:
      return "(" + print_tree(*node.children[0]) + " " + binary_symbol(node.op) + " " + print_tree(*node.children[1]) + ")";
    case NodeKind::call: {
      std::string s = std::string(builtin_name(node.fn)) + "(";
      for (std::size_t k = 0; k < node.children.size(); ++k) {
        if (k) s += ", ";
        s += print_tree(*node.children[k]);
      }
      return s + ")";
    }
  }
  return {};
}

Expression Expression::parse(std::string_view source, const std::set<std::string, std::less<>>& allowed_vars) {
  bool blank = true;
  for (char c : source) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw ParseError(ParseErrorKind::syntax, 1, "empty expression");
  Parser parser(Lexer(source).run(), allowed_vars);
  Expression e;
  e.source_ = std::string(source);
  e.root_ = parser.run();
  return e;
}

Expression Expression::from_tree(ExprPtr root) {
  Expression e;
  e.source_ = print_tree(*root);
  e.root_ = std::move(root);
  return e;
}

Complex Expression::evaluate(const Bindings& bindings) const { return eval_node(*root_, bindings); }

Complex Expression::evaluate_at(std::string_view var, Complex value) const {
  Bindings b;
  b.emplace(std::string(var), value);
  return evaluate(b);
}

std::string Expression::to_string() const { return print_tree(*root_); }

std::set<std::string> Expression::variables() const {
  std::set<std::string> out;
  collect_variables(*root_, out);
  return out;
}

std::set<std::string, std::less<>> coordinate_variables(std::size_t dim) {
  std::set<std::string, std::less<>> vars;
  for (std::size_t k = 1; k <= dim; ++k) vars.insert("x" + std::to_string(k));
  return vars;
}

}  // namespace normpar
