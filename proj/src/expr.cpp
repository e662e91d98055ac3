#include "shishkin/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "shishkin/error.hpp"

namespace shishkin {

namespace {

enum class Function { sin, cos, exp, ln, sqrt, abs };
enum class BinaryOp { add, sub, mul, div, pow };

constexpr std::array<std::pair<std::string_view, Function>, 6> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
    {"abs", Function::abs},
}};

std::string_view function_name(Function f) {
  for (const auto& [name, fn] : kFunctions) {
    if (fn == f) return name;
  }
  return "?";
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

struct Number {
  double value;
};
struct Variable {};
struct Negate {
  Expr operand;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  Function fn;
  Expr arg;
};

struct Expr::Node {
  std::variant<Number, Variable, Negate, Binary, Call> value;
};

class ExprBuilder {
 public:
  static Expr make(Expr::Node node) {
    return Expr(std::make_shared<const Expr::Node>(std::move(node)));
  }
};

Expr Expr::constant(double value) { return ExprBuilder::make({Number{value}}); }
Expr Expr::variable() { return ExprBuilder::make({Variable{}}); }

bool Expr::is_constant() const {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) return true;
        if constexpr (std::is_same_v<T, Variable>) return false;
        if constexpr (std::is_same_v<T, Negate>) return n.operand.is_constant();
        if constexpr (std::is_same_v<T, Binary>)
          return n.lhs.is_constant() && n.rhs.is_constant();
        if constexpr (std::is_same_v<T, Call>) return n.arg.is_constant();
      },
      node_->value);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& va = a.node_->value;
  const auto& vb = b.node_->value;
  if (va.index() != vb.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(vb);
        if constexpr (std::is_same_v<T, Number>) {
          // Bitwise-equal literals, so -0.0 and 0.0 differ like their printouts.
          return std::signbit(na.value) == std::signbit(nb.value) &&
                 na.value == nb.value;
        }
        if constexpr (std::is_same_v<T, Variable>) return true;
        if constexpr (std::is_same_v<T, Negate>) return na.operand == nb.operand;
        if constexpr (std::is_same_v<T, Binary>)
          return na.op == nb.op && na.lhs == nb.lhs && na.rhs == nb.rhs;
        if constexpr (std::is_same_v<T, Call>)
          return na.fn == nb.fn && na.arg == nb.arg;
      },
      va);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          if (std::signbit(n.value)) {
            out += "(-" + format_double(-n.value) + ")";
          } else {
            out += format_double(n.value);
          }
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += 'x';
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print(n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          out += '(';
          print(n.lhs, out);
          out += ' ';
          out += op_symbol(n.op);
          out += ' ';
          print(n.rhs, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Call>) {
          out += function_name(n.fn);
          out += '(';
          print(n.arg, out);
          out += ')';
        }
      },
      e.node().value);
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail();
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  // Tokens tried and rejected at expected_pos_.
  std::set<std::string> expected_;
  std::size_t expected_pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  void note_expected(std::string token) {
    if (pos_ != expected_pos_) {
      expected_.clear();
      expected_pos_ = pos_;
    }
    expected_.insert(std::move(token));
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    note_expected(std::string(1, c));
    return false;
  }

  [[noreturn]] void fail() {
    skip_ws();
    std::vector<std::string> expected;
    if (expected_pos_ == pos_) expected.assign(expected_.begin(), expected_.end());
    std::ostringstream msg;
    msg << "syntax error at offset " << pos_ << ": expected ";
    if (expected.size() == 1) {
      msg << "'" << expected.front() << "'";
    } else {
      msg << "one of ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        msg << (i ? ", " : "") << "'" << expected[i] << "'";
      }
    }
    msg << "; found ";
    if (pos_ >= src_.size()) {
      msg << "end of input";
    } else {
      msg << "'" << src_[pos_] << "'";
    }
    throw ParseError(msg.str(), pos_, std::move(expected));
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = ExprBuilder::make({Binary{BinaryOp::add, lhs, parse_term()}});
      } else if (accept('-')) {
        lhs = ExprBuilder::make({Binary{BinaryOp::sub, lhs, parse_term()}});
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = ExprBuilder::make({Binary{BinaryOp::mul, lhs, parse_unary()}});
      } else if (accept('/')) {
        lhs = ExprBuilder::make({Binary{BinaryOp::div, lhs, parse_unary()}});
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      Expr operand = parse_unary();
      // A negated literal is stored as a negative literal so that printed
      // constants such as "(-2)" read back as the same tree.
      if (const auto* num = std::get_if<Number>(&operand.node().value)) {
        return ExprBuilder::make({Number{-num->value}});
      }
      return ExprBuilder::make({Negate{std::move(operand)}});
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      return ExprBuilder::make({Binary{BinaryOp::pow, base, parse_unary()}});
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        return parse_number();
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        return parse_identifier();
      }
    }
    if (accept('(')) {
      Expr inner = parse_expr();
      if (!accept(')')) fail();
      return inner;
    }
    note_expected("number");
    note_expected("x");
    note_expected("function");
    fail();
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t d0 = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      return pos_ - d0;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      note_expected("digit");
      fail();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        note_expected("digit");
        fail();
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      pos_ = start;
      throw ParseError("number out of range at offset " + std::to_string(start),
                       start, {});
    }
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      note_expected("number");
      fail();
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();
    for (const auto& [fname, fn] : kFunctions) {
      if (fname == name) {
        if (!accept('(')) fail();
        Expr arg = parse_expr();
        if (!accept(')')) fail();
        return ExprBuilder::make({Call{fn, arg}});
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "' at offset " +
                         std::to_string(start),
                     start, {});
  }
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const std::string& what, const Expr& sub, double x) {
  throw DomainError(what + " in '" + to_string(sub) + "' at x = " + format_double(x));
}

double eval_at(const Expr& e, double x) {
  const double result = std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_at(n.operand, x);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double a = eval_at(n.lhs, x);
          const double b = eval_at(n.rhs, x);
          switch (n.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div:
              if (b == 0.0) domain_error("division by zero", e, x);
              return a / b;
            case BinaryOp::pow:
              if (a < 0.0 && std::trunc(b) != b) {
                domain_error("negative base with non-integer exponent", e, x);
              }
              if (a == 0.0 && b < 0.0) domain_error("division by zero", e, x);
              return std::pow(a, b);
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Call>) {
          const double a = eval_at(n.arg, x);
          switch (n.fn) {
            case Function::sin: return std::sin(a);
            case Function::cos: return std::cos(a);
            case Function::exp: return std::exp(a);
            case Function::ln:
              if (!(a > 0.0)) domain_error("ln of non-positive argument", e, x);
              return std::log(a);
            case Function::sqrt:
              if (a < 0.0) domain_error("sqrt of negative argument", e, x);
              return std::sqrt(a);
            case Function::abs: return std::fabs(a);
          }
          return 0.0;
        }
      },
      e.node().value);
  if (!std::isfinite(result)) domain_error("non-finite result", e, x);
  return result;
}

}  // namespace

double eval(const Expr& expr, double x) {
  if (!std::isfinite(x)) {
    throw DomainError("non-finite evaluation point x = " + format_double(x));
  }
  return eval_at(expr, x);
}

}  // namespace shishkin
