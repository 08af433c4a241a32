#pragma once

// A small arithmetic expression language for scenario files:
//   + - * / ^, unary minus, parentheses, numbers, named variables,
//   named constants, and exp log sqrt abs sin cos tan cot sinh cosh tanh
//   asin acos atan (one argument), pow min max (two arguments).
// Expressions compile to a postfix program; nothing is evaluated by a host
// interpreter.

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hkit/errors.hpp"

namespace hkit {

class Expression {
 public:
  Expression() = default;

  // `line`/`column` locate the expression text in its source file; parse
  // errors report positions relative to that origin.
  static Expression parse(std::string_view text, const std::vector<std::string>& variables,
                          const std::map<std::string, double>& constants = {}, int line = 1, int column = 1) {
    Parser p{text, variables, constants, line, column, 0, {}, 0, 0};
    Expression e;
    e.text_ = std::string(text);
    e.variables_ = variables;
    e.code_ = p.run();
    e.used_.assign(variables.size(), false);
    for (const Op& op : e.code_)
      if (op.kind == Op::Var) e.used_[op.index] = true;
    return e;
  }

  static Expression constant(double v) {
    Expression e;
    e.text_ = std::to_string(v);
    e.code_.push_back({Op::Num, v, 0});
    return e;
  }

  bool empty() const { return code_.empty(); }
  const std::string& text() const { return text_; }

  bool uses(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == name) return used_[i];
    return false;
  }

  double eval(std::span<const double> vars) const {
    double stack[64];
    int top = -1;
    for (const Op& op : code_) {
      switch (op.kind) {
        case Op::Num: stack[++top] = op.value; break;
        case Op::Var: stack[++top] = vars[op.index]; break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::Add: --top; stack[top] += stack[top + 1]; break;
        case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
        case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
        case Op::Div: --top; stack[top] /= stack[top + 1]; break;
        case Op::Pow: --top; stack[top] = power(stack[top], stack[top + 1]); break;
        case Op::Fn1: stack[top] = apply1(op.index, stack[top]); break;
        case Op::Fn2: --top; stack[top] = apply2(op.index, stack[top], stack[top + 1]); break;
      }
    }
    return stack[top];
  }

  double operator()() const { return eval({}); }
  double operator()(double x) const { return eval(std::span<const double>(&x, 1)); }
  double operator()(double x, double y) const {
    const double v[2] = {x, y};
    return eval(v);
  }

 private:
  struct Op {
    enum Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Fn1, Fn2 } kind;
    double value = 0.0;
    std::size_t index = 0;
  };

  static double power(double x, double y) {
    if (y == 2.0) return x * x;
    return std::pow(x, y);
  }

  static constexpr const char* kFn1[] = {"exp",  "log",  "sqrt", "abs",  "sin",  "cos", "tan",
                                         "cot",  "sinh", "cosh", "tanh", "asin", "acos", "atan"};
  static constexpr const char* kFn2[] = {"pow", "min", "max"};

  static double apply1(std::size_t f, double x) {
    switch (f) {
      case 0: return std::exp(x);
      case 1: return std::log(x);
      case 2: return std::sqrt(x);
      case 3: return std::abs(x);
      case 4: return std::sin(x);
      case 5: return std::cos(x);
      case 6: return std::tan(x);
      case 7: return 1.0 / std::tan(x);
      case 8: return std::sinh(x);
      case 9: return std::cosh(x);
      case 10: return std::tanh(x);
      case 11: return std::asin(x);
      case 12: return std::acos(x);
      case 13: return std::atan(x);
    }
    return NAN;
  }
  static double apply2(std::size_t f, double x, double y) {
    switch (f) {
      case 0: return std::pow(x, y);
      case 1: return std::min(x, y);
      case 2: return std::max(x, y);
    }
    return NAN;
  }

  struct Parser {
    std::string_view src;
    const std::vector<std::string>& vars;
    const std::map<std::string, double>& consts;
    int line, column;
    std::size_t pos = 0;
    std::vector<Op> out;
    int depth = 0, max_depth = 0;

    [[noreturn]] void fail(const std::string& msg) const {
      throw ParseError(line, column + static_cast<int>(pos), msg + " in expression '" + std::string(src) + "'");
    }
    void skip() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < src.size() && src[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    void push(Op op, int delta) {
      out.push_back(op);
      depth += delta;
      max_depth = std::max(max_depth, depth);
      if (max_depth > 60) fail("expression too deeply nested");
    }

    std::vector<Op> run() {
      skip();
      if (pos == src.size()) fail("empty expression");
      expr();
      skip();
      if (pos != src.size()) fail(std::string("unexpected '") + src[pos] + "'");
      return std::move(out);
    }

    void expr() {
      term();
      for (;;) {
        if (eat('+')) {
          term();
          push({Op::Add}, -1);
        } else if (eat('-')) {
          term();
          push({Op::Sub}, -1);
        } else {
          return;
        }
      }
    }
    void term() {
      unary();
      for (;;) {
        if (eat('*')) {
          unary();
          push({Op::Mul}, -1);
        } else if (eat('/')) {
          unary();
          push({Op::Div}, -1);
        } else {
          return;
        }
      }
    }
    void unary() {
      if (eat('-')) {
        unary();
        push({Op::Neg}, 0);
      } else if (eat('+')) {
        unary();
      } else {
        power_expr();
      }
    }
    void power_expr() {
      primary();
      if (eat('^')) {
        unary();
        push({Op::Pow}, -1);
      }
    }
    void primary() {
      skip();
      if (pos >= src.size()) fail("unexpected end");
      const char c = src[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::string rest(src.substr(pos));
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(rest, &used);
        } catch (const std::exception&) {
          fail("bad number");
        }
        pos += used;
        push({Op::Num, v}, 1);
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) ++pos;
        const std::string name(src.substr(start, pos - start));
        if (eat('(')) {
          call(name, start);
          return;
        }
        for (std::size_t i = 0; i < vars.size(); ++i)
          if (vars[i] == name) {
            push({Op::Var, 0.0, i}, 1);
            return;
          }
        if (auto it = consts.find(name); it != consts.end()) {
          push({Op::Num, it->second}, 1);
          return;
        }
        if (name == "pi") {
          push({Op::Num, std::numbers::pi}, 1);
          return;
        }
        if (name == "e") {
          push({Op::Num, std::numbers::e}, 1);
          return;
        }
        pos = start;
        fail("unknown name '" + name + "'");
      }
      if (eat('(')) {
        expr();
        if (!eat(')')) fail("missing ')'");
        return;
      }
      fail(std::string("unexpected '") + c + "'");
    }
    void call(const std::string& name, std::size_t start) {
      for (std::size_t i = 0; i < std::size(kFn1); ++i)
        if (name == kFn1[i]) {
          expr();
          if (!eat(')')) fail("missing ')' after argument of " + name);
          push({Op::Fn1, 0.0, i}, 0);
          return;
        }
      for (std::size_t i = 0; i < std::size(kFn2); ++i)
        if (name == kFn2[i]) {
          expr();
          if (!eat(',')) fail(name + " takes two arguments");
          expr();
          if (!eat(')')) fail("missing ')' after arguments of " + name);
          push({Op::Fn2, 0.0, i}, -1);
          return;
        }
      pos = start;
      fail("unknown function '" + name + "'");
    }
  };

  std::string text_;
  std::vector<std::string> variables_;
  std::vector<bool> used_;
  std::vector<Op> code_;
};

}  // namespace hkit
