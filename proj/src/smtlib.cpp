#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "nucad/encode.hpp"
#include "nucad/errors.hpp"
#include "nucad/frontend.hpp"

namespace nucad {

namespace {

struct SExpr {
  bool list = false;
  std::string text;
  bool symbol = false;  // atom that is not a literal
  int line = 0, column = 0;
  std::vector<SExpr> items;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    for (skip(); pos_ < text_.size(); skip()) out.push_back(read());
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = column_;
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      advance();
      e.list = true;
      for (skip(); pos_ < text_.size() && text_[pos_] != ')'; skip()) e.items.push_back(read());
      if (pos_ >= text_.size()) throw ParseError("unterminated list", e.line, e.column);
      advance();
      return e;
    }
    if (c == '|') {
      advance();
      while (pos_ < text_.size() && text_[pos_] != '|') {
        e.text += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", e.line, e.column);
      advance();
      e.symbol = true;
      return e;
    }
    if (c == '"') {
      advance();
      while (pos_ < text_.size()) {
        if (text_[pos_] == '"') {
          advance();
          if (pos_ >= text_.size() || text_[pos_] != '"') break;
        }
        e.text += text_[pos_];
        advance();
      }
      return e;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '|' || d == '"')
        break;
      e.text += d;
      advance();
    }
    e.symbol = !std::isdigit(static_cast<unsigned char>(e.text[0])) &&
               !(e.text.size() > 1 && e.text[0] == '-' && std::isdigit(static_cast<unsigned char>(e.text[1])));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, column_ = 1;
};

[[noreturn]] void fail_at(const SExpr& e, const std::string& msg) { throw ParseError(msg, e.line, e.column); }

std::optional<Rational> parse_number(const std::string& s) {
  std::size_t k = 0;
  bool neg = false;
  if (k < s.size() && s[k] == '-') {
    neg = true;
    ++k;
  }
  if (k >= s.size()) return std::nullopt;
  Integer num = 0, den = 1;
  bool dot = false, digits = false;
  for (; k < s.size(); ++k) {
    char c = s[k];
    if (c == '.' && !dot) {
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    digits = true;
    num = num * 10 + (c - '0');
    if (dot) den *= 10;
  }
  if (!digits) return std::nullopt;
  Rational q = make_rational(num, den);
  return neg ? Rational(-q) : q;
}

struct Term {
  bool boolean = false;
  Formula f;
  Polynomial p;
};

const std::set<std::string> kTranscendental = {"sin", "cos", "tan", "exp", "log", "sqrt", "arcsin",
                                               "arccos", "arctan", "pi", "abs", "mod", "div"};

class Interpreter {
 public:
  ProblemInstance run(const std::vector<SExpr>& script) {
    std::vector<Formula> asserts;
    std::optional<ProblemMode> command;
    for (const auto& cmd : script) {
      if (!cmd.list || cmd.items.empty() || !cmd.items[0].symbol) fail_at(cmd, "expected a command");
      const std::string& head = cmd.items[0].text;
      if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "get-model" ||
          head == "get-value" || head == "exit" || head == "echo" || head == "get-info") {
        continue;
      } else if (head == "declare-const") {
        if (cmd.items.size() != 3) fail_at(cmd, "declare-const expects a name and a sort");
        declare(cmd.items[1], cmd.items[2]);
      } else if (head == "declare-fun") {
        if (cmd.items.size() != 4) fail_at(cmd, "declare-fun expects a name, argument sorts and a sort");
        if (!cmd.items[2].list) fail_at(cmd.items[2], "expected an argument sort list");
        if (!cmd.items[2].items.empty()) throw UnsupportedError("uninterpreted functions are not supported");
        declare(cmd.items[1], cmd.items[3]);
      } else if (head == "assert") {
        if (cmd.items.size() != 2) fail_at(cmd, "assert expects one term");
        Term t = term(cmd.items[1]);
        if (!t.boolean) fail_at(cmd.items[1], "assertion is not Boolean");
        asserts.push_back(t.f);
      } else if (head == "check-sat") {
        command = ProblemMode::Sat;
      } else if (head == "eliminate-quantifiers") {
        command = ProblemMode::Qe;
      } else if (head == "push" || head == "pop" || head == "define-fun" || head == "define-sort" ||
                 head == "declare-sort" || head == "get-unsat-core" || head == "check-sat-assuming") {
        throw UnsupportedError("command '" + head + "' is not supported");
      } else {
        fail_at(cmd.items[0], "unknown command '" + head + "'");
      }
      if (command && head == "eliminate-quantifiers" && declared_ == 0)
        fail_at(cmd, "eliminate-quantifiers needs at least one declared variable");
    }
    ProblemInstance out;
    out.vars = vars_;
    out.declared = declared_;
    out.assertion = Formula::conjunction(std::move(asserts));
    out.quantified = !out.assertion.quantifier_free();
    out.mode = command.value_or(ProblemMode::Sat);
    if (out.mode == ProblemMode::Sat && declared_ == 0 && out.quantified) out.mode = ProblemMode::Decide;
    return out;
  }

 private:
  void declare(const SExpr& name, const SExpr& sort) {
    if (name.list || !name.symbol) fail_at(name, "expected a symbol");
    check_sort(sort);
    if (declared_ != vars_.size()) fail_at(name, "declarations must precede assertions with binders");
    if (vars_.level_of(name.text)) fail_at(name, "symbol '" + name.text + "' already declared");
    vars_.add(name.text);
    ++declared_;
  }

  void check_sort(const SExpr& sort) {
    if (sort.list || !sort.symbol) fail_at(sort, "expected a sort");
    if (sort.text == "Real") return;
    if (sort.text == "Int" || sort.text == "Bool") throw UnsupportedError("sort " + sort.text + " is not supported");
    fail_at(sort, "unknown sort '" + sort.text + "'");
  }

  std::optional<Term> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    for (std::size_t l = 1; l <= declared_; ++l)
      if (vars_.name(l) == name) return Term{false, {}, Polynomial::variable(l)};
    return std::nullopt;
  }

  bool in_scope(std::size_t level) const {
    for (const auto& sc : scopes_)
      for (const auto& [n, t] : sc)
        if (!t.boolean && t.p == Polynomial::variable(level)) return true;
    return false;
  }

  std::size_t bind(const std::string& name) {
    if (auto l = vars_.level_of(name); l && *l > declared_ && !in_scope(*l)) return *l;
    if (!vars_.level_of(name)) return vars_.add(name);
    for (int k = 1;; ++k) {
      std::string n = name + "_" + std::to_string(k);
      if (auto l = vars_.level_of(n)) {
        if (*l > declared_ && !in_scope(*l)) return *l;
        continue;
      }
      return vars_.add(n);
    }
  }

  Polynomial real(const SExpr& e) {
    Term t = term(e);
    if (t.boolean) fail_at(e, "expected a real term");
    return t.p;
  }

  Formula boolean(const SExpr& e) {
    Term t = term(e);
    if (!t.boolean) fail_at(e, "expected a Boolean term");
    return t.f;
  }

  Term term(const SExpr& e) {
    if (!e.list) {
      if (!e.symbol) {
        auto q = parse_number(e.text);
        if (!q) fail_at(e, "malformed number '" + e.text + "'");
        return Term{false, {}, Polynomial::constant(*q)};
      }
      if (e.text == "true") return Term{true, Formula::top(), {}};
      if (e.text == "false") return Term{true, Formula::bottom(), {}};
      if (auto t = lookup(e.text)) return *t;
      if (kTranscendental.count(e.text)) throw UnsupportedError("'" + e.text + "' is not polynomial");
      fail_at(e, "unknown symbol '" + e.text + "'");
    }
    if (e.items.empty()) fail_at(e, "empty term");
    const SExpr& h = e.items[0];
    if (h.list || !h.symbol) fail_at(h, "expected an operator");
    const std::string& op = h.text;
    std::vector<SExpr> args(e.items.begin() + 1, e.items.end());
    auto arity = [&](std::size_t lo) {
      if (args.size() < lo) fail_at(e, "'" + op + "' expects at least " + std::to_string(lo) + " arguments");
    };

    if (op == "exists" || op == "forall") return quantifier(e, op == "exists" ? Quantifier::Exists : Quantifier::Forall);
    if (op == "let") return let(e);
    if (op == "and" || op == "or") {
      std::vector<Formula> fs;
      for (const auto& a : args) fs.push_back(boolean(a));
      return Term{true, op == "and" ? Formula::conjunction(std::move(fs)) : Formula::disjunction(std::move(fs)), {}};
    }
    if (op == "not") {
      if (args.size() != 1) fail_at(e, "'not' expects one argument");
      return Term{true, Formula::negation(boolean(args[0])), {}};
    }
    if (op == "=>") {
      arity(2);
      Formula f = boolean(args.back());
      for (std::size_t k = args.size() - 1; k-- > 0;)
        f = Formula::disjunction({Formula::negation(boolean(args[k])), f});
      return Term{true, f, {}};
    }
    if (op == "=" || op == "<" || op == "<=" || op == ">" || op == ">=" || op == "distinct") {
      arity(2);
      std::vector<Term> ts;
      for (const auto& a : args) ts.push_back(term(a));
      bool boolean_args = ts[0].boolean;
      for (std::size_t k = 0; k < ts.size(); ++k)
        if (ts[k].boolean != boolean_args) fail_at(args[k], "sort mismatch in '" + op + "'");
      if (boolean_args) {
        if (op != "=") throw UnsupportedError("'" + op + "' over Booleans is not supported");
        std::vector<Formula> fs;
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
          const Formula &a = ts[k].f, &b = ts[k + 1].f;
          fs.push_back(Formula::disjunction({Formula::conjunction({a, b}),
                                             Formula::conjunction({Formula::negation(a), Formula::negation(b)})}));
        }
        return Term{true, Formula::conjunction(std::move(fs)), {}};
      }
      std::vector<Formula> fs;
      if (op == "distinct") {
        for (std::size_t a = 0; a < ts.size(); ++a)
          for (std::size_t b = a + 1; b < ts.size(); ++b) fs.push_back(Formula::atom(ts[a].p - ts[b].p, Relation::NE));
      } else {
        Relation rel = op == "=" ? Relation::EQ : op == "<" ? Relation::LT : op == "<=" ? Relation::LE
                     : op == ">" ? Relation::GT : Relation::GE;
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) fs.push_back(Formula::atom(ts[k].p - ts[k + 1].p, rel));
      }
      return Term{true, Formula::conjunction(std::move(fs)), {}};
    }
    if (op == "+" || op == "*") {
      arity(1);
      Polynomial p = real(args[0]);
      for (std::size_t k = 1; k < args.size(); ++k) {
        if (op == "+")
          p += real(args[k]);
        else
          p = p * real(args[k]);
      }
      return Term{false, {}, p};
    }
    if (op == "-") {
      arity(1);
      Polynomial p = real(args[0]);
      if (args.size() == 1) return Term{false, {}, -p};
      for (std::size_t k = 1; k < args.size(); ++k) p -= real(args[k]);
      return Term{false, {}, p};
    }
    if (op == "/") {
      arity(2);
      Polynomial p = real(args[0]);
      for (std::size_t k = 1; k < args.size(); ++k) {
        Polynomial d = real(args[k]);
        if (!d.is_constant()) throw UnsupportedError("division by a non-constant term is not polynomial");
        Rational c = d.constant_value();
        if (sgn(c) == 0) throw UnsupportedError("division by zero");
        p *= Rational(1 / c);
      }
      return Term{false, {}, p};
    }
    if (op == "to_real") {
      if (args.size() != 1) fail_at(e, "'to_real' expects one argument");
      return Term{false, {}, real(args[0])};
    }
    if (op == "ite" || op == "xor" || kTranscendental.count(op))
      throw UnsupportedError("'" + op + "' is not supported");
    if (lookup(op)) fail_at(h, "'" + op + "' is not a function");
    throw UnsupportedError("unknown function '" + op + "'");
  }

  Term quantifier(const SExpr& e, Quantifier q) {
    if (e.items.size() != 3 || !e.items[1].list || e.items[1].items.empty())
      fail_at(e, "binder expects a variable list and a body");
    std::vector<std::size_t> levels;
    std::map<std::string, Term> scope;
    for (const auto& b : e.items[1].items) {
      if (!b.list || b.items.size() != 2 || !b.items[0].symbol) fail_at(b, "expected (name sort)");
      check_sort(b.items[1]);
      if (scope.count(b.items[0].text)) fail_at(b, "variable bound twice in one binder");
      std::size_t l = bind(b.items[0].text);
      levels.push_back(l);
      scope[b.items[0].text] = Term{false, {}, Polynomial::variable(l)};
      scopes_.push_back({{b.items[0].text, scope[b.items[0].text]}});  // reserve the level while binding
    }
    for (std::size_t k = 0; k < levels.size(); ++k) scopes_.pop_back();
    scopes_.push_back(std::move(scope));
    Formula body = boolean(e.items[2]);
    scopes_.pop_back();
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) body = Formula::quantified(q, *it, body);
    return Term{true, body, {}};
  }

  Term let(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].list) fail_at(e, "let expects bindings and a body");
    std::map<std::string, Term> scope;
    for (const auto& b : e.items[1].items) {
      if (!b.list || b.items.size() != 2 || !b.items[0].symbol) fail_at(b, "expected (name term)");
      scope[b.items[0].text] = term(b.items[1]);
    }
    scopes_.push_back(std::move(scope));
    Term body = term(e.items[2]);
    scopes_.pop_back();
    return body;
  }

  VarOrder vars_;
  std::size_t declared_ = 0;
  std::vector<std::map<std::string, Term>> scopes_;
};

bool simple_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
  });
}

std::string quote(const std::string& s) { return simple_symbol(s) ? s : "|" + s + "|"; }

VarOrder quoted(const VarOrder& vars) {
  std::vector<std::string> names;
  for (std::size_t l = 1; l <= vars.size(); ++l) names.push_back(quote(vars.name(l)));
  return VarOrder(names);
}

void print_formula(const Formula& f, const VarOrder& vars, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Atom: {
      const Constraint& c = f.constraint();
      std::string lhs = polynomial_smtlib(c.lhs, vars);
      if (c.rel == Relation::NE)
        out += "(distinct " + lhs + " 0)";
      else
        out += relation_smtlib(c.rel, lhs, "0");
      return;
    }
    case K::Not:
    case K::And:
    case K::Or:
      out += f.kind() == K::Not ? "(not" : f.kind() == K::And ? "(and" : "(or";
      for (const auto& c : f.children()) {
        out += ' ';
        print_formula(c, vars, out);
      }
      out += ')';
      return;
    case K::Exists:
    case K::Forall:
      out += f.kind() == K::Exists ? "(exists ((" : "(forall ((";
      out += vars.name(f.bound_level()) + " Real)) ";
      print_formula(f.children()[0], vars, out);
      out += ')';
      return;
  }
}

void degree_weights(const Formula& f, std::vector<std::uint64_t>& w) {
  if (f.is_atom()) {
    const Polynomial& p = f.constraint().lhs;
    for (std::size_t l = 1; l <= w.size(); ++l) w[l - 1] += p.degree(l);
    return;
  }
  for (const auto& c : f.children()) degree_weights(c, w);
}

Formula rename_formula(const Formula& f, const std::vector<std::size_t>& table) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::Atom: return Formula::atom(rename_variables(f.constraint().lhs, table), f.constraint().rel);
    case K::Not: return Formula::negation(rename_formula(f.children()[0], table));
    case K::And:
    case K::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(rename_formula(c, table));
      return f.kind() == K::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case K::Exists:
    case K::Forall:
      return Formula::quantified(f.kind() == K::Exists ? Quantifier::Exists : Quantifier::Forall,
                                 table[f.bound_level() - 1], rename_formula(f.children()[0], table));
  }
  return f;
}

}  // namespace

bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
  return a.quantified == b.quantified && a.vars == b.vars && a.declared == b.declared &&
         a.assertion == b.assertion && a.mode == b.mode;
}

ProblemInstance parse_smtlib(std::string_view text) {
  Reader reader(text);
  return Interpreter().run(reader.read_all());
}

std::string formula_smtlib(const Formula& f, const VarOrder& vars) {
  std::string out;
  print_formula(f, quoted(vars), out);
  return out;
}

std::string print_smtlib(const ProblemInstance& p) {
  std::string out = p.quantified ? "(set-logic NRA)\n" : "(set-logic QF_NRA)\n";
  for (std::size_t l = 1; l <= p.declared; ++l) out += "(declare-const " + quote(p.vars.name(l)) + " Real)\n";
  if (p.assertion.kind() != Formula::Kind::True) out += "(assert " + formula_smtlib(p.assertion, p.vars) + ")\n";
  out += p.mode == ProblemMode::Qe ? "(eliminate-quantifiers)\n" : "(check-sat)\n";
  return out;
}

PrenexFormula prepare(const ProblemInstance& p, VarOrdering order) {
  if (order == VarOrdering::Input || p.declared < 2) return to_prenex(p.assertion, p.vars);
  std::vector<std::uint64_t> w(p.vars.size(), 0);
  degree_weights(p.assertion, w);
  std::vector<std::size_t> perm(p.declared);
  std::iota(perm.begin(), perm.end(), 1);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return w[a - 1] < w[b - 1]; });
  std::vector<std::size_t> table(p.vars.size());
  std::vector<std::string> names(p.vars.size());
  for (std::size_t k = 0; k < p.vars.size(); ++k) table[k] = k + 1;
  for (std::size_t k = 0; k < perm.size(); ++k) table[perm[k] - 1] = k + 1;
  for (std::size_t k = 0; k < p.vars.size(); ++k) names[table[k] - 1] = p.vars.name(k + 1);
  return to_prenex(rename_formula(p.assertion, table), VarOrder(names));
}

}  // namespace nucad
