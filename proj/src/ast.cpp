#include <charconv>
#include <set>
#include <stdexcept>

#include "dsqif/lang.hpp"

namespace dsqif {

AexpPtr make_int(std::int64_t v) { return std::make_shared<const Aexp>(Aexp{IntLit{v}}); }
AexpPtr make_atom(std::string name) { return std::make_shared<const Aexp>(Aexp{AtomLit{std::move(name)}}); }
AexpPtr make_var(VariableId name) { return std::make_shared<const Aexp>(Aexp{VarRef{std::move(name)}}); }
AexpPtr make_arith(ArithOp op, AexpPtr lhs, AexpPtr rhs) {
  return std::make_shared<const Aexp>(Aexp{Arith{op, std::move(lhs), std::move(rhs)}});
}
BexpPtr make_bool(bool v) { return std::make_shared<const Bexp>(Bexp{BoolLit{v}}); }
BexpPtr make_compare(CompareOp op, AexpPtr lhs, AexpPtr rhs) {
  return std::make_shared<const Bexp>(Bexp{Compare{op, std::move(lhs), std::move(rhs)}});
}
BexpPtr make_not(BexpPtr operand) { return std::make_shared<const Bexp>(Bexp{Not{std::move(operand)}}); }
BexpPtr make_logic(LogicOp op, BexpPtr lhs, BexpPtr rhs) {
  return std::make_shared<const Bexp>(Bexp{Logic{op, std::move(lhs), std::move(rhs)}});
}
CommandPtr make_skip() { return std::make_shared<const Command>(Command{Skip{}}); }
CommandPtr make_assign(VariableId var, AexpPtr value) {
  return std::make_shared<const Command>(Command{Assign{std::move(var), std::move(value)}});
}
CommandPtr make_seq(CommandPtr first, CommandPtr second) {
  return std::make_shared<const Command>(Command{Seq{std::move(first), std::move(second)}});
}
CommandPtr make_if(BexpPtr cond, CommandPtr then_branch, CommandPtr else_branch) {
  return std::make_shared<const Command>(Command{If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
CommandPtr make_while(BexpPtr cond, CommandPtr body) {
  return std::make_shared<const Command>(Command{While{std::move(cond), std::move(body)}});
}
CommandPtr make_choice(double prob, CommandPtr left, CommandPtr right) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("choice probability outside [0, 1]");
  return std::make_shared<const Command>(Command{Choice{prob, std::move(left), std::move(right)}});
}

// ---------------------------------------------------------------------------
// Printing

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

int precedence(ArithOp op) { return op == ArithOp::kMul ? 2 : 1; }
int precedence(LogicOp op) { return op == LogicOp::kAnd ? 2 : 1; }
constexpr int kAtomic = 3;

int precedence(const Aexp& a) {
  if (const auto* ar = std::get_if<Arith>(&a.node)) return precedence(ar->op);
  return kAtomic;
}

int precedence(const Bexp& b) {
  if (const auto* l = std::get_if<Logic>(&b.node)) return precedence(l->op);
  return kAtomic;
}

std::string aexp_at(const Aexp& a, int min_prec);
std::string bexp_at(const Bexp& b, int min_prec);

std::string aexp_at(const Aexp& a, int min_prec) {
  std::string s = std::visit(Overloaded{
                                 [](const IntLit& n) { return std::to_string(n.value); },
                                 [](const AtomLit& n) { return n.name; },
                                 [](const VarRef& n) { return n.name; },
                                 [](const Arith& n) {
                                   const int p = precedence(n.op);
                                   const char* sym = n.op == ArithOp::kAdd ? " + " : n.op == ArithOp::kSub ? " - " : " * ";
                                   return aexp_at(*n.lhs, p) + sym + aexp_at(*n.rhs, p + 1);
                                 },
                             },
                             a.node);
  return precedence(a) < min_prec ? "(" + s + ")" : s;
}

const char* compare_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return " = ";
    case CompareOp::kNe:
      return " != ";
    case CompareOp::kLt:
      return " < ";
    case CompareOp::kLe:
      return " <= ";
  }
  return " ? ";
}

std::string bexp_at(const Bexp& b, int min_prec) {
  std::string s = std::visit(Overloaded{
                                 [](const BoolLit& n) { return std::string(n.value ? "true" : "false"); },
                                 [](const Compare& n) {
                                   return aexp_at(*n.lhs, 0) + compare_symbol(n.op) + aexp_at(*n.rhs, 0);
                                 },
                                 [](const Not& n) { return "not " + bexp_at(*n.operand, kAtomic); },
                                 [](const Logic& n) {
                                   const int p = precedence(n.op);
                                   return bexp_at(*n.lhs, p) + (n.op == LogicOp::kAnd ? " and " : " or ") +
                                          bexp_at(*n.rhs, p + 1);
                                 },
                             },
                             b.node);
  return precedence(b) < min_prec ? "(" + s + ")" : s;
}

std::string format_probability(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

void print_command(const Command& c, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::visit(Overloaded{
                 [&](const Skip&) { out += pad + "skip"; },
                 [&](const Assign& n) { out += pad + n.var + " := " + print_aexp(*n.value); },
                 [&](const Seq& n) {
                   print_command(*n.first, indent, out);
                   out += ";\n";
                   print_command(*n.second, indent, out);
                 },
                 [&](const If& n) {
                   out += pad + "if " + print_bexp(*n.cond) + " then\n";
                   print_command(*n.then_branch, indent + 1, out);
                   out += "\n" + pad + "else\n";
                   print_command(*n.else_branch, indent + 1, out);
                   out += "\n" + pad + "end";
                 },
                 [&](const While& n) {
                   out += pad + "while " + print_bexp(*n.cond) + " do\n";
                   print_command(*n.body, indent + 1, out);
                   out += "\n" + pad + "end";
                 },
                 [&](const Choice& n) {
                   out += pad + "{\n";
                   print_command(*n.left, indent + 1, out);
                   out += "\n" + pad + "} [" + format_probability(n.prob) + "] {\n";
                   print_command(*n.right, indent + 1, out);
                   out += "\n" + pad + "}";
                 },
             },
             c.node);
}

void collect_aexp(const Aexp& a, std::set<VariableId>& out) {
  if (const auto* v = std::get_if<VarRef>(&a.node)) out.insert(v->name);
  if (const auto* ar = std::get_if<Arith>(&a.node)) {
    collect_aexp(*ar->lhs, out);
    collect_aexp(*ar->rhs, out);
  }
}

void collect_bexp(const Bexp& b, std::set<VariableId>& out) {
  std::visit(Overloaded{
                 [](const BoolLit&) {},
                 [&](const Compare& n) {
                   collect_aexp(*n.lhs, out);
                   collect_aexp(*n.rhs, out);
                 },
                 [&](const Not& n) { collect_bexp(*n.operand, out); },
                 [&](const Logic& n) {
                   collect_bexp(*n.lhs, out);
                   collect_bexp(*n.rhs, out);
                 },
             },
             b.node);
}

void collect_command(const Command& c, std::set<VariableId>& out) {
  std::visit(Overloaded{
                 [](const Skip&) {},
                 [&](const Assign& n) {
                   out.insert(n.var);
                   collect_aexp(*n.value, out);
                 },
                 [&](const Seq& n) {
                   collect_command(*n.first, out);
                   collect_command(*n.second, out);
                 },
                 [&](const If& n) {
                   collect_bexp(*n.cond, out);
                   collect_command(*n.then_branch, out);
                   collect_command(*n.else_branch, out);
                 },
                 [&](const While& n) {
                   collect_bexp(*n.cond, out);
                   collect_command(*n.body, out);
                 },
                 [&](const Choice& n) {
                   collect_command(*n.left, out);
                   collect_command(*n.right, out);
                 },
             },
             c.node);
}

}  // namespace

std::string print_aexp(const Aexp& a) { return aexp_at(a, 0); }
std::string print_bexp(const Bexp& b) { return bexp_at(b, 0); }

std::string print_program(const Command& c) {
  std::string out;
  print_command(c, 0, out);
  return out + "\n";
}

std::vector<VariableId> program_variables(const Command& c) {
  std::set<VariableId> vars;
  collect_command(c, vars);
  return {vars.begin(), vars.end()};
}

}  // namespace dsqif
