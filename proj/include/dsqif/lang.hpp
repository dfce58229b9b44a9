#pragma once

// A while-language with probabilistic choice.
//
//   c ::= skip | x := a | c ; c | if b then c else c end
//       | while b do c end | { c } [ p ] { c }
//
// Lowercase-initial identifiers are variables, uppercase-initial ones are
// atoms. `;` is right-associative. `#` starts a comment.
//
// Programs run either on a concrete state (exec_concrete, with sampled
// probabilistic choice) or on a mass function over the program's frame
// (exec_lifted).

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "dsqif/belief.hpp"

namespace dsqif {

enum class ArithOp { kAdd, kSub, kMul };
enum class CompareOp { kEq, kNe, kLt, kLe };
enum class LogicOp { kAnd, kOr };

struct Aexp;
struct Bexp;
struct Command;
using AexpPtr = std::shared_ptr<const Aexp>;
using BexpPtr = std::shared_ptr<const Bexp>;
using CommandPtr = std::shared_ptr<const Command>;

struct IntLit {
  std::int64_t value;
};
struct AtomLit {
  std::string name;
};
struct VarRef {
  VariableId name;
};
struct Arith {
  ArithOp op;
  AexpPtr lhs, rhs;
};
struct Aexp {
  std::variant<IntLit, AtomLit, VarRef, Arith> node;
};

struct BoolLit {
  bool value;
};
struct Compare {
  CompareOp op;
  AexpPtr lhs, rhs;
};
struct Not {
  BexpPtr operand;
};
struct Logic {
  LogicOp op;
  BexpPtr lhs, rhs;
};
struct Bexp {
  std::variant<BoolLit, Compare, Not, Logic> node;
};

struct Skip {};
struct Assign {
  VariableId var;
  AexpPtr value;
};
struct Seq {
  CommandPtr first, second;
};
struct If {
  BexpPtr cond;
  CommandPtr then_branch, else_branch;
};
struct While {
  BexpPtr cond;
  CommandPtr body;
};
struct Choice {
  double prob;  // of the left branch
  CommandPtr left, right;
};
struct Command {
  std::variant<Skip, Assign, Seq, If, While, Choice> node;
};

// Convenience constructors.
AexpPtr make_int(std::int64_t v);
AexpPtr make_atom(std::string name);
AexpPtr make_var(VariableId name);
AexpPtr make_arith(ArithOp op, AexpPtr lhs, AexpPtr rhs);
BexpPtr make_bool(bool v);
BexpPtr make_compare(CompareOp op, AexpPtr lhs, AexpPtr rhs);
BexpPtr make_not(BexpPtr operand);
BexpPtr make_logic(LogicOp op, BexpPtr lhs, BexpPtr rhs);
CommandPtr make_skip();
CommandPtr make_assign(VariableId var, AexpPtr value);
CommandPtr make_seq(CommandPtr first, CommandPtr second);
CommandPtr make_if(BexpPtr cond, CommandPtr then_branch, CommandPtr else_branch);
CommandPtr make_while(BexpPtr cond, CommandPtr body);
CommandPtr make_choice(double prob, CommandPtr left, CommandPtr right);

// Throws ParseError with the offending line and column.
CommandPtr parse_program(std::string_view text);

// Canonical formatting; parse_program(print_program(c)) prints back the same.
std::string print_program(const Command& c);
std::string print_aexp(const Aexp& a);
std::string print_bexp(const Bexp& b);

// Every variable the command reads or writes.
std::vector<VariableId> program_variables(const Command& c);

// ---------------------------------------------------------------------------
// Concrete semantics

using State = std::map<VariableId, Value>;

Value eval_aexp(const Aexp& a, const State& s);
bool eval_bexp(const Bexp& b, const State& s);

// {x ∈ W_s | b holds in x}
TupleSet expand_bexp(const Bexp& b, const JointFrame& frame);

struct ConcreteLimits {
  std::uint64_t max_steps = 1'000'000;
};

// Runs `c` from `s`; a probabilistic choice takes its left branch with its
// probability, drawn from `rng`. Throws NonTerminationError when the step
// budget runs out.
State exec_concrete(const Command& c, State s, std::mt19937_64& rng, const ConcreteLimits& limits = {});

// ---------------------------------------------------------------------------
// Lifted semantics

struct LiftedLimits {
  std::uint64_t max_iterations = 10'000;
  double tolerance = 1e-9;
};

// Runs `c` on a mass function over the program's frame. The result is
// unnormalized; callers normalize at the end of the program.
SubnormalMass exec_lifted(const Command& c, const SubnormalMass& m, const LiftedLimits& limits = {});

// Factor by which exec_lifted scales total mass (empty set included) on a
// loop-free command: each `if` hands every focal set to both branches.
double lifted_mass_scale(const Command& c);

}  // namespace dsqif
