#include <stdexcept>

#include "dsqif/errors.hpp"
#include "dsqif/evidence.hpp"
#include "dsqif/lang.hpp"

namespace dsqif {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Evaluation is written once over an environment lookup: name -> Value*.
template <class Env>
Value eval_a(const Aexp& a, const Env& env) {
  return std::visit(Overloaded{
                        [](const IntLit& n) { return Value(n.value); },
                        [](const AtomLit& n) { return Value::atom(n.name); },
                        [&](const VarRef& n) {
                          const Value* v = env(n.name);
                          if (!v) throw EvalError("unbound variable '" + n.name + "'");
                          return *v;
                        },
                        [&](const Arith& n) {
                          const Value lhs = eval_a(*n.lhs, env);
                          const Value rhs = eval_a(*n.rhs, env);
                          if (!lhs.is_int() || !rhs.is_int()) {
                            throw EvalError("arithmetic on atom in '" + print_aexp(Aexp{n}) + "'");
                          }
                          std::int64_t r = 0;
                          bool overflow = false;
                          switch (n.op) {
                            case ArithOp::kAdd:
                              overflow = __builtin_add_overflow(lhs.as_int(), rhs.as_int(), &r);
                              break;
                            case ArithOp::kSub:
                              overflow = __builtin_sub_overflow(lhs.as_int(), rhs.as_int(), &r);
                              break;
                            case ArithOp::kMul:
                              overflow = __builtin_mul_overflow(lhs.as_int(), rhs.as_int(), &r);
                              break;
                          }
                          if (overflow) throw EvalError("integer overflow in '" + print_aexp(Aexp{n}) + "'");
                          return Value(r);
                        },
                    },
                    a.node);
}

template <class Env>
bool eval_b(const Bexp& b, const Env& env) {
  return std::visit(Overloaded{
                        [](const BoolLit& n) { return n.value; },
                        [&](const Compare& n) {
                          const Value lhs = eval_a(*n.lhs, env);
                          const Value rhs = eval_a(*n.rhs, env);
                          switch (n.op) {
                            case CompareOp::kEq:
                              return lhs == rhs;
                            case CompareOp::kNe:
                              return lhs != rhs;
                            default:
                              break;
                          }
                          if (!lhs.is_int() || !rhs.is_int()) {
                            throw EvalError("ordering on atom in '" + print_bexp(Bexp{n}) + "'");
                          }
                          return n.op == CompareOp::kLt ? lhs.as_int() < rhs.as_int() : lhs.as_int() <= rhs.as_int();
                        },
                        [&](const Not& n) { return !eval_b(*n.operand, env); },
                        [&](const Logic& n) {
                          return n.op == LogicOp::kAnd ? eval_b(*n.lhs, env) && eval_b(*n.rhs, env)
                                                       : eval_b(*n.lhs, env) || eval_b(*n.rhs, env);
                        },
                    },
                    b.node);
}

auto state_env(const State& s) {
  return [&s](const std::string& name) -> const Value* {
    auto it = s.find(name);
    return it == s.end() ? nullptr : &it->second;
  };
}

auto tuple_env(const Tuple& t) {
  return [&t](const std::string& name) -> const Value* {
    auto pos = t.frame().position(name);
    if (!pos) return nullptr;
    return &t.frame().variables()[*pos].values[t.frame().digit(t.index(), *pos)];
  };
}

struct ConcreteRun {
  std::mt19937_64& rng;
  const ConcreteLimits& limits;
  std::uint64_t steps = 0;

  void tick() {
    if (++steps > limits.max_steps) {
      throw NonTerminationError("step budget of " + std::to_string(limits.max_steps) + " exhausted");
    }
  }

  void run(const Command& c, State& s) {
    tick();
    std::visit(Overloaded{
                   [](const Skip&) {},
                   [&](const Assign& n) { s[n.var] = eval_a(*n.value, state_env(s)); },
                   [&](const Seq& n) {
                     run(*n.first, s);
                     run(*n.second, s);
                   },
                   [&](const If& n) { run(eval_b(*n.cond, state_env(s)) ? *n.then_branch : *n.else_branch, s); },
                   [&](const While& n) {
                     while (eval_b(*n.cond, state_env(s))) {
                       run(*n.body, s);
                       tick();
                     }
                   },
                   [&](const Choice& n) {
                     std::bernoulli_distribution left(n.prob);
                     run(left(rng) ? *n.left : *n.right, s);
                   },
               },
               c.node);
  }
};

struct LiftedRun {
  const LiftedLimits& limits;

  SubnormalMass run(const Command& c, const SubnormalMass& m) const {
    if (m.is_zero()) return m;
    return std::visit(Overloaded{
                          [&](const Skip&) { return m; },
                          [&](const Assign& n) {
                            return mass_update(m, n.var, [&](const Tuple& t) { return eval_a(*n.value, tuple_env(t)); });
                          },
                          [&](const Seq& n) { return run(*n.second, run(*n.first, m)); },
                          [&](const If& n) {
                            const TupleSet holds = expand_bexp(*n.cond, m.frame());
                            const std::pair<double, SubnormalMass> parts[] = {
                                {1.0, run(*n.then_branch, condition_unnormalized(m, holds))},
                                {1.0, run(*n.else_branch, condition_unnormalized(m, holds.complement()))},
                            };
                            return weighted_sum(parts);
                          },
                          [&](const While& n) { return loop(n, m); },
                          [&](const Choice& n) {
                            const std::pair<double, SubnormalMass> parts[] = {
                                {1.0, run(*n.left, m.scaled(n.prob))},
                                {1.0, run(*n.right, m.scaled(1.0 - n.prob))},
                            };
                            return weighted_sum(parts);
                          },
                      },
                      c.node);
  }

  // Unrolls the loop functional: each pass moves the guard-false part of the
  // current mass to the exit and runs the body on the guard-true part.
  SubnormalMass loop(const While& w, const SubnormalMass& m) const {
    const TupleSet holds = expand_bexp(*w.cond, m.frame());
    const TupleSet fails = holds.complement();
    SubnormalMass exit(m.frame());
    SubnormalMass current = m;
    for (std::uint64_t i = 0; i < limits.max_iterations; ++i) {
      const SubnormalMass done = condition_unnormalized(current, fails);
      for (const auto& [set, mass] : done.entries()) exit.add(set, mass);
      // Empty-set mass already reached the exit above; it is not fed back.
      SubnormalMass body_in = condition_unnormalized(current, holds).without_empty();
      if (body_in.total() < limits.tolerance) return exit;
      current = run(*w.body, body_in);
    }
    const double residual = condition_unnormalized(current, holds).without_empty().total();
    if (residual < limits.tolerance) {
      const SubnormalMass done = condition_unnormalized(current, fails);
      for (const auto& [set, mass] : done.entries()) exit.add(set, mass);
      return exit;
    }
    throw NonTerminationError("loop 'while " + print_bexp(*w.cond) + "' still carries mass " +
                              std::to_string(residual) + " after " + std::to_string(limits.max_iterations) +
                              " iterations");
  }
};

}  // namespace

Value eval_aexp(const Aexp& a, const State& s) { return eval_a(a, state_env(s)); }
bool eval_bexp(const Bexp& b, const State& s) { return eval_b(b, state_env(s)); }

TupleSet expand_bexp(const Bexp& b, const JointFrame& frame) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < frame.cardinality(); ++i) {
    if (eval_b(b, tuple_env(Tuple(frame, i)))) out.push_back(i);
  }
  return TupleSet(frame, std::move(out));
}

State exec_concrete(const Command& c, State s, std::mt19937_64& rng, const ConcreteLimits& limits) {
  ConcreteRun run{rng, limits};
  run.run(c, s);
  return s;
}

SubnormalMass exec_lifted(const Command& c, const SubnormalMass& m, const LiftedLimits& limits) {
  return LiftedRun{limits}.run(c, m);
}

double lifted_mass_scale(const Command& c) {
  return std::visit(Overloaded{
                        [](const Skip&) { return 1.0; },
                        [](const Assign&) { return 1.0; },
                        [](const Seq& n) { return lifted_mass_scale(*n.first) * lifted_mass_scale(*n.second); },
                        [](const If& n) { return lifted_mass_scale(*n.then_branch) + lifted_mass_scale(*n.else_branch); },
                        [](const While&) -> double { throw std::invalid_argument("mass scale is defined for loop-free commands"); },
                        [](const Choice& n) {
                          return n.prob * lifted_mass_scale(*n.left) + (1.0 - n.prob) * lifted_mass_scale(*n.right);
                        },
                    },
                    c.node);
}

}  // namespace dsqif
