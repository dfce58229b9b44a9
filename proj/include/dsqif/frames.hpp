#pragma once

// Frames of discernment over program variables: values, joint frames,
// tuples (total assignments) and tuple sets, with projection and the
// natural join.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dsqif {

// An integer or a symbolic atom. Integers order before atoms; atoms order
// lexicographically. Values of different kinds are never equal.
class Value {
 public:
  Value() : v_(std::int64_t{0}) {}
  Value(std::int64_t n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Value(int n) : v_(std::int64_t{n}) {}  // NOLINT(google-explicit-constructor)

  static Value atom(std::string name);

  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_atom() const { return !is_int(); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  const std::string& as_atom() const { return std::get<std::string>(v_); }

  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  std::variant<std::int64_t, std::string> v_;
};

using VariableId = std::string;

// Lowercase-initial identifier made of letters, digits and '_'.
bool is_valid_variable_name(std::string_view name);

struct VariableDecl {
  VariableId name;
  std::vector<Value> values;
};

struct Variable {
  VariableId name;
  std::vector<Value> values;  // sorted canonically
  Value initial;              // first declared value; plays the role of zero
};

class Tuple;

// The product space W_s over an ordered variable set s. Variables are held
// sorted by name and each variable's values sorted canonically, so tuple
// indices (mixed radix, first variable most significant) follow the
// canonical lexicographic order of tuples.
//
// Cheap to copy: the variable table is shared and immutable.
class JointFrame {
 public:
  // The frame over no variables; it has exactly one (empty) tuple.
  JointFrame();

  static JointFrame build(std::vector<VariableDecl> decls);

  std::span<const Variable> variables() const { return impl_->vars; }
  std::vector<VariableId> names() const;
  std::size_t arity() const { return impl_->vars.size(); }
  std::uint64_t cardinality() const { return impl_->cardinality; }

  std::optional<std::size_t> position(std::string_view name) const;
  bool has(std::string_view name) const { return position(name).has_value(); }
  const Variable& variable(std::string_view name) const;

  // Sub-frame on `names`; throws FrameError unless names ⊆ this frame.
  JointFrame restricted_to(std::span<const VariableId> names) const;
  // Frame on the union of both variable sets. Shared variables must carry
  // the same value set.
  JointFrame united_with(const JointFrame& other) const;
  bool contains_frame(const JointFrame& other) const;

  Tuple tuple_at(std::uint64_t index) const;
  // The tuple assigning every variable its initial value.
  Tuple initial_tuple() const;

  std::uint64_t stride(std::size_t position) const { return impl_->strides[position]; }
  std::size_t digit(std::uint64_t index, std::size_t position) const;
  std::optional<std::size_t> value_position(std::size_t position, const Value& v) const;

  friend bool operator==(const JointFrame& a, const JointFrame& b);
  friend std::strong_ordering operator<=>(const JointFrame& a, const JointFrame& b);

 private:
  struct Impl {
    std::vector<Variable> vars;
    std::vector<std::uint64_t> strides;
    std::uint64_t cardinality = 1;
  };
  explicit JointFrame(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static JointFrame from_variables(std::vector<Variable> vars);

  std::shared_ptr<const Impl> impl_;
};

// A total assignment over a frame's variables; also a program state.
class Tuple {
 public:
  Tuple(JointFrame frame, std::uint64_t index);

  // Throws FrameError unless `assignment` covers exactly the frame's
  // variables with values from their frames.
  static Tuple make(const JointFrame& frame, const std::map<VariableId, Value>& assignment);

  const JointFrame& frame() const { return frame_; }
  std::uint64_t index() const { return index_; }

  const Value& at(std::string_view name) const;
  std::map<VariableId, Value> assignment() const;
  Tuple restricted_to(const JointFrame& sub) const;
  // State update sigma[X -> v].
  Tuple with(std::string_view name, const Value& v) const;

  // `(p->A, g->A, a->1)` with variables in canonical order.
  std::string to_string() const;

  friend bool operator==(const Tuple&, const Tuple&) = default;

 private:
  JointFrame frame_;
  std::uint64_t index_;
};

class TupleSet {
 public:
  explicit TupleSet(JointFrame frame) : frame_(std::move(frame)) {}
  TupleSet(JointFrame frame, std::vector<std::uint64_t> indices);
  TupleSet(JointFrame frame, std::span<const Tuple> tuples);

  static TupleSet full(const JointFrame& frame);

  const JointFrame& frame() const { return frame_; }
  std::span<const std::uint64_t> indices() const { return indices_; }
  std::vector<Tuple> tuples() const;
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(const Tuple& t) const;
  bool is_subset_of(const TupleSet& other) const;

  TupleSet intersect(const TupleSet& other) const;
  TupleSet unite(const TupleSet& other) const;
  TupleSet complement() const;

  // `{tuple, tuple}` in canonical order; `{}` for the empty set.
  std::string to_string() const;

  friend bool operator==(const TupleSet&, const TupleSet&) = default;
  friend std::strong_ordering operator<=>(const TupleSet& a, const TupleSet& b);

 private:
  void require_same_frame(const TupleSet& other) const;

  JointFrame frame_;
  std::vector<std::uint64_t> indices_;  // sorted, unique
};

JointFrame build_joint_frame(std::vector<VariableDecl> decls);

// Restriction of every tuple to `vars`; duplicates collapse.
TupleSet project_tuple_set(const TupleSet& set, std::span<const VariableId> vars);
TupleSet project_tuple_set(const TupleSet& set, const JointFrame& target);

// All tuples on s∪t whose restrictions to s and t lie in a and b.
TupleSet natural_join(const TupleSet& a, const TupleSet& b);

// Cylindrical extension of `set` to the larger frame `target`.
TupleSet extend_tuple_set(const TupleSet& set, const JointFrame& target);

}  // namespace dsqif
