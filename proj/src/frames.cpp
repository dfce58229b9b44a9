#include "dsqif/frames.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "dsqif/errors.hpp"

namespace dsqif {

// ---------------------------------------------------------------------------
// Value

Value Value::atom(std::string name) {
  if (name.empty()) throw FrameError("atom name must be nonempty");
  Value v;
  v.v_ = std::move(name);
  return v;
}

std::string Value::to_string() const {
  return is_int() ? std::to_string(as_int()) : as_atom();
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.is_int() != b.is_int()) return a.is_int() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_int()) return a.as_int() <=> b.as_int();
  return a.as_atom().compare(b.as_atom()) <=> 0;
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// ---------------------------------------------------------------------------
// JointFrame

JointFrame::JointFrame() : impl_(std::make_shared<const Impl>()) {}

JointFrame JointFrame::from_variables(std::vector<Variable> vars) {
  std::sort(vars.begin(), vars.end(), [](const Variable& a, const Variable& b) { return a.name < b.name; });
  auto impl = std::make_shared<Impl>();
  impl->strides.resize(vars.size());
  std::uint64_t card = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    impl->strides[i] = card;
    const auto n = static_cast<std::uint64_t>(vars[i].values.size());
    if (card > (std::uint64_t{1} << 62) / n) throw FrameError("joint frame cardinality overflows");
    card *= n;
  }
  impl->cardinality = card;
  impl->vars = std::move(vars);
  return JointFrame(std::move(impl));
}

JointFrame JointFrame::build(std::vector<VariableDecl> decls) {
  std::set<VariableId> seen;
  std::vector<Variable> vars;
  vars.reserve(decls.size());
  for (auto& d : decls) {
    if (!is_valid_variable_name(d.name)) throw FrameError("invalid variable name '" + d.name + "'");
    if (!seen.insert(d.name).second) throw FrameError("duplicate variable '" + d.name + "'");
    if (d.values.empty()) throw FrameError("empty frame for variable '" + d.name + "'");
    Variable v{d.name, d.values, d.values.front()};
    std::sort(v.values.begin(), v.values.end());
    if (std::adjacent_find(v.values.begin(), v.values.end()) != v.values.end()) {
      throw FrameError("duplicate value in frame of '" + d.name + "'");
    }
    vars.push_back(std::move(v));
  }
  return from_variables(std::move(vars));
}

std::vector<VariableId> JointFrame::names() const {
  std::vector<VariableId> out;
  out.reserve(arity());
  for (const auto& v : impl_->vars) out.push_back(v.name);
  return out;
}

std::optional<std::size_t> JointFrame::position(std::string_view name) const {
  const auto& vars = impl_->vars;
  auto it = std::lower_bound(vars.begin(), vars.end(), name,
                             [](const Variable& v, std::string_view n) { return v.name < n; });
  if (it == vars.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - vars.begin());
}

const Variable& JointFrame::variable(std::string_view name) const {
  auto pos = position(name);
  if (!pos) throw FrameError("variable '" + std::string(name) + "' is not in the frame");
  return impl_->vars[*pos];
}

JointFrame JointFrame::restricted_to(std::span<const VariableId> names) const {
  std::vector<Variable> vars;
  std::set<VariableId> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) continue;
    vars.push_back(variable(n));
  }
  return from_variables(std::move(vars));
}

JointFrame JointFrame::united_with(const JointFrame& other) const {
  std::vector<Variable> vars(impl_->vars.begin(), impl_->vars.end());
  for (const auto& v : other.variables()) {
    if (auto pos = position(v.name)) {
      if (impl_->vars[*pos].values != v.values) {
        throw FrameError("incompatible frames for shared variable '" + v.name + "'");
      }
      continue;
    }
    vars.push_back(v);
  }
  return from_variables(std::move(vars));
}

bool JointFrame::contains_frame(const JointFrame& other) const {
  return std::all_of(other.variables().begin(), other.variables().end(), [&](const Variable& v) {
    auto pos = position(v.name);
    return pos && impl_->vars[*pos].values == v.values;
  });
}

Tuple JointFrame::tuple_at(std::uint64_t index) const { return Tuple(*this, index); }

Tuple JointFrame::initial_tuple() const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < arity(); ++i) {
    index += stride(i) * *value_position(i, impl_->vars[i].initial);
  }
  return Tuple(*this, index);
}

std::size_t JointFrame::digit(std::uint64_t index, std::size_t position) const {
  return static_cast<std::size_t>((index / impl_->strides[position]) % impl_->vars[position].values.size());
}

std::optional<std::size_t> JointFrame::value_position(std::size_t position, const Value& v) const {
  const auto& values = impl_->vars[position].values;
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

// Frames compare by variable names and value sets; the initial value is a
// default for concrete runs, not part of the space.
std::strong_ordering operator<=>(const JointFrame& a, const JointFrame& b) {
  if (a.impl_ == b.impl_) return std::strong_ordering::equal;
  const auto& x = a.impl_->vars;
  const auto& y = b.impl_->vars;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (auto c = x[i].name <=> y[i].name; c != 0) return c;
    if (auto c = x[i].values <=> y[i].values; c != 0) return c;
  }
  return x.size() <=> y.size();
}

bool operator==(const JointFrame& a, const JointFrame& b) { return (a <=> b) == 0; }

JointFrame build_joint_frame(std::vector<VariableDecl> decls) { return JointFrame::build(std::move(decls)); }

// ---------------------------------------------------------------------------
// Tuple

Tuple::Tuple(JointFrame frame, std::uint64_t index) : frame_(std::move(frame)), index_(index) {
  if (index_ >= frame_.cardinality()) throw FrameError("tuple index outside the frame");
}

Tuple Tuple::make(const JointFrame& frame, const std::map<VariableId, Value>& assignment) {
  if (assignment.size() != frame.arity()) {
    throw FrameError("assignment must cover exactly the frame's variables");
  }
  std::uint64_t index = 0;
  for (const auto& [name, value] : assignment) {
    auto pos = frame.position(name);
    if (!pos) throw FrameError("variable '" + name + "' is not in the frame");
    auto vpos = frame.value_position(*pos, value);
    if (!vpos) throw FrameError("value " + value.to_string() + " is outside the frame of '" + name + "'");
    index += frame.stride(*pos) * *vpos;
  }
  return Tuple(frame, index);
}

const Value& Tuple::at(std::string_view name) const {
  auto pos = frame_.position(name);
  if (!pos) throw FrameError("variable '" + std::string(name) + "' is not in the tuple");
  return frame_.variables()[*pos].values[frame_.digit(index_, *pos)];
}

std::map<VariableId, Value> Tuple::assignment() const {
  std::map<VariableId, Value> out;
  const auto vars = frame_.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) out.emplace(vars[i].name, vars[i].values[frame_.digit(index_, i)]);
  return out;
}

Tuple Tuple::restricted_to(const JointFrame& sub) const {
  std::uint64_t index = 0;
  const auto vars = sub.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto pos = frame_.position(vars[i].name);
    if (!pos) throw FrameError("variable '" + vars[i].name + "' is not in the tuple");
    index += sub.stride(i) * frame_.digit(index_, *pos);
  }
  return Tuple(sub, index);
}

Tuple Tuple::with(std::string_view name, const Value& v) const {
  auto pos = frame_.position(name);
  if (!pos) throw FrameError("variable '" + std::string(name) + "' is not in the tuple");
  auto vpos = frame_.value_position(*pos, v);
  if (!vpos) {
    throw FrameError("value " + v.to_string() + " is outside the frame of '" + std::string(name) + "'");
  }
  const auto old = frame_.digit(index_, *pos);
  return Tuple(frame_, index_ - old * frame_.stride(*pos) + *vpos * frame_.stride(*pos));
}

std::string Tuple::to_string() const {
  std::string out = "(";
  const auto vars = frame_.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i].name + "->" + vars[i].values[frame_.digit(index_, i)].to_string();
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// TupleSet

TupleSet::TupleSet(JointFrame frame, std::vector<std::uint64_t> indices)
    : frame_(std::move(frame)), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.back() >= frame_.cardinality()) {
    throw FrameError("tuple index outside the frame");
  }
}

TupleSet::TupleSet(JointFrame frame, std::span<const Tuple> tuples) : frame_(std::move(frame)) {
  indices_.reserve(tuples.size());
  for (const auto& t : tuples) {
    if (t.frame() != frame_) throw FrameError("tuple " + t.to_string() + " is not on the set's frame");
    indices_.push_back(t.index());
  }
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

TupleSet TupleSet::full(const JointFrame& frame) {
  std::vector<std::uint64_t> all(frame.cardinality());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
  return TupleSet(frame, std::move(all));
}

std::vector<Tuple> TupleSet::tuples() const {
  std::vector<Tuple> out;
  out.reserve(indices_.size());
  for (auto i : indices_) out.emplace_back(frame_, i);
  return out;
}

bool TupleSet::contains(const Tuple& t) const {
  return t.frame() == frame_ && std::binary_search(indices_.begin(), indices_.end(), t.index());
}

bool TupleSet::is_subset_of(const TupleSet& other) const {
  require_same_frame(other);
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

TupleSet TupleSet::intersect(const TupleSet& other) const {
  require_same_frame(other);
  TupleSet out(frame_);
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(out.indices_));
  return out;
}

TupleSet TupleSet::unite(const TupleSet& other) const {
  require_same_frame(other);
  TupleSet out(frame_);
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out.indices_));
  return out;
}

TupleSet TupleSet::complement() const {
  TupleSet out(frame_);
  auto it = indices_.begin();
  for (std::uint64_t i = 0; i < frame_.cardinality(); ++i) {
    if (it != indices_.end() && *it == i) {
      ++it;
    } else {
      out.indices_.push_back(i);
    }
  }
  return out;
}

std::string TupleSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto i : indices_) {
    if (!first) out += ", ";
    first = false;
    out += Tuple(frame_, i).to_string();
  }
  return out + "}";
}

std::strong_ordering operator<=>(const TupleSet& a, const TupleSet& b) {
  auto c = std::lexicographical_compare_three_way(a.indices_.begin(), a.indices_.end(), b.indices_.begin(),
                                                  b.indices_.end());
  if (c != 0) return c;
  return a.frame_ <=> b.frame_;
}

void TupleSet::require_same_frame(const TupleSet& other) const {
  if (frame_ != other.frame_) throw FrameError("tuple sets live on different frames");
}

// ---------------------------------------------------------------------------
// Projection and join

namespace {

// For each variable of `target`, its position in `source`.
std::vector<std::size_t> positions_in(const JointFrame& source, const JointFrame& target) {
  std::vector<std::size_t> out;
  out.reserve(target.arity());
  for (const auto& v : target.variables()) {
    auto pos = source.position(v.name);
    if (!pos) throw FrameError("variable '" + v.name + "' is not in the source frame");
    out.push_back(*pos);
  }
  return out;
}

}  // namespace

TupleSet project_tuple_set(const TupleSet& set, const JointFrame& target) {
  if (!set.frame().contains_frame(target)) throw FrameError("projection target is not a subset of the frame");
  const auto from = positions_in(set.frame(), target);
  std::vector<std::uint64_t> out;
  out.reserve(set.size());
  for (auto idx : set.indices()) {
    std::uint64_t sub = 0;
    for (std::size_t i = 0; i < from.size(); ++i) sub += target.stride(i) * set.frame().digit(idx, from[i]);
    out.push_back(sub);
  }
  return TupleSet(target, std::move(out));
}

TupleSet project_tuple_set(const TupleSet& set, std::span<const VariableId> vars) {
  return project_tuple_set(set, set.frame().restricted_to(vars));
}

TupleSet natural_join(const TupleSet& a, const TupleSet& b) {
  const JointFrame joined = a.frame().united_with(b.frame());
  const auto a_pos = positions_in(joined, a.frame());
  const auto b_pos = positions_in(joined, b.frame());

  // Variables of b that a also fixes: (position in b, position in a).
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::vector<bool> b_only(b.frame().arity(), true);
  for (std::size_t i = 0; i < b.frame().arity(); ++i) {
    if (auto p = a.frame().position(b.frame().variables()[i].name)) {
      shared.emplace_back(i, *p);
      b_only[i] = false;
    }
  }

  std::vector<std::uint64_t> out;
  for (auto ai : a.indices()) {
    std::uint64_t base = 0;
    for (std::size_t i = 0; i < a_pos.size(); ++i) base += joined.stride(a_pos[i]) * a.frame().digit(ai, i);
    for (auto bi : b.indices()) {
      bool agree = true;
      for (auto [ib, ia] : shared) {
        if (b.frame().digit(bi, ib) != a.frame().digit(ai, ia)) {
          agree = false;
          break;
        }
      }
      if (!agree) continue;
      std::uint64_t idx = base;
      for (std::size_t i = 0; i < b_pos.size(); ++i) {
        if (b_only[i]) idx += joined.stride(b_pos[i]) * b.frame().digit(bi, i);
      }
      out.push_back(idx);
    }
  }
  return TupleSet(joined, std::move(out));
}

TupleSet extend_tuple_set(const TupleSet& set, const JointFrame& target) {
  if (!target.contains_frame(set.frame())) throw FrameError("extension target does not contain the frame");
  std::vector<VariableId> rest;
  for (const auto& v : target.variables()) {
    if (!set.frame().has(v.name)) rest.push_back(v.name);
  }
  return natural_join(set, TupleSet::full(target.restricted_to(rest)));
}

}  // namespace dsqif
