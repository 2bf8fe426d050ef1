#include "powerseq/omega_sets.hpp"

#include <algorithm>
#include <cassert>

namespace powerseq {
namespace detail {

struct SetNode {
  SetKind kind;
  Int c;                  // shift / base / modulus / arithmetic first term
  Int d;                  // arithmetic step
  std::vector<Int> vals;  // explicit values or residue classes
  std::shared_ptr<const SetNode> left, right;  // children; FactorialShift domain in left
  std::size_t offset = 0;
  std::size_t stride = 1;
};

struct BudgetState {
  std::uint64_t steps_left;
  unsigned max_bits;
  Int value_cap;  // 0 = none

  void step() {
    if (steps_left == 0) throw resource_error("set enumeration budget exhausted");
    --steps_left;
  }
  void check_size(const Int& v) {
    if (v > 0 && msb(v) >= max_bits) throw resource_error("set element exceeds bit-size budget");
  }
  bool capped(const Int& v) const { return value_cap != 0 && v > value_cap; }
};

class Stream {
 public:
  virtual ~Stream() = default;
  virtual std::optional<Int> next(BudgetState& bud) = 0;
};

namespace {

using NodePtr = std::shared_ptr<const SetNode>;

std::unique_ptr<Stream> make_stream(const NodePtr& node);
bool contains_impl(const NodePtr& node, const Int& n, BudgetState& bud);

class CounterStream final : public Stream {
 public:
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    if (bud.capped(v_)) return std::nullopt;
    return v_++;
  }

 private:
  Int v_ = 0;
};

class FactorialStream final : public Stream {
 public:
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    ++k_;
    f_ *= k_;
    bud.check_size(f_);
    if (bud.capped(f_)) return std::nullopt;
    return f_;
  }

 private:
  Int k_ = 0, f_ = 1;  // starts at 1! = 1; 0! is the same value
};

class FactorialShiftStream final : public Stream {
 public:
  FactorialShiftStream(Int c, std::unique_ptr<Stream> domain)
      : c_(std::move(c)), domain_(std::move(domain)) {}

  std::optional<Int> next(BudgetState& bud) override {
    for (;;) {
      auto k = domain_->next(bud);
      if (!k) return std::nullopt;
      if (*k < 0) continue;
      while (fact_k_ < *k) {
        bud.step();
        ++fact_k_;
        fact_ *= fact_k_;
        bud.check_size(fact_);
      }
      Int v = fact_ + c_;
      if (last_ && v <= *last_) continue;  // 0! and 1! collide
      if (bud.capped(v)) return std::nullopt;
      last_ = v;
      return v;
    }
  }

 private:
  Int c_;
  std::unique_ptr<Stream> domain_;
  Int fact_k_ = 0, fact_ = 1;
  std::optional<Int> last_;
};

class PowersStream final : public Stream {
 public:
  explicit PowersStream(Int b) : b_(std::move(b)) {}
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    bud.check_size(v_);
    if (bud.capped(v_)) return std::nullopt;
    Int out = v_;
    v_ *= b_;
    return out;
  }

 private:
  Int b_, v_ = 1;
};

class MultiplesStream final : public Stream {
 public:
  explicit MultiplesStream(Int m) : m_(std::move(m)) {}
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    bud.check_size(v_);
    if (bud.capped(v_)) return std::nullopt;
    Int out = v_;
    v_ += m_;
    return out;
  }

 private:
  Int m_, v_ = 0;
};

class ArithmeticStream final : public Stream {
 public:
  ArithmeticStream(Int a, Int d) : v_(std::move(a)), d_(std::move(d)) {}
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    bud.check_size(v_);
    if (bud.capped(v_)) return std::nullopt;
    Int out = v_;
    v_ += d_;
    return out;
  }

 private:
  Int v_, d_;
};

class ExplicitStream final : public Stream {
 public:
  explicit ExplicitStream(const std::vector<Int>* vals) : vals_(vals) {}
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    if (i_ >= vals_->size()) return std::nullopt;
    const Int& v = (*vals_)[i_];
    if (bud.capped(v)) return std::nullopt;
    ++i_;
    return v;
  }

 private:
  const std::vector<Int>* vals_;
  std::size_t i_ = 0;
};

class ResiduesStream final : public Stream {
 public:
  ResiduesStream(Int m, const std::vector<Int>* rs) : m_(std::move(m)), rs_(rs) {}
  std::optional<Int> next(BudgetState& bud) override {
    bud.step();
    Int v = base_ + (*rs_)[i_];
    bud.check_size(v);
    if (bud.capped(v)) return std::nullopt;
    if (++i_ == rs_->size()) {
      i_ = 0;
      base_ += m_;
    }
    return v;
  }

 private:
  Int m_, base_ = 0;
  const std::vector<Int>* rs_;
  std::size_t i_ = 0;
};

class MergeStream final : public Stream {
 public:
  MergeStream(std::unique_ptr<Stream> l, std::unique_ptr<Stream> r)
      : l_(std::move(l)), r_(std::move(r)) {}

  std::optional<Int> next(BudgetState& bud) override {
    if (!lv_ && !l_done_) pull(l_, lv_, l_done_, bud);
    if (!rv_ && !r_done_) pull(r_, rv_, r_done_, bud);
    if (!lv_ && !rv_) return std::nullopt;
    if (lv_ && rv_ && *lv_ == *rv_) rv_.reset();
    if (!rv_ || (lv_ && *lv_ < *rv_)) {
      Int out = *lv_;
      lv_.reset();
      return out;
    }
    Int out = *rv_;
    rv_.reset();
    return out;
  }

 private:
  static void pull(std::unique_ptr<Stream>& s, std::optional<Int>& slot, bool& done,
                   BudgetState& bud) {
    slot = s->next(bud);
    if (!slot) done = true;
  }
  std::unique_ptr<Stream> l_, r_;
  std::optional<Int> lv_, rv_;
  bool l_done_ = false, r_done_ = false;
};

class MeetStream final : public Stream {
 public:
  MeetStream(std::unique_ptr<Stream> l, std::unique_ptr<Stream> r)
      : l_(std::move(l)), r_(std::move(r)) {}

  std::optional<Int> next(BudgetState& bud) override {
    auto lv = l_->next(bud);
    auto rv = r_->next(bud);
    while (lv && rv) {
      if (*lv == *rv) return *lv;
      if (*lv < *rv) {
        lv = l_->next(bud);
      } else {
        rv = r_->next(bud);
      }
    }
    return std::nullopt;
  }

 private:
  std::unique_ptr<Stream> l_, r_;
};

class DiffStream final : public Stream {
 public:
  DiffStream(std::unique_ptr<Stream> l, NodePtr right) : l_(std::move(l)), right_(std::move(right)) {}

  std::optional<Int> next(BudgetState& bud) override {
    for (;;) {
      auto v = l_->next(bud);
      if (!v) return std::nullopt;
      if (!contains_impl(right_, *v, bud)) return v;
    }
  }

 private:
  std::unique_ptr<Stream> l_;
  NodePtr right_;
};

class TailStream final : public Stream {
 public:
  TailStream(std::unique_ptr<Stream> inner, std::size_t skip) : inner_(std::move(inner)), skip_(skip) {}

  std::optional<Int> next(BudgetState& bud) override {
    while (skip_ > 0) {
      if (!inner_->next(bud)) return std::nullopt;
      --skip_;
    }
    return inner_->next(bud);
  }

 private:
  std::unique_ptr<Stream> inner_;
  std::size_t skip_;
};

class StridedStream final : public Stream {
 public:
  StridedStream(std::unique_ptr<Stream> inner, std::size_t offset, std::size_t stride)
      : inner_(std::move(inner)), pending_(offset), stride_(stride) {}

  std::optional<Int> next(BudgetState& bud) override {
    while (pending_ > 0) {
      if (!inner_->next(bud)) return std::nullopt;
      --pending_;
    }
    auto v = inner_->next(bud);
    pending_ = stride_ - 1;
    return v;
  }

 private:
  std::unique_ptr<Stream> inner_;
  std::size_t pending_;
  std::size_t stride_;
};

std::unique_ptr<Stream> make_stream(const NodePtr& node) {
  switch (node->kind) {
    case SetKind::Factorial:
      return std::make_unique<FactorialStream>();
    case SetKind::FactorialShift: {
      auto dom = node->left ? make_stream(node->left) : std::make_unique<CounterStream>();
      return std::make_unique<FactorialShiftStream>(node->c, std::move(dom));
    }
    case SetKind::Powers:
      return std::make_unique<PowersStream>(node->c);
    case SetKind::Multiples:
      return std::make_unique<MultiplesStream>(node->c);
    case SetKind::Arithmetic:
      return std::make_unique<ArithmeticStream>(node->c, node->d);
    case SetKind::Explicit:
      return std::make_unique<ExplicitStream>(&node->vals);
    case SetKind::Residues:
      return std::make_unique<ResiduesStream>(node->c, &node->vals);
    case SetKind::Union:
      return std::make_unique<MergeStream>(make_stream(node->left), make_stream(node->right));
    case SetKind::Intersection:
      return std::make_unique<MeetStream>(make_stream(node->left), make_stream(node->right));
    case SetKind::Difference:
      return std::make_unique<DiffStream>(make_stream(node->left), node->right);
    case SetKind::Tail:
      return std::make_unique<TailStream>(make_stream(node->left), node->offset);
    case SetKind::Strided:
      return std::make_unique<StridedStream>(make_stream(node->left), node->offset, node->stride);
  }
  throw error("make_stream: unhandled kind");
}

// Index of n within the set described by `node`, or nullopt if absent.
std::optional<std::size_t> rank_of(const NodePtr& node, const Int& n, BudgetState& bud) {
  auto st = make_stream(node);
  std::size_t idx = 0;
  while (auto v = st->next(bud)) {
    if (*v == n) return idx;
    if (*v > n) return std::nullopt;
    ++idx;
  }
  return std::nullopt;
}

// Largest k with k! <= n, together with k!; n >= 1.
std::pair<Int, Int> factorial_floor(const Int& n, BudgetState& bud) {
  Int k = 1, f = 1;
  while (f * (k + 1) <= n) {
    bud.step();
    ++k;
    f *= k;
  }
  return {k, f};
}

bool contains_impl(const NodePtr& node, const Int& n, BudgetState& bud) {
  bud.step();
  switch (node->kind) {
    case SetKind::Factorial: {
      if (n < 1) return false;
      auto [k, f] = factorial_floor(n, bud);
      return f == n;
    }
    case SetKind::FactorialShift: {
      Int m = n - node->c;
      if (m < 1) return false;
      auto [k, f] = factorial_floor(m, bud);
      if (f != m) return false;
      if (!node->left) return true;
      if (k == 1)  // value 1 arises from both k = 0 and k = 1
        return contains_impl(node->left, 0, bud) || contains_impl(node->left, 1, bud);
      return contains_impl(node->left, k, bud);
    }
    case SetKind::Powers: {
      if (n < 1) return false;
      Int v = n;
      while (v % node->c == 0) {
        bud.step();
        v /= node->c;
      }
      return v == 1;
    }
    case SetKind::Multiples:
      return n >= 0 && n % node->c == 0;
    case SetKind::Arithmetic:
      return n >= node->c && (n - node->c) % node->d == 0;
    case SetKind::Explicit:
      return std::binary_search(node->vals.begin(), node->vals.end(), n);
    case SetKind::Residues:
      return n >= 0 && std::binary_search(node->vals.begin(), node->vals.end(), mod_floor(n, node->c));
    case SetKind::Union:
      return contains_impl(node->left, n, bud) || contains_impl(node->right, n, bud);
    case SetKind::Intersection:
      return contains_impl(node->left, n, bud) && contains_impl(node->right, n, bud);
    case SetKind::Difference:
      return contains_impl(node->left, n, bud) && !contains_impl(node->right, n, bud);
    case SetKind::Tail: {
      auto r = rank_of(node->left, n, bud);
      return r && *r >= node->offset;
    }
    case SetKind::Strided: {
      auto r = rank_of(node->left, n, bud);
      return r && *r >= node->offset && (*r - node->offset) % node->stride == 0;
    }
  }
  throw error("contains: unhandled kind");
}

NodePtr make_node(SetNode&& n) { return std::make_shared<const SetNode>(std::move(n)); }

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->c != b->c || a->d != b->d || a->vals != b->vals ||
      a->offset != b->offset || a->stride != b->stride)
    return false;
  return node_equal(a->left, b->left) && node_equal(a->right, b->right);
}

}  // namespace
}  // namespace detail

using detail::BudgetState;
using detail::SetNode;

namespace {

detail::BudgetState to_state(const EnumBudget& b) {
  return detail::BudgetState{b.max_steps, b.max_bits, b.value_cap};
}

}  // namespace

// --- factories -------------------------------------------------------------

OmegaSet OmegaSet::factorial() {
  return OmegaSet(detail::make_node(SetNode{SetKind::Factorial, 0, 0, {}, nullptr, nullptr}));
}

OmegaSet OmegaSet::factorial_shift(const Int& c) {
  if (c < 0) throw error("factorial_shift: shift must be >= 0");
  return OmegaSet(detail::make_node(SetNode{SetKind::FactorialShift, c, 0, {}, nullptr, nullptr}));
}

OmegaSet OmegaSet::factorial_shift(const Int& c, const OmegaSet& domain) {
  if (c < 0) throw error("factorial_shift: shift must be >= 0");
  return OmegaSet(detail::make_node(SetNode{SetKind::FactorialShift, c, 0, {}, domain.node_, nullptr}));
}

OmegaSet OmegaSet::powers(const Int& base) {
  if (base < 2) throw error("powers: base must be >= 2");
  return OmegaSet(detail::make_node(SetNode{SetKind::Powers, base, 0, {}, nullptr, nullptr}));
}

OmegaSet OmegaSet::multiples(const Int& m) {
  if (m < 1) throw error("multiples: modulus must be >= 1");
  return OmegaSet(detail::make_node(SetNode{SetKind::Multiples, m, 0, {}, nullptr, nullptr}));
}

OmegaSet OmegaSet::arithmetic(const Int& a, const Int& d) {
  if (a < 0 || d < 1) throw error("arithmetic: requires a >= 0 and d >= 1");
  return OmegaSet(detail::make_node(SetNode{SetKind::Arithmetic, a, d, {}, nullptr, nullptr}));
}

OmegaSet OmegaSet::explicit_set(std::vector<Int> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) throw error("explicit_set: elements must be >= 0");
    if (i > 0 && values[i] <= values[i - 1]) throw error("explicit_set: elements must strictly increase");
  }
  return OmegaSet(detail::make_node(SetNode{SetKind::Explicit, 0, 0, std::move(values), nullptr, nullptr}));
}

OmegaSet OmegaSet::residues(const Int& modulus, std::vector<Int> rs) {
  if (modulus < 1) throw error("residues: modulus must be >= 1");
  for (auto& r : rs) r = mod_floor(r, modulus);
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  if (rs.empty()) return explicit_set({});
  if (Int(rs.size()) == modulus) return multiples(1);
  if (rs.size() == 1 && rs[0] == 0) return multiples(modulus);
  return OmegaSet(detail::make_node(SetNode{SetKind::Residues, modulus, 0, std::move(rs), nullptr, nullptr}));
}

OmegaSet OmegaSet::set_union(const OmegaSet& a, const OmegaSet& b) {
  return OmegaSet(detail::make_node(SetNode{SetKind::Union, 0, 0, {}, a.node_, b.node_}));
}

OmegaSet OmegaSet::set_intersection(const OmegaSet& a, const OmegaSet& b) {
  return OmegaSet(detail::make_node(SetNode{SetKind::Intersection, 0, 0, {}, a.node_, b.node_}));
}

OmegaSet OmegaSet::set_difference(const OmegaSet& a, const OmegaSet& b) {
  return OmegaSet(detail::make_node(SetNode{SetKind::Difference, 0, 0, {}, a.node_, b.node_}));
}

OmegaSet OmegaSet::tail(const OmegaSet& s, std::size_t drop) {
  if (drop == 0) return s;
  if (s.kind() == SetKind::Tail) return tail(s.left(), s.drop_count() + drop);
  SetNode n{SetKind::Tail, 0, 0, {}, s.node_, nullptr};
  n.offset = drop;
  return OmegaSet(detail::make_node(std::move(n)));
}

OmegaSet OmegaSet::strided(const OmegaSet& s, std::size_t offset, std::size_t stride) {
  if (stride < 1) throw error("strided: stride must be >= 1");
  if (stride == 1) return tail(s, offset);
  SetNode n{SetKind::Strided, 0, 0, {}, s.node_, nullptr};
  n.offset = offset;
  n.stride = stride;
  return OmegaSet(detail::make_node(std::move(n)));
}

// --- accessors ---------------------------------------------------------------

SetKind OmegaSet::kind() const { return node_->kind; }

static void expect(bool ok, const char* what) {
  if (!ok) throw error(std::string("OmegaSet accessor misuse: ") + what);
}

const Int& OmegaSet::shift() const {
  expect(kind() == SetKind::FactorialShift, "shift");
  return node_->c;
}
const Int& OmegaSet::base() const {
  expect(kind() == SetKind::Powers, "base");
  return node_->c;
}
const Int& OmegaSet::modulus() const {
  expect(kind() == SetKind::Multiples || kind() == SetKind::Residues, "modulus");
  return node_->c;
}
const Int& OmegaSet::first_term() const {
  expect(kind() == SetKind::Arithmetic, "first_term");
  return node_->c;
}
const Int& OmegaSet::step() const {
  expect(kind() == SetKind::Arithmetic, "step");
  return node_->d;
}
const std::vector<Int>& OmegaSet::values() const {
  expect(kind() == SetKind::Explicit || kind() == SetKind::Residues, "values");
  return node_->vals;
}
bool OmegaSet::has_domain() const {
  expect(kind() == SetKind::FactorialShift, "has_domain");
  return node_->left != nullptr;
}
OmegaSet OmegaSet::domain() const {
  expect(kind() == SetKind::FactorialShift && node_->left != nullptr, "domain");
  return OmegaSet(node_->left);
}
OmegaSet OmegaSet::left() const {
  expect(node_->left != nullptr, "left");
  return OmegaSet(node_->left);
}
OmegaSet OmegaSet::right() const {
  expect(node_->right != nullptr, "right");
  return OmegaSet(node_->right);
}
std::size_t OmegaSet::drop_count() const {
  expect(kind() == SetKind::Tail, "drop_count");
  return node_->offset;
}
std::size_t OmegaSet::stride_offset() const {
  expect(kind() == SetKind::Strided, "stride_offset");
  return node_->offset;
}
std::size_t OmegaSet::stride_step() const {
  expect(kind() == SetKind::Strided, "stride_step");
  return node_->stride;
}

bool OmegaSet::contains(const Int& n) const {
  auto bud = to_state(EnumBudget{});
  return detail::contains_impl(node_, n, bud);
}

std::vector<Int> OmegaSet::enumerate(std::size_t count, const EnumBudget& budget) const {
  std::vector<Int> out;
  out.reserve(count);
  SetEnumerator en(*this, budget);
  for (std::size_t i = 0; i < count; ++i) {
    auto v = en.next();
    if (!v) break;
    out.push_back(std::move(*v));
  }
  return out;
}

bool OmegaSet::certified_infinite() const {
  switch (kind()) {
    case SetKind::Factorial:
    case SetKind::Powers:
    case SetKind::Multiples:
    case SetKind::Arithmetic:
    case SetKind::Residues:
      return true;
    case SetKind::FactorialShift:
      return node_->left == nullptr || left().certified_infinite();
    case SetKind::Explicit:
      return false;
    case SetKind::Union:
      return left().certified_infinite() || right().certified_infinite();
    case SetKind::Tail:
    case SetKind::Strided:
      return left().certified_infinite();
    case SetKind::Intersection:
    case SetKind::Difference: {
      auto pf = periodic_form(*this);
      return pf && !pf->residues.empty();
    }
  }
  return false;
}

bool OmegaSet::certified_finite() const {
  switch (kind()) {
    case SetKind::Explicit:
      return true;
    case SetKind::Union:
      return left().certified_finite() && right().certified_finite();
    case SetKind::Intersection:
      return left().certified_finite() || right().certified_finite();
    case SetKind::Difference:
    case SetKind::Tail:
    case SetKind::Strided:
      return left().certified_finite();
    default:
      return false;
  }
}

bool OmegaSet::structurally_equal(const OmegaSet& other) const {
  return detail::node_equal(node_, other.node_);
}

// --- enumerator --------------------------------------------------------------

SetEnumerator::SetEnumerator(const OmegaSet& s, const EnumBudget& budget)
    : root_(s.node()),
      stream_(detail::make_stream(root_)),
      budget_(std::make_unique<detail::BudgetState>(to_state(budget))) {}

SetEnumerator::~SetEnumerator() = default;
SetEnumerator::SetEnumerator(SetEnumerator&&) noexcept = default;
SetEnumerator& SetEnumerator::operator=(SetEnumerator&&) noexcept = default;

std::optional<Int> SetEnumerator::next() { return stream_->next(*budget_); }

}  // namespace powerseq
