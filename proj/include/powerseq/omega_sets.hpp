#pragma once

#include "powerseq/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace powerseq {

enum class SetKind {
  Factorial,       // {k! : k in omega}
  FactorialShift,  // {k! + c : k in D}, D a nested spec (null domain = omega)
  Powers,          // {b^j : j in omega}, b >= 2
  Multiples,       // {m*k : k in omega}, includes 0
  Arithmetic,      // {a + k*d : k in omega}
  Explicit,        // finite strictly increasing list
  Residues,        // {n : n mod m in R}
  Union,
  Intersection,
  Difference,
  Tail,     // drop the first `offset` elements
  Strided,  // elements at enumeration indices offset, offset+stride, ...
};

struct EnumBudget {
  std::uint64_t max_steps = 4'000'000;  // candidate pulls across the whole spec tree
  unsigned max_bits = 65'536;           // bit-size cap on produced values
  Int value_cap = 0;                    // 0 = none; values beyond the cap end the stream
};

namespace detail {
struct SetNode;
struct BudgetState;
class Stream;
}  // namespace detail

/// Symbolic descriptor of a subset of omega. Immutable value type; all
/// analyses are pure functions of the descriptor tree.
class OmegaSet {
 public:
  static OmegaSet factorial();
  static OmegaSet factorial_shift(const Int& c);  // domain = all of omega
  static OmegaSet factorial_shift(const Int& c, const OmegaSet& domain);
  static OmegaSet powers(const Int& base);
  static OmegaSet multiples(const Int& m);
  static OmegaSet arithmetic(const Int& a, const Int& d);
  static OmegaSet explicit_set(std::vector<Int> values);
  static OmegaSet residues(const Int& modulus, std::vector<Int> rs);
  static OmegaSet set_union(const OmegaSet& a, const OmegaSet& b);
  static OmegaSet set_intersection(const OmegaSet& a, const OmegaSet& b);
  static OmegaSet set_difference(const OmegaSet& a, const OmegaSet& b);
  static OmegaSet tail(const OmegaSet& s, std::size_t drop);
  static OmegaSet strided(const OmegaSet& s, std::size_t offset, std::size_t stride);
  static OmegaSet all_of_omega() { return multiples(1); }

  SetKind kind() const;

  // Parameter accessors; each is valid only for the kinds that carry it.
  const Int& shift() const;            // FactorialShift
  const Int& base() const;             // Powers
  const Int& modulus() const;          // Multiples, Residues
  const Int& first_term() const;       // Arithmetic a
  const Int& step() const;             // Arithmetic d
  const std::vector<Int>& values() const;  // Explicit elements / Residues classes
  bool has_domain() const;             // FactorialShift
  OmegaSet domain() const;             // FactorialShift (throws if omega)
  OmegaSet left() const;               // Union/Intersection/Difference; Tail/Strided base
  OmegaSet right() const;
  std::size_t drop_count() const;      // Tail
  std::size_t stride_offset() const;   // Strided
  std::size_t stride_step() const;     // Strided

  /// Exact membership. May recurse into nested specs; throws
  /// resource_error if deciding membership exceeds the step budget.
  bool contains(const Int& n) const;

  /// First `count` elements in increasing order. Returns fewer for finite
  /// sets; throws resource_error when the budget runs out first.
  std::vector<Int> enumerate(std::size_t count, const EnumBudget& budget = {}) const;

  bool certified_infinite() const;
  bool certified_finite() const;

  bool structurally_equal(const OmegaSet& other) const;

  const std::shared_ptr<const detail::SetNode>& node() const { return node_; }

 private:
  explicit OmegaSet(std::shared_ptr<const detail::SetNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::SetNode> node_;
};

/// Incremental strictly-increasing enumeration with a work budget.
class SetEnumerator {
 public:
  explicit SetEnumerator(const OmegaSet& s, const EnumBudget& budget = {});
  ~SetEnumerator();
  SetEnumerator(SetEnumerator&&) noexcept;
  SetEnumerator& operator=(SetEnumerator&&) noexcept;

  /// Next element, or nullopt when the set (or its value cap) is
  /// exhausted. Throws resource_error when the step budget runs out.
  std::optional<Int> next();

 private:
  std::shared_ptr<const detail::SetNode> root_;  // keeps interior node pointers valid
  std::unique_ptr<detail::Stream> stream_;
  std::unique_ptr<detail::BudgetState> budget_;
};

struct ThinVerdict {
  enum class Result { Yes, No, Empirical };
  Result result;
  std::string reason;
  std::vector<Rat> ratio_trace;  // consecutive-element ratios a_k / a_{k+1}
  bool yes() const { return result == Result::Yes; }
};

struct HadamardVerdict {
  enum class Result { Yes, No, Empirical };
  Result result;
  std::optional<Rat> q;  // witness: a_{k+1}/a_k >= q > 1 for all k past from_index
  std::size_t from_index = 0;
  std::string reason;
  std::vector<Rat> ratio_trace;
  bool yes() const { return result == Result::Yes; }
};

struct DensityVerdict {
  enum class Kind { Zero, One, Value, Oscillating, Empirical };
  Kind kind;
  Rat value;  // exact density for Zero/One/Value; window estimate for Empirical
  Rat liminf, limsup;  // Oscillating bounds / empirical window trackers
  std::string proof;   // rule used for exact verdicts
  Int horizon;         // window used for empirical verdicts

  bool exact() const { return kind == Kind::Zero || kind == Kind::One || kind == Kind::Value; }
  static DensityVerdict zero(std::string proof);
  static DensityVerdict one(std::string proof);
  static DensityVerdict of(const Rat& v, std::string proof);
};

struct DivisibilityProfile {
  enum class Count { Finite, Infinite, Unknown };
  Count count;
  /// Finite: all elements at enumeration indices >= this bound are
  /// divisible by the modulus.
  std::size_t exception_index_bound = 0;
  std::vector<Int> exceptions;  // witness values with m not dividing them (possibly truncated)
  std::string reason;

  bool finite() const { return count == Count::Finite; }
  bool infinite() const { return count == Count::Infinite; }
};

ThinVerdict is_thin(const OmegaSet& s);
HadamardVerdict is_hadamard(const OmegaSet& s);
DensityVerdict density(const OmegaSet& s, const Int& horizon);
DivisibilityProfile divisibility_profile(const OmegaSet& s, const Int& m);
std::pair<OmegaSet, OmegaSet> partition_even_odd_positions(const OmegaSet& s);

/// Exact density when a closed-form rule applies (value plus the rule).
struct ExactDensity {
  Rat value;
  std::string proof;
};
std::optional<ExactDensity> exact_density(const OmegaSet& s);

/// Eventually periodic presentation: s = prefix  U  {n >= threshold :
/// n mod modulus in residues}, with prefix below threshold. Available for
/// arithmetic-flavoured specs and their boolean combinations.
struct PeriodicForm {
  Int modulus;
  std::vector<Int> residues;  // sorted, in [0, modulus)
  Int threshold;
  std::vector<Int> prefix;  // sorted elements below threshold
};
std::optional<PeriodicForm> periodic_form(const OmegaSet& s);

/// Elements are exactly {k! + shift : k >= k_start} with consecutive k.
struct FactorialFamilyForm {
  Int shift;
  unsigned k_start;
};
std::optional<FactorialFamilyForm> factorial_family_form(const OmegaSet& s);

/// Elements are exactly {base^(lead + j*step) : j in omega}.
struct GeometricForm {
  Int base;
  unsigned lead;
  unsigned step;
};
std::optional<GeometricForm> geometric_form(const OmegaSet& s);

/// Shift c such that every element of s has the form k! + c (s need not
/// contain all such values; subset-preserving operations keep the form).
std::optional<Int> factorial_subset_shift(const OmegaSet& s);

}  // namespace powerseq
