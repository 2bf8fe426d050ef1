#pragma once

#include "powerseq/circle.hpp"
#include "powerseq/omega_sets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace powerseq {

enum class FilterKind {
  Principal,    // supersets of a fixed infinite set B
  NiceF,        // generated by {k!+1 : k in D} over density-1 domains D
  GeneratedBy,  // supersets of finite intersections of listed generators
  BohrBasic,    // supersets of one basic neighborhood cut out by torsion points
  BohrFamily,   // the whole torsion-generated neighborhood family at 0
};

/// Filter on omega, described by generators. Filters are never
/// materialized; membership works on certificates.
class FilterSpec {
 public:
  static FilterSpec principal(const OmegaSet& b);
  static FilterSpec nice_f();
  /// Checks the finite-intersection property to `fip_depth` at
  /// construction and throws on a witnessed failure.
  static FilterSpec generated_by(std::vector<OmegaSet> generators, int fip_depth = 2);
  static FilterSpec bohr_basic(std::vector<CirclePoint> points, const Rat& eps);
  static FilterSpec bohr_family();

  /// Variant closed under finite modification (adds all cofinite sets).
  FilterSpec tilde(bool enabled = true) const;
  bool is_tilde() const { return tilde_; }

  FilterKind kind() const { return kind_; }
  const OmegaSet& principal_set() const;
  const std::vector<OmegaSet>& generators() const;
  const std::vector<CirclePoint>& bohr_points() const;
  const Rat& bohr_eps() const;
  const OmegaSet& bohr_set() const;  // BohrBasic: the generated basic set

 private:
  FilterSpec() = default;
  FilterKind kind_ = FilterKind::NiceF;
  bool tilde_ = false;
  std::optional<OmegaSet> principal_;
  std::vector<OmegaSet> generators_;
  std::vector<CirclePoint> points_;
  Rat eps_;
  std::optional<OmegaSet> bohr_set_;
};

/// {n >= 0 : d(z^n, 1) < eps for every listed z}, as a periodic residue
/// descriptor with period lcm of the point orders. Contains all multiples
/// of that period, so it is infinite by construction.
OmegaSet bohr_basic_set(const std::vector<CirclePoint>& points, const Rat& eps);

struct ContainmentResult {
  enum class Verdict { Yes, No, Unknown };
  Verdict verdict;
  bool modulo_finite = false;  // Yes holds only up to finitely many exceptions
  std::string reason;
  std::optional<Int> counterexample;          // No: element of sub missing from sup
  std::optional<std::size_t> checked_prefix;  // Unknown: bounded evidence size
};

/// Decides sub being a subset of sup where closed forms exist (periodic
/// pairs, factorial/geometric tails against periodic sets, density
/// comparisons, structural rules); falls back to a bounded element check.
ContainmentResult set_contained_in(const OmegaSet& sub, const OmegaSet& sup, bool up_to_finite);

struct MembershipVerdict {
  enum class Kind { Member, NonMember, Empirical, Unknown };
  Kind kind;
  std::string certificate;
  std::optional<OmegaSet> witness;  // Member: generator/intersection contained in the set
  std::optional<Int> counterexample;
  std::optional<DensityVerdict> density_certificate;  // NiceF reduction

  bool member() const { return kind == Kind::Member; }
  bool non_member() const { return kind == Kind::NonMember; }
};

MembershipVerdict filter_member(const FilterSpec& f, const OmegaSet& w);

struct FipReport {
  bool holds;
  std::string certificate;
  std::vector<std::size_t> violating_subset;  // generator indices, when holds is false
  std::vector<Int> found_elements;            // what the violating intersection produced
  Int horizon;                                // value horizon used by the bounded check
};

FipReport check_fip(const std::vector<OmegaSet>& generators, int depth);
FipReport check_fip(const FilterSpec& f, int depth);

}  // namespace powerseq
