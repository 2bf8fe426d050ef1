#pragma once

#include "powerseq/filters.hpp"
#include "powerseq/omega_sets.hpp"

#include <string>

namespace powerseq {

/// Grammar (whitespace-insensitive, operators left-associative):
///   set    := term (("∪" | "∩" | "∖") term)*
///   term   := "factorial" | "factshift(" int ["," set] ")" | "powers(" int ")"
///           | "mult(" int ")" | "arith(" int "," int ")"
///           | "explicit[" int ("," int)* "]" | "tail(" set "," int ")"
///           | "strided(" set "," int "," int ")" | "(" set ")"
///   filter := fbase ("~")*
///   fbase  := "principal(" set ")" | "niceF"
///           | "bohr([" [rat ("," rat)*] "]," rat ")" | "bohrFamily"
///           | "generated(" set ("," set)* ")"
///   rat    := int ["/" int]
/// ASCII aliases "|", "&", "\" are accepted for the three set operators.
/// Errors carry the byte position of the failure. Explicit lists must be
/// strictly increasing.
OmegaSet parse_set_descriptor(const std::string& text);
FilterSpec parse_filter_descriptor(const std::string& text);

/// Canonical text form; parsing it back yields a structurally equal tree.
std::string print_set(const OmegaSet& s);
std::string print_filter(const FilterSpec& f);

}  // namespace powerseq
