#include "powerseq/descriptor.hpp"

#include <cctype>

namespace powerseq {

namespace {

constexpr const char* kUnionOp = "\xE2\x88\xAA";      // U+222A
constexpr const char* kIntersectOp = "\xE2\x88\xA9";  // U+2229
constexpr const char* kDifferenceOp = "\xE2\x88\x96"; // U+2216

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  OmegaSet parse_set_document() {
    auto s = parse_set();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return s;
  }

  FilterSpec parse_filter_document() {
    auto f = parse_filter();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool try_literal(const char* lit) {
    skip_ws();
    std::size_t len = std::char_traits<char>::length(lit);
    if (text_.compare(pos_, len, lit) == 0) {
      pos_ += len;
      return true;
    }
    return false;
  }

  void expect_literal(const char* lit) {
    if (!try_literal(lit)) fail(std::string("expected '") + lit + "'");
  }

  Int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    return Int(text_.substr(start, pos_ - start));
  }

  Rat parse_rational() {
    Int num = parse_int();
    if (try_literal("/")) {
      Int den = parse_int();
      if (den == 0) fail("zero denominator");
      return Rat(num, den);
    }
    return Rat(num);
  }

  std::size_t parse_index() {
    Int v = parse_int();
    if (v > 1'000'000'000) fail("index too large");
    return static_cast<std::size_t>(v.convert_to<unsigned long>());
  }

  OmegaSet parse_term() {
    skip_ws();
    std::size_t at = pos_;
    auto guarded = [&](auto&& make) {
      try {
        return make();
      } catch (const parse_error&) {
        throw;
      } catch (const error& e) {
        throw parse_error(e.what(), at);
      }
    };
    if (try_literal("factorial")) return OmegaSet::factorial();
    if (try_literal("factshift(")) {
      Int c = parse_int();
      if (try_literal(",")) {
        OmegaSet dom = parse_set();
        expect_literal(")");
        return guarded([&] { return OmegaSet::factorial_shift(c, dom); });
      }
      expect_literal(")");
      return guarded([&] { return OmegaSet::factorial_shift(c); });
    }
    if (try_literal("powers(")) {
      Int b = parse_int();
      expect_literal(")");
      return guarded([&] { return OmegaSet::powers(b); });
    }
    if (try_literal("mult(")) {
      Int m = parse_int();
      expect_literal(")");
      return guarded([&] { return OmegaSet::multiples(m); });
    }
    if (try_literal("arith(")) {
      Int a = parse_int();
      expect_literal(",");
      Int d = parse_int();
      expect_literal(")");
      return guarded([&] { return OmegaSet::arithmetic(a, d); });
    }
    if (try_literal("explicit[")) {
      std::vector<Int> vals;
      vals.push_back(parse_int());
      while (try_literal(",")) {
        skip_ws();
        std::size_t here = pos_;
        Int v = parse_int();
        if (v <= vals.back()) throw parse_error("explicit list must strictly increase", here);
        vals.push_back(std::move(v));
      }
      expect_literal("]");
      return guarded([&] { return OmegaSet::explicit_set(std::move(vals)); });
    }
    if (try_literal("tail(")) {
      OmegaSet s = parse_set();
      expect_literal(",");
      std::size_t drop = parse_index();
      expect_literal(")");
      return OmegaSet::tail(s, drop);
    }
    if (try_literal("strided(")) {
      OmegaSet s = parse_set();
      expect_literal(",");
      std::size_t offset = parse_index();
      expect_literal(",");
      skip_ws();
      std::size_t here = pos_;
      std::size_t stride = parse_index();
      if (stride < 1) throw parse_error("stride must be >= 1", here);
      expect_literal(")");
      return OmegaSet::strided(s, offset, stride);
    }
    if (try_literal("(")) {
      OmegaSet s = parse_set();
      expect_literal(")");
      return s;
    }
    fail("expected a set descriptor");
  }

  OmegaSet parse_set() {
    OmegaSet acc = parse_term();
    for (;;) {
      if (try_literal(kUnionOp) || try_literal("|")) {
        acc = OmegaSet::set_union(acc, parse_term());
      } else if (try_literal(kIntersectOp) || try_literal("&")) {
        acc = OmegaSet::set_intersection(acc, parse_term());
      } else if (try_literal(kDifferenceOp) || try_literal("\\")) {
        acc = OmegaSet::set_difference(acc, parse_term());
      } else {
        return acc;
      }
    }
  }

  FilterSpec parse_filter_base() {
    skip_ws();
    std::size_t at = pos_;
    auto guarded = [&](auto&& make) {
      try {
        return make();
      } catch (const parse_error&) {
        throw;
      } catch (const error& e) {
        throw parse_error(e.what(), at);
      }
    };
    if (try_literal("principal(")) {
      OmegaSet s = parse_set();
      expect_literal(")");
      return guarded([&] { return FilterSpec::principal(s); });
    }
    if (try_literal("niceF")) return FilterSpec::nice_f();
    if (try_literal("bohrFamily") || try_literal("bohrfamily")) return FilterSpec::bohr_family();
    if (try_literal("bohr([")) {
      std::vector<CirclePoint> pts;
      skip_ws();
      if (!try_literal("]")) {
        pts.emplace_back(parse_rational());
        while (try_literal(",")) pts.emplace_back(parse_rational());
        expect_literal("]");
      }
      expect_literal(",");
      Rat eps = parse_rational();
      expect_literal(")");
      return guarded([&] { return FilterSpec::bohr_basic(std::move(pts), eps); });
    }
    if (try_literal("generated(")) {
      std::vector<OmegaSet> gens;
      gens.push_back(parse_set());
      while (try_literal(",")) gens.push_back(parse_set());
      expect_literal(")");
      return guarded([&] { return FilterSpec::generated_by(std::move(gens)); });
    }
    fail("expected a filter descriptor");
  }

  FilterSpec parse_filter() {
    FilterSpec f = parse_filter_base();
    bool tilde = false;
    while (try_literal("~")) tilde = true;
    return tilde ? f.tilde() : f;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string print_term(const OmegaSet& s, bool parenthesize_binary);

std::string print_binary(const OmegaSet& s, const char* op) {
  // Left-associative chains print flat; a binary right operand needs parens.
  return print_term(s.left(), false) + op + print_term(s.right(), true);
}

std::string print_term(const OmegaSet& s, bool parenthesize_binary) {
  switch (s.kind()) {
    case SetKind::Factorial:
      return "factorial";
    case SetKind::FactorialShift:
      if (s.has_domain()) return "factshift(" + s.shift().str() + "," + print_set(s.domain()) + ")";
      return "factshift(" + s.shift().str() + ")";
    case SetKind::Powers:
      return "powers(" + s.base().str() + ")";
    case SetKind::Multiples:
      return "mult(" + s.modulus().str() + ")";
    case SetKind::Arithmetic:
      return "arith(" + s.first_term().str() + "," + s.step().str() + ")";
    case SetKind::Explicit: {
      std::string out = "explicit[";
      for (std::size_t i = 0; i < s.values().size(); ++i) {
        if (i) out += ",";
        out += s.values()[i].str();
      }
      return out + "]";
    }
    case SetKind::Residues: {
      // {n : n mod m in R} is the union of the arithmetic classes.
      std::string out;
      for (std::size_t i = 0; i < s.values().size(); ++i) {
        if (i) out += kUnionOp;
        out += "arith(" + s.values()[i].str() + "," + s.modulus().str() + ")";
      }
      if (s.values().size() > 1 && parenthesize_binary) return "(" + out + ")";
      return out;
    }
    case SetKind::Tail:
      return "tail(" + print_set(s.left()) + "," + std::to_string(s.drop_count()) + ")";
    case SetKind::Strided:
      return "strided(" + print_set(s.left()) + "," + std::to_string(s.stride_offset()) + "," +
             std::to_string(s.stride_step()) + ")";
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference: {
      const char* op = s.kind() == SetKind::Union        ? kUnionOp
                       : s.kind() == SetKind::Intersection ? kIntersectOp
                                                           : kDifferenceOp;
      std::string out = print_binary(s, op);
      if (parenthesize_binary) return "(" + out + ")";
      return out;
    }
  }
  throw error("print_set: unhandled kind");
}

}  // namespace

OmegaSet parse_set_descriptor(const std::string& text) { return Parser(text).parse_set_document(); }

FilterSpec parse_filter_descriptor(const std::string& text) {
  return Parser(text).parse_filter_document();
}

std::string print_set(const OmegaSet& s) { return print_term(s, false); }

std::string print_filter(const FilterSpec& f) {
  std::string out;
  switch (f.kind()) {
    case FilterKind::Principal:
      out = "principal(" + print_set(f.principal_set()) + ")";
      break;
    case FilterKind::NiceF:
      out = "niceF";
      break;
    case FilterKind::BohrFamily:
      out = "bohrFamily";
      break;
    case FilterKind::BohrBasic: {
      out = "bohr([";
      const auto& pts = f.bohr_points();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ",";
        out += rat_to_string(pts[i].angle());
      }
      out += "]," + rat_to_string(f.bohr_eps()) + ")";
      break;
    }
    case FilterKind::GeneratedBy: {
      out = "generated(";
      const auto& gens = f.generators();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i) out += ",";
        out += print_set(gens[i]);
      }
      out += ")";
      break;
    }
  }
  if (f.is_tilde()) out += "~";
  return out;
}

}  // namespace powerseq
