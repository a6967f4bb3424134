#ifndef WCFG_SEMIRING_HPP
#define WCFG_SEMIRING_HPP

#include <span>
#include <string>
#include <vector>

namespace wcfg {

// All shipped carriers embed into double: boolean uses {0.0, 1.0}, the
// nonnegative reals include INFINITY, viterbi lives in [0, 1].
using Weight = double;

// A commutative semiring with a star operation.  Instances are immutable
// bundles of function pointers; they are cheap to copy and safe to share
// across threads.
//
// star satisfies a* = 1 (+) a (*) a* wherever it is defined.  For carriers
// where the closure diverges (real semiring, a >= 1) star returns infinity,
// which is itself a carrier element; pipeline steps that cannot absorb an
// infinite closure check for it and report StarDivergence.
class Semiring {
 public:
  enum class Kind { boolean, real, viterbi, custom };

  using BinaryOp = Weight (*)(Weight, Weight);
  using UnaryOp = Weight (*)(Weight);
  using EqOp = bool (*)(Weight, Weight);

  static Semiring boolean();
  static Semiring real();
  static Semiring viterbi();
  // Escape hatch for tests (e.g. deliberately broken algebras).
  static Semiring custom(std::string name, Weight zero, Weight one,
                         BinaryOp add, BinaryOp mul, UnaryOp star, EqOp eq);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  Weight zero() const { return zero_; }
  Weight one() const { return one_; }
  Weight add(Weight a, Weight b) const { return add_(a, b); }
  Weight mul(Weight a, Weight b) const { return mul_(a, b); }
  Weight star(Weight a) const { return star_(a); }

  bool eq(Weight a, Weight b) const { return eq_(a, b); }
  bool is_zero(Weight a) const { return eq_(a, zero_); }
  bool is_one(Weight a) const { return eq_(a, one_); }

  // Semirings are interchangeable iff they are the same shipped instance.
  friend bool operator==(const Semiring& a, const Semiring& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_;
  }

 private:
  Semiring(Kind kind, std::string name, Weight zero, Weight one, BinaryOp add,
           BinaryOp mul, UnaryOp star, EqOp eq);

  Kind kind_;
  std::string name_;
  Weight zero_;
  Weight one_;
  BinaryOp add_;
  BinaryOp mul_;
  UnaryOp star_;
  EqOp eq_;
};

// Parses "boolean" | "real" | "viterbi" (the CLI selector strings).
Semiring semiring_by_name(const std::string& name);

struct AxiomViolation {
  std::string law;     // e.g. "add-commutative"
  std::string detail;  // instantiated counterexample
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  int checks = 0;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Property harness: checks the semiring laws (and the star fixed-point
// identity) on all triples drawn from `samples`.  Requires >= 3 samples.
AxiomReport check_axioms(const Semiring& semiring,
                         std::span<const Weight> samples);

}  // namespace wcfg

#endif  // WCFG_SEMIRING_HPP
