#include "wcfg/semiring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wcfg/errors.hpp"

namespace wcfg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool eq_exact(Weight a, Weight b) { return a == b; }

// 1e-9 relative, 1e-12 absolute; infinities compare equal to each other.
bool eq_approx(Weight a, Weight b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= 1e-12 + 1e-9 * scale;
}

Weight bool_add(Weight a, Weight b) { return (a != 0.0 || b != 0.0) ? 1.0 : 0.0; }
Weight bool_mul(Weight a, Weight b) { return (a != 0.0 && b != 0.0) ? 1.0 : 0.0; }
Weight bool_star(Weight) { return 1.0; }

Weight real_add(Weight a, Weight b) { return a + b; }
// 0 annihilates even against infinity.
Weight real_mul(Weight a, Weight b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}
Weight real_star(Weight a) { return a < 1.0 ? 1.0 / (1.0 - a) : kInf; }

Weight vit_add(Weight a, Weight b) { return std::max(a, b); }
Weight vit_mul(Weight a, Weight b) { return a * b; }
Weight vit_star(Weight) { return 1.0; }

}  // namespace

Semiring::Semiring(Kind kind, std::string name, Weight zero, Weight one,
                   BinaryOp add, BinaryOp mul, UnaryOp star, EqOp eq)
    : kind_(kind),
      name_(std::move(name)),
      zero_(zero),
      one_(one),
      add_(add),
      mul_(mul),
      star_(star),
      eq_(eq) {}

Semiring Semiring::boolean() {
  return Semiring(Kind::boolean, "boolean", 0.0, 1.0, bool_add, bool_mul,
                  bool_star, eq_exact);
}

Semiring Semiring::real() {
  return Semiring(Kind::real, "real", 0.0, 1.0, real_add, real_mul, real_star,
                  eq_approx);
}

// The viterbi carrier is [0,1] with max as the sum and product as the
// multiplication, so the additive identity is 0 and the multiplicative
// identity is 1.  star(a) = max(1, a * star(a)) has fixed point 1.
Semiring Semiring::viterbi() {
  return Semiring(Kind::viterbi, "viterbi", 0.0, 1.0, vit_add, vit_mul,
                  vit_star, eq_approx);
}

Semiring Semiring::custom(std::string name, Weight zero, Weight one,
                          BinaryOp add, BinaryOp mul, UnaryOp star, EqOp eq) {
  return Semiring(Kind::custom, std::move(name), zero, one, add, mul,
                  star ? star : bool_star, eq ? eq : eq_exact);
}

Semiring semiring_by_name(const std::string& name) {
  if (name == "boolean") return Semiring::boolean();
  if (name == "real") return Semiring::real();
  if (name == "viterbi") return Semiring::viterbi();
  raise(Errc::invalid_params, "unknown semiring: " + name);
}

std::string AxiomReport::to_string() const {
  std::ostringstream out;
  out << checks << " checks, " << violations.size() << " violations";
  for (const auto& v : violations) out << "\n  " << v.law << ": " << v.detail;
  return out.str();
}

AxiomReport check_axioms(const Semiring& s, std::span<const Weight> samples) {
  if (samples.size() < 3) {
    raise(Errc::invalid_params, "check_axioms needs at least 3 samples");
  }
  AxiomReport report;
  auto fail = [&](const std::string& law, Weight a, Weight b, Weight c,
                  Weight lhs, Weight rhs) {
    std::ostringstream d;
    d << "a=" << a << " b=" << b << " c=" << c << " lhs=" << lhs
      << " rhs=" << rhs;
    report.violations.push_back({law, d.str()});
  };
  auto check = [&](const std::string& law, Weight a, Weight b, Weight c,
                   Weight lhs, Weight rhs) {
    ++report.checks;
    if (!s.eq(lhs, rhs)) fail(law, a, b, c, lhs, rhs);
  };

  const Weight z = s.zero(), o = s.one();
  for (Weight a : samples) {
    check("add-identity", a, z, z, s.add(a, z), a);
    check("mul-identity", a, o, o, s.mul(a, o), a);
    check("mul-identity-left", a, o, o, s.mul(o, a), a);
    check("annihilation", a, z, z, s.mul(a, z), z);
    check("annihilation-left", a, z, z, s.mul(z, a), z);
    check("star-fixed-point", a, z, z, s.star(a), s.add(o, s.mul(a, s.star(a))));
    for (Weight b : samples) {
      check("add-commutative", a, b, z, s.add(a, b), s.add(b, a));
      check("mul-commutative", a, b, z, s.mul(a, b), s.mul(b, a));
      for (Weight c : samples) {
        check("add-associative", a, b, c, s.add(s.add(a, b), c),
              s.add(a, s.add(b, c)));
        check("mul-associative", a, b, c, s.mul(s.mul(a, b), c),
              s.mul(a, s.mul(b, c)));
        check("distributes-right", a, b, c, s.mul(s.add(a, b), c),
              s.add(s.mul(a, c), s.mul(b, c)));
        check("distributes-left", a, b, c, s.mul(c, s.add(a, b)),
              s.add(s.mul(c, a), s.mul(c, b)));
      }
    }
  }
  return report;
}

}  // namespace wcfg
