#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "wcfg/errors.hpp"
#include "wcfg/semiring.hpp"

using namespace wcfg;

TEST_CASE("boolean semiring basics") {
  Semiring s = Semiring::boolean();
  CHECK(s.add(0.0, 1.0) == 1.0);
  CHECK(s.mul(1.0, 0.0) == 0.0);
  CHECK(s.star(0.0) == 1.0);
  CHECK(s.star(1.0) == 1.0);
  CHECK(s.zero() == 0.0);
  CHECK(s.one() == 1.0);
}

TEST_CASE("real semiring basics") {
  Semiring s = Semiring::real();
  CHECK(s.add(2.0, 3.0) == 5.0);
  CHECK(s.star(0.5) == doctest::Approx(2.0));
  CHECK(s.mul(0.0, INFINITY) == 0.0);
  CHECK(s.mul(INFINITY, 0.0) == 0.0);
  CHECK(std::isinf(s.star(1.0)));
  CHECK(std::isinf(s.star(1.5)));
}

TEST_CASE("viterbi semiring basics") {
  Semiring s = Semiring::viterbi();
  CHECK(s.add(0.3, 0.7) == 0.7);
  CHECK(s.mul(0.5, 0.5) == 0.25);
  CHECK(s.star(0.9) == 1.0);
  CHECK(s.zero() == 0.0);
  CHECK(s.one() == 1.0);
}

TEST_CASE("selector strings") {
  CHECK(semiring_by_name("boolean").kind() == Semiring::Kind::boolean);
  CHECK(semiring_by_name("real").kind() == Semiring::Kind::real);
  CHECK(semiring_by_name("viterbi").kind() == Semiring::Kind::viterbi);
  CHECK_THROWS_AS((void)semiring_by_name("tropical"), Error);
}

TEST_CASE("axioms hold on all shipped instances") {
  {
    // Both carrier elements (repetition meets the sample minimum).
    std::array<Weight, 3> samples = {0.0, 1.0, 1.0};
    CHECK(check_axioms(Semiring::boolean(), samples).violations.empty());
  }
  {
    std::array<Weight, 4> samples = {0.0, 1.0, 2.0, 0.5};
    CHECK(check_axioms(Semiring::real(), samples).violations.empty());
  }
  {
    std::array<Weight, 4> samples = {0.0, 0.25, 0.5, 1.0};
    CHECK(check_axioms(Semiring::viterbi(), samples).violations.empty());
  }
}

TEST_CASE("star fixed point identity") {
  for (Semiring s : {Semiring::boolean(), Semiring::real(), Semiring::viterbi()}) {
    for (Weight a : {0.0, 0.25, 0.5, 0.9}) {
      CHECK(s.eq(s.star(a), s.add(s.one(), s.mul(a, s.star(a)))));
    }
  }
}

namespace {
// Subtraction is not commutative; a negative control for the harness.
Weight broken_add(Weight a, Weight b) { return a - b; }
Weight plain_mul(Weight a, Weight b) { return a * b; }
}  // namespace

TEST_CASE("axiom harness flags a broken instance") {
  Semiring broken = Semiring::custom("broken", 0.0, 1.0, broken_add, plain_mul,
                                     nullptr, nullptr);
  std::array<Weight, 3> samples = {0.0, 1.0, 2.0};
  AxiomReport report = check_axioms(broken, samples);
  CHECK(!report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.law == "add-commutative") found = true;
  }
  CHECK(found);
}

TEST_CASE("harness needs at least three samples") {
  std::array<Weight, 2> samples = {0.0, 1.0};
  CHECK_THROWS_AS((void)check_axioms(Semiring::boolean(), samples), Error);
}
