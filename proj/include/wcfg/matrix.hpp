#ifndef WCFG_MATRIX_HPP
#define WCFG_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "wcfg/semiring.hpp"

namespace wcfg {

// Execution policy for the data-parallel kernels.  `parallel` uses OpenMP
// when the build has it and is bit-identical to `serial`: the parallel loops
// only ever write disjoint slots computed from already-finished state.
enum class Execution { serial, parallel };

// Dense square matrix over a semiring.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t n, const Semiring& semiring)
      : n_(n), data_(n * n, semiring.zero()) {}

  std::size_t size() const { return n_; }
  Weight at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  Weight& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  friend bool operator==(const WeightMatrix& a, const WeightMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t n_;
  std::vector<Weight> data_;
};

// Algebraic-path closure: returns M* satisfying M* = I (+) M M*, by
// node-elimination in O(n^3) semiring operations.
WeightMatrix star_closure(const WeightMatrix& m, const Semiring& semiring,
                          Execution exec = Execution::parallel);

// M* v.
std::vector<Weight> mat_vec(const WeightMatrix& m,
                            const std::vector<Weight>& v,
                            const Semiring& semiring);

}  // namespace wcfg

#endif  // WCFG_MATRIX_HPP
