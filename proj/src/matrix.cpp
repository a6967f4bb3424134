#include "wcfg/matrix.hpp"

namespace wcfg {

// Gauss-Jordan style elimination over the semiring: after step k, entry
// (i, j) holds the sum over all paths from i to j whose interior nodes are
// drawn from {0..k}.  Row k and column k are snapshotted so every (i, j)
// update in step k reads only step-(k-1) values, which keeps the parallel
// loop free of ordering effects.
WeightMatrix star_closure(const WeightMatrix& m, const Semiring& s,
                          Execution exec) {
  const std::size_t n = m.size();
  WeightMatrix a = m;
  std::vector<Weight> row(n), col(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Weight skk = s.star(a.at(k, k));
    for (std::size_t t = 0; t < n; ++t) {
      row[t] = a.at(k, t);
      col[t] = a.at(t, k);
    }
    const long nn = static_cast<long>(n);
#ifdef WCFG_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (exec == Execution::parallel && n >= 64)
#endif
    for (long i = 0; i < nn; ++i) {
      const Weight work = s.mul(col[i], skk);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) = s.add(a.at(i, j), s.mul(work, row[j]));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    a.at(i, i) = s.add(s.one(), a.at(i, i));
  }
  return a;
}

std::vector<Weight> mat_vec(const WeightMatrix& m,
                            const std::vector<Weight>& v,
                            const Semiring& s) {
  const std::size_t n = m.size();
  std::vector<Weight> out(n, s.zero());
  for (std::size_t i = 0; i < n; ++i) {
    Weight acc = s.zero();
    for (std::size_t j = 0; j < n; ++j) {
      acc = s.add(acc, s.mul(m.at(i, j), v[j]));
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace wcfg
