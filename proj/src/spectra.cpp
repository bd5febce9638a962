#include "fvm/spectra.hpp"

#include "fvm/errors.hpp"
#include "fvm/game_comonads.hpp"

namespace fvm {
namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw DomainError("char_poly: coefficient overflow");
  return static_cast<std::int64_t>(v);
}

// A*B with every entry checked.
IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      __int128 s = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += static_cast<__int128>(a(i, k)) * b(k, j);
      out(i, j) = checked(s);
    }
  return out;
}

}  // namespace

IntMatrix adjacency_matrix(const Structure& g) {
  require_graph(g);
  const auto n = static_cast<Eigen::Index>(g.size());
  IntMatrix m = IntMatrix::Zero(n, n);
  for (const auto& t : g.tuples("E")) m(t[0], t[1]) = 1;
  return m;
}

// Faddeev–LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
// The divisions are exact for integer matrices.
std::vector<std::int64_t> char_poly(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("char_poly: matrix is not square");
  const auto n = a.rows();
  std::vector<std::int64_t> c(n + 1, 0);
  c[0] = 1;
  IntMatrix m = IntMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    IntMatrix next = mul(a, m);
    for (Eigen::Index i = 0; i < n; ++i) next(i, i) = checked(static_cast<__int128>(next(i, i)) + c[k - 1]);
    m = std::move(next);
    __int128 tr = 0;
    IntMatrix am = mul(a, m);
    for (Eigen::Index i = 0; i < n; ++i) tr += am(i, i);
    if (tr % k != 0) throw IntegrityError("char_poly: inexact division");
    c[k] = checked(-tr / k);
  }
  return c;
}

bool cospectral(const Structure& g, const Structure& h) {
  return g.size() == h.size() && char_poly(adjacency_matrix(g)) == char_poly(adjacency_matrix(h));
}

}  // namespace fvm
