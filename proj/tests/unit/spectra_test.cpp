#include "helpers.hpp"

#include <numeric>
#include <random>

#include "fvm/errors.hpp"
#include "fvm/operations.hpp"
#include "fvm/spectra.hpp"

using namespace fvm;
using namespace fvm::test;

namespace {

using Poly = std::vector<std::int64_t>;  // lowest degree first

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// det(xI - M) by summing over all permutations; returned leading-first.
Poly leibniz_char_poly(const IntMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Poly sum(n + 1, 0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    Poly term{inversions % 2 ? -1 : 1};
    for (int i = 0; i < n; ++i) term = mul(term, i == p[i] ? Poly{-m(i, i), 1} : Poly{-m(i, p[i])});
    for (std::size_t d = 0; d < term.size(); ++d) sum[d] += term[d];
  } while (std::next_permutation(p.begin(), p.end()));
  return Poly(sum.rbegin(), sum.rend());
}

}  // namespace

TEST_CASE("characteristic polynomial examples") {
  CHECK(char_poly(IntMatrix::Zero(1, 1)) == Poly{1, 0});
  CHECK(char_poly(adjacency_matrix(graph(2, {{0, 1}}))) == Poly{1, 0, -1});
  CHECK(char_poly(adjacency_matrix(graph(3, {{0, 1}, {1, 2}, {0, 2}}))) == Poly{1, 0, -3, -2});
  CHECK(char_poly(IntMatrix(0, 0)) == Poly{1});
  CHECK_THROWS_AS(char_poly(IntMatrix::Zero(2, 3)), DomainError);
  CHECK_THROWS_AS(adjacency_matrix(edge()), DomainError);
  CHECK_THROWS_AS(adjacency_matrix(loop()), DomainError);
}

TEST_CASE("characteristic polynomial matches the Leibniz expansion") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 25; ++trial) {
      IntMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
      CHECK(char_poly(m) == leibniz_char_poly(m));
    }
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& g : labeled_graphs(n)) {
      auto a = adjacency_matrix(g);
      CHECK(char_poly(a) == leibniz_char_poly(a));
    }
}

TEST_CASE("overflow is reported, not wrapped") {
  // det = 2^160.
  IntMatrix big = IntMatrix::Identity(4, 4) * (std::int64_t{1} << 40);
  CHECK_THROWS_AS(char_poly(big), DomainError);
  // Rank one: intermediate products pass 2^63 but the coefficients do not.
  IntMatrix flat = IntMatrix::Constant(4, 4, std::int64_t{1} << 40);
  CHECK(char_poly(flat) == Poly{1, -(std::int64_t{1} << 42), 0, 0, 0});
}

TEST_CASE("cospectral pairs") {
  auto k2 = graph(2, {{0, 1}});
  CHECK(cospectral(k2, k2));
  CHECK_FALSE(cospectral(k2, graph(2, {})));
  auto star = graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto c4k1 = graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(char_poly(adjacency_matrix(star)) == Poly{1, 0, -4, 0, 0, 0});
  CHECK(char_poly(adjacency_matrix(star)) == char_poly(adjacency_matrix(c4k1)));
  CHECK(cospectral(star, c4k1));
  CHECK_FALSE(search_isomorphism(star, c4k1));
  CHECK_FALSE(naive_isomorphic(star, c4k1));
}

TEST_CASE("cospectrality is an isomorphism invariant and an equivalence") {
  std::vector<Structure> graphs;
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& g : labeled_graphs(n)) graphs.push_back(std::move(g));
  const std::size_t m = graphs.size();
  std::vector<std::vector<char>> co(m, std::vector<char>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      co[i][j] = cospectral(graphs[i], graphs[j]);
      if (graphs[i].size() == graphs[j].size() && search_isomorphism(graphs[i], graphs[j])) CHECK(co[i][j]);
    }
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(co[i][i]);
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(co[i][j] == co[j][i]);
      if (co[i][j])
        for (std::size_t l = 0; l < m; ++l)
          if (co[j][l]) CHECK(co[i][l]);
    }
  }
}
