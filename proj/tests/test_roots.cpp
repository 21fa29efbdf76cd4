#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "phononforge/roots.hpp"

namespace pf = phononforge;
using cd = std::complex<double>;

namespace {

std::vector<cd> from_roots(const std::vector<cd>& roots, cd lead) {
  std::vector<std::pair<cd, cd>> f;
  for (cd r : roots) f.emplace_back(-r, 1.0);
  return pf::expand_linear_factors(f, lead);
}

// Every expected root has a distinct partner in `got` within tol.
bool same_multiset(std::vector<cd> expect, std::vector<cd> got, double tol) {
  if (expect.size() != got.size()) return false;
  for (cd e : expect) {
    auto it = std::min_element(got.begin(), got.end(), [e](cd a, cd b) { return std::abs(a - e) < std::abs(b - e); });
    if (std::abs(*it - e) > tol) return false;
    got.erase(it);
  }
  return true;
}

}  // namespace

TEST(Roots, Quadratic) {
  const std::vector<cd> c{2.0, -3.0, 1.0};  // (x-1)(x-2)
  const pf::RootResult r = pf::find_roots(c);
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_LT(std::abs(r.roots[0] - 1.0), 1e-13);
  EXPECT_LT(std::abs(r.roots[1] - 2.0), 1e-13);
}

TEST(Roots, ZeroRootsDeflated) {
  const std::vector<cd> c{0.0, 0.0, 1.0};
  const pf::RootResult r = pf::find_roots(c);
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_EQ(r.roots[0], cd{});
  EXPECT_EQ(r.roots[1], cd{});
  EXPECT_EQ(r.iterations, 0);
}

TEST(Roots, OrderedByModulusThenArg) {
  const std::vector<cd> roots{{0.0, 2.0}, {-1.0, 0.0}, {2.0, 0.0}, {0.5, 0.0}};
  const pf::RootResult r = pf::find_roots(from_roots(roots, 1.0));
  ASSERT_EQ(r.roots.size(), 4u);
  EXPECT_LT(std::abs(r.roots[0] - 0.5), 1e-12);
  EXPECT_LT(std::abs(r.roots[1] + 1.0), 1e-12);
  EXPECT_LT(std::abs(r.roots[2] - 2.0), 1e-12);
  EXPECT_LT(std::abs(r.roots[3] - cd(0.0, 2.0)), 1e-12);
}

TEST(Roots, RandomPolynomialsRecoverRoots) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 10;
    std::vector<cd> roots;
    for (int i = 0; i < n; ++i) roots.emplace_back(g(rng), g(rng));
    const cd lead{g(rng), g(rng)};
    pf::RootOptions opt;
    opt.seed = static_cast<std::uint64_t>(k);
    const pf::RootResult r = pf::find_roots(from_roots(roots, lead), opt);
    EXPECT_TRUE(same_multiset(roots, r.roots, 1e-7)) << "case " << k;
    const std::vector<cd> back = from_roots(r.roots, lead);
    const std::vector<cd> orig = from_roots(roots, lead);
    double cmax = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < orig.size(); ++i) {
      cmax = std::max(cmax, std::abs(orig[i]));
      err = std::max(err, std::abs(back[i] - orig[i]));
    }
    EXPECT_LT(err / cmax, 1e-9) << "case " << k;
  }
}

TEST(Roots, SeedDeterminism) {
  const std::vector<cd> c{1.0, 0.3, -2.0, {0.0, 1.0}, 0.5};
  pf::RootOptions opt;
  opt.seed = 42;
  const pf::RootResult a = pf::find_roots(c, opt);
  const pf::RootResult b = pf::find_roots(c, opt);
  ASSERT_EQ(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) EXPECT_EQ(a.roots[i], b.roots[i]);
}

TEST(Roots, RepeatedRootsStillExpand) {
  // (x - 1)^4: Aberth converges slowly here; the re-expansion is what counts.
  const std::vector<cd> c = from_roots({1.0, 1.0, 1.0, 1.0}, 1.0);
  const pf::RootResult r = pf::find_roots(c);
  const std::vector<cd> back = from_roots(r.roots, 1.0);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LT(std::abs(back[i] - c[i]), 1e-9);
}

TEST(Roots, RejectsZeroLeading) {
  const std::vector<cd> c{1.0, 0.0};
  EXPECT_THROW(pf::find_roots(c), pf::InvalidArgument);
}
