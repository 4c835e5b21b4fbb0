#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ratecache/prob.hpp"
#include "ratecache/problem.hpp"
#include "ratecache/closed_form.hpp"
#include "test_util.hpp"

using namespace ratecache;

namespace {

// Independent reference for conditional mutual information: direct summation
// over the joint table.
double brute_cmi(const JointPmf& j, std::size_t a, std::size_t b, std::size_t c) {
  JointPmf pac = j.marginal({a, c});
  JointPmf pbc = j.marginal({b, c});
  JointPmf pabc = j.marginal({a, b, c});
  Pmf pc = j.axis_marginal(c);
  double total = 0.0;
  for (std::size_t flat = 0; flat < pabc.size(); ++flat) {
    double p = pabc[flat];
    if (p < kZeroMass) continue;
    std::size_t ia = pabc.axis_index(flat, 0);
    std::size_t ib = pabc.axis_index(flat, 1);
    std::size_t ic = pabc.axis_index(flat, 2);
    double num = p * pc[ic];
    double den = pac[ia * pc.size() + ic] * pbc[ib * pc.size() + ic];
    total += p * std::log2(num / den);
  }
  return total;
}

}  // namespace

TEST_CASE("entropy of simple pmfs") {
  CHECK(entropy(Pmf({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(Pmf({1.0, 0.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy(Pmf({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(Pmf({0.5, -0.1, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Pmf({0.5, 0.4}), std::invalid_argument);
  // In-tolerance sums are renormalized.
  Pmf p({0.5, 0.5 + 5e-10});
  CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-15);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.1) == doctest::Approx(0.46900).epsilon(1e-5));
  CHECK(binary_entropy(0.3) == binary_entropy(0.7));
  CHECK_THROWS_AS(binary_entropy(1.2), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
}

TEST_CASE("conditional entropy") {
  JointPmf indep({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(cond_entropy(indep, {0}, {1}) == doctest::Approx(1.0).epsilon(1e-12));
  JointPmf copy({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(cond_entropy(copy, {0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));
  JointPmf dsbs({2, 2}, {0.45, 0.05, 0.05, 0.45});
  CHECK(cond_entropy(dsbs, {0}, {1}) == doctest::Approx(0.46900).epsilon(1e-5));
  CHECK_THROWS_AS(cond_entropy(dsbs, {0}, {0}), std::invalid_argument);
}

TEST_CASE("mutual information") {
  JointPmf indep({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(mutual_info(indep, {0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));
  JointPmf copy({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_info(copy, {0}, {1}) == doctest::Approx(1.0).epsilon(1e-12));
  JointPmf dsbs({2, 2}, {0.45, 0.05, 0.05, 0.45});
  CHECK(mutual_info(dsbs, {0}, {1}) == doctest::Approx(0.53100).epsilon(1e-5));
}

TEST_CASE("conditional mutual information") {
  // C independent of a pair of identical fair bits.
  JointPmf copy_pair({2, 2, 2}, {0.25, 0.0, 0.0, 0.25, 0.25, 0.0, 0.0, 0.25});
  // Axes here are (C, A, B); condition on axis 0.
  CHECK(cond_mutual_info(copy_pair, {1}, {2}, {0}) == doctest::Approx(1.0).epsilon(1e-12));

  // A independent of (B, C): p(a) p(b,c) with correlated (B, C).
  std::vector<double> t;
  JointPmf bc({2, 2}, {0.4, 0.1, 0.2, 0.3});
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t f = 0; f < bc.size(); ++f) t.push_back(0.5 * bc[f]);
  }
  JointPmf abc({2, 2, 2}, t);
  CHECK(cond_mutual_info(abc, {0}, {1}, {2}) == doctest::Approx(0.0).epsilon(1e-12));

  // A fair, B = A xor N with N ~ Bern(0.1), C = A xor B = N. The brute-force
  // oracle fixes the expected value.
  std::vector<double> cells(8, 0.0);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t n = 0; n < 2; ++n) {
      std::size_t b = a ^ n;
      cells[(a * 2 + b) * 2 + n] += 0.5 * (n == 1 ? 0.1 : 0.9);
    }
  }
  JointPmf gated({2, 2, 2}, cells);
  double oracle = brute_cmi(gated, 0, 1, 2);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cond_mutual_info(gated, {0}, {1}, {2}) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("total correlation") {
  JointPmf indep({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(total_correlation(indep) == doctest::Approx(0.0).epsilon(1e-12));
  JointPmf triple({2, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5});
  CHECK(total_correlation(triple) == doctest::Approx(2.0).epsilon(1e-12));
  JointPmf dsbs = dsbs_pair(0.1);
  CHECK(total_correlation(dsbs) == doctest::Approx(0.53100).epsilon(1e-5));
  CHECK_THROWS_AS(total_correlation(JointPmf({4}, {0.25, 0.25, 0.25, 0.25})),
                  std::invalid_argument);
}

TEST_CASE("conditional total correlation") {
  // V (axis 2) independent of two independent bits.
  JointPmf indep({2, 2, 2}, std::vector<double>(8, 0.125));
  CHECK(conditional_total_correlation(indep, 2) == doctest::Approx(0.0).epsilon(1e-12));
  // V equal to both components.
  JointPmf all_equal({2, 2, 2}, {0.5, 0, 0, 0, 0, 0, 0, 0.5});
  CHECK(conditional_total_correlation(all_equal, 2) == doctest::Approx(0.0).epsilon(1e-12));
  // Constant V leaves the unconditional value.
  JointPmf dsbs = dsbs_pair(0.1);
  std::vector<double> with_v(8, 0.0);
  for (std::size_t i = 0; i < 4; ++i) with_v[i * 2] = dsbs[i];
  JointPmf padded({2, 2, 2}, with_v);
  CHECK(conditional_total_correlation(padded, 2) ==
        doctest::Approx(total_correlation(dsbs)).epsilon(1e-12));
}

TEST_CASE("induced joint structure") {
  CachingProblem dsbs = dsbs_selector_problem(0.1);
  JointPmf ident = induced_joint(dsbs, TestChannel::identity(4));
  CHECK(cond_entropy(ident, {axis::V}, {axis::X}) == doctest::Approx(0.0).epsilon(1e-12));

  JointPmf constant = induced_joint(dsbs, TestChannel::constant(4, 2));
  CHECK(mutual_info(constant, {axis::V}, {axis::X, axis::Y, axis::S1}) ==
        doctest::Approx(0.0).epsilon(1e-12));

  JointPmf half = induced_joint(dsbs, dsbs_binary_channel(0.5));
  CHECK(mutual_info(half, {axis::X}, {axis::V}) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(induced_joint(dsbs, TestChannel::identity(3)), std::invalid_argument);
}

TEST_CASE("chain rule and nonnegativity on random joints") {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(101, seed, 0));
    JointPmf j = testutil::random_joint(rng, {2, 3, 2});
    double h_ab = j.subset_entropy({0, 1});
    double h_a = j.subset_entropy({0});
    double h_b_given_a = cond_entropy(j, {1}, {0});
    CHECK(h_ab == doctest::Approx(h_a + h_b_given_a).epsilon(1e-12));

    CHECK(entropy(j) >= -1e-12);
    CHECK(mutual_info(j, {0}, {1}) >= -1e-12);
    CHECK(cond_mutual_info(j, {0}, {1}, {2}) >= -1e-12);
    CHECK(cond_entropy(j, {0}, {1, 2}) >= -1e-12);
    CHECK(total_correlation(j) >= -1e-12);
    CHECK(conditional_total_correlation(j, 2) >= -1e-12);
  }
}

TEST_CASE("total correlation of a pair equals mutual information") {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(102, seed, 0));
    JointPmf j = testutil::random_joint(rng, {3, 4});
    CHECK(total_correlation(j) ==
          doctest::Approx(mutual_info(j, {0}, {1})).epsilon(1e-12));
  }
}

TEST_CASE("induced joints always satisfy the channel Markov structure") {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(103, seed, 0));
    CachingProblem problem = testutil::random_problem(rng, 3, 2, 2);
    TestChannel channel = testutil::random_channel(rng, 3, 4);
    JointPmf j = induced_joint(problem, channel);
    CHECK(cond_mutual_info(j, {axis::V}, {axis::Y}, {axis::X}) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("request-averaged conditional entropy matches the joint form") {
  // On product sources, E_Y[H(f(X,y)|V)] equals H(f(X,Y)|V,Y).
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(104, seed, 0));
    std::vector<double> px = rng.dirichlet_row(3);
    std::vector<double> py = rng.dirichlet_row(2);
    std::vector<double> table(6);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 2; ++y) table[x * 2 + y] = px[x] * py[y];
    }
    SymbolTable f(3, std::vector<std::string>(2));
    for (auto& row : f) {
      for (auto& cell : row) cell = std::to_string(rng.next_u64() % 2);
    }
    CachingProblem problem({"a", "b", "c"}, {"1", "2"}, JointPmf({3, 2}, table), {f});
    TestChannel channel = testutil::random_channel(rng, 3, 4);
    JointPmf j = induced_joint(problem, channel);
    double joint_form = cond_entropy(j, {axis::S1}, {axis::V, axis::Y});

    double averaged = 0.0;
    for (std::size_t y = 0; y < 2; ++y) {
      std::vector<double> vs(4 * problem.s_size(0), 0.0);
      for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t v = 0; v < 4; ++v) {
          vs[v * problem.s_size(0) + problem.f_index(0, x, y)] += px[x] * channel.p(x, v);
        }
      }
      averaged += py[y] * cond_entropy(JointPmf({4, problem.s_size(0)}, vs), {1}, {0});
    }
    CHECK(joint_form == doctest::Approx(averaged).epsilon(1e-12));
  }
}

TEST_CASE("joint pmf validation") {
  CHECK_THROWS_AS(JointPmf({2, 2}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({2, 2}, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({2, 2}, {0.5, -0.1, 0.3, 0.3}), std::invalid_argument);
}
