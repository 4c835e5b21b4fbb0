#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "ratecache/closed_form.hpp"
#include "ratecache/static_model.hpp"
#include "test_util.hpp"

using namespace ratecache;

namespace {

IndependentSourceSpec two_fair_bits_spec() {
  return to_independent_spec(testutil::fair_bits_problem(0.5));
}

// V = (X_Q, Q) with Q uniform over the two requests: four channel symbols,
// index = request * 2 + revealed bit.
TestChannel component_reveal_channel() {
  return TestChannel({{0.5, 0.0, 0.5, 0.0},
                      {0.5, 0.0, 0.0, 0.5},
                      {0.0, 0.5, 0.5, 0.0},
                      {0.0, 0.5, 0.0, 0.5}});
}

}  // namespace

TEST_CASE("independence is required") {
  SymbolTable f = {{"0", "0"}, {"1", "1"}};
  CachingProblem dependent({"0", "1"}, {"a", "b"}, JointPmf({2, 2}, {0.4, 0.1, 0.1, 0.4}),
                           {f});
  CHECK_THROWS_AS(to_independent_spec(dependent), std::invalid_argument);
  CHECK_NOTHROW(to_independent_spec(testutil::xor_problem()));
}

TEST_CASE("static corner profiles") {
  IndependentSourceSpec spec = two_fair_bits_spec();

  StaticRateProfile constant = static_corner(spec, TestChannel::constant(4));
  CHECK(constant.cache_rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(constant.update_rates[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(constant.update_rates[1] == doctest::Approx(1.0).epsilon(1e-12));

  StaticRateProfile full = static_corner(spec, TestChannel::identity(4));
  CHECK(full.cache_rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.update_rates[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(full.update_rates[1] == doctest::Approx(0.0).epsilon(1e-12));

  StaticRateProfile mixed = static_corner(spec, component_reveal_channel());
  CHECK(mixed.cache_rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mixed.update_rates[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mixed.update_rates[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("adaptive points coincide with the sequential evaluator") {
  IndependentSourceSpec spec = two_fair_bits_spec();

  RatePoint constant = adaptive_point(spec, TestChannel::constant(4));
  CHECK(constant.cache_rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(constant.update_rate == doctest::Approx(1.0).epsilon(1e-12));

  RatePoint full = adaptive_point(spec, TestChannel::identity(4));
  CHECK(full.cache_rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.update_rate == doctest::Approx(0.0).epsilon(1e-12));

  // The DSBS sweep witness evaluates identically under both models.
  IndependentSourceSpec dsbs = to_independent_spec(dsbs_selector_problem(0.1));
  TestChannel witness = dsbs_binary_channel(DsbsSpec::make(0.1).gamma);
  RatePoint a = adaptive_point(dsbs, witness);
  RatePoint s = achievable_point(to_problem(dsbs), witness);
  CHECK(a.cache_rate == doctest::Approx(s.cache_rate).epsilon(1e-12));
  CHECK(a.update_rate == doctest::Approx(s.update_rate).epsilon(1e-12));

  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(derive_seed(51, seed, 0));
    std::vector<double> px = rng.dirichlet_row(3);
    std::vector<double> py = rng.dirichlet_row(2);
    SymbolTable f(3, std::vector<std::string>(2));
    for (auto& row : f) {
      for (auto& cell : row) cell = std::to_string(rng.next_u64() % 2);
    }
    IndependentSourceSpec random_spec(Pmf(px), Pmf(py), f);
    TestChannel channel = testutil::random_channel(rng, 3, 4);
    RatePoint lhs = adaptive_point(random_spec, channel);
    RatePoint rhs = achievable_point(to_problem(random_spec), channel);
    CHECK(std::abs(lhs.cache_rate - rhs.cache_rate) <= 1e-12);
    CHECK(std::abs(lhs.update_rate - rhs.update_rate) <= 1e-12);
  }
}

TEST_CASE("compound rate end cases") {
  IndependentSourceSpec spec = two_fair_bits_spec();
  CompoundConfig config;

  CompoundResult everything = compound_rate(spec, 2.0, config);
  CHECK(everything.value == doctest::Approx(0.0).epsilon(1e-12));

  CompoundResult nothing = compound_rate(spec, 0.0, config);
  CHECK(nothing.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nothing.cache_rate == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(compound_rate(spec, -0.5, config), std::domain_error);
}

TEST_CASE("compound rate at unit budget splits the components") {
  IndependentSourceSpec spec = two_fair_bits_spec();
  CompoundConfig config;
  CompoundResult result = compound_rate(spec, 1.0, config);
  CHECK(result.value == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(result.cache_rate <= 1.0 + 1e-9);
  // Worst case dominates the average at the same witness.
  RatePoint avg = adaptive_point(spec, result.witness);
  CHECK(result.value >= avg.update_rate - 1e-12);
  // Grid oracle agreement: the balanced reveal channel lies on the half grid.
  double oracle = compound_grid_oracle(spec, 1.0, 2, 4);
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.value <= oracle + 1e-2);
}

TEST_CASE("compound rate is non-increasing in the budget") {
  IndependentSourceSpec spec = two_fair_bits_spec();
  CompoundConfig config;
  config.n_restarts = 8;
  double prev = std::numeric_limits<double>::infinity();
  for (double budget : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    double value = compound_rate(spec, budget, config).value;
    CHECK(value <= prev + 1e-9);
    prev = value;
  }
}

TEST_CASE("masked-bit static profile and gap report") {
  StaticRateProfile zero = masked_bit_static_profile(0.0);
  CHECK(zero.cache_rate == 0.0);
  CHECK(zero.update_rates[0] == 1.0);
  CHECK(zero.update_rates[1] == 1.0);
  StaticRateProfile one = masked_bit_static_profile(1.0);
  CHECK(one.cache_rate == 1.0);
  CHECK(one.update_rates[1] == 0.0);
  StaticRateProfile half = masked_bit_static_profile(0.5);
  CHECK(half.cache_rate == 0.5);
  CHECK(half.update_rates[0] == 1.0);
  CHECK(half.update_rates[1] == 0.5);

  std::vector<GapRow> rows = masked_bit_gap_report();
  REQUIRE(!rows.empty());
  bool found = false;
  for (const GapRow& row : rows) {
    CHECK(row.sequential_cache == 0.5 * row.static_cache);
    if (row.update_rate == 0.75) {
      found = true;
      CHECK(row.sequential_cache == 0.25);
      CHECK(row.static_cache == 0.5);
    }
    if (row.update_rate == 1.0) {
      CHECK(row.sequential_cache == 0.0);
      CHECK(row.static_cache == 0.0);
    }
    if (row.update_rate == 0.5) {
      CHECK(row.sequential_cache == 0.5);
      CHECK(row.static_cache == 1.0);
    }
  }
  CHECK(found);
}
