#pragma once

#include <string>
#include <vector>

#include "ratecache/single_user.hpp"

namespace ratecache {

enum class ComponentStructure { independent, nested };

// What the exact component boundaries depend on: per-component entropies and
// the request law. For the independent form the requests must be sorted
// non-increasing (the formula pairs partial entropy sums with request-
// probability gaps); for the nested form the entropies must be non-decreasing.
struct ComponentSpec {
  std::vector<double> entropies;
  Pmf request_pmf;
};

// Derives a ComponentSpec from a selector-style problem, checking X and Y
// independence and the claimed component structure within kMassTol. For the
// independent structure, components are re-sorted by request probability.
ComponentSpec component_spec(const CachingProblem& problem, ComponentStructure structure);

// Exact frontier update rate at the given cache rate for independent
// components: sum over n of (p(n) - p(n+1)) * (H(1) + ... + H(n) - r)^+.
double independent_boundary(const ComponentSpec& spec, double cache_rate);

// Exact frontier for nested components: sum over n of p(n) * (H(n) - r)^+.
double nested_boundary(const ComponentSpec& spec, double cache_rate);

// Frontier update rate under uniform requests with arbitrarily correlated
// components, obtained by tracing over channels on the component tuple. The
// result satisfies (H(components) - r) / N as a lower bound (the residual
// above it is the least conditional total correlation at cache rate r).
double uniform_request_boundary(const CachingProblem& problem, double cache_rate,
                                const TracerConfig& config = {});

struct WynerConfig {
  std::vector<double> penalty_schedule = {1, 4, 16, 64, 256, 1024};
  int n_restarts = 16;  // restarts at the first penalty stage
  // Later stages run the warm start plus this many fresh draws. The warm
  // channel is blended with a little uniform mass first: rows that collapsed
  // to hard zeros at a loose penalty could otherwise never reopen.
  int fresh_restarts_per_stage = 4;
  double warm_mix = 1e-4;
  std::uint64_t seed = 0;
  TracerConfig inner;
  double feasibility_tol = 1e-4;
};

struct WynerResult {
  double value = 0.0;                 // I(components; V) at the witness
  TestChannel witness;
  double residual_correlation = 0.0;  // conditional total correlation at the witness
  bool converged = false;             // residual within feasibility_tol
};

// Least I(components; V) over channels rendering the components conditionally
// independent, by penalty-method minimization of I + mu * Gamma with mu
// increasing along the schedule.
WynerResult wyner_common_info(const JointPmf& components, std::size_t v_card,
                              const WynerConfig& config = {});

// Doubly symmetric binary source parameters.
struct DsbsSpec {
  double crossover = 0.0;  // q
  double q_prime = 0.0;    // (1 - sqrt(1 - 2q)) / 2
  double gamma = 0.0;      // 1/2 - sqrt(1 - 2q) / (2 (1 - q))
  static DsbsSpec make(double crossover);
};

// Joint law of a fair bit and its noisy copy.
JointPmf dsbs_pair(double crossover);

// The two-component selector instance over a DSBS pair with uniform requests.
CachingProblem dsbs_selector_problem(double crossover);

// Cache rate where the DSBS frontier becomes the straight sum-rate line;
// equals the Wyner common information of the pair: 1 + h_b(q) - 2 h_b(q').
double dsbs_critical_rate(double crossover);

// Binary channel that flips agreeing pairs with probability alpha and erases
// disagreeing pairs into a fair coin.
TestChannel dsbs_binary_channel(double alpha);

struct DsbsInnerPoint {
  RatePoint point;
  TestChannel witness;
};

// Achievable point of dsbs_binary_channel(alpha) on the DSBS selector
// instance. alpha in [0, 1/2].
DsbsInnerPoint dsbs_inner_point(double crossover, double alpha);

// max{ (1 + h_b(q) - r)/2, 1 - r, 0 }.
double dsbs_outer_bound(double crossover, double cache_rate);

struct CurveSample {
  std::string curve_id;
  double cache_rate = 0.0;
  double update_rate = 0.0;
};

// Four labeled curves on a shared cache-rate grid:
//   inner_memshare2  memory sharing between the two end points
//   inner_memshare3  memory sharing adding the critical point
//   inner_sweep      the binary-channel sweep, joined with the sum-rate line
//   outer_bound      the combined converse
std::vector<CurveSample> dsbs_tradeoff_curves(double crossover, int n_alpha_steps = 100);

}  // namespace ratecache
