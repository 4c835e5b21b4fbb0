#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ratecache/problem.hpp"

namespace ratecache {

// A point of the cache-rate / update-rate plane, in bits per symbol.
struct RatePoint {
  double cache_rate = 0.0;
  double update_rate = 0.0;
};

// Best restart at one tradeoff weight.
struct TraceCell {
  double gamma = 0.0;
  RatePoint point;
  double objective = 0.0;
  bool converged = true;
  TestChannel channel;
};

// Lower-left frontier of achievable rate pairs: cache rates strictly
// increasing, update rates non-increasing, segment slopes non-decreasing and
// contained in [-1, 0].
struct Boundary {
  std::vector<RatePoint> points;
  std::vector<std::optional<TestChannel>> witnesses;  // one slot per point
  std::vector<double> gammas;     // producing weight; 0 marks analytic points
  std::vector<bool> converged;    // per point
  std::vector<TraceCell> cells;   // per-weight search results (tracer only)
  bool all_converged = true;

  // Piecewise-linear frontier value; clamped to the end points outside the
  // covered cache-rate range (the region extends flat to the right).
  double update_rate_at(double cache_rate) const;
};

struct TracerConfig {
  int n_tradeoff_points = 48;  // log-spaced weights on [gamma_min, gamma_max]
  int n_restarts = 32;
  int max_iters = 10000;
  double tol = 1e-10;          // relative objective-change stopping threshold
  std::uint64_t seed = 0;
  std::size_t v_card = 0;      // 0 = |X| + 1
  int n_threads = 1;           // 0 = hardware concurrency
  double gamma_min = 1e-3;
  double gamma_max = 1e3;
  // Extra weights inserted where adjacent cells leave the biggest cache-rate
  // gaps. Straight frontier segments are optimal only at a single weight; the
  // bisection closes in on it.
  int n_refinements = 24;
  double refine_gap_fraction = 0.02;  // of the full cache-rate span
  bool record_trajectory = false;
};

// (I(X;V|Y), H(f(X,Y)|V,Y)) for a given test channel.
RatePoint achievable_point(const CachingProblem& problem, const TestChannel& channel);

// Minimal update rate at zero cache rate: H(f(X,Y)|Y).
double ru_star(const CachingProblem& problem);

// Lower bound on cache rate + update rate; numerically equal to ru_star,
// exposed separately for report labeling.
double sum_rate_lower_bound(const CachingProblem& problem);

struct ScalarizedResult {
  TestChannel channel;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trajectory;  // objective per iteration, when recorded
};

// Minimizes I(X;V|Y) + gamma * H(f(X,Y)|V,Y) over the channel by block
// alternating minimization of its variational form. The objective never
// increases across iterations; stops on relative change below config.tol.
ScalarizedResult scalarized_solve(const CachingProblem& problem, double gamma,
                                  const TestChannel& init, const TracerConfig& config);

// Traces the frontier: multi-restart scalarized solves over a weight grid,
// the two analytic end points (0, H(S|Y)) and (H(X|Y), 0), then the
// lower-left convex hull. Deterministic given config.seed.
Boundary trace_boundary(const CachingProblem& problem, const TracerConfig& config = {});

// Brute-force frontier over every channel whose rows lie on the simplex grid
// with step 1/grid_denominator. Refuses when the enumeration would exceed
// 1e7 channels.
Boundary grid_oracle(const CachingProblem& problem, int grid_denominator,
                     std::size_t v_card);

// Number of channels grid_oracle(problem, K, v_card) would enumerate.
double grid_oracle_budget(std::size_t x_size, int grid_denominator, std::size_t v_card);

struct RcStarOptions {
  TracerConfig tracer;
  int oracle_denominator = 8;
  std::size_t oracle_v_card = 0;  // 0 = |X|
  bool use_oracle = true;
};

struct RcStarResult {
  double value = 0.0;
  TestChannel witness;
  double residual_update_entropy = 0.0;  // H(S|V,Y) at the witness
  bool feasible = false;
};

// Minimal cache rate with (eps-relaxed) zero update rate: searches traced and
// brute-force witnesses plus the identity channel for the least I(X;V|Y)
// among channels with H(S|V,Y) <= eps.
RcStarResult rc_star(const CachingProblem& problem, double eps,
                     const RcStarOptions& options = {});

// True iff the source symbol is recoverable from the function value and the
// request: no two positive-probability symbols share an output at any y.
bool is_partially_invertible(const CachingProblem& problem);

}  // namespace ratecache
