#pragma once

#include <vector>

#include "ratecache/single_user.hpp"

namespace ratecache {

// Source and request laws for the static-request model, where the request is
// drawn once per file block and is independent of the data.
class IndependentSourceSpec {
 public:
  IndependentSourceSpec(Pmf source, Pmf requests, SymbolTable f_table);

  const Pmf& source() const { return source_; }
  const Pmf& requests() const { return requests_; }
  const SymbolTable& f_table() const { return f_table_; }
  std::size_t x_size() const { return source_.size(); }
  std::size_t n_requests() const { return requests_.size(); }
  std::size_t s_size() const { return s_alphabet_.size(); }
  const std::vector<std::string>& s_alphabet() const { return s_alphabet_; }
  std::size_t f_index(std::size_t x, std::size_t y) const { return f_index_[x][y]; }

 private:
  Pmf source_;
  Pmf requests_;
  SymbolTable f_table_;
  std::vector<std::string> s_alphabet_;
  std::vector<std::vector<std::size_t>> f_index_;
};

struct StaticRateProfile {
  double cache_rate = 0.0;
  std::vector<double> update_rates;  // one per request value
};

// Throws when the problem's joint does not factor within `tol` or the
// problem has two functions.
IndependentSourceSpec to_independent_spec(const CachingProblem& problem,
                                          double tol = kMassTol);
CachingProblem to_problem(const IndependentSourceSpec& spec);

// (I(X;V), [H(f(X,y)|V)] for every y).
StaticRateProfile static_corner(const IndependentSourceSpec& spec,
                                const TestChannel& channel);

// (I(X;V), E_Y[H(f(X,Y)|V)]). On independent sources this coincides with the
// sequential-model evaluator on the product problem.
RatePoint adaptive_point(const IndependentSourceSpec& spec, const TestChannel& channel);

struct CompoundConfig {
  int n_restarts = 16;
  int smoothing_stages = 11;     // sharpness ramp 2^0 .. 2^(stages-1)
  int iters_per_stage = 160;
  double dual_step = 0.25;       // ascent rate on the cache-budget multiplier
  double weight_damping = 0.5;   // blend of old and new softmax request weights
  std::uint64_t seed = 0;
  std::size_t v_card = 0;        // 0 = |X| + N
};

struct CompoundResult {
  double value = 0.0;       // max over requests of H(f(X,y)|V) at the witness
  double cache_rate = 0.0;  // I(X;V) at the witness
  TestChannel witness;
  bool converged = true;
};

// Least worst-case update rate under a cache budget: minimize
// max_y H(f(X,y)|V) subject to I(X;V) <= budget. The max is smoothed inside
// the alternating-minimization loop (softmax request weights, sharpness ramp);
// the budget enters through dual ascent on a cache-rate multiplier, iterates
// over budget are blended toward the constant channel to restore feasibility,
// and the reported value is always the exact max at a feasible witness.
CompoundResult compound_rate(const IndependentSourceSpec& spec, double cache_budget,
                             const CompoundConfig& config = {});

// Brute-force check over simplex-grid channels; same budget guard as
// grid_oracle.
double compound_grid_oracle(const IndependentSourceSpec& spec, double cache_budget,
                            int grid_denominator, std::size_t v_card);

// Closed-form static-model profile of the masked-bit instance:
// (r, [1, (1-r)^+]).
StaticRateProfile masked_bit_static_profile(double r);

struct GapRow {
  double update_rate = 0.0;
  double sequential_cache = 0.0;  // least cache rate under the sequential model
  double static_cache = 0.0;      // least cache rate under static adaptive coding
};

// Least cache rates of both models on the masked-bit instance, for common
// update rates on a dyadic grid over [1/2, 1]. The sequential model needs
// exactly half the cache of the static model on the interior.
std::vector<GapRow> masked_bit_gap_report();

}  // namespace ratecache
