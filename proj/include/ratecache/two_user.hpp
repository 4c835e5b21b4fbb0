#pragma once

#include <string>
#include <vector>

#include "ratecache/single_user.hpp"

namespace ratecache {

// Conditional tables for the two-user certificates. Index order is listed
// with each field; every innermost vector is a pmf.
using CondTable3 = std::vector<std::vector<std::vector<double>>>;
using CondTable4 = std::vector<std::vector<std::vector<std::vector<double>>>>;

// Private-update-aided Gray-Wyner certificate:
// p(vc|x) * p(v1|vc,x) * p(v2|vc,x).
struct GwAuxiliary {
  TestChannel common;   // p(vc | x), rows by x
  CondTable3 private1;  // [vc][x] -> pmf over v1
  CondTable3 private2;  // [vc][x] -> pmf over v2
};

// Common-cache-aided Gray-Wyner certificate: p(vc|x) * p(vu|vc,x,y).
// The update description may depend on the request.
struct CcAuxiliary {
  TestChannel common;  // p(vc | x)
  CondTable4 update;   // [vc][x][y] -> pmf over vu
};

// Sequential successive refinement certificate: p(vc, v2 | x).
struct SsrAuxiliary {
  CondTable3 joint;  // [x][vc] -> pmf over v2 (each x slice sums to 1)
};

struct GwRates {
  double common_cache = 0.0;     // I(X;Vc|Y)
  double private_cache1 = 0.0;   // I(X;V1|Vc,Y)
  double private_cache2 = 0.0;   // I(X;V2|Vc,Y)
  double private_update1 = 0.0;  // H(f1|Vc,V1,Y)
  double private_update2 = 0.0;  // H(f2|Vc,V2,Y)
};

struct CcRates {
  double common_cache = 0.0;     // I(X;Vc|Y)
  double common_update = 0.0;    // I(X;Vu|Vc,Y)
  double private_update1 = 0.0;  // H(f1|Vc,Vu,Y)
  double private_update2 = 0.0;  // H(f2|Vc,Vu,Y)
};

// Corner certificate for sequential successive refinement: the two single
// bounds and the two pair-sum bounds.
struct SsrBounds {
  double common_cache = 0.0;   // I(X;Vc|Y)
  double cache_sum = 0.0;      // I(X;Vc|Y) + I(X;V2|f1,Vc,Y)
  double common_update = 0.0;  // H(f1|Vc,Y)
  double update_sum = 0.0;     // H(f1|Vc,Y) + H(f2|V2,f1,Vc,Y)
};

// Evaluate a certificate on a two-function problem. Cardinalities beyond the
// sufficiency bounds are reported through `warnings` (when given) but still
// evaluated.
GwRates gw_private_update_corner(const CachingProblem& problem, const GwAuxiliary& aux,
                                 std::vector<std::string>* warnings = nullptr);

CcRates gw_common_cache_corner(const CachingProblem& problem, const CcAuxiliary& aux,
                               std::vector<std::string>* warnings = nullptr);

SsrBounds ssr_corner(const CachingProblem& problem, const SsrAuxiliary& aux,
                     std::vector<std::string>* warnings = nullptr);

// Exploratory frontier probing: scalarized random-restart search over
// certificate tables. Weights are given as a rates struct; the objective is
// the dot product with the evaluated corner. Sampling cost grows quickly with
// the alphabet, so this is meant for tiny instances.
struct TwoUserSearchConfig {
  int n_samples = 256;
  std::uint64_t seed = 0;
  std::size_t common_card = 0;   // 0 = |X| + 1
  std::size_t private_card = 0;  // 0 = |X| + 1
};

struct GwSearchResult {
  GwRates rates;
  GwAuxiliary aux;
  double objective = 0.0;
};
GwSearchResult search_gw_private_update(const CachingProblem& problem,
                                        const GwRates& weights,
                                        const TwoUserSearchConfig& config = {});

struct CcSearchResult {
  CcRates rates;
  CcAuxiliary aux;
  double objective = 0.0;
};
CcSearchResult search_gw_common_cache(const CachingProblem& problem, const CcRates& weights,
                                      const TwoUserSearchConfig& config = {});

struct SsrSearchResult {
  SsrBounds bounds;
  SsrAuxiliary aux;
  double objective = 0.0;
};
SsrSearchResult search_ssr(const CachingProblem& problem, const SsrBounds& weights,
                           const TwoUserSearchConfig& config = {});

// The two-user instance separating the sequential and static models: a fair
// bit requested by user 1 only half the time, always wanted by user 2.
CachingProblem masked_bit_problem();

// Closed-form frontier of the masked-bit instance under the sequential
// model, as (private cache of user 2, common update): (r/2, 1/2 + (1-r)^+/2).
RatePoint masked_bit_sequential_boundary(double r);

}  // namespace ratecache
