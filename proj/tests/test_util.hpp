#pragma once

// Shared helpers for the test suites: fixture paths, seeded random instances,
// and the frontier well-formedness checks.

#include <cmath>
#include <string>
#include <vector>

#include "ratecache/closed_form.hpp"
#include "ratecache/problem.hpp"
#include "ratecache/rng.hpp"
#include "ratecache/single_user.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
  return std::string(RATECACHE_FIXTURE_DIR) + "/" + name;
}

inline ratecache::JointPmf random_joint(ratecache::Rng& rng,
                                        const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  return ratecache::JointPmf(dims, rng.dirichlet_row(total));
}

inline ratecache::TestChannel random_channel(ratecache::Rng& rng, std::size_t nx,
                                             std::size_t nv) {
  std::vector<std::vector<double>> rows(nx);
  for (std::size_t x = 0; x < nx; ++x) rows[x] = rng.dirichlet_row(nv);
  return ratecache::TestChannel(std::move(rows));
}

// Random single-function problem with full-support joint over nx x ny and a
// random output table over `n_outputs` symbols.
inline ratecache::CachingProblem random_problem(ratecache::Rng& rng, std::size_t nx,
                                                std::size_t ny, std::size_t n_outputs) {
  std::vector<std::string> x_alpha(nx), y_alpha(ny);
  for (std::size_t i = 0; i < nx; ++i) x_alpha[i] = "x" + std::to_string(i);
  for (std::size_t i = 0; i < ny; ++i) y_alpha[i] = "y" + std::to_string(i);
  ratecache::SymbolTable f(nx, std::vector<std::string>(ny));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      f[x][y] = std::to_string(rng.next_u64() % n_outputs);
    }
  }
  return ratecache::CachingProblem(std::move(x_alpha), std::move(y_alpha),
                                   random_joint(rng, {nx, ny}), {std::move(f)});
}

inline ratecache::CachingProblem fair_bits_problem(double py1) {
  return ratecache::make_selector_problem(
      ratecache::JointPmf({2, 2}, {0.25, 0.25, 0.25, 0.25}),
      ratecache::Pmf({py1, 1.0 - py1}));
}

inline ratecache::CachingProblem nested_bits_problem() {
  ratecache::SymbolTable f = {{"0", "0"}, {"0", "1"}, {"1", "2"}, {"1", "3"}};
  return ratecache::CachingProblem(
      {"0", "1", "2", "3"}, {"1", "2"},
      ratecache::JointPmf({4, 2}, std::vector<double>(8, 0.125)), {f});
}

inline ratecache::CachingProblem xor_problem() {
  ratecache::SymbolTable f = {{"0", "1"}, {"1", "0"}};
  return ratecache::CachingProblem({"0", "1"}, {"0", "1"},
                                   ratecache::JointPmf({2, 2}, {0.25, 0.25, 0.25, 0.25}),
                                   {f});
}

// Frontier well-formedness: left anchor, sum-rate floor, slope band, shape.
// Returns human-readable violations; empty means the boundary is sound.
inline std::vector<std::string> boundary_violations(const ratecache::Boundary& b,
                                                    double h_s_given_y) {
  std::vector<std::string> bad;
  if (b.points.empty()) {
    bad.push_back("boundary has no points");
    return bad;
  }
  if (std::abs(b.points.front().cache_rate) > 1e-9 ||
      std::abs(b.points.front().update_rate - h_s_given_y) > 1e-9) {
    bad.push_back("leftmost point is not (0, H(S|Y))");
  }
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const auto& p = b.points[i];
    if (p.cache_rate < -1e-12 || p.update_rate < -1e-12) bad.push_back("negative rate");
    if (p.cache_rate + p.update_rate < h_s_given_y - 1e-6) {
      bad.push_back("sum rate below H(S|Y) at point " + std::to_string(i));
    }
  }
  double prev_slope = -1.0 - 1e-9;
  for (std::size_t i = 0; i + 1 < b.points.size(); ++i) {
    double dc = b.points[i + 1].cache_rate - b.points[i].cache_rate;
    double du = b.points[i + 1].update_rate - b.points[i].update_rate;
    if (dc <= 0.0) bad.push_back("cache rates not strictly increasing at " + std::to_string(i));
    if (du > 1e-12) bad.push_back("update rates increase at " + std::to_string(i));
    double slope = du / dc;
    if (slope < -1.0 - 1e-9 || slope > 1e-12) {
      bad.push_back("slope " + std::to_string(slope) + " outside [-1, 0] at " +
                    std::to_string(i));
    }
    if (slope < prev_slope - 1e-9) {
      bad.push_back("slopes not non-decreasing at " + std::to_string(i));
    }
    prev_slope = slope;
  }
  return bad;
}

}  // namespace testutil
