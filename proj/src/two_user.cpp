#include "ratecache/two_user.hpp"

#include <cmath>

#include "ratecache/rng.hpp"

namespace ratecache {

namespace {

void require_two_functions(const CachingProblem& problem, const char* what) {
  if (problem.num_functions() != 2) {
    throw std::invalid_argument(std::string(what) + ": expected a two-function problem");
  }
}

void check_row(const std::vector<double>& row, std::size_t card, const char* what) {
  if (row.size() != card) {
    throw std::invalid_argument(std::string(what) + ": ragged conditional table");
  }
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMassTol) {
    throw std::invalid_argument(std::string(what) + ": conditional slice sums to " +
                                std::to_string(sum));
  }
}

void warn_cardinality(std::vector<std::string>* warnings, const std::string& name,
                      std::size_t card, std::size_t bound) {
  if (warnings && card > bound) {
    warnings->push_back(name + " cardinality " + std::to_string(card) +
                        " exceeds the sufficiency bound " + std::to_string(bound));
  }
}

}  // namespace

GwRates gw_private_update_corner(const CachingProblem& problem, const GwAuxiliary& aux,
                                 std::vector<std::string>* warnings) {
  require_two_functions(problem, "gw_private_update_corner");
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  const std::size_t nvc = aux.common.v_card();
  if (aux.common.x_size() != nx || aux.private1.size() != nvc || aux.private2.size() != nvc) {
    throw std::invalid_argument("gw_private_update_corner: auxiliary dimensions mismatch");
  }
  const std::size_t nv1 = aux.private1[0][0].size();
  const std::size_t nv2 = aux.private2[0][0].size();
  for (std::size_t vc = 0; vc < nvc; ++vc) {
    if (aux.private1[vc].size() != nx || aux.private2[vc].size() != nx) {
      throw std::invalid_argument("gw_private_update_corner: auxiliary dimensions mismatch");
    }
    for (std::size_t x = 0; x < nx; ++x) {
      check_row(aux.private1[vc][x], nv1, "gw_private_update_corner");
      check_row(aux.private2[vc][x], nv2, "gw_private_update_corner");
    }
  }
  warn_cardinality(warnings, "common description", nvc, nx + 4);
  warn_cardinality(warnings, "private description 1", nv1, nvc * nx + 1);
  warn_cardinality(warnings, "private description 2", nv2, nvc * nx + 1);

  const std::size_t ns1 = problem.s_size(0), ns2 = problem.s_size(1);
  // Axes: X, Y, Vc, V1, V2, S1, S2.
  std::vector<std::size_t> dims = {nx, ny, nvc, nv1, nv2, ns1, ns2};
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<double> table(total, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double pxy = problem.p_xy(x, y);
      if (pxy == 0.0) continue;
      std::size_t s1 = problem.f_index(0, x, y), s2 = problem.f_index(1, x, y);
      for (std::size_t vc = 0; vc < nvc; ++vc) {
        double pc = aux.common.p(x, vc);
        if (pc == 0.0) continue;
        for (std::size_t v1 = 0; v1 < nv1; ++v1) {
          double p1 = aux.private1[vc][x][v1];
          if (p1 == 0.0) continue;
          for (std::size_t v2 = 0; v2 < nv2; ++v2) {
            double mass = pxy * pc * p1 * aux.private2[vc][x][v2];
            if (mass == 0.0) continue;
            std::size_t flat = ((((x * ny + y) * nvc + vc) * nv1 + v1) * nv2 + v2);
            table[flat * ns1 * ns2 + s1 * ns2 + s2] += mass;
          }
        }
      }
    }
  }
  JointPmf j(std::move(dims), std::move(table));
  GwRates rates;
  rates.common_cache = std::max(cond_mutual_info(j, {0}, {2}, {1}), 0.0);
  rates.private_cache1 = std::max(cond_mutual_info(j, {0}, {3}, {2, 1}), 0.0);
  rates.private_cache2 = std::max(cond_mutual_info(j, {0}, {4}, {2, 1}), 0.0);
  rates.private_update1 = std::max(cond_entropy(j, {5}, {2, 3, 1}), 0.0);
  rates.private_update2 = std::max(cond_entropy(j, {6}, {2, 4, 1}), 0.0);
  return rates;
}

CcRates gw_common_cache_corner(const CachingProblem& problem, const CcAuxiliary& aux,
                               std::vector<std::string>* warnings) {
  require_two_functions(problem, "gw_common_cache_corner");
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  const std::size_t nvc = aux.common.v_card();
  if (aux.common.x_size() != nx || aux.update.size() != nvc) {
    throw std::invalid_argument("gw_common_cache_corner: auxiliary dimensions mismatch");
  }
  const std::size_t nvu = aux.update[0][0][0].size();
  for (std::size_t vc = 0; vc < nvc; ++vc) {
    if (aux.update[vc].size() != nx) {
      throw std::invalid_argument("gw_common_cache_corner: auxiliary dimensions mismatch");
    }
    for (std::size_t x = 0; x < nx; ++x) {
      if (aux.update[vc][x].size() != ny) {
        throw std::invalid_argument("gw_common_cache_corner: auxiliary dimensions mismatch");
      }
      for (std::size_t y = 0; y < ny; ++y) {
        check_row(aux.update[vc][x][y], nvu, "gw_common_cache_corner");
      }
    }
  }
  warn_cardinality(warnings, "common description", nvc, nx + 3);
  warn_cardinality(warnings, "update description", nvu, nvc * nx * ny + 2);

  const std::size_t ns1 = problem.s_size(0), ns2 = problem.s_size(1);
  // Axes: X, Y, Vc, Vu, S1, S2.
  std::vector<std::size_t> dims = {nx, ny, nvc, nvu, ns1, ns2};
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<double> table(total, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double pxy = problem.p_xy(x, y);
      if (pxy == 0.0) continue;
      std::size_t s1 = problem.f_index(0, x, y), s2 = problem.f_index(1, x, y);
      for (std::size_t vc = 0; vc < nvc; ++vc) {
        double pc = aux.common.p(x, vc);
        if (pc == 0.0) continue;
        for (std::size_t vu = 0; vu < nvu; ++vu) {
          double mass = pxy * pc * aux.update[vc][x][y][vu];
          if (mass == 0.0) continue;
          std::size_t flat = (((x * ny + y) * nvc + vc) * nvu + vu);
          table[flat * ns1 * ns2 + s1 * ns2 + s2] += mass;
        }
      }
    }
  }
  JointPmf j(std::move(dims), std::move(table));
  CcRates rates;
  rates.common_cache = std::max(cond_mutual_info(j, {0}, {2}, {1}), 0.0);
  rates.common_update = std::max(cond_mutual_info(j, {0}, {3}, {2, 1}), 0.0);
  rates.private_update1 = std::max(cond_entropy(j, {4}, {2, 3, 1}), 0.0);
  rates.private_update2 = std::max(cond_entropy(j, {5}, {2, 3, 1}), 0.0);
  return rates;
}

SsrBounds ssr_corner(const CachingProblem& problem, const SsrAuxiliary& aux,
                     std::vector<std::string>* warnings) {
  require_two_functions(problem, "ssr_corner");
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  if (aux.joint.size() != nx) {
    throw std::invalid_argument("ssr_corner: auxiliary dimensions mismatch");
  }
  const std::size_t nvc = aux.joint[0].size();
  const std::size_t nv2 = aux.joint[0][0].size();
  for (std::size_t x = 0; x < nx; ++x) {
    if (aux.joint[x].size() != nvc) {
      throw std::invalid_argument("ssr_corner: auxiliary dimensions mismatch");
    }
    double sum = 0.0;
    for (std::size_t vc = 0; vc < nvc; ++vc) {
      if (aux.joint[x][vc].size() != nv2) {
        throw std::invalid_argument("ssr_corner: auxiliary dimensions mismatch");
      }
      for (double p : aux.joint[x][vc]) {
        if (!(p >= 0.0)) throw std::invalid_argument("ssr_corner: negative entry");
        sum += p;
      }
    }
    if (std::abs(sum - 1.0) > kMassTol) {
      throw std::invalid_argument("ssr_corner: conditional slice at x=" + std::to_string(x) +
                                  " sums to " + std::to_string(sum));
    }
  }
  warn_cardinality(warnings, "common description", nvc, nx + 3);
  warn_cardinality(warnings, "refinement description", nv2, nvc * nx + 1);

  const std::size_t ns1 = problem.s_size(0), ns2 = problem.s_size(1);
  // Axes: X, Y, Vc, V2, S1, S2.
  std::vector<std::size_t> dims = {nx, ny, nvc, nv2, ns1, ns2};
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<double> table(total, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double pxy = problem.p_xy(x, y);
      if (pxy == 0.0) continue;
      std::size_t s1 = problem.f_index(0, x, y), s2 = problem.f_index(1, x, y);
      for (std::size_t vc = 0; vc < nvc; ++vc) {
        for (std::size_t v2 = 0; v2 < nv2; ++v2) {
          double mass = pxy * aux.joint[x][vc][v2];
          if (mass == 0.0) continue;
          std::size_t flat = (((x * ny + y) * nvc + vc) * nv2 + v2);
          table[flat * ns1 * ns2 + s1 * ns2 + s2] += mass;
        }
      }
    }
  }
  JointPmf j(std::move(dims), std::move(table));
  SsrBounds bounds;
  bounds.common_cache = std::max(cond_mutual_info(j, {0}, {2}, {1}), 0.0);
  bounds.cache_sum =
      bounds.common_cache + std::max(cond_mutual_info(j, {0}, {3}, {4, 2, 1}), 0.0);
  bounds.common_update = std::max(cond_entropy(j, {4}, {2, 1}), 0.0);
  bounds.update_sum =
      bounds.common_update + std::max(cond_entropy(j, {5}, {3, 4, 2, 1}), 0.0);
  return bounds;
}

namespace {

std::size_t card_or(std::size_t requested, std::size_t fallback) {
  return requested == 0 ? fallback : requested;
}

}  // namespace

GwSearchResult search_gw_private_update(const CachingProblem& problem, const GwRates& weights,
                                        const TwoUserSearchConfig& config) {
  require_two_functions(problem, "search_gw_private_update");
  const std::size_t nx = problem.x_size();
  const std::size_t nvc = card_or(config.common_card, nx + 1);
  const std::size_t nvp = card_or(config.private_card, nx + 1);
  GwSearchResult best;
  bool have = false;
  for (int k = 0; k < std::max(config.n_samples, 1); ++k) {
    Rng rng(derive_seed(config.seed, 1, static_cast<std::uint64_t>(k)));
    std::vector<std::vector<double>> common(nx);
    for (auto& row : common) row = rng.dirichlet_row(nvc);
    CondTable3 p1(nvc), p2(nvc);
    for (std::size_t vc = 0; vc < nvc; ++vc) {
      p1[vc].resize(nx);
      p2[vc].resize(nx);
      for (std::size_t x = 0; x < nx; ++x) {
        p1[vc][x] = rng.dirichlet_row(nvp);
        p2[vc][x] = rng.dirichlet_row(nvp);
      }
    }
    GwAuxiliary aux{TestChannel(std::move(common)), std::move(p1), std::move(p2)};
    GwRates r = gw_private_update_corner(problem, aux);
    double objective = weights.common_cache * r.common_cache +
                       weights.private_cache1 * r.private_cache1 +
                       weights.private_cache2 * r.private_cache2 +
                       weights.private_update1 * r.private_update1 +
                       weights.private_update2 * r.private_update2;
    if (!have || objective < best.objective) {
      best = {r, std::move(aux), objective};
      have = true;
    }
  }
  return best;
}

CcSearchResult search_gw_common_cache(const CachingProblem& problem, const CcRates& weights,
                                      const TwoUserSearchConfig& config) {
  require_two_functions(problem, "search_gw_common_cache");
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  const std::size_t nvc = card_or(config.common_card, nx + 1);
  const std::size_t nvu = card_or(config.private_card, nx + 1);
  CcSearchResult best;
  bool have = false;
  for (int k = 0; k < std::max(config.n_samples, 1); ++k) {
    Rng rng(derive_seed(config.seed, 2, static_cast<std::uint64_t>(k)));
    std::vector<std::vector<double>> common(nx);
    for (auto& row : common) row = rng.dirichlet_row(nvc);
    CondTable4 update(nvc, std::vector<std::vector<std::vector<double>>>(
                               nx, std::vector<std::vector<double>>(ny)));
    for (std::size_t vc = 0; vc < nvc; ++vc) {
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) update[vc][x][y] = rng.dirichlet_row(nvu);
      }
    }
    CcAuxiliary aux{TestChannel(std::move(common)), std::move(update)};
    CcRates r = gw_common_cache_corner(problem, aux);
    double objective =
        weights.common_cache * r.common_cache + weights.common_update * r.common_update +
        weights.private_update1 * r.private_update1 +
        weights.private_update2 * r.private_update2;
    if (!have || objective < best.objective) {
      best = {r, std::move(aux), objective};
      have = true;
    }
  }
  return best;
}

SsrSearchResult search_ssr(const CachingProblem& problem, const SsrBounds& weights,
                           const TwoUserSearchConfig& config) {
  require_two_functions(problem, "search_ssr");
  const std::size_t nx = problem.x_size();
  const std::size_t nvc = card_or(config.common_card, nx + 1);
  const std::size_t nv2 = card_or(config.private_card, nx + 1);
  SsrSearchResult best;
  bool have = false;
  for (int k = 0; k < std::max(config.n_samples, 1); ++k) {
    Rng rng(derive_seed(config.seed, 3, static_cast<std::uint64_t>(k)));
    CondTable3 joint(nx);
    for (std::size_t x = 0; x < nx; ++x) {
      std::vector<double> flat = rng.dirichlet_row(nvc * nv2);
      joint[x].resize(nvc);
      for (std::size_t vc = 0; vc < nvc; ++vc) {
        joint[x][vc].assign(flat.begin() + static_cast<long>(vc * nv2),
                            flat.begin() + static_cast<long>((vc + 1) * nv2));
      }
    }
    SsrAuxiliary aux{std::move(joint)};
    SsrBounds b = ssr_corner(problem, aux);
    double objective = weights.common_cache * b.common_cache +
                       weights.cache_sum * b.cache_sum +
                       weights.common_update * b.common_update +
                       weights.update_sum * b.update_sum;
    if (!have || objective < best.objective) {
      best = {b, std::move(aux), objective};
      have = true;
    }
  }
  return best;
}

CachingProblem masked_bit_problem() {
  SymbolTable f1 = {{"0", "0"}, {"1", "0"}};
  SymbolTable f2 = {{"0", "0"}, {"1", "1"}};
  return CachingProblem({"0", "1"}, {"1", "2"},
                        JointPmf({2, 2}, {0.25, 0.25, 0.25, 0.25}), {f1, f2});
}

RatePoint masked_bit_sequential_boundary(double r) {
  if (r < 0.0) throw std::domain_error("masked_bit_sequential_boundary: negative rate");
  return {0.5 * r, 0.5 + 0.5 * std::max(1.0 - r, 0.0)};
}

}  // namespace ratecache
