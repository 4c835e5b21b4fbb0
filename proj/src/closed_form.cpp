#include "ratecache/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ratecache/rng.hpp"

namespace ratecache {

namespace {

double clip_pos(double x) { return x > 0.0 ? x : 0.0; }

void check_xy_independent(const CachingProblem& problem, const char* what) {
  if (!problem.xy_independent()) {
    throw std::invalid_argument(std::string(what) +
                                ": source and request must be independent");
  }
}

JointPmf component_joint(const CachingProblem& problem) {
  // Joint law of the per-request outputs (f(x,1), ..., f(x,N)).
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  std::vector<std::size_t> dims(ny);
  for (std::size_t y = 0; y < ny; ++y) dims[y] = problem.s_size(0);
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<double> table(total, 0.0);
  Pmf px = problem.x_marginal();
  for (std::size_t x = 0; x < nx; ++x) {
    std::size_t flat = 0;
    for (std::size_t y = 0; y < ny; ++y) flat = flat * dims[y] + problem.f_index(0, x, y);
    table[flat] += px[x];
  }
  return JointPmf(std::move(dims), std::move(table));
}

}  // namespace

ComponentSpec component_spec(const CachingProblem& problem, ComponentStructure structure) {
  if (problem.num_functions() != 1) {
    throw std::invalid_argument("component_spec: expected a single-function problem");
  }
  check_xy_independent(problem, "component_spec");
  JointPmf comps = component_joint(problem);
  const std::size_t n = comps.rank();
  std::vector<double> entropies(n);
  for (std::size_t i = 0; i < n; ++i) entropies[i] = comps.subset_entropy({i});
  Pmf py = problem.y_marginal();

  if (structure == ComponentStructure::independent) {
    if (total_correlation(comps) > kMassTol) {
      throw std::invalid_argument("component_spec: components are not independent");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return py[a] > py[b]; });
    std::vector<double> h(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = entropies[order[i]];
      p[i] = py[order[i]];
    }
    return {std::move(h), Pmf(std::move(p))};
  }

  // Nested: each component must determine every earlier one.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (cond_entropy(comps, {i}, {i + 1}) > kMassTol) {
      throw std::invalid_argument("component_spec: components are not nested at index " +
                                  std::to_string(i));
    }
  }
  return {std::move(entropies), py};
}

double independent_boundary(const ComponentSpec& spec, double cache_rate) {
  if (cache_rate < 0.0) throw std::domain_error("independent_boundary: negative cache rate");
  const std::size_t n = spec.entropies.size();
  if (spec.request_pmf.size() != n) {
    throw std::invalid_argument("independent_boundary: entropy/request size mismatch");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (spec.request_pmf[i] < spec.request_pmf[i + 1] - kMassTol) {
      throw std::invalid_argument(
          "independent_boundary: request pmf must be sorted non-increasing");
    }
  }
  double rate = 0.0, partial = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    partial += spec.entropies[i];
    double next = i + 1 < n ? spec.request_pmf[i + 1] : 0.0;
    rate += (spec.request_pmf[i] - next) * clip_pos(partial - cache_rate);
  }
  return rate;
}

double nested_boundary(const ComponentSpec& spec, double cache_rate) {
  if (cache_rate < 0.0) throw std::domain_error("nested_boundary: negative cache rate");
  const std::size_t n = spec.entropies.size();
  if (spec.request_pmf.size() != n) {
    throw std::invalid_argument("nested_boundary: entropy/request size mismatch");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (spec.entropies[i] > spec.entropies[i + 1] + kMassTol) {
      throw std::invalid_argument("nested_boundary: entropies must be non-decreasing");
    }
  }
  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rate += spec.request_pmf[i] * clip_pos(spec.entropies[i] - cache_rate);
  }
  return rate;
}

double uniform_request_boundary(const CachingProblem& problem, double cache_rate,
                                const TracerConfig& config) {
  if (problem.num_functions() != 1) {
    throw std::invalid_argument("uniform_request_boundary: expected a single-function problem");
  }
  check_xy_independent(problem, "uniform_request_boundary");
  Pmf py = problem.y_marginal();
  for (std::size_t y = 0; y < py.size(); ++y) {
    if (std::abs(py[y] - 1.0 / static_cast<double>(py.size())) > kMassTol) {
      throw std::invalid_argument("uniform_request_boundary: requests must be uniform");
    }
  }
  // Only the channel seen through the output tuple matters; trace over the
  // collapsed source.
  CachingProblem reduced = reduce_to_components(problem);
  double h_all = reduced.joint().subset_entropy({0});
  if (cache_rate < -1e-12 || cache_rate > h_all + 1e-12) {
    throw std::domain_error("uniform_request_boundary: cache rate outside [0, H(components)]");
  }
  Boundary traced = trace_boundary(reduced, config);
  return traced.update_rate_at(std::clamp(cache_rate, 0.0, h_all));
}

WynerResult wyner_common_info(const JointPmf& components, std::size_t v_card,
                              const WynerConfig& config) {
  if (components.rank() < 2) {
    throw std::invalid_argument("wyner_common_info: needs at least 2 components");
  }
  if (v_card < 2) throw std::invalid_argument("wyner_common_info: v_card must be >= 2");
  const std::size_t n_comp = components.rank();
  const double n = static_cast<double>(n_comp);
  CachingProblem problem =
      make_selector_problem(components, Pmf::uniform(n_comp));
  const std::size_t nx = problem.x_size();

  TracerConfig inner = config.inner;
  inner.v_card = v_card;
  inner.record_trajectory = false;

  // I(X;V) and Gamma(X|V) at a channel, on the joint over components and V.
  auto evaluate = [&](const TestChannel& channel) {
    std::vector<std::size_t> dims(components.dims());
    dims.push_back(v_card);
    std::size_t total = components.size() * v_card;
    std::vector<double> table(total, 0.0);
    for (std::size_t x = 0; x < components.size(); ++x) {
      for (std::size_t v = 0; v < v_card; ++v) {
        table[x * v_card + v] = components[x] * channel.p(x, v);
      }
    }
    JointPmf joint(std::move(dims), std::move(table));
    std::vector<std::size_t> comp_axes(n_comp);
    for (std::size_t a = 0; a < n_comp; ++a) comp_axes[a] = a;
    double info = mutual_info(joint, comp_axes, {n_comp});
    double residual = conditional_total_correlation(joint, n_comp);
    return std::pair<double, double>(std::max(info, 0.0), std::max(residual, 0.0));
  };

  struct Stage {
    TestChannel channel;
    double info;
    double residual;
  };
  std::vector<Stage> stages;

  auto random_init = [&](std::uint64_t stage, std::uint64_t r) {
    Rng rng(derive_seed(config.seed, stage, r));
    std::vector<std::vector<double>> rows(nx);
    for (std::size_t x = 0; x < nx; ++x) rows[x] = rng.dirichlet_row(v_card);
    return TestChannel(std::move(rows));
  };
  auto reopened = [&](const TestChannel& channel) {
    std::vector<std::vector<double>> rows(nx, std::vector<double>(v_card));
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t v = 0; v < v_card; ++v) {
        rows[x][v] = (1.0 - config.warm_mix) * channel.p(x, v) +
                     config.warm_mix / static_cast<double>(v_card);
      }
    }
    return TestChannel(std::move(rows));
  };

  TestChannel warm = TestChannel::constant(nx, v_card);
  for (std::size_t stage = 0; stage < config.penalty_schedule.size(); ++stage) {
    double mu = config.penalty_schedule[stage];
    // I + mu * Gamma equals (1 + mu) * (I + gamma_eff * H(S|V,Y)) up to a
    // constant on the uniform selector instance, so each penalty stage is a
    // handful of scalarized solves.
    double gamma_eff = mu * n / (1.0 + mu);
    std::vector<TestChannel> inits;
    if (stage == 0) {
      for (int r = 0; r < std::max(config.n_restarts, 1); ++r) inits.push_back(random_init(0, r));
    } else {
      inits.push_back(reopened(warm));
      for (int r = 0; r < config.fresh_restarts_per_stage; ++r) {
        inits.push_back(random_init(stage, r));
      }
    }
    ScalarizedResult best;
    bool have_best = false;
    for (const TestChannel& init : inits) {
      ScalarizedResult res = scalarized_solve(problem, gamma_eff, init, inner);
      if (!have_best || res.objective < best.objective) {
        best = std::move(res);
        have_best = true;
      }
    }
    warm = best.channel;
    auto [info, residual] = evaluate(best.channel);
    stages.push_back({best.channel, info, residual});
  }

  // Report the tightest-penalty feasible stage; fall back to the least
  // residual if the constraint was never met.
  WynerResult result;
  result.witness = warm;
  for (std::size_t s = stages.size(); s-- > 0;) {
    if (stages[s].residual <= config.feasibility_tol) {
      result.value = stages[s].info;
      result.witness = stages[s].channel;
      result.residual_correlation = stages[s].residual;
      result.converged = true;
      return result;
    }
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < stages.size(); ++s) {
    if (stages[s].residual < stages[best].residual) best = s;
  }
  result.value = stages[best].info;
  result.witness = stages[best].channel;
  result.residual_correlation = stages[best].residual;
  result.converged = false;
  return result;
}

DsbsSpec DsbsSpec::make(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 0.5)) {
    throw std::domain_error("DsbsSpec: crossover outside [0, 1/2]");
  }
  DsbsSpec spec;
  spec.crossover = crossover;
  double root = std::sqrt(1.0 - 2.0 * crossover);
  spec.q_prime = 0.5 * (1.0 - root);
  spec.gamma = 0.5 - root / (2.0 * (1.0 - crossover));
  return spec;
}

JointPmf dsbs_pair(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 0.5)) {
    throw std::domain_error("dsbs_pair: crossover outside [0, 1/2]");
  }
  double agree = (1.0 - crossover) / 2.0;
  double differ = crossover / 2.0;
  return JointPmf({2, 2}, {agree, differ, differ, agree});
}

CachingProblem dsbs_selector_problem(double crossover) {
  return make_selector_problem(dsbs_pair(crossover), Pmf::uniform(2));
}

double dsbs_critical_rate(double crossover) {
  DsbsSpec spec = DsbsSpec::make(crossover);
  return 1.0 + binary_entropy(crossover) - 2.0 * binary_entropy(spec.q_prime);
}

TestChannel dsbs_binary_channel(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw std::domain_error("dsbs_binary_channel: alpha outside [0, 1/2]");
  }
  // Rows indexed by pairs 00, 01, 10, 11; V guesses the agreeing bit.
  return TestChannel({{1.0 - alpha, alpha},
                      {0.5, 0.5},
                      {0.5, 0.5},
                      {alpha, 1.0 - alpha}});
}

DsbsInnerPoint dsbs_inner_point(double crossover, double alpha) {
  CachingProblem problem = dsbs_selector_problem(crossover);
  TestChannel channel = dsbs_binary_channel(alpha);
  return {achievable_point(problem, channel), channel};
}

double dsbs_outer_bound(double crossover, double cache_rate) {
  if (cache_rate < 0.0) throw std::domain_error("dsbs_outer_bound: negative cache rate");
  double hb = binary_entropy(crossover);
  return std::max(clip_pos(0.5 * (1.0 + hb - cache_rate)), clip_pos(1.0 - cache_rate));
}

std::vector<CurveSample> dsbs_tradeoff_curves(double crossover, int n_alpha_steps) {
  if (!(crossover > 0.0 && crossover < 0.5)) {
    throw std::domain_error("dsbs_tradeoff_curves: crossover outside (0, 1/2)");
  }
  if (n_alpha_steps < 2) {
    throw std::invalid_argument("dsbs_tradeoff_curves: need at least 2 sweep steps");
  }
  DsbsSpec spec = DsbsSpec::make(crossover);
  const double hb = binary_entropy(crossover);
  const double rc_star_value = 1.0 + hb;            // cache rate to determine both bits
  const double ru_star_value = 1.0;                 // update-only corner
  const double rcrit = dsbs_critical_rate(crossover);
  const double ru_crit = 0.5 * (1.0 + hb - rcrit);

  CachingProblem problem = dsbs_selector_problem(crossover);
  auto sweep_point = [&](double alpha) {
    return achievable_point(problem, dsbs_binary_channel(alpha));
  };

  // Cache rate of the sweep decreases in alpha from rcrit (at gamma) to 0.
  auto sweep_cache = [&](double alpha) { return sweep_point(alpha).cache_rate; };
  auto sweep_update_at = [&](double r) {
    double lo = spec.gamma, hi = 0.5;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (sweep_cache(mid) > r) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return sweep_point(0.5 * (lo + hi)).update_rate;
  };

  // Shared grid: a uniform grid, the sweep-induced cache rates, and the
  // named corner rates.
  std::set<double> grid = {0.0, rcrit, rc_star_value};
  for (int i = 0; i <= n_alpha_steps; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n_alpha_steps);
    grid.insert(t * rc_star_value);
    double alpha = spec.gamma + t * (0.5 - spec.gamma);
    grid.insert(std::clamp(sweep_cache(alpha), 0.0, rc_star_value));
  }

  auto memshare2 = [&](double r) { return ru_star_value * (1.0 - r / rc_star_value); };
  auto memshare3 = [&](double r) {
    if (r <= rcrit) {
      return ru_star_value + (ru_crit - ru_star_value) * (r / rcrit);
    }
    return 0.5 * (1.0 + hb - r);
  };
  auto sweep = [&](double r) {
    if (r >= rcrit) return 0.5 * (1.0 + hb - r);
    return sweep_update_at(r);
  };

  std::vector<CurveSample> out;
  for (double r : grid) out.push_back({"inner_memshare2", r, clip_pos(memshare2(r))});
  for (double r : grid) out.push_back({"inner_memshare3", r, clip_pos(memshare3(r))});
  for (double r : grid) out.push_back({"inner_sweep", r, clip_pos(sweep(r))});
  for (double r : grid) out.push_back({"outer_bound", r, dsbs_outer_bound(crossover, r)});
  return out;
}

}  // namespace ratecache
