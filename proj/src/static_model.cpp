#include "ratecache/static_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ratecache/rng.hpp"

namespace ratecache {

IndependentSourceSpec::IndependentSourceSpec(Pmf source, Pmf requests, SymbolTable f_table)
    : source_(std::move(source)), requests_(std::move(requests)), f_table_(std::move(f_table)) {
  if (f_table_.size() != source_.size()) {
    throw std::invalid_argument("IndependentSourceSpec: f table row count mismatch");
  }
  std::map<std::string, std::size_t> lookup;
  f_index_.assign(source_.size(), std::vector<std::size_t>(requests_.size()));
  for (std::size_t x = 0; x < source_.size(); ++x) {
    if (f_table_[x].size() != requests_.size()) {
      throw std::invalid_argument("IndependentSourceSpec: f table column count mismatch");
    }
    for (std::size_t y = 0; y < requests_.size(); ++y) {
      auto [it, inserted] = lookup.try_emplace(f_table_[x][y], s_alphabet_.size());
      if (inserted) s_alphabet_.push_back(f_table_[x][y]);
      f_index_[x][y] = it->second;
    }
  }
}

IndependentSourceSpec to_independent_spec(const CachingProblem& problem, double tol) {
  if (problem.num_functions() != 1) {
    throw std::invalid_argument("to_independent_spec: expected a single-function problem");
  }
  if (!problem.xy_independent(tol)) {
    throw std::invalid_argument(
        "to_independent_spec: joint law does not factor as p(x) p(y); the static model "
        "assumes requests independent of the data");
  }
  return IndependentSourceSpec(problem.x_marginal(), problem.y_marginal(),
                               problem.f_tables()[0]);
}

CachingProblem to_problem(const IndependentSourceSpec& spec) {
  const std::size_t nx = spec.x_size(), ny = spec.n_requests();
  std::vector<std::string> x_alpha(nx), y_alpha(ny);
  for (std::size_t x = 0; x < nx; ++x) x_alpha[x] = "x" + std::to_string(x);
  for (std::size_t y = 0; y < ny; ++y) y_alpha[y] = std::to_string(y + 1);
  std::vector<double> table(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) table[x * ny + y] = spec.source()[x] * spec.requests()[y];
  }
  return CachingProblem(std::move(x_alpha), std::move(y_alpha),
                        JointPmf({nx, ny}, std::move(table)), {spec.f_table()});
}

namespace {

// I(X;V) and the per-request conditional entropies H(f(X,y)|V), computed
// straight from p(x) and the channel rows.
struct StaticEvaluation {
  double cache_rate = 0.0;
  std::vector<double> update_rates;
};

StaticEvaluation evaluate_static(const IndependentSourceSpec& spec,
                                 const TestChannel& channel) {
  if (channel.x_size() != spec.x_size()) {
    throw std::invalid_argument("static evaluation: channel rows do not match source");
  }
  const std::size_t nx = spec.x_size(), ny = spec.n_requests();
  const std::size_t nv = channel.v_card(), ns = spec.s_size();

  std::vector<double> pv(nv, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) pv[v] += spec.source()[x] * channel.p(x, v);
  }
  double hv = 0.0, hv_given_x = 0.0;
  for (double p : pv) hv -= plog2(p);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) {
      hv_given_x -= spec.source()[x] * plog2(channel.p(x, v));
    }
  }
  StaticEvaluation out;
  out.cache_rate = std::max(hv - hv_given_x, 0.0);

  std::vector<double> psv(ns * nv);
  out.update_rates.assign(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    std::fill(psv.begin(), psv.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      std::size_t s = spec.f_index(x, y);
      for (std::size_t v = 0; v < nv; ++v) psv[s * nv + v] += spec.source()[x] * channel.p(x, v);
    }
    double h = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t v = 0; v < nv; ++v) {
        double mass = psv[s * nv + v];
        if (mass < kZeroMass || pv[v] < kZeroMass) continue;
        h -= mass * std::log2(mass / pv[v]);
      }
    }
    out.update_rates[y] = std::max(h, 0.0);
  }
  return out;
}

}  // namespace

StaticRateProfile static_corner(const IndependentSourceSpec& spec, const TestChannel& channel) {
  StaticEvaluation e = evaluate_static(spec, channel);
  return {e.cache_rate, std::move(e.update_rates)};
}

RatePoint adaptive_point(const IndependentSourceSpec& spec, const TestChannel& channel) {
  StaticEvaluation e = evaluate_static(spec, channel);
  double mean = 0.0;
  for (std::size_t y = 0; y < spec.n_requests(); ++y) mean += spec.requests()[y] * e.update_rates[y];
  return {e.cache_rate, mean};
}

namespace {

// Flat-channel evaluation and update for the compound search. The request
// marginal never affects the per-request entropies, so the decoder laws are
// q(v) and q(s|v, y).
struct CompoundWorkspace {
  std::size_t nx, ny, nv, ns;
  std::vector<double> px;
  std::vector<std::size_t> f;   // x*ny + y
  std::vector<double> pv;       // nv
  std::vector<double> psvy;     // ((y*ns)+s)*nv + v
  std::vector<double> logq2;
  std::vector<double> expo;

  CompoundWorkspace(const IndependentSourceSpec& spec, std::size_t v_card)
      : nx(spec.x_size()), ny(spec.n_requests()), nv(v_card), ns(spec.s_size()) {
    px = spec.source().probs();
    f.resize(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) f[x * ny + y] = spec.f_index(x, y);
    }
    pv.resize(nv);
    psvy.resize(ny * ns * nv);
    logq2.resize(ny * ns * nv);
    expo.resize(nv);
  }

  void marginals(const std::vector<double>& channel) {
    std::fill(pv.begin(), pv.end(), 0.0);
    std::fill(psvy.begin(), psvy.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (px[x] == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        double mass = px[x] * channel[x * nv + v];
        if (mass == 0.0) continue;
        pv[v] += mass;
        for (std::size_t y = 0; y < ny; ++y) psvy[(y * ns + f[x * ny + y]) * nv + v] += mass;
      }
    }
  }

  void evaluate(const std::vector<double>& channel, double& info,
                std::vector<double>& update_rates) {
    marginals(channel);
    info = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (px[x] == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        double pvx = channel[x * nv + v];
        if (pvx < kZeroMass) continue;
        info += px[x] * pvx * (std::log2(pvx) - std::log2(pv[v]));
      }
    }
    info = std::max(info, 0.0);
    update_rates.assign(ny, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
      double h = 0.0;
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t v = 0; v < nv; ++v) {
          double mass = psvy[(y * ns + s) * nv + v];
          if (mass < kZeroMass) continue;
          h -= mass * std::log2(mass / pv[v]);
        }
      }
      update_rates[y] = std::max(h, 0.0);
    }
  }

  // One multiplicative step of the weighted objective
  // I(X;V) + gamma * sum_y w_y H(f(X,y)|V); call marginals first.
  void step(std::vector<double>& channel, const std::vector<double>& weights, double gamma) {
    constexpr double kLogFloor = 1e-300;
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t v = 0; v < nv; ++v) {
          double q = pv[v] > 0.0 ? psvy[(y * ns + s) * nv + v] / pv[v]
                                 : 1.0 / static_cast<double>(ns);
          logq2[(y * ns + s) * nv + v] = std::log(std::max(q, kLogFloor));
        }
      }
    }
    for (std::size_t x = 0; x < nx; ++x) {
      double cmax = -std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < nv; ++v) {
        double c = std::log(std::max(pv[v], kLogFloor));
        for (std::size_t y = 0; y < ny; ++y) {
          c += gamma * weights[y] * logq2[(y * ns + f[x * ny + y]) * nv + v];
        }
        expo[v] = c;
        cmax = std::max(cmax, c);
      }
      double sum = 0.0;
      for (std::size_t v = 0; v < nv; ++v) {
        expo[v] = std::exp(expo[v] - cmax);
        sum += expo[v];
      }
      if (sum < 1e-300) {
        for (std::size_t v = 0; v < nv; ++v) channel[x * nv + v] = 1.0 / static_cast<double>(nv);
      } else {
        for (std::size_t v = 0; v < nv; ++v) channel[x * nv + v] = expo[v] / sum;
      }
    }
  }
};

}  // namespace

CompoundResult compound_rate(const IndependentSourceSpec& spec, double cache_budget,
                             const CompoundConfig& config) {
  if (cache_budget < 0.0) throw std::domain_error("compound_rate: negative cache budget");
  const std::size_t nx = spec.x_size(), ny = spec.n_requests();
  const std::size_t nv = config.v_card == 0 ? nx + ny : config.v_card;
  const double hx = entropy(spec.source());

  auto exact_worst = [&](const TestChannel& channel) {
    StaticEvaluation e = evaluate_static(spec, channel);
    double worst = 0.0;
    for (double u : e.update_rates) worst = std::max(worst, u);
    return std::pair<double, double>(worst, e.cache_rate);
  };

  // The constant channel is exactly optimal with no cache; the identity
  // channel with a full one.
  if (cache_budget <= 1e-12) {
    CompoundResult r;
    r.witness = TestChannel::constant(nx);
    r.value = exact_worst(r.witness).first;
    r.cache_rate = 0.0;
    return r;
  }
  if (cache_budget >= hx - 1e-12) {
    CompoundResult r;
    r.witness = TestChannel::identity(nx);
    r.value = 0.0;
    r.cache_rate = exact_worst(r.witness).second;
    return r;
  }

  struct Best {
    double worst = std::numeric_limits<double>::infinity();
    double cache = 0.0;
    std::vector<double> flat;
    std::size_t nv = 0;
  };
  Best best;
  std::vector<double> hy;
  const double budget_slack = 1e-12 * std::max(cache_budget, 1.0);
  auto consider_flat = [&](const std::vector<double>& flat, std::size_t width,
                           CompoundWorkspace& ws) {
    double info;
    ws.evaluate(flat, info, hy);
    double worst = 0.0;
    for (double u : hy) worst = std::max(worst, u);
    if (info <= cache_budget + budget_slack && worst < best.worst) {
      best = {worst, info, flat, width};
    }
    return info;
  };
  // Blending any channel toward the constant one scales its rate down at
  // least linearly (mutual information is convex in the channel), so this
  // always lands inside the budget.
  auto consider_with_mix = [&](const std::vector<double>& flat, std::size_t width,
                               CompoundWorkspace& ws) {
    double info = consider_flat(flat, width, ws);
    if (info > cache_budget) {
      double theta = 1.0 - cache_budget / info;
      std::vector<double> mixed(flat.size());
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t v = 0; v < width; ++v) {
          mixed[x * width + v] = (1.0 - theta) * flat[x * width + v] + (v == 0 ? theta : 0.0);
        }
      }
      consider_flat(mixed, width, ws);
    }
  };

  // Constant channel and the partially cached source family.
  {
    CompoundWorkspace ws(spec, nx);
    std::vector<double> flat(nx * nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x) flat[x * nx] = 1.0;
    consider_flat(flat, nx, ws);
    for (int k = 0; k <= 64; ++k) {
      double theta = static_cast<double>(k) / 64.0;
      std::vector<double> mix(nx * nx, 0.0);
      for (std::size_t x = 0; x < nx; ++x) {
        mix[x * nx + x] += 1.0 - theta;
        mix[x * nx] += theta;
      }
      consider_flat(mix, nx, ws);
    }
  }

  // Randomized saddle search: softmax request weights with a sharpness ramp,
  // dual ascent on the cache-budget multiplier, best feasible iterate kept.
  CompoundWorkspace ws(spec, nv);
  std::vector<double> weights(ny);
  for (int r = 0; r < std::max(config.n_restarts, 1); ++r) {
    Rng rng(derive_seed(config.seed, 2000 + static_cast<std::uint64_t>(r), 0));
    std::vector<double> flat;
    flat.reserve(nx * nv);
    for (std::size_t x = 0; x < nx; ++x) {
      std::vector<double> row = rng.dirichlet_row(nv);
      flat.insert(flat.end(), row.begin(), row.end());
    }
    double lambda = 1.0;
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(ny));
    for (int stage = 0; stage < std::max(config.smoothing_stages, 1); ++stage) {
      double sharp = std::pow(2.0, stage);
      double step = config.dual_step / (1.0 + 0.25 * stage);
      for (int it = 0; it < std::max(config.iters_per_stage, 1); ++it) {
        double info;
        ws.evaluate(flat, info, hy);
        double worst = 0.0, top = hy[0];
        for (double u : hy) {
          worst = std::max(worst, u);
          top = std::max(top, u);
        }
        if (info <= cache_budget + budget_slack) {
          if (worst < best.worst) best = {worst, info, flat, nv};
        } else {
          consider_with_mix(flat, nv, ws);
        }
        double z = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          weights[y] = (1.0 - config.weight_damping) * std::exp(sharp * (hy[y] - top)) +
                       config.weight_damping * weights[y];
          z += weights[y];
        }
        for (double& wv : weights) wv /= z;
        lambda = std::clamp(lambda + step * (info - cache_budget), 1e-4, 1e4);
        ws.marginals(flat);
        ws.step(flat, weights, 1.0 / lambda);
      }
    }
  }

  CompoundResult result;
  result.value = best.worst;
  result.cache_rate = best.cache;
  std::vector<std::vector<double>> rows(nx, std::vector<double>(best.nv));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < best.nv; ++v) rows[x][v] = best.flat[x * best.nv + v];
  }
  result.witness = TestChannel(std::move(rows));
  result.converged = true;
  return result;
}

namespace {

void compositions(int total, int parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double compound_grid_oracle(const IndependentSourceSpec& spec, double cache_budget,
                            int grid_denominator, std::size_t v_card) {
  if (grid_denominator < 1 || v_card < 1) {
    throw std::invalid_argument("compound_grid_oracle: invalid grid");
  }
  const std::size_t nx = spec.x_size();
  if (grid_oracle_budget(nx, grid_denominator, v_card) > 1e7) {
    throw std::invalid_argument("compound_grid_oracle: enumeration over the 1e7 budget");
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(grid_denominator, static_cast<int>(v_card), cur, comps);
  std::vector<std::vector<double>> rows(comps.size(), std::vector<double>(v_card));
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t v = 0; v < v_card; ++v) {
      rows[i][v] = static_cast<double>(comps[i][v]) / static_cast<double>(grid_denominator);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(nx, 0);
  std::vector<std::vector<double>> channel_rows(nx);
  while (true) {
    for (std::size_t x = 0; x < nx; ++x) channel_rows[x] = rows[choice[x]];
    StaticEvaluation e = evaluate_static(spec, TestChannel(channel_rows));
    if (e.cache_rate <= cache_budget + 1e-12) {
      double worst = 0.0;
      for (double u : e.update_rates) worst = std::max(worst, u);
      best = std::min(best, worst);
    }
    bool done = true;
    for (std::size_t pos = nx; pos-- > 0;) {
      if (++choice[pos] < rows.size()) {
        done = false;
        break;
      }
      choice[pos] = 0;
    }
    if (done) break;
  }
  return best;
}

StaticRateProfile masked_bit_static_profile(double r) {
  if (r < 0.0) throw std::domain_error("masked_bit_static_profile: negative rate");
  return {r, {1.0, std::max(1.0 - r, 0.0)}};
}

std::vector<GapRow> masked_bit_gap_report() {
  // Dyadic update-rate grid so the closed forms evaluate exactly.
  std::vector<GapRow> rows;
  for (int k = 0; k <= 16; ++k) {
    double u = 0.5 + static_cast<double>(k) / 32.0;
    // Invert u = 1/2 + (1 - r)^+ / 2 for the common update rate of both
    // models, then read off the cache-rate floors.
    double r = 2.0 - 2.0 * u;
    rows.push_back({u, 0.5 * r, r});
  }
  return rows;
}

}  // namespace ratecache
