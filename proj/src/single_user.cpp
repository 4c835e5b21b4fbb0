#include "ratecache/single_user.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>

#include "ratecache/rng.hpp"

namespace ratecache {

namespace {

constexpr double kLogFloor = 1e-300;
// Vertices closer than this in cache rate are merged. At double precision,
// update rates certify the [-1, 0] slope band only across gaps well above
// 1e-7, so near-coincident vertices cannot be kept apart.
constexpr double kDedupeTol = 1e-6;

void require_single_function(const CachingProblem& problem, const char* what) {
  if (problem.num_functions() != 1) {
    throw std::invalid_argument(std::string(what) + ": expected a single-function problem");
  }
}

// Flattened views of the problem plus scratch buffers, so the inner loops of
// the solver and the grid oracle run without allocation.
struct Workspace {
  std::size_t nx, ny, nv, ns;
  std::vector<double> pxy;          // nx*ny
  std::vector<double> py;           // ny
  std::vector<double> py_given_x;   // nx*ny
  std::vector<std::size_t> f;       // nx*ny
  std::vector<double> pvy;          // nv*ny
  std::vector<double> psvy;         // ns*nv*ny
  std::vector<double> logq1;        // nv*ny
  std::vector<double> logq2;        // ns*nv*ny
  std::vector<double> expo;         // nv

  Workspace(const CachingProblem& problem, std::size_t v_card) {
    nx = problem.x_size();
    ny = problem.y_size();
    nv = v_card;
    ns = problem.s_size(0);
    pxy.resize(nx * ny);
    py.assign(ny, 0.0);
    py_given_x.assign(nx * ny, 0.0);
    f.resize(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
      double px = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        double p = problem.p_xy(x, y);
        pxy[x * ny + y] = p;
        py[y] += p;
        px += p;
        f[x * ny + y] = problem.f_index(0, x, y);
      }
      if (px > 0.0) {
        for (std::size_t y = 0; y < ny; ++y) py_given_x[x * ny + y] = pxy[x * ny + y] / px;
      }
    }
    pvy.resize(nv * ny);
    psvy.resize(ns * nv * ny);
    logq1.resize(nv * ny);
    logq2.resize(ns * nv * ny);
    expo.resize(nv);
  }

  // channel is an nx*nv row-major table of p(v|x).
  void decoder_marginals(const std::vector<double>& channel) {
    std::fill(pvy.begin(), pvy.end(), 0.0);
    std::fill(psvy.begin(), psvy.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        double p = pxy[x * ny + y];
        if (p == 0.0) continue;
        std::size_t s = f[x * ny + y];
        for (std::size_t v = 0; v < nv; ++v) {
          double mass = p * channel[x * nv + v];
          pvy[v * ny + y] += mass;
          psvy[(s * nv + v) * ny + y] += mass;
        }
      }
    }
  }

  // I(X;V|Y) + gamma * H(S|V,Y); call decoder_marginals first.
  double objective(const std::vector<double>& channel, double gamma) const {
    double info = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        double p = pxy[x * ny + y];
        if (p == 0.0) continue;
        for (std::size_t v = 0; v < nv; ++v) {
          double pvx = channel[x * nv + v];
          if (pvx < kZeroMass) continue;
          double pv_given_y = pvy[v * ny + y] / py[y];
          info += p * pvx * (std::log2(pvx) - std::log2(pv_given_y));
        }
      }
    }
    double hsvy = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t y = 0; y < ny; ++y) {
          double mass = psvy[(s * nv + v) * ny + y];
          if (mass < kZeroMass) continue;
          hsvy -= mass * std::log2(mass / pvy[v * ny + y]);
        }
      }
    }
    return std::max(info, 0.0) + gamma * std::max(hsvy, 0.0);
  }

  RatePoint rate_point(const std::vector<double>& channel) {
    decoder_marginals(channel);
    double info = objective(channel, 0.0);
    double hsvy = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t y = 0; y < ny; ++y) {
          double mass = psvy[(s * nv + v) * ny + y];
          if (mass < kZeroMass) continue;
          hsvy -= mass * std::log2(mass / pvy[v * ny + y]);
        }
      }
    }
    return {info, std::max(hsvy, 0.0)};
  }

  // Exact coordinate minimizer of the variational bound at fixed decoder
  // laws: p_new(v|x) proportional to
  //   exp( sum_y p(y|x) [ log q(v|y) + gamma * log q(s(x,y)|v,y) ] ).
  void update_channel(std::vector<double>& channel, double gamma) {
    for (std::size_t v = 0; v < nv; ++v) {
      for (std::size_t y = 0; y < ny; ++y) {
        logq1[v * ny + y] =
            py[y] > 0.0 ? std::log(std::max(pvy[v * ny + y] / py[y], kLogFloor)) : 0.0;
      }
    }
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t y = 0; y < ny; ++y) {
          double denom = pvy[v * ny + y];
          double q = denom > 0.0 ? psvy[(s * nv + v) * ny + y] / denom
                                 : 1.0 / static_cast<double>(ns);
          logq2[(s * nv + v) * ny + y] = std::log(std::max(q, kLogFloor));
        }
      }
    }
    for (std::size_t x = 0; x < nx; ++x) {
      double cmax = -std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < nv; ++v) {
        double c = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          double w = py_given_x[x * ny + y];
          if (w == 0.0) continue;
          c += w * (logq1[v * ny + y] + gamma * logq2[(f[x * ny + y] * nv + v) * ny + y]);
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

std::vector<double> flatten(const TestChannel& channel) {
  std::vector<double> flat(channel.x_size() * channel.v_card());
  for (std::size_t x = 0; x < channel.x_size(); ++x) {
    for (std::size_t v = 0; v < channel.v_card(); ++v) flat[x * channel.v_card() + v] = channel.p(x, v);
  }
  return flat;
}

TestChannel unflatten(const std::vector<double>& flat, std::size_t nx, std::size_t nv) {
  std::vector<std::vector<double>> rows(nx, std::vector<double>(nv));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) rows[x][v] = flat[x * nv + v];
  }
  return TestChannel(std::move(rows));
}

// Indices of the lower-left hull of `pts`: cache rates strictly increasing
// (vertices within kDedupeTol merged, keeping the least cache rate, except
// that preferred vertices win their bucket), slopes non-decreasing, dominated
// points dropped. Preference marks the exact analytic end points so searched
// twins cannot displace them.
std::vector<std::size_t> lower_hull_indices(const std::vector<RatePoint>& pts,
                                            const std::vector<bool>& preferred) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].cache_rate != pts[b].cache_rate) return pts[a].cache_rate < pts[b].cache_rate;
    return pts[a].update_rate < pts[b].update_rate;
  });

  std::vector<std::size_t> kept;
  std::size_t i = 0;
  while (i < order.size()) {
    double anchor = pts[order[i]].cache_rate;
    std::size_t pick = order[i];
    std::size_t j = i;
    while (j < order.size() && pts[order[j]].cache_rate - anchor <= kDedupeTol) {
      if (!preferred.empty() && preferred[order[j]] && !preferred[pick]) pick = order[j];
      ++j;
    }
    kept.push_back(pick);
    i = j;
  }

  std::vector<std::size_t> hull;
  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (pts[b].cache_rate - pts[a].cache_rate) * (pts[c].update_rate - pts[a].update_rate) -
           (pts[b].update_rate - pts[a].update_rate) * (pts[c].cache_rate - pts[a].cache_rate);
  };
  for (std::size_t k : kept) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), k) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(k);
  }

  std::vector<std::size_t> frontier;
  for (std::size_t k : hull) {
    if (!frontier.empty() && pts[k].update_rate >= pts[frontier.back()].update_rate) break;
    frontier.push_back(k);
  }
  return frontier;
}

struct HullCand {
  RatePoint point;
  std::optional<TestChannel> witness;
  double gamma = 0.0;
  bool converged = true;
  bool anchor = false;
};

Boundary build_boundary(std::vector<HullCand> cands, double sum_rate_floor,
                        double cache_span) {
  // Every achievable pair satisfies H(S|Y) <= cache + update <= H(X|Y);
  // evaluations can leave that band only by rounding. Restoring the bounds
  // keeps every hull slope inside [-1, 0]: the first segment leaves the exact
  // left anchor no steeper than -1, convexity makes later slopes shallower,
  // and the ceiling protects the segment into the right anchor.
  for (HullCand& cand : cands) {
    double lo = sum_rate_floor - cand.point.cache_rate;
    double hi = cache_span - cand.point.cache_rate;
    if (hi < lo) hi = lo;
    cand.point.update_rate = std::clamp(cand.point.update_rate, std::max(lo, 0.0),
                                        std::max(hi, 0.0));
  }
  std::vector<RatePoint> pts(cands.size());
  std::vector<bool> preferred(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    pts[i] = cands[i].point;
    preferred[i] = cands[i].anchor;
  }
  std::vector<std::size_t> kept = lower_hull_indices(pts, preferred);

  Boundary b;
  for (std::size_t k : kept) {
    b.points.push_back(cands[k].point);
    b.witnesses.push_back(cands[k].witness);
    b.gammas.push_back(cands[k].gamma);
    b.converged.push_back(cands[k].converged);
  }
  return b;
}

double cond_entropy_x_given_y(const CachingProblem& problem) {
  return cond_entropy(problem.joint(), {0}, {1});
}

std::size_t effective_v_card(const CachingProblem& problem, std::size_t v_card) {
  return v_card == 0 ? problem.x_size() + 1 : v_card;
}

}  // namespace

double Boundary::update_rate_at(double cache_rate) const {
  if (points.empty()) throw std::logic_error("Boundary: no points");
  if (cache_rate <= points.front().cache_rate) return points.front().update_rate;
  if (cache_rate >= points.back().cache_rate) return points.back().update_rate;
  std::size_t lo = 0, hi = points.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (points[mid].cache_rate <= cache_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double span = points[hi].cache_rate - points[lo].cache_rate;
  double t = span > 0.0 ? (cache_rate - points[lo].cache_rate) / span : 0.0;
  return points[lo].update_rate + t * (points[hi].update_rate - points[lo].update_rate);
}

RatePoint achievable_point(const CachingProblem& problem, const TestChannel& channel) {
  require_single_function(problem, "achievable_point");
  JointPmf j = induced_joint(problem, channel);
  double rc = cond_mutual_info(j, {axis::X}, {axis::V}, {axis::Y});
  double ru = cond_entropy(j, {axis::S1}, {axis::V, axis::Y});
  return {std::max(rc, 0.0), std::max(ru, 0.0)};
}

double ru_star(const CachingProblem& problem) {
  require_single_function(problem, "ru_star");
  const std::size_t nx = problem.x_size(), ny = problem.y_size(), ns = problem.s_size(0);
  std::vector<double> table(ny * ns, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      table[y * ns + problem.f_index(0, x, y)] += problem.p_xy(x, y);
    }
  }
  JointPmf ys({ny, ns}, std::move(table));
  return cond_entropy(ys, {1}, {0});
}

double sum_rate_lower_bound(const CachingProblem& problem) { return ru_star(problem); }

ScalarizedResult scalarized_solve(const CachingProblem& problem, double gamma,
                                  const TestChannel& init, const TracerConfig& config) {
  require_single_function(problem, "scalarized_solve");
  if (gamma < 0.0) throw std::domain_error("scalarized_solve: gamma must be nonnegative");
  if (init.x_size() != problem.x_size()) {
    throw std::invalid_argument("scalarized_solve: init channel does not match problem");
  }
  Workspace ws(problem, init.v_card());
  std::vector<double> channel = flatten(init);
  std::vector<double> best = channel;
  double best_obj = std::numeric_limits<double>::infinity();
  double prev_obj = std::numeric_limits<double>::infinity();

  ScalarizedResult result{init, 0.0, false, 0, {}};
  for (int it = 0; it < config.max_iters; ++it) {
    ws.decoder_marginals(channel);
    double obj = ws.objective(channel, gamma);
    if (config.record_trajectory) result.trajectory.push_back(obj);
    result.iterations = it + 1;
    if (obj < best_obj) {
      best_obj = obj;
      best = channel;
    }
    if (std::abs(obj - prev_obj) < config.tol * std::max(std::abs(obj), 1e-12)) {
      result.converged = true;
      break;
    }
    prev_obj = obj;
    ws.update_channel(channel, gamma);
  }
  result.channel = unflatten(best, ws.nx, ws.nv);
  result.objective = best_obj;
  return result;
}

namespace {

std::vector<double> gamma_grid(const TracerConfig& config) {
  int n = std::max(config.n_tradeoff_points, 1);
  std::vector<double> g(n);
  double lo = std::log(config.gamma_min), hi = std::log(config.gamma_max);
  if (n == 1) {
    g[0] = std::exp(0.5 * (lo + hi));
    return g;
  }
  for (int i = 0; i < n; ++i) {
    g[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

std::uint64_t gamma_bits(double gamma) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(gamma));
  std::memcpy(&bits, &gamma, sizeof(bits));
  return bits;
}

}  // namespace

Boundary trace_boundary(const CachingProblem& problem, const TracerConfig& config) {
  require_single_function(problem, "trace_boundary");
  const std::size_t nx = problem.x_size();
  const std::size_t nv = effective_v_card(problem, config.v_card);
  const int n_restarts = std::max(config.n_restarts, 1);

  TracerConfig cell_config = config;
  cell_config.record_trajectory = false;

  int n_threads = config.n_threads == 0
                      ? std::max(1u, std::thread::hardware_concurrency())
                      : std::max(config.n_threads, 1);

  // One batch = all restarts at one weight. Seeds are keyed by the weight's
  // bit pattern, so refinement order and thread count cannot change results.
  auto run_batch = [&](double gamma) {
    std::vector<ScalarizedResult> results(n_restarts);
    auto run_one = [&](int r) {
      Rng rng(derive_seed(config.seed, gamma_bits(gamma), static_cast<std::uint64_t>(r)));
      std::vector<std::vector<double>> rows(nx);
      for (std::size_t x = 0; x < nx; ++x) rows[x] = rng.dirichlet_row(nv);
      results[r] = scalarized_solve(problem, gamma, TestChannel(std::move(rows)),
                                    cell_config);
    };
    int workers = std::min(n_threads, n_restarts);
    if (workers <= 1) {
      for (int r = 0; r < n_restarts; ++r) run_one(r);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t]() {
          for (int r = t; r < n_restarts; r += workers) run_one(r);
        });
      }
      for (auto& th : pool) th.join();
    }
    int best = 0;
    for (int r = 1; r < n_restarts; ++r) {
      if (results[r].objective < results[best].objective) best = r;
    }
    const ScalarizedResult& res = results[best];
    return TraceCell{gamma, achievable_point(problem, res.channel), res.objective,
                     res.converged, res.channel};
  };

  std::vector<TraceCell> cells;
  for (double gamma : gamma_grid(config)) cells.push_back(run_batch(gamma));

  const double span = cond_entropy_x_given_y(problem);
  const double gap_threshold = std::max(config.refine_gap_fraction * span, 1e-9);
  for (int extra = 0; extra < config.n_refinements; ++extra) {
    std::size_t widest = cells.size();
    double widest_gap = gap_threshold;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      double gap = cells[i + 1].point.cache_rate - cells[i].point.cache_rate;
      if (gap > widest_gap && cells[i + 1].gamma > cells[i].gamma * (1.0 + 1e-12)) {
        widest_gap = gap;
        widest = i;
      }
    }
    if (widest == cells.size()) break;
    double mid = std::sqrt(cells[widest].gamma * cells[widest + 1].gamma);
    cells.insert(cells.begin() + static_cast<long>(widest) + 1, run_batch(mid));
  }

  Boundary out;
  std::vector<HullCand> cands;
  for (TraceCell& cell : cells) {
    if (!cell.converged) out.all_converged = false;
    cands.push_back({cell.point, cell.channel, cell.gamma, cell.converged, false});
    out.cells.push_back(std::move(cell));
  }

  // Analytic end points: the update encoder alone, and a fully cached source.
  double floor = ru_star(problem);
  cands.push_back({{0.0, floor}, TestChannel::constant(nx), 0.0, true, true});
  cands.push_back({{span, 0.0}, TestChannel::identity(nx), 0.0, true, true});

  Boundary hull = build_boundary(std::move(cands), floor, span);
  out.points = std::move(hull.points);
  out.witnesses = std::move(hull.witnesses);
  out.gammas = std::move(hull.gammas);
  out.converged = std::move(hull.converged);
  return out;
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

double grid_oracle_budget(std::size_t x_size, int grid_denominator, std::size_t v_card) {
  // C(K + v - 1, v - 1) rows per source symbol.
  double rows = 1.0;
  for (std::size_t i = 1; i < v_card; ++i) {
    rows *= static_cast<double>(grid_denominator + i) / static_cast<double>(i);
  }
  return std::pow(rows, static_cast<double>(x_size));
}

Boundary grid_oracle(const CachingProblem& problem, int grid_denominator,
                     std::size_t v_card) {
  require_single_function(problem, "grid_oracle");
  if (grid_denominator < 1) throw std::invalid_argument("grid_oracle: grid step must be >= 1");
  if (v_card < 1) throw std::invalid_argument("grid_oracle: v_card must be >= 1");
  const double budget = grid_oracle_budget(problem.x_size(), grid_denominator, v_card);
  if (budget > 1e7) {
    throw std::invalid_argument(
        "grid_oracle: enumeration needs about " + std::to_string(budget) +
        " channels, over the 1e7 budget; reduce grid_denominator or v_card");
  }

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(grid_denominator, static_cast<int>(v_card), cur, comps);
  const std::size_t n_rows = comps.size();
  std::vector<std::vector<double>> rows(n_rows, std::vector<double>(v_card));
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t v = 0; v < v_card; ++v) {
      rows[i][v] = static_cast<double>(comps[i][v]) / static_cast<double>(grid_denominator);
    }
  }

  const std::size_t nx = problem.x_size();
  Workspace ws(problem, v_card);
  std::vector<double> channel(nx * v_card);

  struct Cand {
    RatePoint point;
    std::vector<std::uint32_t> choice;
  };
  std::vector<Cand> pool;
  auto prune = [&]() {
    std::vector<RatePoint> pts(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pts[i] = pool[i].point;
    std::vector<std::size_t> kept = lower_hull_indices(pts, {});
    std::vector<Cand> next;
    next.reserve(kept.size());
    for (std::size_t k : kept) next.push_back(std::move(pool[k]));
    pool = std::move(next);
  };

  std::vector<std::uint32_t> choice(nx, 0);
  while (true) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::vector<double>& row = rows[choice[x]];
      std::copy(row.begin(), row.end(), channel.begin() + static_cast<long>(x * v_card));
    }
    pool.push_back({ws.rate_point(channel), choice});
    if (pool.size() >= 65536) prune();

    bool done = true;
    for (std::size_t pos = nx; pos-- > 0;) {
      if (++choice[pos] < n_rows) {
        done = false;
        break;
      }
      choice[pos] = 0;
    }
    if (done) break;
  }
  prune();

  std::vector<HullCand> cands;
  cands.reserve(pool.size());
  for (const Cand& c : pool) {
    std::vector<std::vector<double>> w(nx);
    for (std::size_t x = 0; x < nx; ++x) w[x] = rows[c.choice[x]];
    cands.push_back({c.point, TestChannel(std::move(w)), 0.0, true, false});
  }
  return build_boundary(std::move(cands), ru_star(problem), cond_entropy_x_given_y(problem));
}

RcStarResult rc_star(const CachingProblem& problem, double eps, const RcStarOptions& options) {
  require_single_function(problem, "rc_star");
  if (eps < 0.0) throw std::domain_error("rc_star: eps must be nonnegative");

  struct Cand {
    RatePoint point;
    TestChannel channel;
  };
  std::vector<Cand> cands;
  TestChannel identity = TestChannel::identity(problem.x_size());
  cands.push_back({achievable_point(problem, identity), identity});
  TestChannel constant = TestChannel::constant(problem.x_size());
  cands.push_back({achievable_point(problem, constant), constant});

  Boundary traced = trace_boundary(problem, options.tracer);
  for (const TraceCell& cell : traced.cells) cands.push_back({cell.point, cell.channel});

  if (options.use_oracle) {
    std::size_t v = options.oracle_v_card == 0 ? problem.x_size() : options.oracle_v_card;
    if (grid_oracle_budget(problem.x_size(), options.oracle_denominator, v) <= 1e7) {
      Boundary oracle = grid_oracle(problem, options.oracle_denominator, v);
      for (std::size_t i = 0; i < oracle.points.size(); ++i) {
        if (oracle.witnesses[i]) cands.push_back({oracle.points[i], *oracle.witnesses[i]});
      }
    }
  }

  RcStarResult result;
  result.feasible = false;
  for (const Cand& c : cands) {
    if (c.point.update_rate > eps) continue;
    if (!result.feasible || c.point.cache_rate < result.value) {
      result.feasible = true;
      result.value = c.point.cache_rate;
      result.witness = c.channel;
      result.residual_update_entropy = c.point.update_rate;
    }
  }
  return result;
}

bool is_partially_invertible(const CachingProblem& problem) {
  require_single_function(problem, "is_partially_invertible");
  const std::size_t nx = problem.x_size(), ny = problem.y_size();
  for (std::size_t y = 0; y < ny; ++y) {
    std::vector<std::size_t> seen(problem.s_size(0), nx);
    for (std::size_t x = 0; x < nx; ++x) {
      if (problem.p_xy(x, y) <= kZeroMass) continue;
      std::size_t s = problem.f_index(0, x, y);
      if (seen[s] != nx && seen[s] != x) return false;
      seen[s] = x;
    }
  }
  return true;
}

}  // namespace ratecache
