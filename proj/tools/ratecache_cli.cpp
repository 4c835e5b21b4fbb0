// Command-line surface for the caching rate-region library: frontier tracing,
// closed-form curve emission, model comparison, and certificate evaluation.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratecache/closed_form.hpp"
#include "ratecache/io.hpp"
#include "ratecache/single_user.hpp"
#include "ratecache/static_model.hpp"
#include "ratecache/two_user.hpp"

namespace {

using namespace ratecache;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNonConverged = 2;

int env_threads() {
  const char* raw = std::getenv("RATECACHE_THREADS");
  if (!raw) return 1;
  int n = std::atoi(raw);
  return n < 0 ? 1 : n;  // 0 = auto
}

std::string strip_extension(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

std::string basename_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::size_t parse_vcard(const std::string& raw) {
  if (raw == "auto") return 0;
  long v = std::atol(raw.c_str());
  if (v < 1) throw ParseError(ParseCode::bad_value, "--vcard must be 'auto' or a positive integer");
  return static_cast<std::size_t>(v);
}

int cmd_trace(const std::string& problem_path, int points, int restarts, std::uint64_t seed,
              const std::string& vcard_raw, const std::string& out_path) {
  CachingProblem problem = parse_problem_file(problem_path);
  TracerConfig config;
  config.n_tradeoff_points = points;
  config.n_restarts = restarts;
  config.seed = seed;
  config.v_card = parse_vcard(vcard_raw);
  config.n_threads = env_threads();
  Boundary boundary = trace_boundary(problem, config);

  std::vector<BoundaryRow> rows;
  std::string stem = strip_extension(out_path);
  for (std::size_t i = 0; i < boundary.points.size(); ++i) {
    BoundaryRow row;
    row.curve_id = "hull";
    row.cache_rate = boundary.points[i].cache_rate;
    row.update_rate = boundary.points[i].update_rate;
    row.gamma = boundary.gammas[i];
    row.converged = boundary.converged[i];
    if (boundary.witnesses[i]) {
      std::string witness_path = stem + "_w" + std::to_string(i) + ".json";
      write_file(witness_path, emit_channel_text(*boundary.witnesses[i]));
      row.witness_id = basename_of(witness_path);
    }
    rows.push_back(std::move(row));
  }
  std::vector<BoundaryRow> cand_rows;
  for (const TraceCell& cell : boundary.cells) {
    cand_rows.push_back({"candidates", cell.point.cache_rate, cell.point.update_rate,
                         cell.gamma, cell.converged, ""});
  }
  std::sort(cand_rows.begin(), cand_rows.end(), [](const BoundaryRow& a, const BoundaryRow& b) {
    if (a.cache_rate != b.cache_rate) return a.cache_rate < b.cache_rate;
    if (a.update_rate != b.update_rate) return a.update_rate < b.update_rate;
    return a.gamma < b.gamma;
  });
  rows.insert(rows.end(), cand_rows.begin(), cand_rows.end());
  write_boundary_csv(out_path, rows);
  return boundary.all_converged ? kExitOk : kExitNonConverged;
}

int cmd_dsbs_curves(double q, int steps, const std::string& out_path) {
  std::vector<CurveSample> curves = dsbs_tradeoff_curves(q, steps);
  std::vector<BoundaryRow> rows;
  rows.reserve(curves.size());
  for (const CurveSample& c : curves) {
    rows.push_back({c.curve_id, c.cache_rate, c.update_rate, 0.0, true, ""});
  }
  write_boundary_csv(out_path, rows);
  return kExitOk;
}

int cmd_model_gap(const std::string& out_path) {
  std::vector<std::vector<std::string>> gap_rows;
  for (const GapRow& row : masked_bit_gap_report()) {
    gap_rows.push_back({format_double(row.update_rate), format_double(row.sequential_cache),
                        format_double(row.static_cache)});
  }
  write_csv(out_path, {"r_u", "r_c_it", "r_c_static"}, gap_rows);

  std::string stem = strip_extension(out_path);
  std::vector<std::vector<std::string>> seq_rows;
  std::vector<std::vector<std::string>> static_rows;
  for (int k = 0; k <= 32; ++k) {
    double r = static_cast<double>(k) / 16.0;
    RatePoint p = masked_bit_sequential_boundary(r);
    seq_rows.push_back(
        {format_double(r), format_double(p.cache_rate), format_double(p.update_rate)});
    StaticRateProfile s = masked_bit_static_profile(r);
    static_rows.push_back({format_double(r), format_double(s.cache_rate),
                           format_double(s.update_rates[0]),
                           format_double(s.update_rates[1])});
  }
  write_csv(stem + "_sequential_region.csv", {"r", "r_c2", "r_u12"}, seq_rows);
  write_csv(stem + "_static_region.csv", {"r", "r_c2", "r_u12_y1", "r_u12_y2"}, static_rows);
  return kExitOk;
}

int cmd_static_compound(const std::string& problem_path, double budget, std::uint64_t seed,
                        const std::string& witness_out) {
  IndependentSourceSpec spec = to_independent_spec(parse_problem_file(problem_path));
  CompoundConfig config;
  config.seed = seed;
  CompoundResult result = compound_rate(spec, budget, config);
  std::cout << "compound_update_rate " << format_double(result.value) << "\n";
  std::cout << "witness_cache_rate " << format_double(result.cache_rate) << "\n";
  if (!witness_out.empty()) write_file(witness_out, emit_channel_text(result.witness));
  return result.converged ? kExitOk : kExitNonConverged;
}

int cmd_static_adaptive(const std::string& problem_path, const std::string& channel_path) {
  IndependentSourceSpec spec = to_independent_spec(parse_problem_file(problem_path));
  TestChannel channel = parse_channel_file(channel_path);
  RatePoint adaptive = adaptive_point(spec, channel);
  RatePoint sequential = achievable_point(to_problem(spec), channel);
  double delta = std::max(std::abs(adaptive.cache_rate - sequential.cache_rate),
                          std::abs(adaptive.update_rate - sequential.update_rate));
  std::cout << "r_c " << format_double(adaptive.cache_rate) << "\n";
  std::cout << "r_u " << format_double(adaptive.update_rate) << "\n";
  std::cout << "sequential_crosscheck_delta " << format_double(delta) << "\n";
  return kExitOk;
}

int cmd_static_eval(const std::string& problem_path, const std::string& channel_path) {
  IndependentSourceSpec spec = to_independent_spec(parse_problem_file(problem_path));
  TestChannel channel = parse_channel_file(channel_path);
  StaticRateProfile profile = static_corner(spec, channel);
  std::cout << "r_c " << format_double(profile.cache_rate) << "\n";
  for (std::size_t y = 0; y < profile.update_rates.size(); ++y) {
    std::cout << "r_u(" << (y + 1) << ") " << format_double(profile.update_rates[y]) << "\n";
  }
  return kExitOk;
}

int cmd_eval(const std::string& problem_path, const std::string& cert_path) {
  CachingProblem problem = parse_problem_file(problem_path);
  CertificateKind kind = certificate_kind_file(cert_path);
  std::vector<std::string> warnings;
  switch (kind) {
    case CertificateKind::single_user: {
      RatePoint p = achievable_point(problem, parse_channel_file(cert_path));
      std::cout << "r_c " << format_double(p.cache_rate) << "\n";
      std::cout << "r_u " << format_double(p.update_rate) << "\n";
      break;
    }
    case CertificateKind::gray_wyner_private: {
      GwRates r = gw_private_update_corner(problem, parse_gw_certificate_file(cert_path),
                                           &warnings);
      std::cout << "r_c12 " << format_double(r.common_cache) << "\n";
      std::cout << "r_c1 " << format_double(r.private_cache1) << "\n";
      std::cout << "r_c2 " << format_double(r.private_cache2) << "\n";
      std::cout << "r_u1 " << format_double(r.private_update1) << "\n";
      std::cout << "r_u2 " << format_double(r.private_update2) << "\n";
      break;
    }
    case CertificateKind::gray_wyner_common: {
      CcRates r = gw_common_cache_corner(problem, parse_cc_certificate_file(cert_path),
                                         &warnings);
      std::cout << "r_c12 " << format_double(r.common_cache) << "\n";
      std::cout << "r_u12 " << format_double(r.common_update) << "\n";
      std::cout << "r_u1 " << format_double(r.private_update1) << "\n";
      std::cout << "r_u2 " << format_double(r.private_update2) << "\n";
      break;
    }
    case CertificateKind::successive_refinement: {
      SsrBounds b = ssr_corner(problem, parse_ssr_certificate_file(cert_path), &warnings);
      std::cout << "r_c12 " << format_double(b.common_cache) << "\n";
      std::cout << "r_c12_plus_c2 " << format_double(b.cache_sum) << "\n";
      std::cout << "r_u12 " << format_double(b.common_update) << "\n";
      std::cout << "r_u12_plus_u2 " << format_double(b.update_sum) << "\n";
      break;
    }
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caching rate-region computations"};
  app.require_subcommand(1);

  std::string problem_path, channel_path, out_path, vcard_raw = "auto", witness_out;
  int points = 48, restarts = 32, steps = 100;
  std::uint64_t seed = 0;
  double q = 0.1, budget = 0.0;

  CLI::App* trace = app.add_subcommand("trace", "trace the single-user frontier");
  trace->add_option("--problem", problem_path)->required();
  trace->add_option("--points", points);
  trace->add_option("--restarts", restarts);
  trace->add_option("--seed", seed);
  trace->add_option("--vcard", vcard_raw);
  trace->add_option("--out", out_path)->required();

  CLI::App* curves = app.add_subcommand("dsbs-curves", "emit the DSBS selector curves");
  curves->add_option("--q", q)->required();
  curves->add_option("--steps", steps);
  curves->add_option("--out", out_path)->required();

  CLI::App* gap = app.add_subcommand("model-gap",
                                     "compare the sequential and static caching models");
  gap->add_option("--out", out_path)->required();

  CLI::App* stat = app.add_subcommand("static", "static-request model computations");
  stat->require_subcommand(1);
  CLI::App* compound = stat->add_subcommand("compound", "worst-case update rate");
  compound->add_option("--problem", problem_path)->required();
  compound->add_option("--rc", budget)->required();
  compound->add_option("--seed", seed);
  compound->add_option("--witness-out", witness_out);
  CLI::App* adaptive = stat->add_subcommand("adaptive", "average-case point of a channel");
  adaptive->add_option("--problem", problem_path)->required();
  adaptive->add_option("--channel", channel_path)->required();
  CLI::App* stat_eval = stat->add_subcommand("eval", "per-request profile of a channel");
  stat_eval->add_option("--problem", problem_path)->required();
  stat_eval->add_option("--channel", channel_path)->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate a certificate on a problem");
  eval->add_option("--problem", problem_path)->required();
  eval->add_option("--channel", channel_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (trace->parsed()) return cmd_trace(problem_path, points, restarts, seed, vcard_raw, out_path);
    if (curves->parsed()) {
      if (!(q > 0.0 && q < 0.5)) {
        std::cerr << "error: --q must lie strictly inside (0, 0.5)\n";
        return kExitInputError;
      }
      return cmd_dsbs_curves(q, steps, out_path);
    }
    if (gap->parsed()) return cmd_model_gap(out_path);
    if (stat->parsed()) {
      if (compound->parsed()) return cmd_static_compound(problem_path, budget, seed, witness_out);
      if (adaptive->parsed()) return cmd_static_adaptive(problem_path, channel_path);
      if (stat_eval->parsed()) return cmd_static_eval(problem_path, channel_path);
    }
    if (eval->parsed()) return cmd_eval(problem_path, channel_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
