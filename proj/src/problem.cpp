#include "ratecache/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ratecache {

namespace {

std::vector<std::string> digit_alphabet(std::size_t n) {
  std::vector<std::string> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::to_string(i);
  return a;
}

std::string join_symbols(const std::vector<std::string>& parts) {
  bool all_single = true;
  for (const auto& p : parts) {
    if (p.size() != 1) all_single = false;
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0 && !all_single) out += "|";
    out += parts[i];
  }
  return out;
}

}  // namespace

CachingProblem::CachingProblem(std::vector<std::string> x_alphabet,
                               std::vector<std::string> y_alphabet, JointPmf joint,
                               std::vector<SymbolTable> f_tables,
                               std::vector<std::vector<std::string>> declared_s_alphabets)
    : x_alphabet_(std::move(x_alphabet)),
      y_alphabet_(std::move(y_alphabet)),
      joint_(std::move(joint)),
      f_tables_(std::move(f_tables)) {
  if (x_alphabet_.empty() || y_alphabet_.empty()) {
    throw std::invalid_argument("CachingProblem: empty alphabet");
  }
  if (joint_.rank() != 2 || joint_.dims()[0] != x_alphabet_.size() ||
      joint_.dims()[1] != y_alphabet_.size()) {
    throw std::invalid_argument("CachingProblem: joint dimensions do not match alphabets");
  }
  if (f_tables_.empty() || f_tables_.size() > 2) {
    throw std::invalid_argument("CachingProblem: expected one or two function tables");
  }
  if (!declared_s_alphabets.empty() && declared_s_alphabets.size() != f_tables_.size()) {
    throw std::invalid_argument(
        "CachingProblem: declared output alphabet count does not match function count");
  }
  for (std::size_t fn = 0; fn < f_tables_.size(); ++fn) {
    const SymbolTable& t = f_tables_[fn];
    if (t.size() != x_alphabet_.size()) {
      throw std::invalid_argument("CachingProblem: f table row count mismatch");
    }
    std::vector<std::string> alphabet;
    std::map<std::string, std::size_t> lookup;
    if (!declared_s_alphabets.empty()) {
      alphabet = declared_s_alphabets[fn];
      for (std::size_t i = 0; i < alphabet.size(); ++i) lookup[alphabet[i]] = i;
    }
    std::vector<std::vector<std::size_t>> idx(x_alphabet_.size(),
                                              std::vector<std::size_t>(y_alphabet_.size()));
    for (std::size_t x = 0; x < x_alphabet_.size(); ++x) {
      if (t[x].size() != y_alphabet_.size()) {
        throw std::invalid_argument("CachingProblem: f table column count mismatch at row " +
                                    std::to_string(x));
      }
      for (std::size_t y = 0; y < y_alphabet_.size(); ++y) {
        auto it = lookup.find(t[x][y]);
        if (it == lookup.end()) {
          if (!declared_s_alphabets.empty()) {
            throw std::invalid_argument("CachingProblem: f entry '" + t[x][y] +
                                        "' at (x=" + std::to_string(x) +
                                        ", y=" + std::to_string(y) +
                                        ") outside declared output alphabet");
          }
          lookup[t[x][y]] = alphabet.size();
          alphabet.push_back(t[x][y]);
          idx[x][y] = alphabet.size() - 1;
        } else {
          idx[x][y] = it->second;
        }
      }
    }
    s_alphabets_.push_back(std::move(alphabet));
    f_index_.push_back(std::move(idx));
  }
}

bool CachingProblem::xy_independent(double tol) const {
  Pmf px = x_marginal();
  Pmf py = y_marginal();
  for (std::size_t x = 0; x < x_size(); ++x) {
    for (std::size_t y = 0; y < y_size(); ++y) {
      if (std::abs(p_xy(x, y) - px[x] * py[y]) > tol) return false;
    }
  }
  return true;
}

bool CachingProblem::operator==(const CachingProblem& other) const {
  return x_alphabet_ == other.x_alphabet_ && y_alphabet_ == other.y_alphabet_ &&
         joint_ == other.joint_ && f_tables_ == other.f_tables_ &&
         s_alphabets_ == other.s_alphabets_;
}

TestChannel::TestChannel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("TestChannel: no rows");
  v_card_ = rows_[0].size();
  if (v_card_ == 0) throw std::invalid_argument("TestChannel: empty rows");
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != v_card_) {
      throw std::invalid_argument("TestChannel: ragged rows");
    }
    // Route through Pmf for the shared validation and renormalization rules.
    rows_[x] = Pmf(rows_[x]).probs();
  }
}

TestChannel TestChannel::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return TestChannel(std::move(rows));
}

TestChannel TestChannel::constant(std::size_t n_rows, std::size_t v_card) {
  std::vector<std::vector<double>> rows(n_rows, std::vector<double>(v_card, 0.0));
  for (auto& r : rows) r[0] = 1.0;
  return TestChannel(std::move(rows));
}

JointPmf induced_joint(const CachingProblem& problem, const TestChannel& channel) {
  if (channel.x_size() != problem.x_size()) {
    throw std::invalid_argument("induced_joint: channel rows do not match source alphabet");
  }
  const std::size_t nx = problem.x_size();
  const std::size_t ny = problem.y_size();
  const std::size_t nv = channel.v_card();
  const std::size_t nf = problem.num_functions();

  std::vector<std::size_t> dims = {nx, ny, nv, problem.s_size(0)};
  if (nf == 2) dims.push_back(problem.s_size(1));
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  std::vector<double> table(total, 0.0);

  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double pxy = problem.p_xy(x, y);
      if (pxy == 0.0) continue;
      std::size_t s1 = problem.f_index(0, x, y);
      std::size_t base = (x * ny + y) * nv;
      for (std::size_t v = 0; v < nv; ++v) {
        double mass = pxy * channel.p(x, v);
        if (mass == 0.0) continue;
        std::size_t flat = (base + v) * problem.s_size(0) + s1;
        if (nf == 2) flat = flat * problem.s_size(1) + problem.f_index(1, x, y);
        table[flat] += mass;
      }
    }
  }
  return JointPmf(std::move(dims), std::move(table));
}

CachingProblem make_selector_problem(
    const JointPmf& components, const Pmf& request_pmf,
    std::vector<std::vector<std::string>> component_alphabets) {
  const std::size_t n_comp = components.rank();
  if (n_comp < 2) {
    throw std::invalid_argument("make_selector_problem: needs at least 2 components");
  }
  if (request_pmf.size() != n_comp) {
    throw std::invalid_argument("make_selector_problem: request pmf size != component count");
  }
  if (component_alphabets.empty()) {
    for (std::size_t a = 0; a < n_comp; ++a) {
      component_alphabets.push_back(digit_alphabet(components.dims()[a]));
    }
  }
  if (component_alphabets.size() != n_comp) {
    throw std::invalid_argument("make_selector_problem: alphabet count mismatch");
  }
  for (std::size_t a = 0; a < n_comp; ++a) {
    if (component_alphabets[a].size() != components.dims()[a]) {
      throw std::invalid_argument("make_selector_problem: alphabet size mismatch on axis " +
                                  std::to_string(a));
    }
  }

  const std::size_t nx = components.size();
  std::vector<std::string> x_alpha(nx);
  SymbolTable f(nx, std::vector<std::string>(n_comp));
  for (std::size_t flat = 0; flat < nx; ++flat) {
    std::vector<std::string> parts(n_comp);
    for (std::size_t a = 0; a < n_comp; ++a) {
      parts[a] = component_alphabets[a][components.axis_index(flat, a)];
    }
    x_alpha[flat] = join_symbols(parts);
    for (std::size_t a = 0; a < n_comp; ++a) f[flat][a] = parts[a];
  }

  std::vector<std::string> y_alpha(n_comp);
  for (std::size_t n = 0; n < n_comp; ++n) y_alpha[n] = std::to_string(n + 1);

  std::vector<double> table(nx * n_comp);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < n_comp; ++y) {
      table[x * n_comp + y] = components[x] * request_pmf[y];
    }
  }
  return CachingProblem(std::move(x_alpha), std::move(y_alpha),
                        JointPmf({nx, n_comp}, std::move(table)), {std::move(f)});
}

CachingProblem reduce_to_components(const CachingProblem& problem) {
  if (problem.num_functions() != 1) {
    throw std::invalid_argument("reduce_to_components: expected a single-function problem");
  }
  const std::size_t nx = problem.x_size();
  const std::size_t ny = problem.y_size();

  // Group source symbols by their full output tuple.
  std::map<std::vector<std::size_t>, std::size_t> groups;
  std::vector<std::size_t> group_of(nx);
  std::vector<std::vector<std::size_t>> group_key;
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<std::size_t> key(ny);
    for (std::size_t y = 0; y < ny; ++y) key[y] = problem.f_index(0, x, y);
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups[key] = group_key.size();
      group_of[x] = group_key.size();
      group_key.push_back(key);
    } else {
      group_of[x] = it->second;
    }
  }
  // Reorder groups by first occurrence for a stable alphabet.
  std::vector<std::size_t> order(group_key.size(), group_key.size());
  std::vector<std::size_t> first_seen;
  for (std::size_t x = 0; x < nx; ++x) {
    if (order[group_of[x]] == group_key.size()) {
      order[group_of[x]] = first_seen.size();
      first_seen.push_back(group_of[x]);
    }
  }

  const std::size_t ng = group_key.size();
  std::vector<std::string> x_alpha(ng);
  SymbolTable f(ng, std::vector<std::string>(ny));
  std::vector<double> table(ng * ny, 0.0);
  for (std::size_t g = 0; g < ng; ++g) {
    const auto& key = group_key[first_seen[g]];
    std::vector<std::string> parts(ny);
    for (std::size_t y = 0; y < ny; ++y) {
      parts[y] = problem.s_alphabet(0)[key[y]];
      f[g][y] = parts[y];
    }
    x_alpha[g] = join_symbols(parts);
  }
  for (std::size_t x = 0; x < nx; ++x) {
    std::size_t g = order[group_of[x]];
    for (std::size_t y = 0; y < ny; ++y) table[g * ny + y] += problem.p_xy(x, y);
  }
  return CachingProblem(std::move(x_alpha), problem.y_alphabet(),
                        JointPmf({ng, ny}, std::move(table)), {std::move(f)});
}

}  // namespace ratecache
