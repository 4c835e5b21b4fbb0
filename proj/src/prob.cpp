#include "ratecache/prob.hpp"

#include <algorithm>
#include <cmath>

namespace ratecache {

namespace {

// Sums close enough to 1 are kept as-is so that re-parsing emitted data is
// idempotent; only clearly off (but tolerable) sums trigger a division.
constexpr double kExactTol = 1e-13;

void normalize_or_throw(std::vector<double>& v, const char* what) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw std::invalid_argument(std::string(what) + ": negative entry at index " +
                                  std::to_string(i));
    }
    sum += v[i];
  }
  if (std::abs(sum - 1.0) <= kExactTol) return;
  if (std::abs(sum - 1.0) > kMassTol) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
  for (double& x : v) x /= sum;
}

void check_axes(const JointPmf& joint, const std::vector<std::size_t>& axes,
                const char* what) {
  for (std::size_t a : axes) {
    if (a >= joint.rank()) {
      throw std::invalid_argument(std::string(what) + ": axis " + std::to_string(a) +
                                  " out of range");
    }
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = i + 1; j < axes.size(); ++j) {
      if (axes[i] == axes[j]) {
        throw std::invalid_argument(std::string(what) + ": repeated axis " +
                                    std::to_string(axes[i]));
      }
    }
  }
}

void check_disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                    const char* what) {
  for (std::size_t x : a) {
    for (std::size_t y : b) {
      if (x == y) {
        throw std::invalid_argument(std::string(what) + ": axis sets overlap at " +
                                    std::to_string(x));
      }
    }
  }
}

std::vector<std::size_t> concat(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
  std::vector<std::size_t> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace

double plog2(double p) {
  if (p < kZeroMass) return 0.0;
  return p * std::log2(p);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary_entropy: argument outside [0, 1]");
  }
  return -plog2(p) - plog2(1.0 - p);
}

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("Pmf: empty alphabet");
  normalize_or_throw(probs_, "Pmf");
}

Pmf Pmf::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Pmf::uniform: empty alphabet");
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw std::invalid_argument("Pmf::point_mass: index out of range");
  std::vector<double> v(n, 0.0);
  v[at] = 1.0;
  return Pmf(std::move(v));
}

double entropy(const Pmf& p) {
  double h = 0.0;
  for (double x : p.probs()) h -= plog2(x);
  return std::max(h, 0.0);
}

JointPmf::JointPmf(std::vector<std::size_t> dims, std::vector<double> table)
    : dims_(std::move(dims)), table_(std::move(table)) {
  if (dims_.empty()) throw std::invalid_argument("JointPmf: no axes");
  std::size_t total = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("JointPmf: empty axis");
    total *= d;
  }
  if (total != table_.size()) {
    throw std::invalid_argument("JointPmf: table has " + std::to_string(table_.size()) +
                                " entries, dims require " + std::to_string(total));
  }
  normalize_or_throw(table_, "JointPmf");
  strides_.assign(dims_.size(), 1);
  for (std::size_t a = dims_.size(); a-- > 1;) {
    strides_[a - 1] = strides_[a] * dims_[a];
  }
}

JointPmf JointPmf::marginal(const std::vector<std::size_t>& axes) const {
  check_axes(*this, axes, "marginal");
  if (axes.empty()) throw std::invalid_argument("marginal: no axes given");
  std::vector<std::size_t> mdims(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) mdims[i] = dims_[axes[i]];
  std::size_t msize = 1;
  for (std::size_t d : mdims) msize *= d;
  std::vector<double> acc(msize, 0.0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0.0) continue;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      idx = idx * mdims[i] + axis_index(flat, axes[i]);
    }
    acc[idx] += table_[flat];
  }
  return JointPmf(std::move(mdims), std::move(acc));
}

Pmf JointPmf::axis_marginal(std::size_t axis) const {
  check_axes(*this, {axis}, "axis_marginal");
  std::vector<double> acc(dims_[axis], 0.0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    acc[axis_index(flat, axis)] += table_[flat];
  }
  return Pmf(std::move(acc));
}

double JointPmf::subset_entropy(const std::vector<std::size_t>& axes) const {
  check_axes(*this, axes, "subset_entropy");
  if (axes.empty()) return 0.0;
  std::vector<std::size_t> mdims(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) mdims[i] = dims_[axes[i]];
  std::size_t msize = 1;
  for (std::size_t d : mdims) msize *= d;
  std::vector<double> acc(msize, 0.0);
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0.0) continue;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      idx = idx * mdims[i] + axis_index(flat, axes[i]);
    }
    acc[idx] += table_[flat];
  }
  double h = 0.0;
  for (double x : acc) h -= plog2(x);
  return std::max(h, 0.0);
}

double entropy(const JointPmf& joint) {
  double h = 0.0;
  for (double x : joint.table()) h -= plog2(x);
  return std::max(h, 0.0);
}

double cond_entropy(const JointPmf& joint, const std::vector<std::size_t>& target,
                    const std::vector<std::size_t>& given) {
  check_axes(joint, target, "cond_entropy");
  check_axes(joint, given, "cond_entropy");
  check_disjoint(target, given, "cond_entropy");
  if (target.empty()) throw std::invalid_argument("cond_entropy: empty target set");
  return joint.subset_entropy(concat(target, given)) - joint.subset_entropy(given);
}

double mutual_info(const JointPmf& joint, const std::vector<std::size_t>& a,
                   const std::vector<std::size_t>& b) {
  check_axes(joint, a, "mutual_info");
  check_axes(joint, b, "mutual_info");
  check_disjoint(a, b, "mutual_info");
  return joint.subset_entropy(a) + joint.subset_entropy(b) -
         joint.subset_entropy(concat(a, b));
}

double cond_mutual_info(const JointPmf& joint, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b,
                        const std::vector<std::size_t>& c) {
  check_axes(joint, a, "cond_mutual_info");
  check_axes(joint, b, "cond_mutual_info");
  check_axes(joint, c, "cond_mutual_info");
  check_disjoint(a, b, "cond_mutual_info");
  check_disjoint(a, c, "cond_mutual_info");
  check_disjoint(b, c, "cond_mutual_info");
  return joint.subset_entropy(concat(a, c)) + joint.subset_entropy(concat(b, c)) -
         joint.subset_entropy(concat(concat(a, b), c)) - joint.subset_entropy(c);
}

double total_correlation(const JointPmf& joint) {
  if (joint.rank() < 2) {
    throw std::invalid_argument("total_correlation: needs at least 2 axes");
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < joint.rank(); ++a) sum += joint.subset_entropy({a});
  return sum - entropy(joint);
}

double conditional_total_correlation(const JointPmf& joint, std::size_t v_axis) {
  if (v_axis >= joint.rank()) {
    throw std::invalid_argument("conditional_total_correlation: v axis out of range");
  }
  if (joint.rank() < 3) {
    throw std::invalid_argument(
        "conditional_total_correlation: needs at least 2 component axes");
  }
  double hv = joint.subset_entropy({v_axis});
  double sum = 0.0;
  std::vector<std::size_t> all;
  for (std::size_t a = 0; a < joint.rank(); ++a) {
    if (a == v_axis) continue;
    sum += joint.subset_entropy({a, v_axis}) - hv;
    all.push_back(a);
  }
  all.push_back(v_axis);
  double h_all_given_v = joint.subset_entropy(all) - hv;
  return sum - h_all_given_v;
}

}  // namespace ratecache
