#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratecache {

// Mass below this is treated as an exact zero inside log terms (0 log 0 = 0).
inline constexpr double kZeroMass = 1e-15;

// Inputs whose total mass is farther than this from 1 are rejected instead of
// silently renormalized.
inline constexpr double kMassTol = 1e-9;

// p * log2(p) with the 0 log 0 = 0 convention.
double plog2(double p);

// h_b(p) in bits. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

// A pmf over a finite ordered alphabet. Entries must be nonnegative and sum
// to 1 within kMassTol; inputs inside the tolerance are renormalized.
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs);

  static Pmf uniform(std::size_t n);
  static Pmf point_mass(std::size_t n, std::size_t at);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Pmf& other) const { return probs_ == other.probs_; }

 private:
  std::vector<double> probs_;
};

// H(p) in bits.
double entropy(const Pmf& p);

// A joint pmf over several finite axes, stored row-major (last axis fastest).
// All information measures on joints go through this type.
class JointPmf {
 public:
  JointPmf(std::vector<std::size_t> dims, std::vector<double> table);

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }
  double operator[](std::size_t flat) const { return table_[flat]; }

  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  std::size_t axis_index(std::size_t flat, std::size_t axis) const {
    return (flat / strides_[axis]) % dims_[axis];
  }

  // Marginal over the given axes, in the given order.
  JointPmf marginal(const std::vector<std::size_t>& axes) const;
  Pmf axis_marginal(std::size_t axis) const;

  // Entropy in bits of the marginal over `axes`.
  double subset_entropy(const std::vector<std::size_t>& axes) const;

  bool operator==(const JointPmf& other) const {
    return dims_ == other.dims_ && table_ == other.table_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
};

double entropy(const JointPmf& joint);

// H(target | given). Axis sets must be disjoint.
double cond_entropy(const JointPmf& joint, const std::vector<std::size_t>& target,
                    const std::vector<std::size_t>& given);

// I(a; b) between two disjoint axis sets.
double mutual_info(const JointPmf& joint, const std::vector<std::size_t>& a,
                   const std::vector<std::size_t>& b);

// I(a; b | c) between pairwise disjoint axis sets; c may be empty.
double cond_mutual_info(const JointPmf& joint, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b,
                        const std::vector<std::size_t>& c);

// Sum of per-axis entropies minus the joint entropy. Zero iff the axes are
// independent. Requires rank >= 2.
double total_correlation(const JointPmf& joint);

// Total correlation of the remaining axes conditioned on axis `v_axis`.
// For two components this equals their conditional mutual information.
double conditional_total_correlation(const JointPmf& joint, std::size_t v_axis);

}  // namespace ratecache
