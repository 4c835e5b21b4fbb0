#pragma once

#include <string>
#include <vector>

#include "ratecache/prob.hpp"

namespace ratecache {

// |X| x |Y| table of output symbols for one request function.
using SymbolTable = std::vector<std::vector<std::string>>;

// Axis layout of joints produced by induced_joint().
namespace axis {
inline constexpr std::size_t X = 0;
inline constexpr std::size_t Y = 1;
inline constexpr std::size_t V = 2;
inline constexpr std::size_t S1 = 3;
inline constexpr std::size_t S2 = 4;
}  // namespace axis

// A finite caching instance: source and request alphabets, their joint law,
// and one or two per-letter request functions. Output alphabets are derived
// from the function tables unless declared explicitly.
class CachingProblem {
 public:
  CachingProblem(std::vector<std::string> x_alphabet, std::vector<std::string> y_alphabet,
                 JointPmf joint, std::vector<SymbolTable> f_tables,
                 std::vector<std::vector<std::string>> declared_s_alphabets = {});

  const std::vector<std::string>& x_alphabet() const { return x_alphabet_; }
  const std::vector<std::string>& y_alphabet() const { return y_alphabet_; }
  const JointPmf& joint() const { return joint_; }

  std::size_t x_size() const { return x_alphabet_.size(); }
  std::size_t y_size() const { return y_alphabet_.size(); }
  std::size_t num_functions() const { return f_tables_.size(); }
  std::size_t s_size(std::size_t fn) const { return s_alphabets_[fn].size(); }

  const std::vector<SymbolTable>& f_tables() const { return f_tables_; }
  const std::vector<std::string>& s_alphabet(std::size_t fn) const {
    return s_alphabets_[fn];
  }
  // Index of f_fn(x, y) in s_alphabet(fn).
  std::size_t f_index(std::size_t fn, std::size_t x, std::size_t y) const {
    return f_index_[fn][x][y];
  }

  double p_xy(std::size_t x, std::size_t y) const {
    return joint_[x * y_size() + y];
  }
  Pmf x_marginal() const { return joint_.axis_marginal(0); }
  Pmf y_marginal() const { return joint_.axis_marginal(1); }

  // True when max |p(x,y) - p(x)p(y)| <= tol.
  bool xy_independent(double tol = kMassTol) const;

  bool operator==(const CachingProblem& other) const;

 private:
  std::vector<std::string> x_alphabet_;
  std::vector<std::string> y_alphabet_;
  JointPmf joint_;
  std::vector<SymbolTable> f_tables_;
  std::vector<std::vector<std::string>> s_alphabets_;
  std::vector<std::vector<std::vector<std::size_t>>> f_index_;
};

// Conditional pmf p(v | x): one simplex row per source symbol. Rows follow
// the same validation rules as Pmf.
class TestChannel {
 public:
  // Trivial 1x1 channel; placeholder for result structs filled in later.
  TestChannel() : rows_{{1.0}}, v_card_(1) {}
  explicit TestChannel(std::vector<std::vector<double>> rows);

  // V = X.
  static TestChannel identity(std::size_t n);
  // V constant (point mass on the first symbol).
  static TestChannel constant(std::size_t n_rows, std::size_t v_card = 1);

  std::size_t x_size() const { return rows_.size(); }
  std::size_t v_card() const { return v_card_; }
  double p(std::size_t x, std::size_t v) const { return rows_[x][v]; }
  const std::vector<double>& row(std::size_t x) const { return rows_[x]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  bool operator==(const TestChannel& other) const { return rows_ == other.rows_; }

 private:
  std::vector<std::vector<double>> rows_;
  std::size_t v_card_ = 0;
};

// Joint law over (X, Y, V, S1[, S2]) obtained by attaching the channel to the
// source. V depends on (X, Y) only through X, so I(V;Y|X) = 0 by construction.
JointPmf induced_joint(const CachingProblem& problem, const TestChannel& channel);

// Builds the selector instance for a component source: X is the tuple of
// components, the request picks one component, X independent of Y.
// `component_alphabets` defaults to decimal digits per axis.
CachingProblem make_selector_problem(
    const JointPmf& components, const Pmf& request_pmf,
    std::vector<std::vector<std::string>> component_alphabets = {});

// Collapse X to the tuple of per-request outputs (f(x, y) for every y);
// source symbols with identical output tuples are merged. Single-function
// problems only.
CachingProblem reduce_to_components(const CachingProblem& problem);

}  // namespace ratecache
