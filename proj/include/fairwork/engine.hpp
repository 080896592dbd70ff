#pragma once

// Log-barrier interior-point solver for
//
//   maximize   f(y)                 (smooth, concave)
//   subject to a_r . y <= b_r        (linear rows, dual lambda_r >= 0)
//              c_k(y) <= 0           (smooth convex constraints)
//              y_k >= 0              (for lower-bounded variables)
//
// Duals are carried explicitly (primal-dual Newton on the barrier KKT system).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fairwork/linalg.hpp"

namespace fairwork::engine {

struct SparseRow {
  std::vector<std::size_t> index;
  std::vector<double> coef;

  void add(std::size_t k, double c) {
    index.push_back(k);
    coef.push_back(c);
  }
  double eval(std::span<const double> y) const;
  std::size_t size() const { return index.size(); }
};

/// a . y <= rhs
struct LinearConstraint {
  SparseRow row;
  double rhs = 0.0;
};

/// Concave objective. Implementations must be stateless after construction.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(std::span<const double> y) const = 0;
  virtual void gradient(std::span<const double> y, std::span<double> grad) const = 0;
  /// Adds -Hessian (positive semidefinite) into h.
  virtual void add_neg_hessian(std::span<const double> y, DenseMatrix& h) const = 0;
  /// Strict-positivity guards required by the log terms.
  virtual bool in_domain(std::span<const double> y) const = 0;
};

/// f(y) = sum_k w_k log(a_k . y - c_k) + g . y
class LogSumObjective final : public Objective {
 public:
  struct Term {
    double weight = 1.0;
    SparseRow row;
    double offset = 0.0;
  };

  explicit LogSumObjective(std::size_t num_vars) : linear_(num_vars, 0.0) {}

  void add_term(double weight, SparseRow row, double offset);
  void set_linear(std::size_t k, double c) { linear_[k] = c; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<double>& linear() const { return linear_; }

  double value(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> grad) const override;
  void add_neg_hessian(std::span<const double> y, DenseMatrix& h) const override;
  bool in_domain(std::span<const double> y) const override;

 private:
  std::vector<Term> terms_;
  std::vector<double> linear_;
};

/// Smooth convex c(y) <= 0 touching a few variables.
class ConvexConstraint {
 public:
  virtual ~ConvexConstraint() = default;
  virtual std::span<const std::size_t> support() const = 0;
  virtual double value(std::span<const double> y) const = 0;
  /// Gradient restricted to support(), same order.
  virtual void gradient(std::span<const double> y, std::span<double> g) const = 0;
  /// Hessian restricted to support(), row-major |support|^2.
  virtual void hessian(std::span<const double> y, std::span<double> h) const = 0;
  /// Whether value() is defined at y.
  virtual bool defined_at(std::span<const double> /*y*/) const { return true; }
};

/// exp(y_t / w) - (a . y - c) <= 0, i.e. w log(a . y - c) >= y_t.
class ExpUtilityBound final : public ConvexConstraint {
 public:
  ExpUtilityBound(std::size_t level_var, double weight, const SparseRow& utility, double offset);
  std::span<const std::size_t> support() const override { return support_; }
  double value(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;
  void hessian(std::span<const double> y, std::span<double> h) const override;

 private:
  std::size_t level_;
  double weight_;
  SparseRow utility_;
  double offset_;
  std::vector<std::size_t> support_;
};

/// (y_p + eps) log((y_p + eps) / (y_q + eps)) - y_z <= 0.
class RelativeEntropyBound final : public ConvexConstraint {
 public:
  RelativeEntropyBound(std::size_t p, std::size_t q, std::size_t z, double eps) : support_{p, q, z}, eps_(eps) {}
  std::span<const std::size_t> support() const override { return support_; }
  double value(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;
  void hessian(std::span<const double> y, std::span<double> h) const override;
  bool defined_at(std::span<const double> y) const override;

 private:
  std::vector<std::size_t> support_;
  double eps_;
};

struct Problem {
  std::size_t num_vars = 0;
  std::vector<char> lower_bounded;
  std::vector<LinearConstraint> rows;
  std::vector<std::shared_ptr<const ConvexConstraint>> nonlinear;
  std::shared_ptr<const Objective> objective;

  std::size_t add_var(bool nonnegative = true) {
    lower_bounded.push_back(nonnegative ? 1 : 0);
    return num_vars++;
  }
};

struct Options {
  /// Target on each KKT residual.
  double tol = 1e-8;
  /// Final barrier weight; 0 means 1e-4 * tol.
  double mu_final = 0.0;
  int max_iterations = 600;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal_infeasibility = 0.0;
  double complementarity = 0.0;
};

struct TraceEntry {
  int iteration = 0;
  double mu = 0.0;
  double objective = 0.0;
  double decrement = 0.0;
  double step = 0.0;
};

struct SolveResult {
  std::vector<double> y;
  std::vector<double> row_duals;
  std::vector<double> bound_duals;
  std::vector<double> nonlinear_duals;
  double objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

/// Runs the barrier method from a strictly feasible start. Throws
/// Error(domain_guard_violated) if `start` is not strictly feasible.
SolveResult maximize(const Problem& problem, std::span<const double> start, const Options& options);

/// True when y is strictly inside every constraint and the objective domain.
bool strictly_feasible(const Problem& problem, std::span<const double> y);

/// a . y - c > 0 is required.
struct AffineGuard {
  SparseRow row;
  double offset = 0.0;
};

struct MarginResult {
  /// max over the polytope of min_k (a_k . y - c_k)
  double margin = 0.0;
  /// Optimal point of the margin program.
  std::vector<double> witness;
  /// Strictly interior point with every guard >= margin / 2 (valid when margin > 0).
  std::vector<double> start;
  bool converged = false;
};

/// Solves the max-min margin LP over the polytope described by `polytope`
/// (its rows and bounds; objective and nonlinear parts are ignored).
/// `interior` must be strictly inside the polytope.
MarginResult max_margin(const Problem& polytope, std::span<const AffineGuard> guards,
                        std::span<const double> interior, const Options& options);

/// One max-min stage: maximize min over free entities of w_e log(u_e(y)),
/// where u_e = a_e . y - c_e, subject to the polytope and frozen lower bounds
/// on utilities.
struct Entity {
  double weight = 1.0;
  SparseRow row;
  double offset = 0.0;
};

struct FrozenBound {
  std::size_t entity = 0;
  /// Required u_e >= min_utility.
  double min_utility = 0.0;
};

struct MaxMinResult {
  /// Optimal value of min_e w_e log u_e.
  double t_star = 0.0;
  std::vector<double> y;
  /// Free entities within `tie_tol` of t_star.
  std::vector<std::size_t> tight;
  SolveResult solve;
};

MaxMinResult maxmin(const Problem& polytope, std::span<const Entity> entities,
                    std::span<const std::size_t> free_set, std::span<const FrozenBound> frozen,
                    std::span<const double> interior, const Options& options, double tie_tol = 1e-7);

/// Adds the frozen bounds as linear rows (u_e >= min_utility).
void add_frozen_rows(Problem& problem, std::span<const Entity> entities, std::span<const FrozenBound> frozen);

}  // namespace fairwork::engine
