#ifndef PQGRAPH_SOLVER_HPP
#define PQGRAPH_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <limits>

#include "pqgraph/energy.hpp"

namespace pqgraph {

enum class Branch { Plus, Minus };
const char* to_string(Branch b);

enum class PositivityPolicy { RejectStep };

struct SolverOptions {
  std::size_t max_iters = 50000;
  /// Convergence threshold on the sup norm of the pointwise residual.
  double grad_tol = 1e-8;
  /// Relative energy resolution; below it the line search falls back from
  /// the energy decrease test to a residual decrease test.
  double energy_tol = 1e-12;
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  std::uint64_t seed = 0;
  PositivityPolicy positivity = PositivityPolicy::RejectStep;

  void validate() const;
};

struct SolveReport {
  GraphFunction solution;
  double energy = 0.0;
  double residual_inf = std::numeric_limits<double>::infinity();
  double residual_l2 = std::numeric_limits<double>::infinity();
  NehariClass nehari_class = NehariClass::NotOnManifold;
  std::size_t iterations = 0;
  std::vector<NamedCheck> inequality_checks;
  bool converged = false;
  /// "converged" or the reason the run stopped short.
  std::string stop_reason;
};

/// Accepted-iterate observer; invoked for the initial point (step 0) and
/// once per accepted step.
struct IterateInfo {
  std::size_t iteration;
  double energy;
  double residual_inf;
  double step;
  const GraphFunction& u;
};
using IterateCallback = std::function<void(const IterateInfo&)>;

class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(FiberClass cls, const char* msg) : std::runtime_error(msg), cls_(cls) {}
  FiberClass fiber_class() const { return cls_; }

 private:
  FiberClass cls_;
};

/// Scales u onto the requested side of the Nehari set: t1(u)*u or t2(u)*u.
/// Throws ProjectionError when the fiber has no usable roots (NoRoot or
/// Tangent classification).
GraphFunction project_to_nehari(const ProblemInstance& inst, const GraphFunction& u,
                                Branch branch);

/// Constrained minimization on the plus or minus Nehari set for
/// 0 < lambda < Lambda*: projected gradient descent with Armijo
/// backtracking, every accepted iterate reprojected onto its branch, any
/// step with a nonpositive component rejected. Convergence means the full
/// pointwise residual dropped below grad_tol in sup norm; a stalled run is
/// reported with converged=false, never thrown.
SolveReport minimize_on_branch(const ProblemInstance& inst, Branch branch,
                               const GraphFunction& init, const SolverOptions& opts,
                               const IterateCallback& on_iterate = {});

/// Unconstrained descent for lambda < 0, where the energy is convex on the
/// positive cone and has a unique strictly positive minimizer.
SolveReport minimize_global_negative(const ProblemInstance& inst, const GraphFunction& init,
                                     const SolverOptions& opts,
                                     const IterateCallback& on_iterate = {});

/// A-posteriori verification of a candidate solution: positivity, pointwise
/// residual, Nehari class with the matching norm separation bounds
/// (lambda > 0), energy sign, the bilinear pairing bounds, and for
/// lambda < 0 the operator-monotonicity probe against seeded random
/// positive functions.
std::vector<NamedCheck> verify_solution(const ProblemInstance& inst, const GraphFunction& u,
                                        double grad_tol = 1e-8, std::uint64_t seed = 0);

}  // namespace pqgraph

#endif
