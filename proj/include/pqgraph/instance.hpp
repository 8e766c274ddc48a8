#ifndef PQGRAPH_INSTANCE_HPP
#define PQGRAPH_INSTANCE_HPP

#include <memory>

#include "pqgraph/spaces.hpp"

namespace pqgraph {

/// The full datum of the equation: graph, coefficient fields, exponents and
/// the parameter lambda. Field invariants are validated and the scalar
/// quantities that recur in the estimates are cached at construction.
///
/// Immutable; with_lambda() produces a copy for parameter sweeps. The graph
/// is shared, so copies are cheap enough to hand to worker threads.
class ProblemInstance {
 public:
  ProblemInstance(std::shared_ptr<const WeightedGraph> graph, CoefficientFields fields,
                  Exponents exps, double lambda);

  const WeightedGraph& graph() const { return *graph_; }
  std::shared_ptr<const WeightedGraph> graph_ptr() const { return graph_; }
  const CoefficientFields& fields() const { return fields_; }
  const Exponents& exps() const { return exps_; }
  double lambda() const { return lambda_; }

  ProblemInstance with_lambda(double lambda) const;
  /// New exponents force a re-cache of the exponent-dependent f norms.
  ProblemInstance with_exponents(const Exponents& exps) const;

  double a_min() const { return a_min_; }
  double b_min() const { return b_min_; }
  double mu_min() const { return mu_min_; }
  double g_sup() const { return g_sup_; }
  /// ||f||_{p/(p-1+gamma)} and ||f||_{q/(q-1+gamma)}.
  double f_norm_p() const { return f_norm_p_; }
  double f_norm_q() const { return f_norm_q_; }

 private:
  std::shared_ptr<const WeightedGraph> graph_;
  CoefficientFields fields_;
  Exponents exps_;
  double lambda_;

  double a_min_, b_min_, mu_min_, g_sup_, f_norm_p_, f_norm_q_;
};

}  // namespace pqgraph

#endif
