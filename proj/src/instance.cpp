#include "pqgraph/instance.hpp"

#include <stdexcept>

namespace pqgraph {

ProblemInstance::ProblemInstance(std::shared_ptr<const WeightedGraph> graph,
                                 CoefficientFields fields, Exponents exps, double lambda)
    : graph_(std::move(graph)), fields_(std::move(fields)), exps_(exps), lambda_(lambda) {
  if (!graph_) throw std::invalid_argument("problem instance: null graph");
  fields_.validate(*graph_);
  a_min_ = fields_.a.min();
  b_min_ = fields_.b.min();
  mu_min_ = graph_->mu_min();
  g_sup_ = linf_norm(fields_.g);
  f_norm_p_ = lp_norm(*graph_, fields_.f, exps_.p / (exps_.p - 1.0 + exps_.gamma));
  f_norm_q_ = lp_norm(*graph_, fields_.f, exps_.q / (exps_.q - 1.0 + exps_.gamma));
}

ProblemInstance ProblemInstance::with_lambda(double lambda) const {
  ProblemInstance out(*this);
  out.lambda_ = lambda;
  return out;
}

ProblemInstance ProblemInstance::with_exponents(const Exponents& exps) const {
  return ProblemInstance(graph_, fields_, exps, lambda_);
}

}  // namespace pqgraph
