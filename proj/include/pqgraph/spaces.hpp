#ifndef PQGRAPH_SPACES_HPP
#define PQGRAPH_SPACES_HPP

#include <string>
#include <vector>

#include "pqgraph/graph.hpp"

namespace pqgraph {

/// Exponent tuple of the problem. Standing ordering 0 < gamma < 1 < q <= p < alpha+1
/// is enforced at construction.
struct Exponents {
  double p;
  double q;
  double gamma;
  double alpha;

  Exponents(double p_, double q_, double gamma_, double alpha_);
};

/// Coefficient fields a, b (uniformly positive), f (> 0) and g (>= 0, not
/// identically zero) of the equation. Minima a0, b0 are computed, not posited.
struct CoefficientFields {
  GraphFunction a;
  GraphFunction b;
  GraphFunction f;
  GraphFunction g;

  /// Throws std::invalid_argument listing the first violated condition.
  void validate(const WeightedGraph& graph) const;
};

/// Lebesgue norm ||psi||_theta = (sum mu |psi|^theta)^(1/theta), theta >= 1.
double lp_norm(const WeightedGraph& g, const GraphFunction& psi, double theta);

/// Sup norm, max over vertices of |psi|.
double linf_norm(const GraphFunction& psi);

/// Weighted Sobolev norm (int (|grad psi|^s + w |psi|^s) dmu)^(1/s).
/// Used with (a,p) and (b,q).
double sobolev_norm(const WeightedGraph& g, const GraphFunction& psi, const GraphFunction& weight,
                    double s);
/// Same, reusing a precomputed gradient-length vector.
double sobolev_norm(const WeightedGraph& g, const GraphFunction& psi, const GraphFunction& weight,
                    double s, const GraphFunction& gnorm);

/// ||psi||_{W} = ||psi||_{W_a^{1,p}} + ||psi||_{W_b^{1,q}}.
double w_norm(const WeightedGraph& g, const GraphFunction& psi, const CoefficientFields& fields,
              const Exponents& exps);

/// One inequality instance: lhs <= rhs expected, slack = rhs - lhs.
struct NamedCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  double slack() const { return rhs - lhs; }
};

struct CheckReport {
  std::vector<NamedCheck> checks;
  bool all_ok() const;
};

/// The continuous-embedding inequalities evaluated on a concrete function:
/// the two sup-norm bounds, the two L^theta bounds (theta >= p required),
/// and the two singular-integral bounds. Raw lhs/rhs are reported; the ok
/// flag uses slack >= -1e-12 * max(|lhs|, |rhs|).
CheckReport embedding_checks(const WeightedGraph& g, const GraphFunction& psi,
                             const CoefficientFields& fields, const Exponents& exps, double theta);

}  // namespace pqgraph

#endif
