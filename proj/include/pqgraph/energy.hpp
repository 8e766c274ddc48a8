#ifndef PQGRAPH_ENERGY_HPP
#define PQGRAPH_ENERGY_HPP

#include <optional>
#include <stdexcept>

#include "pqgraph/instance.hpp"

namespace pqgraph {

/// Scalars that determine the whole ray {t*u : t > 0} through a direction u:
/// norm_a_p  = ||u||_{W_a^{1,p}}^p, norm_b_q = ||u||_{W_b^{1,q}}^q,
/// singular  = int f |u|^{1-gamma} dmu, superlin = int g |u|^{alpha+1} dmu.
/// One pass over the graph; every fiber quantity is closed-form in these.
struct FiberCoefficients {
  double norm_a_p = 0.0;
  double norm_b_q = 0.0;
  double singular = 0.0;
  double superlin = 0.0;
  double scale() const { return norm_a_p + norm_b_q + singular; }
};

FiberCoefficients fiber_coefficients(const ProblemInstance& inst, const GraphFunction& u);

/// Energy functional
///   J(u) = (1/p)||u||_{W_a^{1,p}}^p + (1/q)||u||_{W_b^{1,q}}^q
///          - (1/(1-gamma)) int f |u|^{1-gamma} - (lambda/(alpha+1)) int g |u|^{alpha+1}.
double j_lambda(const ProblemInstance& inst, const GraphFunction& u);
/// J(t*u) from cached ray coefficients.
double j_lambda_on_ray(const ProblemInstance& inst, const FiberCoefficients& c, double t);

/// Pointwise residual of the strictly positive function u:
///   -Delta_p u - Delta_q u + a u^{p-1} + b u^{q-1} - f u^{-gamma} - lambda g u^alpha.
/// Identically zero exactly at solutions.
GraphFunction pointwise_residual(const ProblemInstance& inst, const GraphFunction& u);

/// Weak-form residual against a test function phi:
///   int (|grad u|^{p-2} Gamma(u,phi) + a u^{p-1} phi)
/// + int (|grad u|^{q-2} Gamma(u,phi) + b u^{q-1} phi)
/// - int f u^{-gamma} phi - lambda int g u^alpha phi.
/// Against an indicator e_{x0} this equals mu(x0) * pointwise_residual(x0).
double weak_residual(const ProblemInstance& inst, const GraphFunction& u,
                     const GraphFunction& phi);

/// Gradient of J as a function of the value vector: mu(x) * residual(x).
GraphFunction energy_gradient(const ProblemInstance& inst, const GraphFunction& u);

/// Fibering map phi_u(t) = t^gamma d/dt J(t u)
///   = t^{p-1+gamma} ||u||_{W_a}^p + t^{q-1+gamma} ||u||_{W_b}^q
///     - int f u^{1-gamma} - lambda t^{alpha+gamma} int g u^{alpha+1},
/// and its t-derivative.
double fiber_value(const ProblemInstance& inst, const GraphFunction& u, double t);
double fiber_derivative(const ProblemInstance& inst, const GraphFunction& u, double t);
double fiber_value(const Exponents& exps, double lambda, const FiberCoefficients& c, double t);
double fiber_derivative(const Exponents& exps, double lambda, const FiberCoefficients& c,
                        double t);

class FiberError : public std::runtime_error {
 public:
  enum class Kind { DegenerateDirection, NoStationary };
  FiberError(Kind kind, const char* msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class FiberClass { TwoRoots, Tangent, NoRoot };

/// Root structure of the fibering map along one direction. When the
/// classification is TwoRoots, 0 < t1 < t_tilde < t2 with phi'(t1) > 0 and
/// phi'(t2) < 0, so t1*u lands in the plus set and t2*u in the minus set.
struct FiberAnalysis {
  double t_tilde = 0.0;
  double phi_at_t_tilde = 0.0;
  std::optional<double> t1;
  std::optional<double> t2;
  FiberClass classification = FiberClass::NoRoot;
  FiberCoefficients coeffs;
};

/// Locates the unique stationary point t_tilde of phi_u (the bracketed
/// strictly-decreasing reduction guarantees a single sign change), then the
/// two roots when phi_u(t_tilde) > 0. Requires lambda > 0, u >= 0.
/// Throws FiberError for u == 0 (DegenerateDirection) or int g u^{alpha+1} = 0
/// (NoStationary).
FiberAnalysis analyze_fiber(const ProblemInstance& inst, const GraphFunction& u);
FiberAnalysis analyze_fiber(const ProblemInstance& inst, const FiberCoefficients& c);

enum class NehariClass { Plus, Zero, Minus, NotOnManifold };
const char* to_string(NehariClass c);

/// Sign of (p-1+gamma)||v||_{W_a}^p + (q-1+gamma)||v||_{W_b}^q
///         - (alpha+gamma) lambda int g v^{alpha+1},
/// gated on |phi_v(1)| <= 1e-9 (||v||_{W_a}^p + ||v||_{W_b}^q + int f v^{1-gamma}).
/// The zero function classifies Zero (the degenerate class contains only 0).
NehariClass nehari_classify(const ProblemInstance& inst, const GraphFunction& v);
/// The derivative indicator above, exposed for tests and reports.
double nehari_indicator(const ProblemInstance& inst, const FiberCoefficients& c);

/// Closed-form threshold constants. X_lambda/S_lambda are the lower norm
/// bounds on the minus set, X0/S0 the upper bounds on the plus set, and
/// lambda_star the parameter threshold where the bounds coincide.
struct ConstantsReport {
  double X_lambda = 0.0;
  double X0 = 0.0;
  double S_lambda = 0.0;
  double S0 = 0.0;
  double Lambda_star = 0.0;
};

/// The parameter threshold; independent of inst.lambda().
double lambda_star(const ProblemInstance& inst);
/// All five constants; requires inst.lambda() > 0.
ConstantsReport constants(const ProblemInstance& inst);

/// Operator-monotonicity pairing: the weak forms of the equation at u and
/// at w (singular term dropped), differenced and tested against u - w.
/// For lambda < 0 and strictly positive u, w every pointwise contribution
/// is nonnegative, which is what forces uniqueness. abs_scale accumulates
/// the absolute sizes of the summed terms for tolerance scaling.
struct PairingValue {
  double value = 0.0;
  double abs_scale = 0.0;
};
PairingValue monotonicity_pairing(const ProblemInstance& inst, const GraphFunction& u,
                                  const GraphFunction& w);

/// The three bilinear bounds used to control weak-form pairings:
///   int (|grad u|^{p-2} Gamma(u,phi) + a u^{p-1} phi) <= ||u||_{W_a}^{p-1} ||phi||_{W_a},
/// the b/q analogue, and
///   int g u^alpha phi <= ||g||_inf (||u||_W / (mu0^{1/p} a0^{1/p} + mu0^{1/q} b0^{1/q}))^{alpha-p+1}
///                        ||u||_p^{p-1} ||phi||_p.
/// Requires u, phi >= 0.
CheckReport pairing_bound_checks(const ProblemInstance& inst, const GraphFunction& u,
                                 const GraphFunction& phi);

}  // namespace pqgraph

#endif
