#include "pqgraph/energy.hpp"

#include <cmath>
#include <limits>

#include "pqgraph/kahan.hpp"

namespace pqgraph {

namespace {

void require_positive(const GraphFunction& u, const char* what) {
  if (!(u.min() > 0.0))
    throw std::domain_error(std::string(what) + ": u must be strictly positive");
}

void require_nonnegative(const GraphFunction& u, const char* what) {
  if (!(u.min() >= 0.0))
    throw std::domain_error(std::string(what) + ": function must be nonnegative");
}

}  // namespace

FiberCoefficients fiber_coefficients(const ProblemInstance& inst, const GraphFunction& u) {
  const WeightedGraph& g = inst.graph();
  detail::require_sized(g, u, "fiber_coefficients");
  const Exponents& e = inst.exps();
  const CoefficientFields& cf = inst.fields();
  const GraphFunction gn = grad_norm_all(g, u);
  KahanAccumulator na, nb, fs, gs;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    const double mu = g.measure(x);
    const double au = std::abs(u[x]);
    na.add(mu * (std::pow(gn[x], e.p) + cf.a[x] * std::pow(au, e.p)));
    nb.add(mu * (std::pow(gn[x], e.q) + cf.b[x] * std::pow(au, e.q)));
    fs.add(mu * (cf.f[x] * std::pow(au, 1.0 - e.gamma)));
    gs.add(mu * (cf.g[x] * std::pow(au, e.alpha + 1.0)));
  }
  return {na.value(), nb.value(), fs.value(), gs.value()};
}

double j_lambda_on_ray(const ProblemInstance& inst, const FiberCoefficients& c, double t) {
  const Exponents& e = inst.exps();
  return std::pow(t, e.p) * c.norm_a_p / e.p + std::pow(t, e.q) * c.norm_b_q / e.q -
         std::pow(t, 1.0 - e.gamma) * c.singular / (1.0 - e.gamma) -
         inst.lambda() * std::pow(t, e.alpha + 1.0) * c.superlin / (e.alpha + 1.0);
}

double j_lambda(const ProblemInstance& inst, const GraphFunction& u) {
  return j_lambda_on_ray(inst, fiber_coefficients(inst, u), 1.0);
}

GraphFunction pointwise_residual(const ProblemInstance& inst, const GraphFunction& u) {
  const WeightedGraph& g = inst.graph();
  detail::require_sized(g, u, "pointwise_residual");
  require_positive(u, "pointwise_residual");
  const Exponents& e = inst.exps();
  const CoefficientFields& cf = inst.fields();
  const GraphFunction gn = grad_norm_all(g, u);
  const GraphFunction lap_p = s_laplacian_all(g, u, e.p, gn);
  const GraphFunction lap_q = s_laplacian_all(g, u, e.q, gn);
  GraphFunction r(g.vertex_count(), 0.0);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    r[x] = -lap_p[x] - lap_q[x] + cf.a[x] * std::pow(u[x], e.p - 1.0) +
           cf.b[x] * std::pow(u[x], e.q - 1.0) - cf.f[x] * std::pow(u[x], -e.gamma) -
           inst.lambda() * cf.g[x] * std::pow(u[x], e.alpha);
  }
  return r;
}

double weak_residual(const ProblemInstance& inst, const GraphFunction& u,
                     const GraphFunction& phi) {
  const WeightedGraph& g = inst.graph();
  detail::require_sized(g, u, "weak_residual(u)");
  detail::require_sized(g, phi, "weak_residual(phi)");
  require_positive(u, "weak_residual");
  const Exponents& e = inst.exps();
  const CoefficientFields& cf = inst.fields();
  const GraphFunction gn = grad_norm_all(g, u);
  KahanAccumulator part_p, part_q, part_f, part_g;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    const double mu = g.measure(x);
    const double gm = gamma_form(g, u, phi, x);
    part_p.add(mu * (grad_power(gn[x], e.p) * gm + cf.a[x] * std::pow(u[x], e.p - 1.0) * phi[x]));
    part_q.add(mu * (grad_power(gn[x], e.q) * gm + cf.b[x] * std::pow(u[x], e.q - 1.0) * phi[x]));
    part_f.add(mu * (cf.f[x] * std::pow(u[x], -e.gamma) * phi[x]));
    part_g.add(mu * (cf.g[x] * std::pow(u[x], e.alpha) * phi[x]));
  }
  return part_p.value() + part_q.value() - part_f.value() - inst.lambda() * part_g.value();
}

GraphFunction energy_gradient(const ProblemInstance& inst, const GraphFunction& u) {
  GraphFunction r = pointwise_residual(inst, u);
  for (std::size_t x = 0; x < r.size(); ++x) r[x] *= inst.graph().measure(x);
  return r;
}

double fiber_value(const Exponents& e, double lambda, const FiberCoefficients& c, double t) {
  if (!(t > 0.0)) throw std::domain_error("fiber_value: t must be positive");
  return std::pow(t, e.p - 1.0 + e.gamma) * c.norm_a_p +
         std::pow(t, e.q - 1.0 + e.gamma) * c.norm_b_q - c.singular -
         lambda * std::pow(t, e.alpha + e.gamma) * c.superlin;
}

double fiber_derivative(const Exponents& e, double lambda, const FiberCoefficients& c, double t) {
  if (!(t > 0.0)) throw std::domain_error("fiber_derivative: t must be positive");
  return (e.p - 1.0 + e.gamma) * std::pow(t, e.p - 2.0 + e.gamma) * c.norm_a_p +
         (e.q - 1.0 + e.gamma) * std::pow(t, e.q - 2.0 + e.gamma) * c.norm_b_q -
         (e.alpha + e.gamma) * lambda * std::pow(t, e.alpha + e.gamma - 1.0) * c.superlin;
}

namespace {

void require_direction(const GraphFunction& u) {
  require_nonnegative(u, "fiber direction");
  if (u.identically_zero())
    throw FiberError(FiberError::Kind::DegenerateDirection, "fiber direction is identically zero");
}

}  // namespace

double fiber_value(const ProblemInstance& inst, const GraphFunction& u, double t) {
  require_direction(u);
  return fiber_value(inst.exps(), inst.lambda(), fiber_coefficients(inst, u), t);
}

double fiber_derivative(const ProblemInstance& inst, const GraphFunction& u, double t) {
  require_direction(u);
  return fiber_derivative(inst.exps(), inst.lambda(), fiber_coefficients(inst, u), t);
}

namespace {

// Unique zero of phi'. Reduces to M(t) = (alpha+gamma) lambda G with
// M(t) = (p-1+gamma) t^{p-1-alpha} A + (q-1+gamma) t^{q-1-alpha} B, which is
// strictly decreasing from +inf to 0, so the sign change is bracketed by
// doubling/halving and then bisected.
double solve_stationary_point(const Exponents& e, double lambda, const FiberCoefficients& c) {
  const double target = (e.alpha + e.gamma) * lambda * c.superlin;
  const auto m = [&](double t) {
    return (e.p - 1.0 + e.gamma) * std::pow(t, e.p - 1.0 - e.alpha) * c.norm_a_p +
           (e.q - 1.0 + e.gamma) * std::pow(t, e.q - 1.0 - e.alpha) * c.norm_b_q;
  };
  double lo = 1.0, hi = 1.0;
  if (m(1.0) > target) {
    // M decreasing: move right until below target.
    while (m(hi) > target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return hi;
    }
  } else {
    while (m(lo) <= target) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return lo;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (m(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Bisection for phi = 0 on [lo, hi] with phi(lo) and phi(hi) of opposite
// sign. Stops when |phi(mid)| falls under abs_tol or the interval exhausts.
double bisect_fiber_root(const Exponents& e, double lambda, const FiberCoefficients& c, double lo,
                         double hi, bool negative_at_lo, double abs_tol) {
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 300; ++i) {
    mid = 0.5 * (lo + hi);
    const double v = fiber_value(e, lambda, c, mid);
    if (std::abs(v) <= abs_tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid)
      return mid;
    if ((v < 0.0) == negative_at_lo)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

}  // namespace

FiberAnalysis analyze_fiber(const ProblemInstance& inst, const FiberCoefficients& c) {
  if (!(inst.lambda() > 0.0))
    throw std::domain_error("analyze_fiber: requires lambda > 0");
  const Exponents& e = inst.exps();
  if (c.norm_a_p == 0.0 && c.norm_b_q == 0.0)
    throw FiberError(FiberError::Kind::DegenerateDirection, "fiber direction is identically zero");
  if (!(c.superlin > 0.0))
    throw FiberError(FiberError::Kind::NoStationary,
                     "int g u^{alpha+1} = 0: phi' has no zero along this direction");

  FiberAnalysis out;
  out.coeffs = c;
  out.t_tilde = solve_stationary_point(e, inst.lambda(), c);
  out.phi_at_t_tilde = fiber_value(e, inst.lambda(), c, out.t_tilde);

  const double tol = 1e-10 * c.scale();
  if (std::abs(out.phi_at_t_tilde) <= tol) {
    out.classification = FiberClass::Tangent;
    return out;
  }
  if (out.phi_at_t_tilde < 0.0) {
    out.classification = FiberClass::NoRoot;
    return out;
  }

  out.classification = FiberClass::TwoRoots;
  const double root_tol = 1e-13 * c.scale();
  // phi -> -singular < 0 as t -> 0 and phi -> -inf as t -> inf.
  double lo = out.t_tilde;
  while (lo > 1e-300 && fiber_value(e, inst.lambda(), c, lo) > 0.0) lo *= 0.5;
  out.t1 = bisect_fiber_root(e, inst.lambda(), c, lo, out.t_tilde, true, root_tol);
  double hi = out.t_tilde;
  while (hi < 1e300 && fiber_value(e, inst.lambda(), c, hi) > 0.0) hi *= 2.0;
  out.t2 = bisect_fiber_root(e, inst.lambda(), c, out.t_tilde, hi, false, root_tol);
  return out;
}

FiberAnalysis analyze_fiber(const ProblemInstance& inst, const GraphFunction& u) {
  require_nonnegative(u, "analyze_fiber");
  return analyze_fiber(inst, fiber_coefficients(inst, u));
}

const char* to_string(NehariClass c) {
  switch (c) {
    case NehariClass::Plus: return "plus";
    case NehariClass::Zero: return "zero";
    case NehariClass::Minus: return "minus";
    case NehariClass::NotOnManifold: return "not_on_manifold";
  }
  return "?";
}

double nehari_indicator(const ProblemInstance& inst, const FiberCoefficients& c) {
  const Exponents& e = inst.exps();
  return (e.p - 1.0 + e.gamma) * c.norm_a_p + (e.q - 1.0 + e.gamma) * c.norm_b_q -
         (e.alpha + e.gamma) * inst.lambda() * c.superlin;
}

NehariClass nehari_classify(const ProblemInstance& inst, const GraphFunction& v) {
  require_nonnegative(v, "nehari_classify");
  if (v.identically_zero()) return NehariClass::Zero;
  const FiberCoefficients c = fiber_coefficients(inst, v);
  const Exponents& e = inst.exps();
  const double phi1 = fiber_value(e, inst.lambda(), c, 1.0);
  if (std::abs(phi1) > 1e-9 * c.scale()) return NehariClass::NotOnManifold;
  const double ind = nehari_indicator(inst, c);
  const double ind_scale = (e.p - 1.0 + e.gamma) * c.norm_a_p +
                           (e.q - 1.0 + e.gamma) * c.norm_b_q +
                           (e.alpha + e.gamma) * std::abs(inst.lambda()) * c.superlin;
  if (std::abs(ind) <= 1e-12 * ind_scale) return NehariClass::Zero;
  return ind > 0.0 ? NehariClass::Plus : NehariClass::Minus;
}

double lambda_star(const ProblemInstance& inst) {
  const Exponents& e = inst.exps();
  const double A = e.p - 1.0 + e.gamma;
  const double B = e.alpha + e.gamma;
  const double C = e.alpha + 1.0 - e.p;
  const double ln = (B / A) * std::log(A / B) + (C / A) * std::log(C / A) -
                    std::log(inst.g_sup()) + (C / e.p) * std::log(inst.mu_min()) +
                    (B / A) * std::log(inst.a_min()) - (C / A) * std::log(inst.f_norm_p());
  return std::exp(ln);
}

ConstantsReport constants(const ProblemInstance& inst) {
  if (!(inst.lambda() > 0.0)) throw std::domain_error("constants: requires lambda > 0");
  const Exponents& e = inst.exps();
  const double A = e.p - 1.0 + e.gamma;
  const double B = e.alpha + e.gamma;
  const double C = e.alpha + 1.0 - e.p;
  const double ln_g = std::log(inst.g_sup());
  const double ln_a0 = std::log(inst.a_min());
  const double ln_mu0 = std::log(inst.mu_min());
  const double ln_f = std::log(inst.f_norm_p());
  const double ln_lambda = std::log(inst.lambda());

  ConstantsReport r;
  r.Lambda_star = lambda_star(inst);
  r.X_lambda = std::exp((std::log(A) - ln_lambda - std::log(B) - ln_g + (C / e.p) * ln_mu0 +
                         ((e.alpha + 1.0) / e.p) * ln_a0) /
                        C);
  r.X0 = std::exp(std::log(B / C) / A - (1.0 - e.gamma) / (e.p * A) * ln_a0 + ln_f / A);
  r.S_lambda = std::exp((std::log(A) - ln_lambda - std::log(B) - ln_g + ln_a0) / C +
                        ln_mu0 / (e.alpha + 1.0));
  r.S0 = std::exp(std::log(B / C) / A - C / (e.p * (e.alpha + 1.0)) * ln_mu0 - ln_a0 / A +
                  ln_f / A);
  return r;
}

PairingValue monotonicity_pairing(const ProblemInstance& inst, const GraphFunction& u,
                                  const GraphFunction& w) {
  const WeightedGraph& g = inst.graph();
  detail::require_sized(g, u, "monotonicity_pairing(u)");
  detail::require_sized(g, w, "monotonicity_pairing(w)");
  require_positive(u, "monotonicity_pairing(u)");
  require_positive(w, "monotonicity_pairing(w)");
  const Exponents& e = inst.exps();
  const CoefficientFields& cf = inst.fields();

  GraphFunction delta(g.vertex_count(), 0.0);
  for (std::size_t x = 0; x < g.vertex_count(); ++x) delta[x] = u[x] - w[x];
  const GraphFunction gn_u = grad_norm_all(g, u);
  const GraphFunction gn_w = grad_norm_all(g, w);

  KahanAccumulator value, scale;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    const double mu = g.measure(x);
    const double gud = gamma_form(g, u, delta, x);
    const double gwd = gamma_form(g, w, delta, x);
    const double grad_p = grad_power(gn_u[x], e.p) * gud - grad_power(gn_w[x], e.p) * gwd;
    const double grad_q = grad_power(gn_u[x], e.q) * gud - grad_power(gn_w[x], e.q) * gwd;
    const double local_a =
        cf.a[x] * (std::pow(u[x], e.p - 1.0) - std::pow(w[x], e.p - 1.0)) * delta[x];
    const double local_b =
        cf.b[x] * (std::pow(u[x], e.q - 1.0) - std::pow(w[x], e.q - 1.0)) * delta[x];
    const double local_g = -inst.lambda() * cf.g[x] *
                           (std::pow(u[x], e.alpha) - std::pow(w[x], e.alpha)) * delta[x];
    value.add(mu * (grad_p + grad_q + local_a + local_b + local_g));
    scale.add(mu * (std::abs(grad_p) + std::abs(grad_q) + std::abs(local_a) +
                    std::abs(local_b) + std::abs(local_g)));
  }
  return {value.value(), scale.value()};
}

CheckReport pairing_bound_checks(const ProblemInstance& inst, const GraphFunction& u,
                                 const GraphFunction& phi) {
  const WeightedGraph& g = inst.graph();
  detail::require_sized(g, u, "pairing_bound_checks(u)");
  detail::require_sized(g, phi, "pairing_bound_checks(phi)");
  require_nonnegative(u, "pairing_bound_checks(u)");
  require_nonnegative(phi, "pairing_bound_checks(phi)");
  const Exponents& e = inst.exps();
  const CoefficientFields& cf = inst.fields();

  const GraphFunction gn_u = grad_norm_all(g, u);
  const GraphFunction gn_phi = grad_norm_all(g, phi);
  KahanAccumulator pair_p, pair_q, pair_g;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    const double mu = g.measure(x);
    const double gm = gamma_form(g, u, phi, x);
    pair_p.add(mu * (grad_power(gn_u[x], e.p) * gm + cf.a[x] * std::pow(u[x], e.p - 1.0) * phi[x]));
    pair_q.add(mu * (grad_power(gn_u[x], e.q) * gm + cf.b[x] * std::pow(u[x], e.q - 1.0) * phi[x]));
    pair_g.add(mu * (cf.g[x] * std::pow(u[x], e.alpha) * phi[x]));
  }

  const double norm_u_a = sobolev_norm(g, u, cf.a, e.p, gn_u);
  const double norm_u_b = sobolev_norm(g, u, cf.b, e.q, gn_u);
  const double norm_phi_a = sobolev_norm(g, phi, cf.a, e.p, gn_phi);
  const double norm_phi_b = sobolev_norm(g, phi, cf.b, e.q, gn_phi);
  const double norm_u_w = norm_u_a + norm_u_b;
  const double sup_bound =
      norm_u_w / (std::pow(inst.mu_min() * inst.a_min(), 1.0 / e.p) +
                  std::pow(inst.mu_min() * inst.b_min(), 1.0 / e.q));

  const auto slack_ok = [](double lhs, double rhs) {
    return rhs - lhs >= -1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  };
  CheckReport report;
  {
    NamedCheck c{"pairing_a", pair_p.value(), std::pow(norm_u_a, e.p - 1.0) * norm_phi_a, false};
    c.ok = slack_ok(c.lhs, c.rhs);
    report.checks.push_back(c);
  }
  {
    NamedCheck c{"pairing_b", pair_q.value(), std::pow(norm_u_b, e.q - 1.0) * norm_phi_b, false};
    c.ok = slack_ok(c.lhs, c.rhs);
    report.checks.push_back(c);
  }
  {
    NamedCheck c{"pairing_g", pair_g.value(),
                 inst.g_sup() * std::pow(sup_bound, e.alpha - e.p + 1.0) *
                     std::pow(lp_norm(g, u, e.p), e.p - 1.0) * lp_norm(g, phi, e.p),
                 false};
    c.ok = slack_ok(c.lhs, c.rhs);
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace pqgraph
