#include "pqgraph/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pqgraph/kahan.hpp"

namespace pqgraph {

Exponents::Exponents(double p_, double q_, double gamma_, double alpha_)
    : p(p_), q(q_), gamma(gamma_), alpha(alpha_) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("exponents: need 0 < gamma < 1");
  if (!(q > 1.0)) throw std::invalid_argument("exponents: need q > 1");
  if (!(q <= p)) throw std::invalid_argument("exponents: need q <= p");
  if (!(p < alpha + 1.0)) throw std::invalid_argument("exponents: need p < alpha + 1");
}

void CoefficientFields::validate(const WeightedGraph& graph) const {
  const std::size_t n = graph.vertex_count();
  if (a.size() != n || b.size() != n || f.size() != n || g.size() != n)
    throw std::invalid_argument("coefficient fields: size does not match graph");
  if (!(a.min() > 0.0)) throw std::invalid_argument("coefficient fields: a must be positive");
  if (!(b.min() > 0.0)) throw std::invalid_argument("coefficient fields: b must be positive");
  if (!(f.min() > 0.0)) throw std::invalid_argument("coefficient fields: f must be positive");
  if (!(g.min() >= 0.0)) throw std::invalid_argument("coefficient fields: g must be nonnegative");
  if (g.identically_zero())
    throw std::invalid_argument("coefficient fields: g must not be identically zero");
}

double lp_norm(const WeightedGraph& g, const GraphFunction& psi, double theta) {
  detail::require_sized(g, psi, "lp_norm");
  if (!(theta >= 1.0)) throw std::invalid_argument("lp_norm: need theta >= 1");
  // Scaled by the sup so that large theta neither overflows nor underflows.
  const double sup = psi.max_abs();
  if (sup == 0.0) return 0.0;
  KahanAccumulator acc;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    acc.add(g.measure(x) * std::pow(std::abs(psi[x]) / sup, theta));
  return sup * std::pow(acc.value(), 1.0 / theta);
}

double linf_norm(const GraphFunction& psi) { return psi.max_abs(); }

double sobolev_norm(const WeightedGraph& g, const GraphFunction& psi, const GraphFunction& weight,
                    double s, const GraphFunction& gnorm) {
  detail::require_sized(g, psi, "sobolev_norm(psi)");
  detail::require_sized(g, weight, "sobolev_norm(weight)");
  detail::require_sized(g, gnorm, "sobolev_norm(gnorm)");
  detail::require_s_exponent(s);
  KahanAccumulator acc;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    acc.add(g.measure(x) *
            (std::pow(gnorm[x], s) + weight[x] * std::pow(std::abs(psi[x]), s)));
  }
  const double v = acc.value();
  return v > 0.0 ? std::pow(v, 1.0 / s) : 0.0;
}

double sobolev_norm(const WeightedGraph& g, const GraphFunction& psi, const GraphFunction& weight,
                    double s) {
  return sobolev_norm(g, psi, weight, s, grad_norm_all(g, psi));
}

double w_norm(const WeightedGraph& g, const GraphFunction& psi, const CoefficientFields& fields,
              const Exponents& exps) {
  const GraphFunction gnorm = grad_norm_all(g, psi);
  return sobolev_norm(g, psi, fields.a, exps.p, gnorm) +
         sobolev_norm(g, psi, fields.b, exps.q, gnorm);
}

bool CheckReport::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.ok; });
}

namespace {

NamedCheck make_check(std::string name, double lhs, double rhs) {
  NamedCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.ok = rhs - lhs >= -1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return c;
}

}  // namespace

CheckReport embedding_checks(const WeightedGraph& g, const GraphFunction& psi,
                             const CoefficientFields& fields, const Exponents& exps,
                             double theta) {
  detail::require_sized(g, psi, "embedding_checks");
  fields.validate(g);
  if (!(theta >= exps.p))
    throw std::invalid_argument("embedding_checks: the L^theta bound is only claimed for theta >= p");

  const double p = exps.p, q = exps.q, gam = exps.gamma;
  const double a0 = fields.a.min();
  const double b0 = fields.b.min();
  const double mu0 = g.mu_min();

  const GraphFunction gnorm = grad_norm_all(g, psi);
  const double norm_a = sobolev_norm(g, psi, fields.a, p, gnorm);
  const double norm_b = sobolev_norm(g, psi, fields.b, q, gnorm);
  const double sup = linf_norm(psi);
  const double ltheta = lp_norm(g, psi, theta);

  KahanAccumulator singular;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    singular.add(g.measure(x) * (fields.f[x] * std::pow(std::abs(psi[x]), 1.0 - gam)));
  const double sing = singular.value();

  const double f_norm_p = lp_norm(g, fields.f, p / (p - 1.0 + gam));
  const double f_norm_q = lp_norm(g, fields.f, q / (q - 1.0 + gam));

  CheckReport report;
  report.checks.push_back(
      make_check("sup_vs_wa", sup, std::pow(a0 * mu0, -1.0 / p) * norm_a));
  report.checks.push_back(
      make_check("sup_vs_wb", sup, std::pow(b0 * mu0, -1.0 / q) * norm_b));
  report.checks.push_back(make_check(
      "ltheta_vs_wa", ltheta,
      std::pow(mu0, (p - theta) / (p * theta)) * std::pow(a0, -1.0 / p) * norm_a));
  report.checks.push_back(make_check(
      "ltheta_vs_wb", ltheta,
      std::pow(mu0, (q - theta) / (q * theta)) * std::pow(b0, -1.0 / q) * norm_b));
  report.checks.push_back(make_check(
      "singular_vs_wa", sing,
      std::pow(a0, -(1.0 - gam) / p) * f_norm_p * std::pow(norm_a, 1.0 - gam)));
  report.checks.push_back(make_check(
      "singular_vs_wb", sing,
      std::pow(b0, -(1.0 - gam) / q) * f_norm_q * std::pow(norm_b, 1.0 - gam)));
  return report;
}

}  // namespace pqgraph
