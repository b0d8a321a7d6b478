#pragma once

// Latency distributions of direct access (Y1 = X_t) and accelerated access
// (Y2 = min(X_t, k-th smallest of the other n-1 latencies)), and the
// expected-latency reduction ratio gamma = (E[Y1] - E[Y2]) / E[Y1].
//
// With B(F) = P(k-th smallest of n-1 i.i.d. draws <= y) written in terms of the
// others' CDF value F = F_X(y):
//
//   F_Y2(y) = 1 - (1 - F_t(y)) (1 - B(F_X(y)))
//   f_Y2(y) = f_t(y) - f_t(y) B(F_X(y)) + (1 - F_t(y)) f_X(y) B'(F_X(y))

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/latency_model.hpp"
#include "mdsaccel/mds_codec.hpp"
#include "mdsaccel/model_spec.hpp"
#include "mdsaccel/quadrature.hpp"

namespace mdsaccel::analytics {

/// Binomial coefficient as a double: exact integer arithmetic up to n = 50,
/// log-gamma above that.
inline double binomial(std::size_t n, std::size_t i) {
  if (i > n) return 0.0;
  i = std::min(i, n - i);
  if (n <= 50) {
    std::uint64_t c = 1;
    for (std::size_t j = 0; j < i; ++j) c = c * (n - j) / (j + 1);
    return static_cast<double>(c);
  }
  const double nd = static_cast<double>(n);
  const double id = static_cast<double>(i);
  return std::exp(std::lgamma(nd + 1) - std::lgamma(id + 1) - std::lgamma(nd - id + 1));
}

namespace detail {

inline void check_order_args(std::size_t n, std::size_t k, double F) {
  if (n < 2 || k < 1 || k > n - 1)
    throw DomainError("order statistic needs 1 <= k <= n-1, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  if (!(F >= 0.0 && F <= 1.0)) throw DomainError("probability outside [0, 1]: " + std::to_string(F));
}

inline void check_nk(std::size_t n, std::size_t k) {
  if (n < 1 || k < 1 || k > n)
    throw InvalidParams("closed forms need 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

}  // namespace detail

/// P(k-th smallest of n-1 i.i.d. variables <= y) given F = P(X <= y).
inline double order_stat_cdf(std::size_t n, std::size_t k, double F) {
  detail::check_order_args(n, k, F);
  double sum = 0.0;
  for (std::size_t i = k; i <= n - 1; ++i)
    sum += binomial(n - 1, i) * std::pow(F, static_cast<double>(i)) *
           std::pow(1.0 - F, static_cast<double>(n - 1 - i));
  return std::min(sum, 1.0);
}

/// d/dF of order_stat_cdf, term by term as in the expanded density.
inline double order_stat_cdf_dF(std::size_t n, std::size_t k, double F) {
  detail::check_order_args(n, k, F);
  double sum = 0.0;
  for (std::size_t i = k; i <= n - 1; ++i) {
    const double c = binomial(n - 1, i);
    const double up = static_cast<double>(i);
    const double down = static_cast<double>(n - 1 - i);
    sum += c * up * std::pow(F, up - 1) * std::pow(1.0 - F, down);
    if (i < n - 1) sum -= c * down * std::pow(F, up) * std::pow(1.0 - F, down - 1);
  }
  return sum;
}

/// Distribution of the accelerated latency with the target node drawn from
/// `target` and the other n-1 nodes i.i.d. from `others`.
struct AccessLatencyDist {
  std::size_t n;
  std::size_t k;
  NodeLatency others;
  NodeLatency target;

  AccessLatencyDist(const CodeParams& params, const NodeLatency& model)
      : AccessLatencyDist(params, model, model) {}

  AccessLatencyDist(const CodeParams& params, const NodeLatency& others_model, const NodeLatency& target_model)
      : n(params.n()), k(params.k()), others(others_model), target(target_model) {
    validate(others);
    validate(target);
  }

  double cdf_y1(double y) const { return cdf(target, y); }
  double pdf_y1(double y) const { return pdf(target, y); }

  double cdf_y2(double y) const {
    const double ft = cdf(target, y);
    const double b = order_stat_cdf(n, k, cdf(others, y));
    return 1.0 - (1.0 - ft) * (1.0 - b);
  }

  double pdf_y2(double y) const {
    const double ft = cdf(target, y);
    const double dt = pdf(target, y);
    const double fo = cdf(others, y);
    const double b = order_stat_cdf(n, k, fo);
    return dt - dt * b + (1.0 - ft) * pdf(others, y) * order_stat_cdf_dF(n, k, fo);
  }

  double survival_y2(double y) const {
    return (1.0 - cdf(target, y)) * (1.0 - order_stat_cdf(n, k, cdf(others, y)));
  }
};

inline double cdf_Y2(const CodeParams& params, const NodeLatency& model, double y) {
  return AccessLatencyDist(params, model).cdf_y2(y);
}

inline double pdf_Y2(const CodeParams& params, const NodeLatency& model, double y) {
  return AccessLatencyDist(params, model).pdf_y2(y);
}

// Closed forms. They accept k = n (no parity) to expose the zero-reduction limit.

inline double expected_Y2_uniform(std::size_t n, std::size_t k, double T) {
  detail::check_nk(n, k);
  validate(NodeLatency(Uniform{T}));
  const double r = static_cast<double>(n - k);
  const double nd = static_cast<double>(n);
  return T / 2 - r * (r + 1) * T / (2 * nd * (nd + 1));
}

inline double gamma_uniform(std::size_t n, std::size_t k) {
  detail::check_nk(n, k);
  const double r = static_cast<double>(n - k);
  const double nd = static_cast<double>(n);
  return r * (r + 1) / (nd * (nd + 1));
}

/// Large-n limit of gamma_uniform at code rate c.
inline double gamma_uniform_asymptotic(double c) { return (1 - c) * (1 - c); }

inline double expected_Y2_shifted_exp(std::size_t n, std::size_t k, double lambda, double s) {
  detail::check_nk(n, k);
  validate(NodeLatency(ShiftedExp{lambda, s}));
  return s + static_cast<double>(k) / (lambda * static_cast<double>(n));
}

inline double gamma_shifted_exp(std::size_t n, std::size_t k, double lambda, double s) {
  detail::check_nk(n, k);
  validate(NodeLatency(ShiftedExp{lambda, s}));
  return 1.0 / (s * lambda + 1) * static_cast<double>(n - k) / static_cast<double>(n);
}

/// (1 - c) / (s lambda + 1); identical to gamma_shifted_exp at c = k/n.
inline double gamma_shifted_exp_asymptotic(double c, double lambda, double s) { return (1 - c) / (s * lambda + 1); }

/// E[min(X_t, k-th smallest of n-1 draws from `others`)] by integrating the
/// survival function piecewise between support breakpoints. Relative accuracy
/// is far below 1e-8 for the supported families.
inline double expected_numeric(const CodeParams& params, const NodeLatency& others, const NodeLatency& target,
                               const quadrature::SimpsonOptions& opts = {}) {
  const AccessLatencyDist dist(params, others, target);
  const double upper = std::min(support_upper(others), support_upper(target));
  std::vector<double> cuts = {0.0, upper};
  for (double p : {support_lower(others), support_lower(target), support_upper(others), support_upper(target)})
    if (p > 0.0 && p < upper) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    // Evaluate strictly inside the panel so jumps at breakpoints are seen from
    // the correct side.
    const double lo = std::nextafter(a, b);
    const double hi = std::nextafter(b, a);
    auto survival = [&](double y) { return dist.survival_y2(std::clamp(y, lo, hi)); };
    total += quadrature::adaptive_simpson(survival, a, b, opts);
  }
  return total;
}

inline double expected_numeric(const CodeParams& params, const NodeLatency& model) {
  return expected_numeric(params, model, model);
}

struct AnalyticSummary {
  std::size_t n;
  std::size_t k;
  std::string model;
  double e_y1;
  double e_y2;
  double gamma;
  double c;
  double gamma_asymptotic;
};

inline double reduction_ratio(double e_y1, double e_y2) { return e_y1 > 0 ? (e_y1 - e_y2) / e_y1 : 0.0; }

/// Closed-form summary for i.i.d. uniform or shifted-exp latencies; a constant
/// model has no variability and reports zero reduction.
inline AnalyticSummary analyze(const CodeParams& params, const NodeLatency& model) {
  validate(model);
  AnalyticSummary out{params.n(), params.k(), format_model_spec(model), 0, 0, 0, params.rate(), 0};
  std::visit(Overloaded{
                 [&](const Uniform& u) {
                   out.e_y1 = u.T / 2;
                   out.e_y2 = expected_Y2_uniform(params.n(), params.k(), u.T);
                   out.gamma = gamma_uniform(params.n(), params.k());
                   out.gamma_asymptotic = gamma_uniform_asymptotic(out.c);
                 },
                 [&](const ShiftedExp& e) {
                   out.e_y1 = e.s + 1 / e.lambda;
                   out.e_y2 = expected_Y2_shifted_exp(params.n(), params.k(), e.lambda, e.s);
                   out.gamma = gamma_shifted_exp(params.n(), params.k(), e.lambda, e.s);
                   out.gamma_asymptotic = gamma_shifted_exp_asymptotic(out.c, e.lambda, e.s);
                 },
                 [&](const Constant& c) {
                   out.e_y1 = c.v;
                   out.e_y2 = c.v;
                 },
             },
             model);
  return out;
}

// Worst case: the (3, 2) code of the running example, target node 2 pinned at
// a constant latency, nodes 1 and 3 i.i.d.

inline CodeParams worst_case_params() { return CodeParams(3, 2, 1); }

inline AnalyticSummary worst_case_uniform(double T) {
  validate(NodeLatency(Uniform{T}));
  const std::string model = "adv:node=2,v=" + mdsaccel::detail::format_number(T) + "/" + format_model_spec(NodeLatency(Uniform{T}));
  return AnalyticSummary{3, 2, model, T, 2 * T / 3, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0};
}

/// Same configuration evaluated through expected_numeric.
inline AnalyticSummary worst_case_numeric(const NodeLatency& others, double v_t) {
  validate(others);
  validate(NodeLatency(Constant{v_t}));
  const std::string model = "adv:node=2,v=" + mdsaccel::detail::format_number(v_t) + "/" + format_model_spec(others);
  const double e_y2 = expected_numeric(worst_case_params(), others, Constant{v_t});
  return AnalyticSummary{3, 2, model, v_t, e_y2, reduction_ratio(v_t, e_y2), 2.0 / 3.0, reduction_ratio(v_t, e_y2)};
}

inline AnalyticSummary worst_case_shifted_exp(double lambda, double s, double v_t) {
  const NodeLatency others = ShiftedExp{lambda, s};
  validate(others);
  if (!(v_t > 0)) throw InvalidParams("worst case needs a positive constant latency v_t");
  if (v_t <= s) {
    // The constant node never loses: every other node takes at least s.
    return AnalyticSummary{3, 2, "adv:node=2,v=" + mdsaccel::detail::format_number(v_t) + "/" + format_model_spec(others),
                           v_t, v_t, 0.0, 2.0 / 3.0, 0.0};
  }
  return worst_case_numeric(others, v_t);
}

struct SweepPoint {
  double lambda;
  double s;
  double v_t;
  AnalyticSummary summary;
};

inline std::vector<SweepPoint> worst_case_shifted_exp_sweep(const std::vector<double>& lambdas,
                                                            const std::vector<double>& shifts,
                                                            const std::vector<double>& constants) {
  std::vector<SweepPoint> out;
  for (double lambda : lambdas)
    for (double s : shifts)
      for (double v : constants) out.push_back({lambda, s, v, worst_case_shifted_exp(lambda, s, v)});
  return out;
}

}  // namespace mdsaccel::analytics
