#pragma once

// Per-node access latency models.
//
// NodeLatency is the distribution of a single node's latency X_i. LatencyModel
// describes a whole deployment: either every node draws i.i.d. from one
// NodeLatency, or nodes differ (PerNode fixed values, Adversarial one constant
// node over an i.i.d. background).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/rng.hpp"

namespace mdsaccel {

struct Uniform {
  double T;  // support [0, T]
};

struct ShiftedExp {
  double lambda;
  double s;
};

struct Constant {
  double v;
};

using NodeLatency = std::variant<Uniform, ShiftedExp, Constant>;

struct PerNode {
  std::vector<double> values;  // values[i] is node i+1's fixed latency
};

struct Adversarial {
  std::size_t node_id;  // 1-based
  double v;
  NodeLatency background;
};

using LatencyModel = std::variant<Uniform, ShiftedExp, Constant, PerNode, Adversarial>;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// Survival beyond s + kTailWidth/lambda is e^-40 < 1e-17.
inline constexpr double kShiftedExpTailWidth = 40.0;

inline void validate(const NodeLatency& model) {
  auto finite = [](double x) { return std::isfinite(x); };
  std::visit(Overloaded{
                 [&](const Uniform& u) {
                   if (!finite(u.T) || u.T <= 0) throw InvalidParams("uniform: T must be > 0");
                 },
                 [&](const ShiftedExp& e) {
                   if (!finite(e.lambda) || e.lambda <= 0)
                     throw InvalidParams("shifted-exp: lambda must be > 0");
                   if (!finite(e.s) || e.s < 0) throw InvalidParams("shifted-exp: s must be >= 0");
                 },
                 [&](const Constant& c) {
                   if (!finite(c.v) || c.v < 0) throw InvalidParams("constant: v must be >= 0");
                 },
             },
             model);
}

inline void validate(const LatencyModel& model) {
  std::visit(Overloaded{
                 [](const PerNode& p) {
                   if (p.values.empty()) throw InvalidParams("pernode: no latencies given");
                   for (double v : p.values)
                     if (!std::isfinite(v) || v < 0) throw InvalidParams("pernode: latencies must be >= 0");
                 },
                 [](const Adversarial& a) {
                   if (a.node_id < 1) throw InvalidParams("adversarial: node ids are 1-based");
                   if (!std::isfinite(a.v) || a.v < 0) throw InvalidParams("adversarial: v must be >= 0");
                   validate(a.background);
                 },
                 [](const auto& iid) { validate(NodeLatency(iid)); },
             },
             model);
}

/// True when every node draws from the same distribution.
inline bool is_iid(const LatencyModel& model) {
  return !std::holds_alternative<PerNode>(model) && !std::holds_alternative<Adversarial>(model);
}

/// Distribution of node `node_id` (1-based) under the deployment model.
inline NodeLatency marginal(const LatencyModel& model, std::size_t node_id) {
  return std::visit(Overloaded{
                        [&](const PerNode& p) -> NodeLatency {
                          if (node_id < 1 || node_id > p.values.size())
                            throw InvalidParams("pernode: no latency for node " + std::to_string(node_id));
                          return Constant{p.values[node_id - 1]};
                        },
                        [&](const Adversarial& a) -> NodeLatency {
                          return node_id == a.node_id ? NodeLatency(Constant{a.v}) : a.background;
                        },
                        [](const auto& iid) -> NodeLatency { return iid; },
                    },
                    model);
}

inline double sample(const NodeLatency& model, SeededRng& rng) {
  return std::visit(Overloaded{
                        [&](const Uniform& u) { return u.T * rng.uniform(); },
                        [&](const ShiftedExp& e) { return e.s - std::log1p(-rng.uniform()) / e.lambda; },
                        [](const Constant& c) { return c.v; },
                    },
                    model);
}

/// Draws x_1..x_n in node order from a single stream.
inline void sample_nodes(const LatencyModel& model, SeededRng& rng, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample(marginal(model, i + 1), rng);
}

inline double cdf(const NodeLatency& model, double y) {
  return std::visit(Overloaded{
                        [&](const Uniform& u) { return y <= 0 ? 0.0 : (y >= u.T ? 1.0 : y / u.T); },
                        [&](const ShiftedExp& e) { return y < e.s ? 0.0 : -std::expm1(-e.lambda * (y - e.s)); },
                        [&](const Constant& c) { return y < c.v ? 0.0 : 1.0; },
                    },
                    model);
}

/// Density. A Constant is a point mass and reports density 0 everywhere.
inline double pdf(const NodeLatency& model, double y) {
  return std::visit(Overloaded{
                        [&](const Uniform& u) { return (y < 0 || y > u.T) ? 0.0 : 1.0 / u.T; },
                        [&](const ShiftedExp& e) {
                          return y < e.s ? 0.0 : e.lambda * std::exp(-e.lambda * (y - e.s));
                        },
                        [](const Constant&) { return 0.0; },
                    },
                    model);
}

inline double mean(const NodeLatency& model) {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return u.T / 2; },
                        [](const ShiftedExp& e) { return e.s + 1 / e.lambda; },
                        [](const Constant& c) { return c.v; },
                    },
                    model);
}

inline double support_lower(const NodeLatency& model) {
  return std::visit(Overloaded{
                        [](const Uniform&) { return 0.0; },
                        [](const ShiftedExp& e) { return e.s; },
                        [](const Constant& c) { return c.v; },
                    },
                    model);
}

/// Upper end of the support; for shifted-exp the point past which the tail
/// mass is below 1e-17.
inline double support_upper(const NodeLatency& model) {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return u.T; },
                        [](const ShiftedExp& e) { return e.s + kShiftedExpTailWidth / e.lambda; },
                        [](const Constant& c) { return c.v; },
                    },
                    model);
}

/// Method-of-moments fit with plug-in shift: s = min, lambda = 1 / (mean - s).
inline ShiftedExp fit_shifted_exp(std::span<const double> samples) {
  if (samples.size() < 2) throw FitError("shifted-exp fit needs at least two samples");
  double lo = std::numeric_limits<double>::infinity();
  double sum = 0;
  for (double x : samples) {
    if (!std::isfinite(x)) throw FitError("shifted-exp fit: non-finite sample");
    lo = std::min(lo, x);
    sum += x;
  }
  const double excess = sum / static_cast<double>(samples.size()) - lo;
  if (!(excess > 0)) throw FitError("shifted-exp fit: samples are all equal");
  return ShiftedExp{1.0 / excess, lo};
}

}  // namespace mdsaccel
