#pragma once

// Access strategies for a request targeting data node t, expressed on the
// per-node latency vector x_1..x_n alone.
//
//   DA    read node t.
//   AAKL  latencies known up front: read the k fastest nodes; if t is among
//         them read t directly, otherwise decode from those k.
//   AAUL  latencies unknown: start all n reads and stop at node t's completion
//         or at the k-th completion among the other nodes, whichever is first.
//
// Ties in latency are broken by the lower node id in every strategy.

#include <algorithm>
#include <functional>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/mds_codec.hpp"

namespace mdsaccel {

enum class AccessPath { Direct, Decoded };

inline std::string_view to_string(AccessPath path) { return path == AccessPath::Direct ? "direct" : "decoded"; }

struct AccessResult {
  double time;
  AccessPath path;
  std::vector<std::size_t> nodes_used;  // 1-based, ascending
};

namespace detail {

inline void check_request(std::span<const double> latencies, const CodeParams& params, std::size_t t) {
  if (latencies.size() != params.n())
    throw RequestError("expected " + std::to_string(params.n()) + " latencies, got " +
                       std::to_string(latencies.size()));
  if (t < 1 || t > params.k())
    throw RequestError("target " + std::to_string(t) + " is not a data node in [1, " + std::to_string(params.k()) +
                       "]");
}

// Node ids (1-based) ordered by (latency, id).
inline std::vector<std::size_t> completion_order(std::span<const double> latencies) {
  std::vector<std::size_t> ids(latencies.size());
  std::iota(ids.begin(), ids.end(), std::size_t{1});
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return latencies[a - 1] < latencies[b - 1]; });
  return ids;
}

}  // namespace detail

inline double run_da(std::span<const double> latencies, const CodeParams& params, std::size_t t) {
  detail::check_request(latencies, params, t);
  return latencies[t - 1];
}

inline AccessResult run_aakl(std::span<const double> latencies, const CodeParams& params, std::size_t t) {
  detail::check_request(latencies, params, t);
  auto order = detail::completion_order(latencies);
  order.resize(params.k());
  if (std::find(order.begin(), order.end(), t) != order.end()) return {latencies[t - 1], AccessPath::Direct, {t}};
  const double slowest = latencies[order.back() - 1];
  std::sort(order.begin(), order.end());
  return {slowest, AccessPath::Decoded, std::move(order)};
}

inline AccessResult run_aaul(std::span<const double> latencies, const CodeParams& params, std::size_t t) {
  detail::check_request(latencies, params, t);

  struct Completion {
    double time;
    std::size_t node;
    bool operator>(const Completion& o) const { return time != o.time ? time > o.time : node > o.node; }
  };
  std::priority_queue<Completion, std::vector<Completion>, std::greater<>> events;
  for (std::size_t i = 0; i < latencies.size(); ++i) events.push({latencies[i], i + 1});

  std::vector<std::size_t> finished;
  finished.reserve(params.k());
  while (!events.empty()) {
    const Completion next = events.top();
    events.pop();
    if (next.node == t) return {next.time, AccessPath::Direct, {t}};
    finished.push_back(next.node);
    if (finished.size() == params.k()) {
      std::sort(finished.begin(), finished.end());
      return {next.time, AccessPath::Decoded, std::move(finished)};
    }
  }
  throw std::logic_error("AAUL ran out of completion events");
}

}  // namespace mdsaccel
