#pragma once

// Seeded Monte Carlo comparison of DA and AAUL.
//
// Trial i uses its own stream SeededRng(seed ^ i): it draws x_1..x_n in node
// order, then (under the uniform target policy) t = 1 + floor(u * k). Results
// are stored by trial index and reduced in index order, so the summary and the
// trial log do not depend on how trials are spread across threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "mdsaccel/errors.hpp"
#include "mdsaccel/latency_model.hpp"
#include "mdsaccel/mds_codec.hpp"
#include "mdsaccel/rng.hpp"
#include "mdsaccel/strategy.hpp"

namespace mdsaccel {

struct FixedTarget {
  std::size_t t;
};

struct UniformOverDataNodes {};

using TargetPolicy = std::variant<FixedTarget, UniformOverDataNodes>;

struct SimConfig {
  CodeParams params;
  LatencyModel model;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  TargetPolicy target = UniformOverDataNodes{};
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct TrialRecord {
  std::uint64_t trial_id;
  std::vector<double> x;
  std::size_t t;
  double y1;
  double y2;
  AccessPath path;
  std::vector<std::size_t> nodes_used;
};

struct SimSummary {
  std::uint64_t trials;
  double mean_da;
  double mean_accel;
  double reduction_ratio;
  double sample_std_da;
  double sample_std_accel;
  double fraction_direct_path;
};

struct SimRun {
  SimSummary summary;
  std::vector<TrialRecord> records;  // empty unless requested
};

inline void validate(const SimConfig& config) {
  if (config.trials < 1) throw InvalidParams("simulation needs at least one trial");
  validate(config.model);
  const std::size_t n = config.params.n();
  if (const auto* p = std::get_if<PerNode>(&config.model); p && p->values.size() != n)
    throw InvalidParams("pernode model lists " + std::to_string(p->values.size()) + " latencies for n=" +
                        std::to_string(n));
  if (const auto* a = std::get_if<Adversarial>(&config.model); a && a->node_id > n)
    throw InvalidParams("adversarial node " + std::to_string(a->node_id) + " outside [1, n]");
  if (const auto* f = std::get_if<FixedTarget>(&config.target); f && (f->t < 1 || f->t > config.params.k()))
    throw InvalidParams("target " + std::to_string(f->t) + " is not a data node");
}

/// One trial, self-contained: the record depends only on (config, trial_id).
inline TrialRecord run_trial(const SimConfig& config, std::uint64_t trial_id) {
  SeededRng rng = SeededRng::for_trial(config.seed, trial_id);
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.x.resize(config.params.n());
  sample_nodes(config.model, rng, rec.x);
  rec.t = std::holds_alternative<FixedTarget>(config.target)
              ? std::get<FixedTarget>(config.target).t
              : 1 + static_cast<std::size_t>(rng.below(config.params.k()));
  rec.y1 = run_da(rec.x, config.params, rec.t);
  AccessResult accel = run_aaul(rec.x, config.params, rec.t);
  rec.y2 = accel.time;
  rec.path = accel.path;
  rec.nodes_used = std::move(accel.nodes_used);
  if (rec.y2 > rec.y1)
    throw std::logic_error("accelerated latency exceeded direct latency in trial " + std::to_string(trial_id));
  return rec;
}

namespace detail {

// Runs body(i) for i in [0, count) over a fixed partition of contiguous blocks.
template <class Body>
void parallel_for(std::uint64_t count, unsigned threads, const Body& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t block = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = w * block;
    const std::uint64_t end = std::min(count, begin + block);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

inline SimRun monte_carlo(const SimConfig& config, bool keep_records = false) {
  validate(config);
  const std::uint64_t n_trials = config.trials;
  std::vector<double> y1(n_trials);
  std::vector<double> y2(n_trials);
  std::vector<unsigned char> direct(n_trials);
  SimRun run;
  if (keep_records) run.records.resize(n_trials);

  detail::parallel_for(n_trials, config.threads, [&](std::uint64_t i) {
    TrialRecord rec = run_trial(config, i);
    y1[i] = rec.y1;
    y2[i] = rec.y2;
    direct[i] = rec.path == AccessPath::Direct;
    if (keep_records) run.records[i] = std::move(rec);
  });

  const double count = static_cast<double>(n_trials);
  double sum1 = 0, sum2 = 0, directs = 0;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    sum1 += y1[i];
    sum2 += y2[i];
    directs += direct[i];
  }
  const double mean1 = sum1 / count;
  const double mean2 = sum2 / count;
  double ss1 = 0, ss2 = 0;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    ss1 += (y1[i] - mean1) * (y1[i] - mean1);
    ss2 += (y2[i] - mean2) * (y2[i] - mean2);
  }
  const double dof = n_trials > 1 ? count - 1 : 1;

  SimSummary& s = run.summary;
  s.trials = n_trials;
  s.mean_da = mean1;
  s.mean_accel = mean2;
  s.reduction_ratio = mean1 > 0 ? (mean1 - mean2) / mean1 : 0.0;
  s.sample_std_da = std::sqrt(ss1 / dof);
  s.sample_std_accel = std::sqrt(ss2 / dof);
  s.fraction_direct_path = directs / count;
  return run;
}

}  // namespace mdsaccel
