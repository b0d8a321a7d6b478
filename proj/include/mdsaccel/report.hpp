#pragma once

// JSON and CSV renderings of simulation and analytic results.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "mdsaccel/analytics.hpp"
#include "mdsaccel/model_spec.hpp"
#include "mdsaccel/monte_carlo.hpp"

namespace mdsaccel {

using Json = nlohmann::ordered_json;

inline Json to_json(const TrialRecord& rec) {
  Json j;
  j["trial"] = rec.trial_id;
  j["t"] = rec.t;
  j["x"] = rec.x;
  j["y1"] = rec.y1;
  j["y2"] = rec.y2;
  j["path"] = std::string(to_string(rec.path));
  j["nodes"] = rec.nodes_used;
  return j;
}

/// One JSON object per line.
inline void write_trial_log(std::ostream& out, std::span<const TrialRecord> records) {
  for (const auto& rec : records) out << to_json(rec).dump() << '\n';
}

/// Per-trial values plus running means, for latency-vs-trial plots.
inline void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial,y1,y2,running_mean_y1,running_mean_y2\n";
  double sum1 = 0, sum2 = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    sum1 += records[i].y1;
    sum2 += records[i].y2;
    const double count = static_cast<double>(i + 1);
    out << records[i].trial_id << ',' << detail::format_number(records[i].y1) << ','
        << detail::format_number(records[i].y2) << ',' << detail::format_number(sum1 / count) << ','
        << detail::format_number(sum2 / count) << '\n';
  }
}

inline Json to_json(const SimConfig& config, const SimSummary& s, const std::string& trial_log = {}) {
  Json j;
  j["n"] = config.params.n();
  j["k"] = config.params.k();
  j["model"] = format_model_spec(config.model);
  j["trials"] = s.trials;
  j["seed"] = config.seed;
  if (const auto* f = std::get_if<FixedTarget>(&config.target))
    j["target"] = f->t;
  else
    j["target"] = "uniform";
  j["mean_da"] = s.mean_da;
  j["mean_accel"] = s.mean_accel;
  j["reduction_ratio"] = s.reduction_ratio;
  j["sample_std_da"] = s.sample_std_da;
  j["sample_std_accel"] = s.sample_std_accel;
  j["fraction_direct_path"] = s.fraction_direct_path;
  j["trial_log"] = trial_log.empty() ? Json(nullptr) : Json(trial_log);
  return j;
}

inline Json to_json(const analytics::AnalyticSummary& a) {
  Json j;
  j["n"] = a.n;
  j["k"] = a.k;
  j["model"] = a.model;
  j["e_y1"] = a.e_y1;
  j["e_y2"] = a.e_y2;
  j["gamma"] = a.gamma;
  j["gamma_asymptotic"] = a.gamma_asymptotic;
  j["c"] = a.c;
  return j;
}

}  // namespace mdsaccel
