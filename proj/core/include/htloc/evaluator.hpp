#pragma once

// Scoring localisation reports against injected ground truth.

#include <cstddef>
#include <string>
#include <vector>

#include "htloc/forge.hpp"
#include "htloc/locator.hpp"

namespace htloc {

struct InstanceRecord {
  std::string design;    // host design; the aggregation key
  std::string instance;  // infected netlist name
  bool scorable = true;
  std::size_t truth_triggers = 0;
  std::size_t tp_t = 0, fp_t = 0, fn_t = 0;
  std::size_t tp_p = 0, fp_p = 0, fn_p = 0;
};

// Trigger nets are compared as endpoint pairs (set semantics); the payload is
// an exact match when the predicted net is one of the instance's payload
// aliases. Throws if the report was produced for a different netlist.
[[nodiscard]] InstanceRecord score(const LocalizationReport& report, const TrojanInstance& truth);

// Record for an instance the locator could not process; it aggregates as a
// false negative in both categories.
[[nodiscard]] InstanceRecord unscorable(const TrojanInstance& truth);

enum class TriggerCredit {
  // TP only when every truth trigger is recovered.
  Strict,
  // TP when at least `ratio` of the truth triggers are recovered.
  Partial,
};

struct AggregateOptions {
  TriggerCredit credit = TriggerCredit::Strict;
  double ratio = 1.0;
  std::size_t fp_tolerance = 0;
};

enum class Outcome { TruePositive, FalsePositive, FalseNegative };

[[nodiscard]] Outcome trigger_outcome(const InstanceRecord& r, const AggregateOptions& options = {});
[[nodiscard]] Outcome payload_outcome(const InstanceRecord& r);

struct OutcomeCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

struct Rates {
  double tp = 0.0, fp = 0.0, fn = 0.0;  // percent
};

struct DesignSummary {
  std::string design;
  std::size_t instances = 0;
  OutcomeCounts htt_counts, htp_counts;
  Rates htt, htp;
};

struct EvaluationSummary {
  std::vector<DesignSummary> designs;  // first-appearance order
  // Mean of the per-design rates; `instances` is the total.
  DesignSummary average;
};

[[nodiscard]] EvaluationSummary aggregate(const std::vector<InstanceRecord>& records,
                                          const AggregateOptions& options = {});

// `design,instances,htt_tp,htt_fp,htt_fn,htp_tp,htp_fp,htp_fn`, one row per
// design plus an "Average" row.
[[nodiscard]] std::string summary_csv(const EvaluationSummary& summary);

}  // namespace htloc
