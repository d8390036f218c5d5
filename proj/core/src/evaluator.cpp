#include "htloc/evaluator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "htloc/error.hpp"
#include "htloc/report.hpp"

namespace htloc {

InstanceRecord score(const LocalizationReport& report, const TrojanInstance& truth) {
  if (report.design != truth.infected.name()) {
    throw Error("report is for '" + report.design + "' but the instance is '" + truth.infected.name() + "'");
  }
  InstanceRecord r;
  r.design = truth.design;
  r.instance = truth.infected.name();
  const std::set<NetRef> expected(truth.truth_triggers.begin(), truth.truth_triggers.end());
  std::set<NetRef> predicted;
  for (const auto& t : report.triggers) predicted.insert(to_net_ref(report.net(t.node)));
  r.truth_triggers = expected.size();
  for (const auto& p : predicted) (expected.contains(p) ? r.tp_t : r.fp_t) += 1;
  r.fn_t = expected.size() - r.tp_t;

  if (report.graph.empty()) {
    r.fn_p = 1;
  } else {
    const auto guess = to_net_ref(report.net(report.payload.node));
    const auto hit = std::find(truth.payload_aliases.begin(), truth.payload_aliases.end(), guess) !=
                     truth.payload_aliases.end();
    if (hit) {
      r.tp_p = 1;
    } else {
      r.fp_p = 1;
      r.fn_p = 1;
    }
  }
  return r;
}

InstanceRecord unscorable(const TrojanInstance& truth) {
  InstanceRecord r;
  r.design = truth.design;
  r.instance = truth.infected.name();
  r.scorable = false;
  r.truth_triggers = truth.truth_triggers.size();
  r.fn_t = r.truth_triggers;
  r.fn_p = 1;
  return r;
}

Outcome trigger_outcome(const InstanceRecord& r, const AggregateOptions& options) {
  if (!r.scorable) return Outcome::FalseNegative;
  const bool found = options.credit == TriggerCredit::Strict
                         ? r.truth_triggers > 0 && r.tp_t == r.truth_triggers
                         : r.truth_triggers > 0 &&
                               static_cast<double>(r.tp_t) >= options.ratio * static_cast<double>(r.truth_triggers);
  if (found) return Outcome::TruePositive;
  if (r.fp_t > options.fp_tolerance) return Outcome::FalsePositive;
  return Outcome::FalseNegative;
}

Outcome payload_outcome(const InstanceRecord& r) {
  if (!r.scorable) return Outcome::FalseNegative;
  if (r.tp_p > 0) return Outcome::TruePositive;
  if (r.fp_p > 0) return Outcome::FalsePositive;
  return Outcome::FalseNegative;
}

namespace {

void count(OutcomeCounts& c, Outcome o) {
  switch (o) {
    case Outcome::TruePositive: ++c.tp; break;
    case Outcome::FalsePositive: ++c.fp; break;
    case Outcome::FalseNegative: ++c.fn; break;
  }
}

Rates rates(const OutcomeCounts& c, std::size_t n) {
  const auto d = static_cast<double>(n);
  return {100.0 * static_cast<double>(c.tp) / d, 100.0 * static_cast<double>(c.fp) / d,
          100.0 * static_cast<double>(c.fn) / d};
}

}  // namespace

EvaluationSummary aggregate(const std::vector<InstanceRecord>& records, const AggregateOptions& options) {
  if (records.empty()) throw Error("nothing to aggregate");
  EvaluationSummary s;
  for (const auto& r : records) {
    auto it = std::find_if(s.designs.begin(), s.designs.end(), [&](const DesignSummary& d) { return d.design == r.design; });
    if (it == s.designs.end()) {
      s.designs.push_back({r.design, 0, {}, {}, {}, {}});
      it = std::prev(s.designs.end());
    }
    ++it->instances;
    count(it->htt_counts, trigger_outcome(r, options));
    count(it->htp_counts, payload_outcome(r));
  }
  s.average.design = "Average";
  for (auto& d : s.designs) {
    d.htt = rates(d.htt_counts, d.instances);
    d.htp = rates(d.htp_counts, d.instances);
    s.average.instances += d.instances;
    s.average.htt_counts.tp += d.htt_counts.tp;
    s.average.htt_counts.fp += d.htt_counts.fp;
    s.average.htt_counts.fn += d.htt_counts.fn;
    s.average.htp_counts.tp += d.htp_counts.tp;
    s.average.htp_counts.fp += d.htp_counts.fp;
    s.average.htp_counts.fn += d.htp_counts.fn;
    s.average.htt.tp += d.htt.tp;
    s.average.htt.fp += d.htt.fp;
    s.average.htt.fn += d.htt.fn;
    s.average.htp.tp += d.htp.tp;
    s.average.htp.fp += d.htp.fp;
    s.average.htp.fn += d.htp.fn;
  }
  const auto k = static_cast<double>(s.designs.size());
  for (auto* r : {&s.average.htt, &s.average.htp}) {
    r->tp /= k;
    r->fp /= k;
    r->fn /= k;
  }
  return s;
}

std::string summary_csv(const EvaluationSummary& summary) {
  std::ostringstream out;
  out << "design,instances,htt_tp,htt_fp,htt_fn,htp_tp,htp_fp,htp_fn\n";
  auto row = [&](const DesignSummary& d) {
    out << d.design << ',' << d.instances << ',' << format_number(d.htt.tp) << ',' << format_number(d.htt.fp) << ','
        << format_number(d.htt.fn) << ',' << format_number(d.htp.tp) << ',' << format_number(d.htp.fp) << ','
        << format_number(d.htp.fn) << '\n';
  };
  for (const auto& d : summary.designs) row(d);
  row(summary.average);
  return out.str();
}

}  // namespace htloc
