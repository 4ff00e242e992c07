#include "drfeas/trace_io.hpp"

#include <cstdio>
#include <string>

#include "drfeas/format.hpp"

namespace drfeas::io {

using nlohmann::json;

namespace {

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Eigen::Index n = trace.records.empty() ? 0 : trace.records.front().x.size();
  std::string line = "k";
  for (Eigen::Index i = 0; i < n; ++i) line += ",x" + std::to_string(i);
  for (Eigen::Index i = 0; i < n; ++i) line += ",q" + std::to_string(i);
  line += ",d_xH,d_qH,d_xL\n";
  out << line;
  for (const auto& r : trace.records) {
    line = std::to_string(r.k);
    for (Eigen::Index i = 0; i < n; ++i) line += ',' + format_real(r.x[i]);
    for (Eigen::Index i = 0; i < n; ++i) line += ',' + format_real(r.q[i]);
    line += ',' + format_real(r.d_xH) + ',' + format_real(r.d_qH) + ',' + format_real(r.d_xL) + '\n';
    out << line;
  }
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Trace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"k", r.k},
                       {"x", to_json(r.x)},
                       {"q", to_json(r.q)},
                       {"d_xH", r.d_xH},
                       {"d_qH", r.d_qH},
                       {"d_xL", r.d_xL},
                       {"d_qL", r.d_qL}});
  }
  return {{"fingerprint", hex(trace.fingerprint)}, {"records", records}};
}

json to_json(const RunOutcome& outcome) {
  json j = {{"status", outcome_name(outcome)}, {"summary", describe(outcome)}};
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, outcome::Solved>) {
          j["solution"] = to_json(o.solution);
          j["iterations"] = o.iterations;
        } else if constexpr (std::is_same_v<T, outcome::Diverging>) {
          j["q_fixed"] = to_json(o.certificate.q_fixed);
          j["increment"] = o.certificate.increment;
          j["start_index"] = o.certificate.start_index;
          j["cumulative_offset"] = o.certificate.cumulative_offset;
          j["beta_estimate"] = o.beta_estimate;
        } else if constexpr (std::is_same_v<T, outcome::Cycle>) {
          j["period"] = o.period;
          j["first_index"] = o.first_index;
        } else if constexpr (std::is_same_v<T, outcome::MaxIterations>) {
          j["final_d_qH"] = o.final_d_qH;
          j["beta_estimate"] = o.beta_estimate;
          j["norm_limit_hit"] = o.norm_limit_hit;
        } else {
          j["index"] = o.index;
          j["message"] = o.message;
        }
      },
      outcome);
  return j;
}

json to_json(const RunResult& result) {
  return {{"outcome", to_json(result.outcome)}, {"trace", to_json(result.trace)}};
}

json to_json(const verify::PropertyReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"trial", f.trial}, {"trial_seed", f.trial_seed}, {"detail", f.detail}});
  return {{"id", report.id},
          {"seed", report.seed},
          {"trials", report.trials},
          {"non_vacuous", report.non_vacuous},
          {"inconclusive", report.inconclusive},
          {"failure_count", report.failure_count},
          {"passed", report.passed()},
          {"failures", failures}};
}

json to_json(const repro::ExperimentResult& result, bool with_traces) {
  json checks = json::array();
  for (const auto& c : result.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"fatal", c.fatal}, {"detail", c.detail}});
  json j = {{"name", result.name}, {"passed", result.passed()}, {"checks", checks}};
  if (with_traces) {
    json traces = json::array();
    for (const auto& t : result.traces) traces.push_back({{"label", t.label}, {"trace", to_json(t.trace)}});
    j["traces"] = traces;
  }
  return j;
}

}  // namespace drfeas::io
