#pragma once

// Serialization of traces, outcomes, property reports and experiment results.
// Output depends only on the values written: identical runs give identical
// bytes.

#include <ostream>

#include <json.hpp>

#include "drfeas/engine.hpp"
#include "drfeas/repro.hpp"
#include "drfeas/verifier.hpp"

namespace drfeas::io {

/// Header k,x0..x{n-1},q0..q{n-1},d_xH,d_qH,d_xL, then one row per record.
void write_trace_csv(std::ostream& out, const Trace& trace);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Trace& trace);
nlohmann::json to_json(const RunOutcome& outcome);
/// {"outcome": ..., "trace": ...}
nlohmann::json to_json(const RunResult& result);
nlohmann::json to_json(const verify::PropertyReport& report);
nlohmann::json to_json(const repro::ExperimentResult& result, bool with_traces = false);

}  // namespace drfeas::io
