#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "pqnehari/scalar.hpp"
#include "pqnehari/verify.hpp"

namespace pqnehari {

// Keys keep insertion order so reports are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const TraceEntry& entry);
// Everything but the fields; the trace is included in full.
Json to_json(const SolveReport& report);
Json to_json(const FiberingReport& report);
Json to_json(const ScalarReport& report);
Json to_json(const SemitrivialVerdict& verdict);
Json to_json(const TestStateBound& bound);
Json to_json(const PeriodicComparison& comparison);
Json to_json(const LambdaThreshold& threshold);
Json to_json(const CheckResult& check);
Json to_json(const VerificationReport& report);

// Two-space indented text with a trailing newline.
std::string dump(const Json& json);

}  // namespace pqnehari
