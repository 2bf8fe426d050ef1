#pragma once

#include "powerseq/convergence.hpp"
#include "powerseq/cover.hpp"
#include "powerseq/descriptor.hpp"
#include "powerseq/measure.hpp"
#include "powerseq/solenoid.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace powerseq {

using json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "powerseq 0.1.0";

json rat_json(const Rat& r);                   // "p/q" string
json rat_pair_json(const Rat& r);              // ["num", "den"]
json density_json(const DensityVerdict& v);
json thin_json(const ThinVerdict& v);
json hadamard_json(const HadamardVerdict& v);
json profile_json(const DivisibilityProfile& p);
json verdict_json(const ConvergenceVerdict& v);
json membership_json(const MembershipVerdict& v);
json fip_json(const FipReport& r);
json measure_report_json(const MeasureReport& r);
json mc_json(const McResult& r);
json schedule_json(const ThinSchedule& s);
json build_certificate_json(const BuildCertificate& c);
json cover_json(const CoverResult& r);

/// CSV sidecar for the exact measure sequence of a report.
std::string measure_csv(const MeasureReport& r);

struct ExperimentResult {
  json report;
  bool pass = false;
  int exit_code() const { return pass ? 0 : 1; }
};

/// Named end-to-end experiments with deterministic JSON reports. Unknown
/// names throw; parameter defaults are filled per experiment.
ExperimentResult run_experiment(const std::string& name, const json& params, std::uint64_t seed,
                                unsigned threads);

std::vector<std::string> experiment_names();

}  // namespace powerseq
