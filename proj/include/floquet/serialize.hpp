#pragma once

// CSV (LF, header row, %.16e) and JSON (sorted keys) writers. JSON documents
// carry a "provenance" object: protocol, integrator and the caller's run
// configuration.

#include <string>

#include "json.hpp"

#include "floquet/asymptotic_analysis.hpp"
#include "floquet/work_statistics.hpp"

namespace floquet::io {

using json = nlohmann::json;

std::string format_double(double v);

json protocol_json(const DriveProtocol& protocol);
json integrator_json(const IntegratorConfig& cfg);
json provenance(const SpectrumTable& table, const json& run_config);

std::string spectrum_csv(const SpectrumTable& table);
json spectrum_json(const SpectrumTable& table, const json& run_config);

std::string cgf_csv(const CgfCurve& curve);
json cgf_json(const CgfCurve& curve, const SpectrumTable& table, const json& run_config);

std::string cumulants_csv(const CumulantSet& c);
json cumulants_json(const CumulantSet& c, const SpectrumTable& table, const json& run_config);

std::string entropy_csv(const EntropyCurve& curve);
json entropy_json(const EntropyCurve& curve, const IntegratorConfig& cfg, const json& run_config);

// Bins as rows; delta0 weight in leading "#" metadata lines, mass check in a trailing one.
std::string histogram_csv(const WorkHistogram& hist);
json histogram_json(const WorkHistogram& hist, const SpectrumTable& table, const json& run_config);

std::string diagnostic_csv(const DiagnosticCurve& curve);  // s,value
json diagnostic_json(const DiagnosticCurve& curve);

json resonance_json(const ResonanceReport& r);
json small_k_json(const SmallKFit& f);
json diagnosis_json(const SingularityDiagnosis& d);

// Throws IoError on failure.
void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& doc);

}  // namespace floquet::io
