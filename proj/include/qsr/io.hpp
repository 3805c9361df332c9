#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "qsr/analysis.hpp"
#include "qsr/code.hpp"
#include "qsr/exact_dist.hpp"
#include "qsr/noise.hpp"
#include "qsr/resampling.hpp"

namespace qsr {

// %.17g, enough digits to round-trip a double exactly.
std::string format_g17(double v);
double parse_g17(const std::string& s);

nlohmann::json code_to_json(const CodeSpec& code);
CodeSpec code_from_json(const nlohmann::json& j);
void write_code(const std::string& path, const CodeSpec& code);
CodeSpec read_code(const std::string& path);

// Batch file: one JSON header line, then one JSON record per line. Syndromes
// are hex strings; optional columns are null when the run did not fill them;
// probabilities are decimal strings so they survive any JSON reader.
void write_batch(std::ostream& out, const SampleBatch& batch);
void write_batch(const std::string& path, const SampleBatch& batch);
SampleBatch read_batch(std::istream& in);
SampleBatch read_batch(const std::string& path);

nlohmann::json estimate_to_json(const Estimate& est);
nlohmann::json bounds_to_json(const SampleBounds& bounds);
nlohmann::json fit_to_json(const ScalingFit& fit);
nlohmann::json validation_to_json(const ValidationReport& report);

nlohmann::json joint_to_json(const JointDistribution& joint);
JointDistribution joint_from_json(const nlohmann::json& j);
void write_joint(const std::string& path, const JointDistribution& joint);
JointDistribution read_joint(const std::string& path);

// Externally produced samples: one JSON object per line with fields
//   s (hex syndrome), x (0/1), gap (optional integer).
// syndrome_bits = 0 infers the width from the first record's hex length.
SampleBatch ingest_records(std::istream& in, int syndrome_bits = 0);
SampleBatch ingest_records(const std::string& path, int syndrome_bits = 0);

}  // namespace qsr
