#pragma once

#include "qmaxent/distribution.hpp"
#include "qmaxent/maxent.hpp"
#include "qmaxent/mle.hpp"
#include "qmaxent/scaling.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

// File schemas and reproducibility plumbing shared by the CLI:
//   distribution        {"probs": [..]}
//   joint               {"probs": [[..],[..]]}
//   constraints         {"states": [..], "observables": [[..]], "targets": [..]}
//   samples             CSV, one integer M per line, or {"n":, "d":, "samples": [..]}
//   scaling series      CSV "n,w" with header
// All parse failures raise ParseError with a file/line or field diagnostic.

namespace qmaxent::io {

using nlohmann::json;

json load_json_file(const std::string& path);

ProbabilityDistribution read_distribution(const json& j);
JointDistribution read_joint(const json& j);
ConstraintSet read_constraints(const json& j);

// Samples from CSV (requires a spec) or JSON (carries its own n, d).
SampleSet read_samples(const std::string& path, std::optional<ChainSpec> spec);

ScalingSeries read_series_csv(const std::string& path);

// Writes via a temp file plus atomic rename; no partial output on error.
void atomic_write(const std::string& path, const std::string& contents);

// FNV-1a 64-bit content digest, 16 hex digits. Bookkeeping, not crypto.
std::string file_digest(const std::string& path);

// Deterministic "%.17g" rendering for CSV cells.
std::string fmt(double v);

// Everything needed to reproduce a run byte-for-byte. Embedded in JSON
// outputs under "manifest" and written as <out>.manifest.json next to CSVs.
struct RunManifest {
    std::string command;
    json params;
    bool seed_used = false; // only randomness-consuming commands record one
    std::uint64_t seed = 0;
    bool seed_from_entropy = false;
    std::string degeneracy; // "exact" | "asymptotic" | "" when not applicable
    std::string kernel;
    std::map<std::string, std::string> input_digests;

    json to_json() const;
};

json gibbs_to_json(const GibbsDistribution& g);
json fit_to_json(const FitResult& f);
json verdict_to_json(const ScalingVerdict& v);
std::string surface_to_csv(const LikelihoodSurface& s);
// Infinite deltas (outside the model support) serialize as null.
json surface_to_json(const LikelihoodSurface& s);

} // namespace qmaxent::io
