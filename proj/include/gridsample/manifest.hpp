#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gridsample {

// Provenance record written alongside every subcommand's outputs. The
// resolved config plus input digests are enough to reproduce the data
// outputs byte-identically; only the timestamp varies between runs.
struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    std::map<std::string, std::string> config;  // resolved flag values
    std::vector<std::pair<std::string, std::string>> inputs;   // path, fnv1a64
    std::vector<std::pair<std::string, std::string>> outputs;  // path, fnv1a64
    std::uint64_t seed = 0;
    std::string timestamp;  // ISO 8601 UTC
};

std::string manifest_to_json(const RunManifest& manifest);

// Writes <primary_output>.manifest.json next to the primary output.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& primary_output);

std::string current_utc_timestamp();

}  // namespace gridsample
