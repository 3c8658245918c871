#include "gridsample/manifest.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "gridsample/io_util.hpp"

namespace gridsample {

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["tool_version"] = manifest.tool_version;
    doc["subcommand"] = manifest.subcommand;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [key, value] : manifest.config) {
        config[key] = value;
    }
    doc["config"] = std::move(config);
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : manifest.inputs) {
        inputs.push_back({{"path", path}, {"fnv1a64", digest}});
    }
    doc["inputs"] = std::move(inputs);
    nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : manifest.outputs) {
        outputs.push_back({{"path", path}, {"fnv1a64", digest}});
    }
    doc["outputs"] = std::move(outputs);
    doc["seed"] = manifest.seed;
    doc["timestamp"] = manifest.timestamp;
    return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& primary_output) {
    const std::filesystem::path path = primary_output.string() + ".manifest.json";
    atomic_write_file(path, manifest_to_json(manifest));
}

std::string current_utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace gridsample
