#pragma once

// Pipeline manifest: records each stage's artifact path, content digest,
// seed, and config digest, so downstream commands can refuse inputs that do
// not descend from the recorded upstream artifacts.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hullopt/common.hpp"

namespace hullopt {

inline constexpr const char* kManifestVersion = "v1";

class Manifest {
public:
    Manifest() {
        doc_["manifest_version"] = kManifestVersion;
        doc_["tool_version"] = kToolVersion;
        doc_["stages"] = nlohmann::json::object();
    }

    static Manifest load(const std::string& path) {
        Manifest m;
        try {
            m.doc_ = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("manifest " + path + ": " + e.what());
        }
        if (!m.doc_.contains("manifest_version") ||
            m.doc_["manifest_version"] != kManifestVersion) {
            throw ValidationError("manifest " + path + ": unsupported manifest version");
        }
        if (!m.doc_.contains("stages") || !m.doc_["stages"].is_object()) {
            throw ValidationError("manifest " + path + ": missing stages");
        }
        return m;
    }

    static Manifest load_or_create(const std::string& path) {
        if (std::filesystem::exists(path)) return load(path);
        return Manifest{};
    }

    void save(const std::string& path) const { write_file(path, doc_.dump(2) + "\n"); }

    void record(const std::string& stage, const std::string& path, std::uint64_t seed = 0,
                const std::string& config_digest = "") {
        record_with_digest(stage, path, digest_file(path), seed, config_digest);
    }

    // For stages whose artifact is not a single file (e.g. a directory of
    // offset tables) the caller supplies the digest.
    void record_with_digest(const std::string& stage, const std::string& path,
                            const std::string& digest, std::uint64_t seed = 0,
                            const std::string& config_digest = "") {
        nlohmann::json entry;
        entry["path"] = path;
        entry["digest"] = digest;
        if (seed != 0) entry["seed"] = seed;
        if (!config_digest.empty()) entry["config_digest"] = config_digest;
        doc_["stages"][stage] = entry;
    }

    bool has(const std::string& stage) const { return doc_["stages"].contains(stage); }

    // Check that the artifact a command is about to consume is the one the
    // manifest recorded for that stage. A missing entry is fine (the stage
    // may be run standalone); a mismatch is a provenance failure and the
    // error spells out the difference.
    void verify_digest(const std::string& stage, const std::string& path,
                       const std::string& actual_digest) const {
        if (!has(stage)) return;
        const auto& entry = doc_["stages"][stage];
        const std::string recorded_path = entry.value("path", "");
        const std::string recorded_digest = entry.value("digest", "");
        if (recorded_digest != actual_digest) {
            throw ValidationError("manifest provenance mismatch for stage '" + stage +
                                  "': recorded " + recorded_path + " (digest " +
                                  recorded_digest + "), got " + path + " (digest " +
                                  actual_digest + ")");
        }
    }

    void verify(const std::string& stage, const std::string& path) const {
        if (!has(stage)) return;
        verify_digest(stage, path, digest_file(path));
    }

    const nlohmann::json& doc() const { return doc_; }

private:
    nlohmann::json doc_;
};

}  // namespace hullopt
