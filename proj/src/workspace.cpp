#include "chesty/workspace.hpp"

#include <json.hpp>

#include "chesty/util.hpp"

namespace chesty {

namespace fs = std::filesystem;

bool Workspace::is_log(const std::string& name) {
    return name == kLabels || name == kAdjudications || name == kManifest;
}

std::map<std::string, std::string> Workspace::manifest() const {
    std::map<std::string, std::string> out;
    auto file = path(kManifest);
    if (!fs::exists(file)) return out;
    try {
        auto j = nlohmann::json::parse(read_file(file));
        for (const auto& [name, entry] : j.at("files").items()) out[name] = entry.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt manifest: " + std::string(e.what()));
    }
    return out;
}

void Workspace::record(std::span<const fs::path> written) const {
    auto entries = manifest();
    const auto root = fs::weakly_canonical(root_);
    bool changed = false;
    for (const auto& p : written) {
        auto full = fs::weakly_canonical(p);
        if (full.parent_path() != root) continue;
        auto name = full.filename().string();
        if (is_log(name) || !fs::exists(full)) continue;
        entries[name] = sha256_file_hex(full);
        changed = true;
    }
    if (!changed) return;
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["files"] = nlohmann::ordered_json::object();
    for (const auto& [name, hash] : entries) j["files"][name] = hash;
    write_file(path(kManifest), j.dump(2) + "\n");
}

void Workspace::verify() const {
    if (!fs::is_directory(root_)) throw IoError("workspace does not exist: " + root_.string());
    if (!fs::exists(path(kManifest))) throw FormatError("workspace has no manifest: " + root_.string());
    auto entries = manifest();
    for (const auto& [name, hash] : entries) {
        if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos || name == "..")
            throw FormatError("manifest entry escapes the workspace: " + name);
        if (!has(name)) throw FormatError("manifest lists missing file " + name);
        if (sha256_file_hex(path(name)) != hash) throw FormatError("hash mismatch for " + name);
    }
}

}  // namespace chesty
