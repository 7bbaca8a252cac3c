#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>

namespace chesty {

/// A directory of pipeline artifacts with a manifest of content hashes.
/// The label and adjudication logs are append-only and stay out of the
/// manifest; every other artifact is hashed when a stage writes it.
class Workspace {
  public:
    static constexpr const char* kCorpus = "corpus.jsonl";
    static constexpr const char* kLabels = "labels.jsonl";
    static constexpr const char* kAdjudications = "adjudications.jsonl";
    static constexpr const char* kSample = "sample.jsonl";
    static constexpr const char* kGraph = "graph.txt";
    static constexpr const char* kPartition = "partition.txt";
    static constexpr const char* kCentrality = "centrality.txt";
    static constexpr const char* kLiminal = "liminal.txt";
    static constexpr const char* kVocab = "vocab.txt";
    static constexpr const char* kModel = "model.ckpt";
    static constexpr const char* kHistory = "history.jsonl";
    static constexpr const char* kClassifications = "classifications.jsonl";
    static constexpr const char* kEval = "eval.json";
    static constexpr const char* kReport = "report.jsonl";
    static constexpr const char* kReportTable = "report.txt";
    static constexpr const char* kCandidates = "candidates.jsonl";
    static constexpr const char* kManifest = "manifest.json";

    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path path(const std::string& name) const { return root_ / name; }
    bool has(const std::string& name) const { return std::filesystem::exists(path(name)); }

    /// Name -> sha256; empty when there is no manifest yet.
    std::map<std::string, std::string> manifest() const;
    /// Re-hashes the given files (those outside the workspace are ignored).
    void record(std::span<const std::filesystem::path> written) const;
    /// Throws FormatError when the manifest is unreadable or a listed file is
    /// missing or has a different hash.
    void verify() const;

    static bool is_log(const std::string& name);

  private:
    std::filesystem::path root_;
};

}  // namespace chesty
