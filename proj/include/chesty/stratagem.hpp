#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chesty/util.hpp"

namespace chesty {

enum class Stratagem { Inform, Invoke, Deflect, Recast };

inline constexpr Stratagem kAllStratagems[] = {Stratagem::Inform, Stratagem::Invoke,
                                               Stratagem::Deflect, Stratagem::Recast};

const char* stratagem_name(Stratagem s);

struct StratagemLabel {
    bool inform = false;
    bool invoke = false;
    bool deflect = false;
    bool recast = false;
    std::string annotator;
    Timestamp labeled_at{};

    bool flag(Stratagem s) const;
    void set_flag(Stratagem s, bool value);

    friend bool operator==(const StratagemLabel&, const StratagemLabel&) = default;
};

/// A tweet is propaganda as soon as any one stratagem is present.
bool is_propaganda(const StratagemLabel& label);

struct LabelRevision {
    std::uint64_t revision = 0;
    std::string tweet_id;
    StratagemLabel label;

    friend bool operator==(const LabelRevision&, const LabelRevision&) = default;
};

// Append-only label log with a materialized "latest revision wins" view.
class LabelStore {
  public:
    explicit LabelStore(std::set<std::string> known_tweets);

    /// Rebuilds a store by replaying `log` in order.
    static LabelStore replay(std::set<std::string> known_tweets, std::span<const LabelRevision> log);

    std::uint64_t upsert(const std::string& tweet_id, StratagemLabel label);

    bool knows(const std::string& tweet_id) const { return known_.count(tweet_id) != 0; }
    const StratagemLabel* find(const std::string& tweet_id) const;
    const std::map<std::string, StratagemLabel>& current() const { return current_; }
    const std::vector<LabelRevision>& log() const { return log_; }
    std::size_t positive_count() const;

  private:
    std::set<std::string> known_;
    std::map<std::string, StratagemLabel> current_;
    std::vector<LabelRevision> log_;
};

/// Records `label` for `tweet_id`; throws NotFound for tweets outside the
/// working corpus. Returns the new revision id.
std::uint64_t upsert_label(LabelStore& store, const std::string& tweet_id, StratagemLabel label);

// Label file: one object per line with keys tweet_id, inform, invoke,
// deflect, recast, annotator, labeled_at. Revisions are 1-based line order.
std::string label_to_line(const std::string& tweet_id, const StratagemLabel& label);
LabelRevision label_from_line(const std::string& line, std::uint64_t revision);
std::vector<LabelRevision> load_label_log(const std::filesystem::path& path);
void save_label_log(std::span<const LabelRevision> log, const std::filesystem::path& path);
void append_label_line(const std::filesystem::path& path, const std::string& tweet_id,
                       const StratagemLabel& label);

}  // namespace chesty
