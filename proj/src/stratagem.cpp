#include "chesty/stratagem.hpp"

#include <fstream>
#include <json.hpp>

namespace chesty {

const char* stratagem_name(Stratagem s) {
    switch (s) {
        case Stratagem::Inform: return "inform";
        case Stratagem::Invoke: return "invoke";
        case Stratagem::Deflect: return "deflect";
        case Stratagem::Recast: return "recast";
    }
    return "?";
}

bool StratagemLabel::flag(Stratagem s) const {
    switch (s) {
        case Stratagem::Inform: return inform;
        case Stratagem::Invoke: return invoke;
        case Stratagem::Deflect: return deflect;
        case Stratagem::Recast: return recast;
    }
    return false;
}

void StratagemLabel::set_flag(Stratagem s, bool value) {
    switch (s) {
        case Stratagem::Inform: inform = value; break;
        case Stratagem::Invoke: invoke = value; break;
        case Stratagem::Deflect: deflect = value; break;
        case Stratagem::Recast: recast = value; break;
    }
}

bool is_propaganda(const StratagemLabel& label) {
    return label.inform || label.invoke || label.deflect || label.recast;
}

LabelStore::LabelStore(std::set<std::string> known_tweets) : known_(std::move(known_tweets)) {}

LabelStore LabelStore::replay(std::set<std::string> known_tweets, std::span<const LabelRevision> log) {
    LabelStore store(std::move(known_tweets));
    for (const auto& rev : log) store.upsert(rev.tweet_id, rev.label);
    return store;
}

std::uint64_t LabelStore::upsert(const std::string& tweet_id, StratagemLabel label) {
    if (!knows(tweet_id)) throw NotFound("unknown tweet: " + tweet_id);
    std::uint64_t revision = log_.size() + 1;
    current_[tweet_id] = label;
    log_.push_back({revision, tweet_id, std::move(label)});
    return revision;
}

const StratagemLabel* LabelStore::find(const std::string& tweet_id) const {
    auto it = current_.find(tweet_id);
    return it == current_.end() ? nullptr : &it->second;
}

std::size_t LabelStore::positive_count() const {
    std::size_t n = 0;
    for (const auto& [id, label] : current_) n += is_propaganda(label) ? 1 : 0;
    return n;
}

std::uint64_t upsert_label(LabelStore& store, const std::string& tweet_id, StratagemLabel label) {
    return store.upsert(tweet_id, std::move(label));
}

std::string label_to_line(const std::string& tweet_id, const StratagemLabel& label) {
    nlohmann::ordered_json j;
    j["tweet_id"] = tweet_id;
    j["inform"] = label.inform;
    j["invoke"] = label.invoke;
    j["deflect"] = label.deflect;
    j["recast"] = label.recast;
    j["annotator"] = label.annotator;
    j["labeled_at"] = format_rfc3339(label.labeled_at);
    return j.dump();
}

LabelRevision label_from_line(const std::string& line, std::uint64_t revision) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("label line is not an object: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("label line is not an object");
    auto get_bool = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_boolean()) throw FormatError(std::string("label missing flag ") + key);
        return j[key].get<bool>();
    };
    auto get_string = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) throw FormatError(std::string("label missing ") + key);
        return j[key].get<std::string>();
    };
    LabelRevision rev;
    rev.revision = revision;
    rev.tweet_id = get_string("tweet_id");
    if (rev.tweet_id.empty()) throw FormatError("label has empty tweet_id");
    rev.label.inform = get_bool("inform");
    rev.label.invoke = get_bool("invoke");
    rev.label.deflect = get_bool("deflect");
    rev.label.recast = get_bool("recast");
    rev.label.annotator = get_string("annotator");
    rev.label.labeled_at = parse_rfc3339(get_string("labeled_at"));
    return rev;
}

std::vector<LabelRevision> load_label_log(const std::filesystem::path& path) {
    std::vector<LabelRevision> log;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        log.push_back(label_from_line(line, log.size() + 1));
    }
    return log;
}

void save_label_log(std::span<const LabelRevision> log, const std::filesystem::path& path) {
    std::string out;
    for (const auto& rev : log) {
        out += label_to_line(rev.tweet_id, rev.label);
        out += '\n';
    }
    write_file(path, out);
}

void append_label_line(const std::filesystem::path& path, const std::string& tweet_id,
                       const StratagemLabel& label) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to " + path.string());
    out << label_to_line(tweet_id, label) << '\n';
    out.flush();
    if (!out) throw IoError("append failed for " + path.string());
}

}  // namespace chesty
