#include "chesty/service.hpp"

#include <charconv>
#include <set>
#include <httplib.h>
#include <json.hpp>

namespace chesty {

using nlohmann::ordered_json;

namespace {

HttpReply error_reply(int status, const std::string& message) {
    ordered_json j;
    j["error"] = message;
    return {status, j.dump() + "\n"};
}

HttpReply missing(const char* artifact) {
    return error_reply(404, std::string("workspace has no ") + artifact);
}

std::set<std::string> tweet_ids(const Corpus& corpus) {
    std::set<std::string> ids;
    for (const auto& t : corpus.tweets) ids.insert(t.tweet_id);
    return ids;
}

ordered_json label_json(const StratagemLabel& label) {
    ordered_json j;
    j["inform"] = label.inform;
    j["invoke"] = label.invoke;
    j["deflect"] = label.deflect;
    j["recast"] = label.recast;
    j["annotator"] = label.annotator;
    j["labeled_at"] = format_rfc3339(label.labeled_at);
    return j;
}

}  // namespace

Service::Service(Workspace workspace) : workspace_(std::move(workspace)), labels_({}) {
    workspace_.verify();
    if (!workspace_.has(Workspace::kCorpus)) throw FormatError("workspace has no corpus");
    corpus_ = load_corpus(workspace_.path(Workspace::kCorpus)).corpus;
    for (std::size_t i = 0; i < corpus_.tweets.size(); ++i) tweet_index_[corpus_.tweets[i].tweet_id] = i;

    if (workspace_.has(Workspace::kGraph)) graph_ = load_graph(workspace_.path(Workspace::kGraph));
    if (workspace_.has(Workspace::kPartition)) partition_ = load_partition(workspace_.path(Workspace::kPartition));
    if (workspace_.has(Workspace::kCentrality)) centrality_ = load_centrality(workspace_.path(Workspace::kCentrality));
    if (workspace_.has(Workspace::kLiminal)) liminal_ = load_liminal_report(workspace_.path(Workspace::kLiminal));
    if (graph_ && partition_ && partition_->node_count() != graph_->node_count())
        throw FormatError("partition and graph disagree on node count");
    if (workspace_.has(Workspace::kClassifications))
        classifications_ = load_classifications(workspace_.path(Workspace::kClassifications));
    for (std::size_t i = 0; i < classifications_.size(); ++i) classification_index_[classifications_[i].tweet_id] = i;
    if (workspace_.has(Workspace::kCandidates)) candidates_ = load_candidates(workspace_.path(Workspace::kCandidates));

    std::vector<LabelRevision> log;
    if (workspace_.has(Workspace::kLabels)) log = load_label_log(workspace_.path(Workspace::kLabels));
    labels_ = LabelStore::replay(tweet_ids(corpus_), log);
    if (workspace_.has(Workspace::kAdjudications))
        adjudications_ = load_adjudications(workspace_.path(Workspace::kAdjudications));
}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
    if (server_) throw InvalidInput("service already started");
    server_ = std::make_unique<httplib::Server>();
    auto& srv = *server_;
    auto reply = [](httplib::Response& res, const HttpReply& r) {
        res.status = r.status;
        res.set_content(r.body, "application/x-ndjson");
    };
    auto param = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
        if (!req.has_param(key)) return std::nullopt;
        return req.get_param_value(key);
    };

    srv.Get("/api/graph", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, get_graph()); });
    srv.Get("/api/communities",
            [=, this](const httplib::Request&, httplib::Response& res) { reply(res, get_communities()); });
    srv.Get("/api/centrality",
            [=, this](const httplib::Request&, httplib::Response& res) { reply(res, get_centrality()); });
    srv.Get("/api/flagged", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_flagged(param(req, "min_score")));
    });
    srv.Get(R"(/api/tweets/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_tweet(req.matches[1]));
    });
    srv.Get("/api/candidates", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_candidates(param(req, "k")));
    });
    srv.Get("/api/evaluation",
            [=, this](const httplib::Request&, httplib::Response& res) { reply(res, get_evaluation()); });
    srv.Get("/api/health", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, get_health()); });
    srv.Post("/api/labels", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_label(req.body));
    });
    srv.Post("/api/adjudications", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_adjudication(req.body));
    });
    srv.set_exception_handler([=](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            reply(res, error_reply(500, e.what()));
        } catch (...) {
            reply(res, error_reply(500, "unknown error"));
        }
    });

    int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        server_.reset();
        throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
    thread_ = std::thread([&srv] { srv.listen_after_bind(); });
    srv.wait_until_ready();
    return bound;
}

void Service::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    server_.reset();
}

void Service::wait() {
    if (thread_.joinable()) thread_.join();
}

HttpReply Service::get_graph() const {
    if (!graph_) return missing("graph");
    std::string out;
    for (NodeIndex v = 0; v < graph_->node_count(); ++v) {
        ordered_json j;
        j["type"] = "node";
        j["node"] = v;
        j["account"] = graph_->label(v);
        j["degree"] = graph_->degree(v);
        if (partition_) j["community"] = partition_->community_of(v);
        out += j.dump() + '\n';
    }
    for (const auto& e : graph_->edges()) {
        ordered_json j;
        j["type"] = "edge";
        j["u"] = e.u;
        j["v"] = e.v;
        j["weight"] = e.weight;
        out += j.dump() + '\n';
    }
    return {200, out};
}

HttpReply Service::get_communities() const {
    if (!partition_) return missing("partition");
    std::string out;
    for (std::size_t c = 0; c < partition_->community_count(); ++c) {
        ordered_json j;
        j["community"] = c;
        j["size"] = partition_->communities()[c].size();
        auto members = ordered_json::array();
        for (NodeIndex v : partition_->communities()[c]) {
            members.push_back(graph_ ? ordered_json(graph_->label(v)) : ordered_json(v));
        }
        j["members"] = std::move(members);
        out += j.dump() + '\n';
    }
    return {200, out};
}

HttpReply Service::get_centrality() const {
    if (!centrality_) return missing("centrality scores");
    std::map<NodeIndex, const LiminalNode*> liminal;
    if (liminal_) {
        for (const auto& l : liminal_->ranked) liminal[l.node] = &l;
    }
    std::string out;
    for (std::size_t v = 0; v < centrality_->score.size(); ++v) {
        ordered_json j;
        j["node"] = v;
        if (graph_ && static_cast<NodeIndex>(v) < graph_->node_count()) j["account"] = graph_->label(static_cast<NodeIndex>(v));
        j["betweenness"] = centrality_->score[v];
        auto it = liminal.find(static_cast<NodeIndex>(v));
        j["liminal"] = it != liminal.end();
        if (it != liminal.end()) j["communities"] = it->second->communities;
        out += j.dump() + '\n';
    }
    return {200, out};
}

HttpReply Service::get_flagged(const std::optional<std::string>& min_score) const {
    double floor = 0.0;
    if (min_score) {
        auto [ptr, ec] = std::from_chars(min_score->data(), min_score->data() + min_score->size(), floor);
        if (ec != std::errc{} || ptr != min_score->data() + min_score->size())
            return error_reply(400, "min_score must be a number");
    }
    std::lock_guard lock(mutex_);
    std::string out;
    for (const auto& c : classifications_) {
        if (!c.flagged || c.score < floor) continue;
        ordered_json j;
        j["tweet_id"] = c.tweet_id;
        j["score"] = c.score;
        if (auto it = tweet_index_.find(c.tweet_id); it != tweet_index_.end()) {
            j["text"] = corpus_.tweets[it->second].text;
        }
        auto adj = adjudications_.find(c.tweet_id);
        j["adjudication"] = adj == adjudications_.end() ? ordered_json(nullptr) : ordered_json(adjudication_name(adj->second));
        out += j.dump() + '\n';
    }
    return {200, out};
}

HttpReply Service::get_tweet(const std::string& tweet_id) const {
    auto it = tweet_index_.find(tweet_id);
    if (it == tweet_index_.end()) return error_reply(404, "unknown tweet " + tweet_id);
    const auto& t = corpus_.tweets[it->second];
    ordered_json j;
    j["tweet_id"] = t.tweet_id;
    j["author"] = t.author.str();
    j["created_at"] = format_rfc3339(t.created_at);
    j["text"] = t.text;
    if (auto c = classification_index_.find(tweet_id); c != classification_index_.end()) {
        j["score"] = classifications_[c->second].score;
        j["flagged"] = classifications_[c->second].flagged;
    }
    if (graph_ && partition_) {
        if (auto v = graph_->index_of(t.author.str())) j["community"] = partition_->community_of(*v);
    }
    std::lock_guard lock(mutex_);
    const auto* label = labels_.find(tweet_id);
    j["label"] = label ? label_json(*label) : ordered_json(nullptr);
    auto adj = adjudications_.find(tweet_id);
    j["adjudication"] = adj == adjudications_.end() ? ordered_json(nullptr) : ordered_json(adjudication_name(adj->second));
    return {200, j.dump() + '\n'};
}

HttpReply Service::get_candidates(const std::optional<std::string>& k) const {
    std::size_t limit = candidates_.size();
    if (k) {
        std::size_t parsed = 0;
        auto [ptr, ec] = std::from_chars(k->data(), k->data() + k->size(), parsed);
        if (ec != std::errc{} || ptr != k->data() + k->size() || parsed == 0)
            return error_reply(400, "k must be a positive integer");
        limit = std::min(limit, parsed);
    }
    std::string out;
    for (std::size_t i = 0; i < limit; ++i) out += candidate_to_line(candidates_[i]) + '\n';
    return {200, out};
}

HttpReply Service::get_evaluation() const {
    std::lock_guard lock(mutex_);
    auto f = findings_breakdown(classifications_, adjudications_);
    ordered_json j;
    j["flagged"] = f.flagged;
    j["obvious_true"] = f.obvious_true;
    j["context_true"] = f.context_true;
    j["false_positive"] = f.false_positive;
    j["unadjudicated"] = f.unadjudicated;
    j["obvious_rate"] = f.obvious_rate();
    j["context_rate"] = f.context_rate();
    j["false_positive_rate"] = f.false_positive_rate();
    return {200, j.dump() + '\n'};
}

HttpReply Service::get_health() const {
    std::lock_guard lock(mutex_);
    ordered_json j;
    j["status"] = "ok";
    j["tweets"] = corpus_.tweets.size();
    j["label_revisions"] = labels_.log().size();
    j["adjudications"] = adjudications_.size();
    return {200, j.dump() + '\n'};
}

HttpReply Service::post_label(const std::string& body) {
    LabelRevision rev;
    try {
        rev = label_from_line(body, 0);
    } catch (const Error& e) {
        return error_reply(400, e.what());
    }
    std::lock_guard lock(mutex_);
    if (!labels_.knows(rev.tweet_id)) return error_reply(404, "unknown tweet " + rev.tweet_id);
    append_label_line(workspace_.path(Workspace::kLabels), rev.tweet_id, rev.label);
    auto revision = labels_.upsert(rev.tweet_id, rev.label);
    ordered_json j;
    j["revision"] = revision;
    j["tweet_id"] = rev.tweet_id;
    return {200, j.dump() + '\n'};
}

HttpReply Service::post_adjudication(const std::string& body) {
    AdjudicationRecord record;
    try {
        record = adjudication_from_line(body);
    } catch (const Error& e) {
        return error_reply(400, e.what());
    }
    if (!tweet_index_.count(record.tweet_id)) return error_reply(404, "unknown tweet " + record.tweet_id);
    auto c = classification_index_.find(record.tweet_id);
    if (c == classification_index_.end() || !classifications_[c->second].flagged)
        return error_reply(409, "tweet is not flagged: " + record.tweet_id);
    std::lock_guard lock(mutex_);
    append_adjudication_line(workspace_.path(Workspace::kAdjudications), record);
    adjudications_[record.tweet_id] = record.category;
    ordered_json j;
    j["tweet_id"] = record.tweet_id;
    j["category"] = adjudication_name(record.category);
    return {200, j.dump() + '\n'};
}

std::size_t Service::label_log_size() const {
    std::lock_guard lock(mutex_);
    return labels_.log().size();
}

}  // namespace chesty
