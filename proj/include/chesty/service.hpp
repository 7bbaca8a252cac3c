#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chesty/centrality.hpp"
#include "chesty/chestybot.hpp"
#include "chesty/detection.hpp"
#include "chesty/stratagem.hpp"
#include "chesty/workspace.hpp"

namespace httplib {
class Server;
}

namespace chesty {

struct HttpReply {
    int status = 200;
    std::string body;
};

/// Read-mostly API over a verified workspace. Artifacts are loaded once at
/// construction; only the label and adjudication logs change afterwards.
class Service {
  public:
    /// Throws FormatError when the manifest does not match the files.
    explicit Service(Workspace workspace);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread; port 0 picks a free port.
    /// Returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    /// Blocks until stop() is called from elsewhere.
    void wait();

    // Endpoint logic, callable without a socket.
    HttpReply get_graph() const;
    HttpReply get_communities() const;
    HttpReply get_centrality() const;
    HttpReply get_flagged(const std::optional<std::string>& min_score) const;
    HttpReply get_tweet(const std::string& tweet_id) const;
    HttpReply get_candidates(const std::optional<std::string>& k) const;
    HttpReply get_evaluation() const;
    HttpReply get_health() const;
    HttpReply post_label(const std::string& body);
    HttpReply post_adjudication(const std::string& body);

    std::size_t label_log_size() const;

  private:
    Workspace workspace_;
    Corpus corpus_;
    std::map<std::string, std::size_t> tweet_index_;
    std::optional<WeightedGraph> graph_;
    std::optional<Partition> partition_;
    std::optional<CentralityScores> centrality_;
    std::optional<LiminalReport> liminal_;
    std::vector<Classification> classifications_;
    std::map<std::string, std::size_t> classification_index_;
    std::vector<DisruptionCandidate> candidates_;

    mutable std::mutex mutex_;
    LabelStore labels_;
    std::map<std::string, Adjudication> adjudications_;

    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace chesty
