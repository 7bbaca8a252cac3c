#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace chesty {

/// Every tunable of the pipeline. The file form is a JSON object with the same
/// sections; unknown keys are rejected, missing keys keep their defaults.
struct PipelineConfig {
    std::uint64_t seed = 1;

    struct Synthetic {
        std::size_t n_tweets = 882;
        std::size_t n_positive = 62;
        std::size_t communities = 4;
        std::size_t accounts_per_community = 24;
        std::size_t bridge_accounts = 3;
        double negative_theme_noise = 0.15;
        std::string salt = "chesty-synthetic";
        std::string lexicon_dir;  // empty: shipped lexicons
    } synthetic;

    struct Snowball {
        std::vector<std::string> seeds;  // empty: authors of positively labeled tweets
        int layers = 2;
        std::size_t retweeters_per_tweet = 20;
        std::string start = "2022-10-01T00:00:00Z";
        std::string end = "2022-11-08T23:59:59Z";
    } snowball;

    struct Graph {
        double like_weight = 1.0;
        double retweet_weight = 10.0;
        double follow_weight = 10.0;
    } graph;

    struct Community {
        double resolution = 1.0;
        bool shuffle = false;
    } community;

    struct Centrality {
        double top_fraction = 0.05;
    } centrality;

    struct TextEnc {
        std::size_t vocab_size = 1536;
        std::size_t input_length = 64;
    } textenc;

    struct Model {
        std::size_t dense_vectors = 16;
        std::size_t num_filters = 32;
        std::size_t kernel = 5;
    } model;

    struct Training {
        int epochs = 30;
        std::size_t batch_size = 32;
        double learning_rate = 1e-3;
        double lr_decay = 1.0;
        double validation_fraction = 0.2;
        int patience = 0;
        double positive_weight = 1.0;
    } training;

    struct Classify {
        double threshold = 0.5;
    } classify;

    struct Report {
        std::size_t top_k = 20;
        std::size_t top_per_community = 5;
    } report;

    std::string to_json() const;
    /// Throws ConfigError on unknown keys, wrong types or invalid values.
    static PipelineConfig from_json(const std::string& text);
    void validate() const;
};

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on usage errors and 2 on data errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chesty
