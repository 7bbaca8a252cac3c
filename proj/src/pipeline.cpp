#include "chesty/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <thread>
#include <CLI11.hpp>
#include <json.hpp>

#include "chesty/centrality.hpp"
#include "chesty/chestybot.hpp"
#include "chesty/community.hpp"
#include "chesty/detection.hpp"
#include "chesty/graph.hpp"
#include "chesty/service.hpp"
#include "chesty/snowball.hpp"
#include "chesty/synthetic.hpp"
#include "chesty/workspace.hpp"

namespace chesty {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Calls v(section, key, field) for every config field; section is "" for
// top-level keys.
template <typename Config, typename V>
void visit_fields(Config& c, V&& v) {
    v("", "seed", c.seed);
    v("synthetic", "n_tweets", c.synthetic.n_tweets);
    v("synthetic", "n_positive", c.synthetic.n_positive);
    v("synthetic", "communities", c.synthetic.communities);
    v("synthetic", "accounts_per_community", c.synthetic.accounts_per_community);
    v("synthetic", "bridge_accounts", c.synthetic.bridge_accounts);
    v("synthetic", "negative_theme_noise", c.synthetic.negative_theme_noise);
    v("synthetic", "salt", c.synthetic.salt);
    v("synthetic", "lexicon_dir", c.synthetic.lexicon_dir);
    v("snowball", "seeds", c.snowball.seeds);
    v("snowball", "layers", c.snowball.layers);
    v("snowball", "retweeters_per_tweet", c.snowball.retweeters_per_tweet);
    v("snowball", "start", c.snowball.start);
    v("snowball", "end", c.snowball.end);
    v("graph", "like_weight", c.graph.like_weight);
    v("graph", "retweet_weight", c.graph.retweet_weight);
    v("graph", "follow_weight", c.graph.follow_weight);
    v("community", "resolution", c.community.resolution);
    v("community", "shuffle", c.community.shuffle);
    v("centrality", "top_fraction", c.centrality.top_fraction);
    v("textenc", "vocab_size", c.textenc.vocab_size);
    v("textenc", "input_length", c.textenc.input_length);
    v("model", "dense_vectors", c.model.dense_vectors);
    v("model", "num_filters", c.model.num_filters);
    v("model", "kernel", c.model.kernel);
    v("training", "epochs", c.training.epochs);
    v("training", "batch_size", c.training.batch_size);
    v("training", "learning_rate", c.training.learning_rate);
    v("training", "lr_decay", c.training.lr_decay);
    v("training", "validation_fraction", c.training.validation_fraction);
    v("training", "patience", c.training.patience);
    v("training", "positive_weight", c.training.positive_weight);
    v("classify", "threshold", c.classify.threshold);
    v("report", "top_k", c.report.top_k);
    v("report", "top_per_community", c.report.top_per_community);
}

template <typename T>
void assign(const json& j, T& dest, const std::string& key) {
    auto bad = [&](const char* what) { throw ConfigError("config key " + key + " must be " + what); };
    if constexpr (std::is_same_v<T, bool>) {
        if (!j.is_boolean()) bad("a boolean");
        dest = j.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!j.is_string()) bad("a string");
        dest = j.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
        if (!j.is_array()) bad("an array of strings");
        dest.clear();
        for (const auto& item : j) {
            if (!item.is_string()) bad("an array of strings");
            dest.push_back(item.get<std::string>());
        }
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!j.is_number()) bad("a number");
        dest = j.get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
        if (!j.is_number_unsigned()) bad("a non-negative integer");
        dest = j.get<T>();
    } else {
        if (!j.is_number_integer()) bad("an integer");
        dest = j.get<T>();
    }
}

}  // namespace

std::string PipelineConfig::to_json() const {
    ordered_json j = ordered_json::object();
    visit_fields(*this, [&](const std::string& section, const std::string& key, const auto& field) {
        if (section.empty()) {
            j[key] = field;
        } else {
            j[section][key] = field;
        }
    });
    return j.dump(2);
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    PipelineConfig c;
    std::set<std::string> sections, known;
    visit_fields(c, [&](const std::string& section, const std::string& key, auto&) {
        if (section.empty()) {
            known.insert(key);
        } else {
            sections.insert(section);
            known.insert(section + "." + key);
        }
    });
    for (const auto& [key, value] : j.items()) {
        if (sections.count(key)) {
            if (!value.is_object()) throw ConfigError("config section " + key + " must be an object");
            for (const auto& [sub, ignored] : value.items()) {
                if (!known.count(key + "." + sub)) throw ConfigError("unknown config key " + key + "." + sub);
            }
        } else if (!known.count(key)) {
            throw ConfigError("unknown config key " + key);
        }
    }
    visit_fields(c, [&](const std::string& section, const std::string& key, auto& field) {
        const json* node = &j;
        if (!section.empty()) {
            if (!j.contains(section)) return;
            node = &j[section];
        }
        if (!node->contains(key)) return;
        assign((*node)[key], field, section.empty() ? key : section + "." + key);
    });
    c.validate();
    return c;
}

void PipelineConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(synthetic.n_positive <= synthetic.n_tweets, "synthetic.n_positive exceeds synthetic.n_tweets");
    require(synthetic.communities >= 1, "synthetic.communities must be >= 1");
    require(synthetic.accounts_per_community >= 2, "synthetic.accounts_per_community must be >= 2");
    require(synthetic.negative_theme_noise >= 0.0 && synthetic.negative_theme_noise <= 1.0,
            "synthetic.negative_theme_noise must be in [0, 1]");
    require(snowball.layers >= 1, "snowball.layers must be >= 1");
    require(snowball.retweeters_per_tweet >= 1, "snowball.retweeters_per_tweet must be >= 1");
    try {
        require(parse_rfc3339(snowball.start) <= parse_rfc3339(snowball.end), "snowball.start is after snowball.end");
    } catch (const FormatError& e) {
        throw ConfigError(std::string("snowball date range: ") + e.what());
    }
    require(graph.like_weight > 0 && graph.retweet_weight > 0 && graph.follow_weight > 0,
            "graph weights must be positive");
    require(community.resolution > 0.0, "community.resolution must be positive");
    require(centrality.top_fraction > 0.0 && centrality.top_fraction <= 1.0, "centrality.top_fraction must be in (0, 1]");
    require(textenc.vocab_size >= 3, "textenc.vocab_size must be >= 3");
    require(textenc.input_length > model.kernel, "textenc.input_length must exceed model.kernel");
    require(model.dense_vectors >= 1 && model.num_filters >= 1 && model.kernel >= 1, "model sizes must be positive");
    require(training.epochs >= 1, "training.epochs must be >= 1");
    require(training.batch_size >= 1, "training.batch_size must be >= 1");
    require(training.learning_rate > 0.0, "training.learning_rate must be positive");
    require(training.lr_decay > 0.0, "training.lr_decay must be positive");
    require(training.validation_fraction > 0.0 && training.validation_fraction < 1.0,
            "training.validation_fraction must be in (0, 1)");
    require(training.patience >= 0, "training.patience must be >= 0");
    require(training.positive_weight > 0.0, "training.positive_weight must be positive");
    require(classify.threshold >= 0.0 && classify.threshold <= 1.0, "classify.threshold must be in [0, 1]");
    require(report.top_k >= 1, "report.top_k must be >= 1");
}

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

using Hooks = std::vector<std::function<void(PipelineConfig&)>>;

// Adds a flag whose value, when given, overrides one config field.
template <typename T, typename Field>
void override_flag(CLI::App* app, Hooks& hooks, const std::string& name, const std::string& help, Field field) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *holder, help);
    hooks.push_back([holder, opt, field](PipelineConfig& c) {
        if (opt->count() > 0) field(c) = *holder;
    });
}

nn::Architecture architecture_of(const PipelineConfig& c) {
    nn::Architecture a;
    a.input_dim = static_cast<nn::Index>(c.textenc.vocab_size);
    a.input_length = static_cast<nn::Index>(c.textenc.input_length);
    a.dense_vectors = static_cast<nn::Index>(c.model.dense_vectors);
    a.num_filters = static_cast<nn::Index>(c.model.num_filters);
    a.kernel = static_cast<nn::Index>(c.model.kernel);
    return a;
}

Corpus load_corpus_checked(const fs::path& path, std::ostream& err) {
    auto loaded = load_corpus(path);
    if (loaded.skipped_tweets || loaded.skipped_interactions) {
        err << "warning: skipped " << loaded.skipped_tweets << " malformed tweets and " << loaded.skipped_interactions
            << " malformed interactions in " << path.string() << "\n";
    }
    return std::move(loaded.corpus);
}

LabelStore load_labels(const Corpus& corpus, const fs::path& path) {
    std::set<std::string> known;
    for (const auto& t : corpus.tweets) known.insert(t.tweet_id);
    std::vector<LabelRevision> log;
    if (fs::exists(path)) log = load_label_log(path);
    return LabelStore::replay(std::move(known), log);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Influence-campaign analysis pipeline: sampling, echo chambers, liminal nodes and stratagem detection",
                 "chesty"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string workspace_dir = ".";
    std::string config_path;
    std::uint64_t seed_flag = 0;
    app.add_option("--workspace,-w", workspace_dir, "Workspace directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed_flag, "Seed for every random stage");
    app.add_option("--config,-c", config_path, "Pipeline config file (JSON)");

    Hooks hooks;
    std::function<void(const PipelineConfig&, const Workspace&)> action;
    std::vector<fs::path> written;

    // Paths default to workspace files when empty.
    std::map<std::string, std::string> paths;
    auto path_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        sub->add_option(flag, paths[key], help);
    };
    auto resolve = [&](const Workspace& ws, const std::string& key, const char* fallback) -> fs::path {
        auto it = paths.find(key);
        if (it != paths.end() && !it->second.empty()) return it->second;
        return ws.path(fallback);
    };

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic labeled corpus");
    path_flag(gen, "--out", "gen.out", "Corpus file (interactions go to the sibling file)");
    path_flag(gen, "--labels-out", "gen.labels", "Label log to (re)write");
    override_flag<std::size_t>(gen, hooks, "--n-tweets", "Tweet count",
                               [](PipelineConfig& c) -> auto& { return c.synthetic.n_tweets; });
    override_flag<std::size_t>(gen, hooks, "--n-positive", "Propaganda tweet count",
                               [](PipelineConfig& c) -> auto& { return c.synthetic.n_positive; });
    gen->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            SyntheticSpec spec;
            spec.n_tweets = cfg.synthetic.n_tweets;
            spec.n_positive = cfg.synthetic.n_positive;
            spec.communities = cfg.synthetic.communities;
            spec.accounts_per_community = cfg.synthetic.accounts_per_community;
            spec.bridge_accounts = cfg.synthetic.bridge_accounts;
            spec.negative_theme_noise = cfg.synthetic.negative_theme_noise;
            spec.salt = cfg.synthetic.salt;
            spec.seed = cfg.seed;
            spec.themes = load_lexicons(cfg.synthetic.lexicon_dir.empty() ? default_lexicon_dir()
                                                                          : fs::path(cfg.synthetic.lexicon_dir));
            auto synth = generate_synthetic(spec);
            auto corpus_path = resolve(ws, "gen.out", Workspace::kCorpus);
            auto labels_path = resolve(ws, "gen.labels", Workspace::kLabels);
            save_corpus(synth.corpus, corpus_path);
            std::vector<LabelRevision> log;
            for (const auto& [id, label] : synth.truth) log.push_back({log.size() + 1, id, label});
            save_label_log(log, labels_path);
            written = {corpus_path, interactions_path_for(corpus_path)};
            out << "wrote " << synth.corpus.tweets.size() << " tweets, " << synth.corpus.interactions.size()
                << " interactions, " << spec.n_positive << " positive labels\n";
        };
    });

    // snowball
    auto* snow = app.add_subcommand("snowball", "Snowball-sample accounts from a fixture universe");
    path_flag(snow, "--in", "snow.in", "Universe corpus file");
    path_flag(snow, "--labels", "snow.labels", "Label log used to pick default seeds");
    path_flag(snow, "--out", "snow.out", "Sample file");
    override_flag<std::vector<std::string>>(snow, hooks, "--seeds", "Seed account ids",
                                            [](PipelineConfig& c) -> auto& { return c.snowball.seeds; });
    override_flag<int>(snow, hooks, "--layers", "Expansion layers",
                       [](PipelineConfig& c) -> auto& { return c.snowball.layers; });
    override_flag<std::size_t>(snow, hooks, "--retweeters-per-tweet", "Retweeters sampled per tweet",
                               [](PipelineConfig& c) -> auto& { return c.snowball.retweeters_per_tweet; });
    snow->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto universe = load_corpus_checked(resolve(ws, "snow.in", Workspace::kCorpus), err);
            SnowballConfig sc;
            sc.layers = cfg.snowball.layers;
            sc.retweeters_per_tweet = cfg.snowball.retweeters_per_tweet;
            sc.date_range = {parse_rfc3339(cfg.snowball.start), parse_rfc3339(cfg.snowball.end)};
            sc.rng_seed = cfg.seed;
            for (const auto& s : cfg.snowball.seeds) sc.seeds.push_back(AccountId::from_hex(s));
            if (sc.seeds.empty()) {
                auto labels = load_labels(universe, resolve(ws, "snow.labels", Workspace::kLabels));
                std::set<AccountId> authors;
                for (const auto& t : universe.tweets) {
                    const auto* l = labels.find(t.tweet_id);
                    if (l && is_propaganda(*l)) authors.insert(t.author);
                }
                sc.seeds.assign(authors.begin(), authors.end());
            }
            if (sc.seeds.empty()) throw ConfigError("no snowball seeds given and no positive labels to derive them");
            FixtureSource source(std::move(universe));
            auto sample = snowball(source, sc);
            auto path = resolve(ws, "snow.out", Workspace::kSample);
            save_sample_set(sample, path);
            written = {path};
            std::size_t accounts = 0;
            for (const auto& layer : sample.accounts_by_layer) accounts += layer.size();
            out << "sampled " << accounts << " accounts in " << sample.accounts_by_layer.size() << " layers, "
                << sample.tweets.size() << " tweets\n";
        };
    });

    // build-graph
    auto* bg = app.add_subcommand("build-graph", "Build the weighted interaction graph");
    path_flag(bg, "--in", "bg.in", "Corpus file");
    path_flag(bg, "--out", "bg.out", "Edge list (node map goes to the sibling file)");
    override_flag<double>(bg, hooks, "--like-weight", "Weight of a like",
                          [](PipelineConfig& c) -> auto& { return c.graph.like_weight; });
    override_flag<double>(bg, hooks, "--retweet-weight", "Weight of a retweet",
                          [](PipelineConfig& c) -> auto& { return c.graph.retweet_weight; });
    override_flag<double>(bg, hooks, "--follow-weight", "Weight of a follow",
                          [](PipelineConfig& c) -> auto& { return c.graph.follow_weight; });
    bg->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "bg.in", Workspace::kCorpus), err);
            auto built = build_graph(corpus.interactions,
                                     {cfg.graph.like_weight, cfg.graph.retweet_weight, cfg.graph.follow_weight});
            auto path = resolve(ws, "bg.out", Workspace::kGraph);
            save_graph(built.graph, path);
            written = {path, nodes_path_for(path)};
            out << "graph: " << built.graph.node_count() << " nodes, " << built.graph.edges().size()
                << " edges, total weight " << format_double(built.graph.total_weight()) << "\n";
        };
    });

    // communities
    auto* comm = app.add_subcommand("communities", "Detect echo chambers with Louvain");
    path_flag(comm, "--in", "comm.in", "Graph edge list");
    path_flag(comm, "--out", "comm.out", "Partition file");
    override_flag<double>(comm, hooks, "--resolution", "Modularity resolution",
                          [](PipelineConfig& c) -> auto& { return c.community.resolution; });
    comm->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto graph = load_graph(resolve(ws, "comm.in", Workspace::kGraph));
            auto result = louvain(graph, {cfg.community.resolution, cfg.seed, cfg.community.shuffle});
            auto path = resolve(ws, "comm.out", Workspace::kPartition);
            save_partition(result.partition, path);
            written = {path};
            out << "communities: " << result.partition.community_count() << ", modularity "
                << format_double(result.q_history.back()) << "\n";
        };
    });

    // centrality
    auto* cent = app.add_subcommand("centrality", "Betweenness centrality and liminal nodes");
    path_flag(cent, "--graph", "cent.graph", "Graph edge list");
    path_flag(cent, "--partition", "cent.partition", "Partition file");
    path_flag(cent, "--out", "cent.out", "Centrality scores file");
    path_flag(cent, "--liminal-out", "cent.liminal", "Liminal report file");
    override_flag<double>(cent, hooks, "--top-fraction", "Fraction of bridging nodes reported as liminal",
                          [](PipelineConfig& c) -> auto& { return c.centrality.top_fraction; });
    cent->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto graph = load_graph(resolve(ws, "cent.graph", Workspace::kGraph));
            auto partition = load_partition(resolve(ws, "cent.partition", Workspace::kPartition));
            auto scores = betweenness(graph);
            auto report = liminal_nodes(graph, partition, scores, cfg.centrality.top_fraction);
            auto scores_path = resolve(ws, "cent.out", Workspace::kCentrality);
            auto liminal_path = resolve(ws, "cent.liminal", Workspace::kLiminal);
            save_centrality(scores, scores_path);
            save_liminal_report(report, graph, liminal_path);
            written = {scores_path, liminal_path};
            out << "liminal nodes: " << report.ranked.size() << "\n";
        };
    });

    // label
    auto* lab = app.add_subcommand("label", "Record a stratagem label for one tweet");
    std::string label_tweet, annotator = "analyst", labeled_at;
    bool f_inform = false, f_invoke = false, f_deflect = false, f_recast = false;
    lab->add_option("--tweet", label_tweet, "Tweet id")->required();
    lab->add_flag("--inform", f_inform, "Inform stratagem present");
    lab->add_flag("--invoke", f_invoke, "Invoke stratagem present");
    lab->add_flag("--deflect", f_deflect, "Deflect stratagem present");
    lab->add_flag("--recast", f_recast, "Recast stratagem present");
    lab->add_option("--annotator", annotator, "Annotator name")->capture_default_str();
    lab->add_option("--labeled-at", labeled_at, "RFC 3339 timestamp (default: now)");
    path_flag(lab, "--corpus", "lab.corpus", "Corpus file");
    path_flag(lab, "--labels", "lab.labels", "Label log");
    lab->callback([&] {
        action = [&](const PipelineConfig&, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "lab.corpus", Workspace::kCorpus), err);
            auto labels_path = resolve(ws, "lab.labels", Workspace::kLabels);
            auto store = load_labels(corpus, labels_path);
            StratagemLabel label{f_inform, f_invoke, f_deflect, f_recast, annotator, {}};
            label.labeled_at = labeled_at.empty()
                                   ? std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())
                                   : parse_rfc3339(labeled_at);
            auto revision = upsert_label(store, label_tweet, label);
            append_label_line(labels_path, label_tweet, label);
            out << "revision " << revision << " for " << label_tweet << "\n";
        };
    });

    // train
    auto* tr = app.add_subcommand("train", "Train the stratagem classifier");
    path_flag(tr, "--corpus", "tr.corpus", "Corpus file");
    path_flag(tr, "--labels", "tr.labels", "Label log");
    path_flag(tr, "--out", "tr.out", "Checkpoint file (metadata goes to the sibling file)");
    path_flag(tr, "--vocab-out", "tr.vocab", "Vocabulary file");
    path_flag(tr, "--history-out", "tr.history", "Per-epoch history file");
    override_flag<int>(tr, hooks, "--epochs", "Training epochs",
                       [](PipelineConfig& c) -> auto& { return c.training.epochs; });
    override_flag<std::size_t>(tr, hooks, "--batch-size", "Mini-batch size",
                               [](PipelineConfig& c) -> auto& { return c.training.batch_size; });
    override_flag<double>(tr, hooks, "--learning-rate", "Adam learning rate",
                          [](PipelineConfig& c) -> auto& { return c.training.learning_rate; });
    override_flag<double>(tr, hooks, "--validation-fraction", "Held-out fraction",
                          [](PipelineConfig& c) -> auto& { return c.training.validation_fraction; });
    override_flag<int>(tr, hooks, "--patience", "Early-stop patience (0 disables)",
                       [](PipelineConfig& c) -> auto& { return c.training.patience; });
    override_flag<double>(tr, hooks, "--positive-weight", "Loss weight of positive examples",
                          [](PipelineConfig& c) -> auto& { return c.training.positive_weight; });
    tr->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "tr.corpus", Workspace::kCorpus), err);
            auto labels = load_labels(corpus, resolve(ws, "tr.labels", Workspace::kLabels));
            TrainingConfig tc;
            tc.arch = architecture_of(cfg);
            tc.epochs = cfg.training.epochs;
            tc.batch_size = cfg.training.batch_size;
            tc.learning_rate = cfg.training.learning_rate;
            tc.lr_decay = cfg.training.lr_decay;
            tc.validation_fraction = cfg.training.validation_fraction;
            tc.patience = cfg.training.patience;
            tc.positive_weight = cfg.training.positive_weight;
            tc.seed = cfg.seed;
            auto result = train(corpus, labels, tc);
            result.model.meta.threshold = cfg.classify.threshold;
            auto ckpt = resolve(ws, "tr.out", Workspace::kModel);
            auto vocab = resolve(ws, "tr.vocab", Workspace::kVocab);
            auto history = resolve(ws, "tr.history", Workspace::kHistory);
            save_classifier(result.model, ckpt, vocab);
            std::string lines;
            for (const auto& e : result.history) {
                ordered_json j;
                j["epoch"] = e.epoch;
                j["train_loss"] = e.train_loss;
                j["val_loss"] = e.val_loss;
                j["val_accuracy"] = e.val_accuracy;
                lines += j.dump() + '\n';
                out << "epoch " << e.epoch << " train_loss " << format_double(e.train_loss) << " val_loss "
                    << format_double(e.val_loss) << " val_accuracy " << format_double(e.val_accuracy) << "\n";
            }
            write_file(history, lines);
            written = {ckpt, metadata_path_for(ckpt), vocab, history};
            out << "best epoch " << result.best_epoch << "\n";
        };
    });

    // classify
    auto* cl = app.add_subcommand("classify", "Score every corpus tweet");
    path_flag(cl, "--corpus", "cl.corpus", "Corpus file");
    path_flag(cl, "--model", "cl.model", "Checkpoint file");
    path_flag(cl, "--vocab", "cl.vocab", "Vocabulary file");
    path_flag(cl, "--out", "cl.out", "Classification file");
    override_flag<double>(cl, hooks, "--threshold", "Flagging threshold",
                          [](PipelineConfig& c) -> auto& { return c.classify.threshold; });
    cl->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "cl.corpus", Workspace::kCorpus), err);
            auto model = load_classifier(resolve(ws, "cl.model", Workspace::kModel), resolve(ws, "cl.vocab", Workspace::kVocab));
            auto results = classify(model, corpus.tweets, cfg.classify.threshold);
            auto path = resolve(ws, "cl.out", Workspace::kClassifications);
            save_classifications(results, path);
            written = {path};
            std::size_t flagged = 0;
            for (const auto& r : results) flagged += r.flagged ? 1 : 0;
            out << "flagged " << flagged << " of " << results.size() << "\n";
        };
    });

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Confusion counts and adjudication breakdown");
    path_flag(ev, "--classifications", "ev.cls", "Classification file");
    path_flag(ev, "--corpus", "ev.corpus", "Corpus file");
    path_flag(ev, "--labels", "ev.labels", "Label log");
    path_flag(ev, "--adjudications", "ev.adj", "Adjudication log (optional)");
    path_flag(ev, "--out", "ev.out", "Evaluation report");
    ev->callback([&] {
        action = [&](const PipelineConfig&, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "ev.corpus", Workspace::kCorpus), err);
            auto labels = load_labels(corpus, resolve(ws, "ev.labels", Workspace::kLabels));
            auto predictions = load_classifications(resolve(ws, "ev.cls", Workspace::kClassifications));
            auto adj_path = resolve(ws, "ev.adj", Workspace::kAdjudications);
            std::optional<std::map<std::string, Adjudication>> adj;
            if (fs::exists(adj_path)) adj = load_adjudications(adj_path);
            auto report = evaluate(predictions, labels.current(), adj ? &*adj : nullptr);
            auto path = resolve(ws, "ev.out", Workspace::kEval);
            auto text = eval_report_json(report);
            write_file(path, text + "\n");
            written = {path};
            out << text << "\n";
        };
    });

    // report
    auto* rep = app.add_subcommand("report", "Campaign report and disruption candidates");
    path_flag(rep, "--classifications", "rep.cls", "Classification file");
    path_flag(rep, "--corpus", "rep.corpus", "Corpus file");
    path_flag(rep, "--graph", "rep.graph", "Graph edge list");
    path_flag(rep, "--partition", "rep.partition", "Partition file");
    path_flag(rep, "--centrality", "rep.centrality", "Centrality scores");
    path_flag(rep, "--liminal", "rep.liminal", "Liminal report");
    path_flag(rep, "--out", "rep.out", "Report line file");
    path_flag(rep, "--table", "rep.table", "Human-readable report");
    path_flag(rep, "--candidates-out", "rep.candidates", "Top-k candidate file");
    override_flag<std::size_t>(rep, hooks, "--top-k", "Disruption candidates to keep",
                               [](PipelineConfig& c) -> auto& { return c.report.top_k; });
    override_flag<std::size_t>(rep, hooks, "--top-per-community", "Flagged tweets listed per community",
                               [](PipelineConfig& c) -> auto& { return c.report.top_per_community; });
    rep->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace& ws) {
            auto corpus = load_corpus_checked(resolve(ws, "rep.corpus", Workspace::kCorpus), err);
            auto graph = load_graph(resolve(ws, "rep.graph", Workspace::kGraph));
            auto partition = load_partition(resolve(ws, "rep.partition", Workspace::kPartition));
            auto scores = load_centrality(resolve(ws, "rep.centrality", Workspace::kCentrality));
            auto liminal = load_liminal_report(resolve(ws, "rep.liminal", Workspace::kLiminal));
            auto predictions = load_classifications(resolve(ws, "rep.cls", Workspace::kClassifications));
            auto report = campaign_report(predictions, corpus, graph, partition, scores, liminal,
                                          {cfg.report.top_per_community});
            auto lines_path = resolve(ws, "rep.out", Workspace::kReport);
            auto table_path = resolve(ws, "rep.table", Workspace::kReportTable);
            auto cand_path = resolve(ws, "rep.candidates", Workspace::kCandidates);
            write_file(lines_path, report_lines(report));
            auto table = report_table(report);
            write_file(table_path, table);
            save_candidates(disruption_candidates(report, cfg.report.top_k), cand_path);
            written = {lines_path, table_path, cand_path};
            out << table;
        };
    });

    // serve
    auto* srv = app.add_subcommand("serve", "Serve the workspace over HTTP");
    std::string host = "127.0.0.1";
    int port = 8080;
    srv->add_option("--host", host, "Bind address")->capture_default_str();
    srv->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
    srv->callback([&] {
        action = [&](const PipelineConfig&, const Workspace& ws) {
            Service service(ws);
            int bound = service.start(host, port);
            out << "serving " << ws.root().string() << " on http://" << host << ":" << bound << "/api\n" << std::flush;
            g_stop = false;
            auto prev_int = std::signal(SIGINT, on_signal);
            auto prev_term = std::signal(SIGTERM, on_signal);
            while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
            service.stop();
            std::signal(SIGINT, prev_int);
            std::signal(SIGTERM, prev_term);
            out << "stopped\n";
        };
    });

    // config
    auto* conf = app.add_subcommand("config", "Inspect the pipeline configuration");
    conf->require_subcommand(1);
    auto* show = conf->add_subcommand("show", "Print the effective configuration with defaults filled in");
    show->callback([&] {
        action = [&](const PipelineConfig& cfg, const Workspace&) { out << cfg.to_json() << "\n"; };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = PipelineConfig::from_json(read_file(config_path));
        if (seed_opt->count() > 0) cfg.seed = seed_flag;
        for (const auto& hook : hooks) hook(cfg);
        cfg.validate();
        Workspace ws(workspace_dir);
        if (!action) {
            err << app.help();
            return 1;
        }
        action(cfg, ws);
        if (!written.empty()) {
            fs::create_directories(ws.root());
            ws.record(written);
        }
        return 0;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace chesty
