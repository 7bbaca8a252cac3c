#include "chesty/chestybot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace chesty {

namespace {

constexpr std::uint64_t kSplitStream = 0x5DEECE66DULL;
constexpr std::uint64_t kBatchStream = 0x9E3779B97F4A7C15ULL;

struct Example {
    std::string tweet_id;
    std::string text;
    float target = 0.0f;
};

nn::IndexBatch gather(const nn::IndexBatch& all, std::span<const std::size_t> rows) {
    nn::IndexBatch out(static_cast<Eigen::Index>(rows.size()), all.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = all.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

nn::Vector<float> gather_targets(const std::vector<Example>& examples, std::span<const std::size_t> rows) {
    nn::Vector<float> y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y[static_cast<Eigen::Index>(i)] = examples[rows[i]].target;
    return y;
}

struct ValidationScore {
    double loss = 0.0;
    double accuracy = 0.0;
};

ValidationScore score_validation(const nn::ConvTextModel<float>& net, const nn::IndexBatch& inputs,
                                 const nn::Vector<float>& targets) {
    auto probs = net.predict(inputs);
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        bool predicted = probs[i] >= 0.5f;
        bool actual = targets[i] > 0.5f;
        correct += predicted == actual ? 1 : 0;
    }
    return {static_cast<double>(nn::bce_loss<float>(probs, targets)),
            static_cast<double>(correct) / static_cast<double>(probs.size())};
}

}  // namespace

void TrainingConfig::validate() const {
    arch.validate();
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw ConfigError("validation_fraction must be in (0, 1)");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(lr_decay > 0.0)) throw ConfigError("lr_decay must be positive");
    if (!(positive_weight > 0.0)) throw ConfigError("positive_weight must be positive");
    if (patience < 0) throw ConfigError("patience must be >= 0");
}

TrainResult train(const Corpus& corpus, const LabelStore& labels, const TrainingConfig& cfg) {
    return train(corpus, labels.current(), cfg);
}

TrainResult train(const Corpus& corpus, const std::map<std::string, StratagemLabel>& labels,
                  const TrainingConfig& cfg) {
    cfg.validate();

    std::vector<Example> examples;
    std::vector<std::size_t> positives, negatives;
    for (const auto& tweet : corpus.tweets) {
        auto it = labels.find(tweet.tweet_id);
        if (it == labels.end()) continue;
        bool pos = is_propaganda(it->second);
        (pos ? positives : negatives).push_back(examples.size());
        examples.push_back({tweet.tweet_id, tweet.text, pos ? 1.0f : 0.0f});
    }
    if (positives.size() < 2 || negatives.size() < 2)
        throw InvalidInput("training needs at least 2 labeled examples of each class");

    // Stratified split.
    Rng split_rng(cfg.seed ^ kSplitStream);
    split_rng.shuffle(positives);
    split_rng.shuffle(negatives);
    auto holdout = [&](std::size_t n) {
        auto k = static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(n)));
        return std::clamp<std::size_t>(k, 1, n - 1);
    };
    std::vector<std::size_t> val_rows, train_rows;
    for (auto* cls : {&positives, &negatives}) {
        std::size_t k = holdout(cls->size());
        val_rows.insert(val_rows.end(), cls->begin(), cls->begin() + static_cast<std::ptrdiff_t>(k));
        train_rows.insert(train_rows.end(), cls->begin() + static_cast<std::ptrdiff_t>(k), cls->end());
    }
    std::sort(val_rows.begin(), val_rows.end());
    std::sort(train_rows.begin(), train_rows.end());

    std::vector<std::string> train_texts;
    for (std::size_t r : train_rows) train_texts.push_back(examples[r].text);
    Vocabulary vocab = build_vocab(train_texts, static_cast<std::size_t>(cfg.arch.input_dim));

    std::vector<std::string> all_texts;
    for (const auto& e : examples) all_texts.push_back(e.text);
    nn::IndexBatch encoded = encode_batch(all_texts, vocab, static_cast<std::size_t>(cfg.arch.input_length));
    nn::IndexBatch val_inputs = gather(encoded, val_rows);
    nn::Vector<float> val_targets = gather_targets(examples, val_rows);

    auto net = nn::ConvTextModel<float>::initialized(cfg.arch, cfg.seed);
    nn::Adam<float> adam(cfg.arch, {cfg.learning_rate, 0.9, 0.999, 1e-8});
    nn::LayerParams<float> grad;
    Rng batch_rng(cfg.seed ^ kBatchStream);
    const auto pos_weight = static_cast<float>(cfg.positive_weight);

    TrainResult result;
    for (std::size_t r : val_rows) result.validation_ids.push_back(examples[r].tweet_id);
    nn::LayerParams<float> best = net.params();
    double best_acc = -1.0, best_loss = 0.0;
    int since_best = 0;

    std::vector<std::size_t> order = train_rows;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        batch_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            std::span<const std::size_t> rows(order.data() + start, std::min(cfg.batch_size, order.size() - start));
            auto inputs = gather(encoded, rows);
            auto targets = gather_targets(examples, rows);
            float loss = net.loss_and_gradient(inputs, targets, grad, pos_weight);
            loss_sum += static_cast<double>(loss) * static_cast<double>(rows.size());
            adam.step(net.params(), grad);
        }
        adam.set_learning_rate(adam.learning_rate() * cfg.lr_decay);

        auto val = score_validation(net, val_inputs, val_targets);
        result.history.push_back({epoch, loss_sum / static_cast<double>(order.size()), val.loss, val.accuracy});
        if (val.accuracy > best_acc || (val.accuracy == best_acc && val.loss < best_loss)) {
            best_acc = val.accuracy;
            best_loss = val.loss;
            best = net.params();
            result.best_epoch = epoch;
            since_best = 0;
        } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
            break;
        }
    }

    result.model.meta.vocab_hash = vocab.digest();
    result.model.meta.input_length = cfg.arch.input_length;
    result.model.vocab = std::move(vocab);
    result.model.network = nn::ConvTextModel<float>(cfg.arch, std::move(best));
    return result;
}

nn::IndexBatch encode_batch(std::span<const std::string> texts, const Vocabulary& vocab, std::size_t input_length) {
    nn::IndexBatch out(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(input_length));
    for (std::size_t i = 0; i < texts.size(); ++i) {
        auto row = encode(texts[i], vocab, input_length);
        for (std::size_t t = 0; t < input_length; ++t) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = row[t];
    }
    return out;
}

std::vector<Classification> classify(const ClassifierModel& model, std::span<const TweetRecord> tweets,
                                     double threshold) {
    if (model.vocab.digest() != model.meta.vocab_hash)
        throw FormatError("vocabulary does not match the one the model was trained with");
    const auto& arch = model.network.architecture();
    if (static_cast<Eigen::Index>(model.vocab.size()) != arch.input_dim || model.meta.input_length != arch.input_length)
        throw FormatError("vocabulary or input_length inconsistent with the checkpoint");

    std::vector<Classification> out;
    out.reserve(tweets.size());
    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < tweets.size(); start += kChunk) {
        std::size_t n = std::min(kChunk, tweets.size() - start);
        std::vector<std::string> texts;
        for (std::size_t i = 0; i < n; ++i) texts.push_back(tweets[start + i].text);
        auto probs = model.network.predict(encode_batch(texts, model.vocab, static_cast<std::size_t>(arch.input_length)));
        for (std::size_t i = 0; i < n; ++i) {
            double score = probs[static_cast<Eigen::Index>(i)];
            out.push_back({tweets[start + i].tweet_id, score, score >= threshold});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Classification& a, const Classification& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.tweet_id < b.tweet_id;
    });
    return out;
}

const char* adjudication_name(Adjudication a) {
    switch (a) {
        case Adjudication::ObviousTrue: return "obvious_true";
        case Adjudication::ContextTrue: return "context_true";
        case Adjudication::FalsePositive: return "false_positive";
    }
    return "?";
}

Adjudication parse_adjudication(std::string_view name) {
    if (name == "obvious_true") return Adjudication::ObviousTrue;
    if (name == "context_true") return Adjudication::ContextTrue;
    if (name == "false_positive") return Adjudication::FalsePositive;
    throw FormatError("unknown adjudication category: " + std::string(name));
}

std::string adjudication_to_line(const AdjudicationRecord& record) {
    nlohmann::ordered_json j;
    j["tweet_id"] = record.tweet_id;
    j["category"] = adjudication_name(record.category);
    return j.dump();
}

AdjudicationRecord adjudication_from_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(e.what());
    }
    if (!j.is_object() || !j.contains("tweet_id") || !j["tweet_id"].is_string() || !j.contains("category") ||
        !j["category"].is_string())
        throw FormatError("adjudication needs string tweet_id and category");
    AdjudicationRecord r{j["tweet_id"].get<std::string>(), parse_adjudication(j["category"].get<std::string>())};
    if (r.tweet_id.empty()) throw FormatError("adjudication has empty tweet_id");
    return r;
}

std::map<std::string, Adjudication> load_adjudications(const std::filesystem::path& path) {
    std::map<std::string, Adjudication> out;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        auto r = adjudication_from_line(line);
        out[r.tweet_id] = r.category;
    }
    return out;
}

void append_adjudication_line(const std::filesystem::path& path, const AdjudicationRecord& record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to " + path.string());
    out << adjudication_to_line(record) << '\n';
    out.flush();
    if (!out) throw IoError("append failed for " + path.string());
}

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double FindingsBreakdown::obvious_rate() const { return ratio(obvious_true, flagged); }
double FindingsBreakdown::context_rate() const { return ratio(context_true, flagged); }
double FindingsBreakdown::false_positive_rate() const { return ratio(false_positive, flagged); }

FindingsBreakdown findings_breakdown(std::span<const Classification> predictions,
                                     const std::map<std::string, Adjudication>& adjudications) {
    FindingsBreakdown f;
    for (const auto& p : predictions) {
        if (!p.flagged) continue;
        ++f.flagged;
        auto it = adjudications.find(p.tweet_id);
        if (it == adjudications.end()) {
            ++f.unadjudicated;
            continue;
        }
        switch (it->second) {
            case Adjudication::ObviousTrue: ++f.obvious_true; break;
            case Adjudication::ContextTrue: ++f.context_true; break;
            case Adjudication::FalsePositive: ++f.false_positive; break;
        }
    }
    return f;
}

EvalReport evaluate(std::span<const Classification> predictions, const std::map<std::string, StratagemLabel>& labels,
                    const std::map<std::string, Adjudication>* adjudications) {
    if (predictions.empty()) throw InvalidInput("cannot evaluate an empty corpus");
    EvalReport r;
    for (const auto& p : predictions) {
        auto it = labels.find(p.tweet_id);
        if (it == labels.end()) throw InvalidInput("no label for tweet " + p.tweet_id);
        bool actual = is_propaganda(it->second);
        if (p.flagged && actual) ++r.true_positive;
        else if (p.flagged) ++r.false_positive;
        else if (actual) ++r.false_negative;
        else ++r.true_negative;
    }
    r.accuracy = ratio(r.true_positive + r.true_negative, r.total());
    r.precision = ratio(r.true_positive, r.true_positive + r.false_positive);
    r.recall = ratio(r.true_positive, r.true_positive + r.false_negative);
    if (adjudications) r.findings = findings_breakdown(predictions, *adjudications);
    return r;
}

EvalReport evaluate(const ClassifierModel& model, const Corpus& corpus,
                    const std::map<std::string, StratagemLabel>& labels,
                    const std::map<std::string, Adjudication>* adjudications, double threshold) {
    if (corpus.tweets.empty()) throw InvalidInput("cannot evaluate an empty corpus");
    auto predictions = classify(model, corpus.tweets, threshold);
    return evaluate(predictions, labels, adjudications);
}

std::string eval_report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["true_positive"] = report.true_positive;
    j["false_positive"] = report.false_positive;
    j["true_negative"] = report.true_negative;
    j["false_negative"] = report.false_negative;
    j["accuracy"] = report.accuracy;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    if (report.findings) {
        const auto& f = *report.findings;
        j["flagged"] = f.flagged;
        j["obvious_true"] = f.obvious_true;
        j["context_true"] = f.context_true;
        j["false_positive_adjudicated"] = f.false_positive;
        j["unadjudicated"] = f.unadjudicated;
        j["obvious_rate"] = f.obvious_rate();
        j["context_rate"] = f.context_rate();
        j["false_positive_rate"] = f.false_positive_rate();
    }
    return j.dump();
}

std::filesystem::path metadata_path_for(const std::filesystem::path& checkpoint_path) {
    return checkpoint_path.parent_path() / (checkpoint_path.stem().string() + ".meta.json");
}

void save_classifier(const ClassifierModel& model, const std::filesystem::path& checkpoint_path,
                     const std::filesystem::path& vocab_path) {
    nn::save_checkpoint(model.network, checkpoint_path);
    save_vocabulary(model.vocab, vocab_path);
    nlohmann::ordered_json meta;
    meta["format_version"] = nn::kCheckpointVersion;
    meta["vocab_hash"] = model.meta.vocab_hash;
    meta["input_length"] = model.meta.input_length;
    meta["threshold"] = model.meta.threshold;
    write_file(metadata_path_for(checkpoint_path), meta.dump(2) + "\n");
}

ClassifierModel load_classifier(const std::filesystem::path& checkpoint_path, const std::filesystem::path& vocab_path) {
    ClassifierModel model;
    model.network = nn::load_checkpoint(checkpoint_path);
    model.vocab = load_vocabulary(vocab_path, static_cast<std::size_t>(model.network.architecture().input_dim));
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(metadata_path_for(checkpoint_path)));
        model.meta.vocab_hash = meta.at("vocab_hash").get<std::string>();
        model.meta.input_length = meta.at("input_length").get<std::int64_t>();
        model.meta.threshold = meta.value("threshold", 0.5);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model metadata: ") + e.what());
    }
    if (model.meta.vocab_hash != model.vocab.digest())
        throw FormatError("vocabulary does not match the one the model was trained with");
    if (model.meta.input_length != model.network.architecture().input_length)
        throw FormatError("model metadata input_length disagrees with the checkpoint");
    return model;
}

std::string classification_to_line(const Classification& c) {
    nlohmann::ordered_json j;
    j["tweet_id"] = c.tweet_id;
    j["score"] = c.score;
    j["flagged"] = c.flagged;
    return j.dump();
}

Classification classification_from_line(std::string_view line) {
    try {
        auto j = nlohmann::json::parse(line);
        return {j.at("tweet_id").get<std::string>(), j.at("score").get<double>(), j.at("flagged").get<bool>()};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("classification line: ") + e.what());
    }
}

void save_classifications(std::span<const Classification> items, const std::filesystem::path& path) {
    std::string out;
    for (const auto& c : items) out += classification_to_line(c) + '\n';
    write_file(path, out);
}

std::vector<Classification> load_classifications(const std::filesystem::path& path) {
    std::vector<Classification> out;
    for (const auto& line : read_lines(path)) {
        if (!line.empty()) out.push_back(classification_from_line(line));
    }
    return out;
}

}  // namespace chesty
