#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chesty/corpus.hpp"
#include "chesty/neural.hpp"
#include "chesty/stratagem.hpp"
#include "chesty/textenc.hpp"

namespace chesty {

struct TrainingConfig {
    nn::Architecture arch;
    int epochs = 30;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    // Multiplied into the learning rate after every epoch.
    double lr_decay = 1.0;
    double validation_fraction = 0.2;
    std::uint64_t seed = 1;
    // Stop after this many epochs without a better checkpoint; 0 disables.
    int patience = 0;
    // Loss weight of positive examples; 1 means no reweighting.
    double positive_weight = 1.0;

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct ModelMetadata {
    std::string vocab_hash;
    std::int64_t input_length = 0;
    double threshold = 0.5;
};

struct ClassifierModel {
    Vocabulary vocab;
    nn::ConvTextModel<float> network;
    ModelMetadata meta;
};

struct TrainResult {
    ClassifierModel model;
    std::vector<EpochStats> history;
    int best_epoch = 0;
    std::vector<std::string> validation_ids;
};

/// Trains on every corpus tweet that has a label. The split is stratified, the
/// vocabulary comes from the training side only, and the returned weights are
/// those of the epoch with the best validation accuracy (lower validation loss
/// breaks ties). Deterministic per cfg.seed.
TrainResult train(const Corpus& corpus, const std::map<std::string, StratagemLabel>& labels,
                  const TrainingConfig& cfg);
TrainResult train(const Corpus& corpus, const LabelStore& labels, const TrainingConfig& cfg);

struct Classification {
    std::string tweet_id;
    double score = 0.0;
    bool flagged = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

nn::IndexBatch encode_batch(std::span<const std::string> texts, const Vocabulary& vocab, std::size_t input_length);

/// Scores every tweet; flagged iff score >= threshold. Sorted by score
/// descending, then tweet_id. Throws FormatError when the vocabulary does not
/// match the hash the model was trained with.
std::vector<Classification> classify(const ClassifierModel& model, std::span<const TweetRecord> tweets,
                                     double threshold = 0.5);

enum class Adjudication { ObviousTrue, ContextTrue, FalsePositive };

const char* adjudication_name(Adjudication a);
Adjudication parse_adjudication(std::string_view name);

struct AdjudicationRecord {
    std::string tweet_id;
    Adjudication category = Adjudication::ObviousTrue;
};

std::string adjudication_to_line(const AdjudicationRecord& record);
AdjudicationRecord adjudication_from_line(std::string_view line);
/// Latest record per tweet wins.
std::map<std::string, Adjudication> load_adjudications(const std::filesystem::path& path);
void append_adjudication_line(const std::filesystem::path& path, const AdjudicationRecord& record);

struct FindingsBreakdown {
    std::size_t flagged = 0;
    std::size_t obvious_true = 0;
    std::size_t context_true = 0;
    std::size_t false_positive = 0;
    std::size_t unadjudicated = 0;

    // Fractions of the flagged count.
    double obvious_rate() const;
    double context_rate() const;
    double false_positive_rate() const;
};

struct EvalReport {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::optional<FindingsBreakdown> findings;

    std::size_t total() const { return true_positive + false_positive + true_negative + false_negative; }
};

/// Confusion counts of `predictions` against `labels` (every prediction must
/// have a label). With adjudications, flagged predictions are also split into
/// the three review categories.
EvalReport evaluate(std::span<const Classification> predictions, const std::map<std::string, StratagemLabel>& labels,
                    const std::map<std::string, Adjudication>* adjudications = nullptr);
EvalReport evaluate(const ClassifierModel& model, const Corpus& corpus,
                    const std::map<std::string, StratagemLabel>& labels,
                    const std::map<std::string, Adjudication>* adjudications = nullptr, double threshold = 0.5);

/// Rates over flagged predictions alone.
FindingsBreakdown findings_breakdown(std::span<const Classification> predictions,
                                     const std::map<std::string, Adjudication>& adjudications);

std::string eval_report_json(const EvalReport& report);

// Persistence: checkpoint plus a "<stem>.meta.json" sidecar binding the
// vocabulary hash, input_length and threshold; the vocabulary file is separate.
std::filesystem::path metadata_path_for(const std::filesystem::path& checkpoint_path);
void save_classifier(const ClassifierModel& model, const std::filesystem::path& checkpoint_path,
                     const std::filesystem::path& vocab_path);
ClassifierModel load_classifier(const std::filesystem::path& checkpoint_path, const std::filesystem::path& vocab_path);

// "tweet_id score flagged" objects, one per line.
std::string classification_to_line(const Classification& c);
Classification classification_from_line(std::string_view line);
void save_classifications(std::span<const Classification> items, const std::filesystem::path& path);
std::vector<Classification> load_classifications(const std::filesystem::path& path);

}  // namespace chesty
