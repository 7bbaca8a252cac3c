#include <doctest.h>

#include <cmath>

#include "chesty/chestybot.hpp"
#include "chesty/synthetic.hpp"

using namespace chesty;

namespace {

const std::filesystem::path kFixtures = CHESTY_FIXTURE_DIR;

struct Small {
    SyntheticCorpus data;
    TrainingConfig cfg;
};

Small small_setup(std::uint64_t seed = 1) {
    SyntheticSpec spec;
    spec.n_tweets = 160;
    spec.n_positive = 30;
    spec.themes = load_lexicons();
    spec.seed = 11;
    Small s{generate_synthetic(spec), {}};
    s.cfg.arch = {256, 24, 8, 8, 3};
    s.cfg.epochs = 3;
    s.cfg.seed = seed;
    return s;
}

std::map<std::string, StratagemLabel> positive_map(std::initializer_list<std::pair<std::string, bool>> items) {
    std::map<std::string, StratagemLabel> out;
    for (auto [id, pos] : items) {
        StratagemLabel l;
        l.inform = pos;
        out[id] = l;
    }
    return out;
}

}  // namespace

TEST_CASE("training is deterministic per seed") {
    auto s = small_setup(1);
    auto a = train(s.data.corpus, s.data.truth, s.cfg);
    auto b = train(s.data.corpus, s.data.truth, s.cfg);
    const auto& pa = a.model.network.params();
    CHECK(nn::checkpoint_bytes(s.cfg.arch, pa) == nn::checkpoint_bytes(s.cfg.arch, b.model.network.params()));
    CHECK(a.history.size() == 3);
    CHECK(a.validation_ids == b.validation_ids);
    CHECK(a.model.meta.vocab_hash == a.model.vocab.digest());

    s.cfg.seed = 2;
    auto c = train(s.data.corpus, s.data.truth, s.cfg);
    CHECK(nn::checkpoint_bytes(s.cfg.arch, pa) != nn::checkpoint_bytes(s.cfg.arch, c.model.network.params()));
}

TEST_CASE("training needs both classes") {
    auto s = small_setup();
    std::map<std::string, StratagemLabel> negatives;
    for (const auto& [id, l] : s.data.truth)
        if (!is_propaganda(l)) negatives[id] = l;
    CHECK_THROWS_AS(train(s.data.corpus, negatives, s.cfg), InvalidInput);
    s.cfg.epochs = 0;
    CHECK_THROWS_AS(train(s.data.corpus, s.data.truth, s.cfg), ConfigError);
}

TEST_CASE("classification contract") {
    auto s = small_setup();
    auto r = train(s.data.corpus, s.data.truth, s.cfg);
    const auto& tweets = s.data.corpus.tweets;

    CHECK(classify(r.model, std::span<const TweetRecord>{}).empty());
    auto all = classify(r.model, tweets, 0.5);
    REQUIRE(all.size() == tweets.size());
    for (std::size_t i = 1; i < all.size(); ++i) {
        bool ordered = all[i - 1].score > all[i].score ||
                       (all[i - 1].score == all[i].score && all[i - 1].tweet_id < all[i].tweet_id);
        CHECK(ordered);
    }
    for (const auto& c : all) {
        CHECK((c.score >= 0.0 && c.score <= 1.0));
        CHECK(c.flagged == (c.score >= 0.5));
    }

    std::size_t previous = tweets.size() + 1;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        std::size_t n = 0;
        for (const auto& c : classify(r.model, tweets, t)) n += c.flagged;
        CHECK(n <= previous);
        previous = n;
    }
    std::size_t at_one = 0;
    for (const auto& c : classify(r.model, tweets, 1.0)) at_one += c.score < 1.0 ? c.flagged : 0;
    CHECK(at_one == 0);

    auto tampered = r.model;
    tampered.meta.vocab_hash = std::string(64, '0');
    CHECK_THROWS_AS(classify(tampered, tweets), FormatError);
}

TEST_CASE("classifier persistence round trip") {
    auto s = small_setup();
    auto r = train(s.data.corpus, s.data.truth, s.cfg);
    auto dir = std::filesystem::temp_directory_path() / "chesty_classifier";
    std::filesystem::create_directories(dir);
    save_classifier(r.model, dir / "model.ckpt", dir / "vocab.txt");
    CHECK(std::filesystem::exists(metadata_path_for(dir / "model.ckpt")));
    auto back = load_classifier(dir / "model.ckpt", dir / "vocab.txt");
    CHECK(classify(back, s.data.corpus.tweets) == classify(r.model, s.data.corpus.tweets));

    write_file(dir / "other_vocab.txt", "0 <pad>\n1 <oov>\n2 zzz\n");
    CHECK_THROWS_AS(load_classifier(dir / "model.ckpt", dir / "other_vocab.txt"), FormatError);
}

TEST_CASE("evaluate confusion counts") {
    auto labels = positive_map({{"a", true}, {"b", true}, {"c", false}, {"d", false}});
    std::vector<Classification> perfect{{"a", 0.9, true}, {"b", 0.8, true}, {"c", 0.1, false}, {"d", 0.2, false}};
    auto p = evaluate(perfect, labels);
    CHECK(p.accuracy == 1.0);
    CHECK(p.precision == 1.0);
    CHECK(p.recall == 1.0);

    std::vector<Classification> mixed{{"a", 0.9, true}, {"b", 0.1, false}, {"c", 0.7, true}, {"d", 0.2, false}};
    auto m = evaluate(mixed, labels);
    CHECK(m.true_positive == 1);
    CHECK(m.false_negative == 1);
    CHECK(m.false_positive == 1);
    CHECK(m.true_negative == 1);
    CHECK(m.precision == 0.5);

    std::vector<Classification> none{{"a", 0.1, false}, {"c", 0.1, false}};
    CHECK(evaluate(none, labels).precision == 0.0);

    CHECK_THROWS_AS(evaluate(std::span<const Classification>{}, labels), InvalidInput);
    std::vector<Classification> stray{{"zz", 0.9, true}};
    CHECK_THROWS_AS(evaluate(stray, labels), InvalidInput);
}

TEST_CASE("all-negative predictor on the desk-scale corpus") {
    SyntheticSpec spec;
    spec.themes = load_lexicons();
    auto data = generate_synthetic(spec);
    std::vector<Classification> preds;
    for (const auto& t : data.corpus.tweets) preds.push_back({t.tweet_id, 0.0, false});
    auto r = evaluate(preds, data.truth);
    CHECK(r.true_negative == 820);
    CHECK(r.false_negative == 62);
    CHECK(r.accuracy == doctest::Approx(820.0 / 882.0).epsilon(1e-12));
}

TEST_CASE("findings fixture breakdown") {
    auto preds = load_classifications(kFixtures / "findings_classifications.jsonl");
    auto adj = load_adjudications(kFixtures / "findings_adjudications.jsonl");
    auto f = findings_breakdown(preds, adj);
    CHECK(f.flagged == 241);
    CHECK(f.obvious_true == 223);
    CHECK(f.context_true == 14);
    CHECK(f.false_positive == 4);
    CHECK(f.unadjudicated == 0);
    CHECK(std::abs(100 * f.obvious_rate() - 92.53) <= 0.01);
    CHECK(std::abs(100 * f.context_rate() - 5.81) <= 0.01);
    CHECK(std::abs(100 * f.false_positive_rate() - 1.66) <= 0.01);
    auto json = eval_report_json(EvalReport{0, 0, 0, 0, 0, 0, 0, f});
    CHECK(json.find("\"obvious_true\":223") != std::string::npos);
}

TEST_CASE("adjudication lines") {
    CHECK(std::string(adjudication_name(Adjudication::ContextTrue)) == "context_true");
    CHECK(parse_adjudication("false_positive") == Adjudication::FalsePositive);
    CHECK_THROWS_AS(parse_adjudication("maybe"), FormatError);
    auto path = std::filesystem::temp_directory_path() / "chesty_adj.jsonl";
    std::filesystem::remove(path);
    append_adjudication_line(path, {"t1", Adjudication::ObviousTrue});
    append_adjudication_line(path, {"t1", Adjudication::FalsePositive});
    auto adj = load_adjudications(path);
    REQUIRE(adj.size() == 1);
    CHECK(adj.at("t1") == Adjudication::FalsePositive);
}

TEST_CASE("classification lines round trip") {
    std::vector<Classification> items{{"x", 0.8125, true}, {"y", 0.1, false}};
    auto path = std::filesystem::temp_directory_path() / "chesty_cls.jsonl";
    save_classifications(items, path);
    CHECK(load_classifications(path) == items);
    CHECK_THROWS_AS(classification_from_line(R"({"tweet_id":"x"})"), FormatError);
}
