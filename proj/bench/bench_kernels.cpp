// Serial reference vs OpenMP kernels. The second benchmark argument selects
// the execution mode: 0 = serial, 1 = parallel.

#include <random>

#include <benchmark/benchmark.h>

#include "cflex/alignment.hpp"
#include "cflex/embedding.hpp"
#include "cflex/posstats.hpp"
#include "cflex/stats.hpp"
#include "cflex/treebank.hpp"

using namespace cflex;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

Corpus make_corpus(std::size_t chars, std::size_t alphabet) {
    std::mt19937_64 rng(1);
    // Zipf-like draw so the table has a realistic skew.
    std::vector<double> weights(alphabet);
    for (std::size_t k = 0; k < alphabet; ++k) weights[k] = 1.0 / static_cast<double>(k + 1);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    Corpus corpus;
    while (chars > 0) {
        const std::size_t len = std::min<std::size_t>(chars, 80);
        CorpusLine line;
        for (std::size_t i = 0; i < len; ++i) line.push_back(static_cast<char32_t>(0x4E00 + pick(rng)));
        corpus.push_back(std::move(line));
        chars -= len;
    }
    return corpus;
}

Treebank make_treebank(std::size_t sentences) {
    static const char* forms[] = {"之", "也", "而", "者", "于", "子", "君", "人", "曰", "行", "王", "天"};
    static const char* tags[] = {"PART", "PART", "CCONJ", "PART", "ADP", "NOUN", "NOUN", "NOUN", "VERB", "VERB", "NOUN", "NOUN"};
    std::mt19937_64 rng(2);
    Treebank tb;
    for (std::size_t s = 0; s < sentences; ++s) {
        Sentence sent;
        const std::size_t len = 3 + rng() % 15;
        for (std::size_t i = 0; i < len; ++i) {
            if (rng() % 8 == 0) {
                sent.tokens.push_back({"，", "PUNCT", CoarseTag::other});
                continue;
            }
            const std::size_t k = rng() % 12;
            sent.tokens.push_back({forms[k], tags[k], coarsen_tag(tags[k])});
        }
        tb.sentences.push_back(std::move(sent));
    }
    return tb;
}

void BM_Cooccurrence(benchmark::State& state) {
    const Corpus corpus = make_corpus(static_cast<std::size_t>(state.range(0)), 3000);
    const Vocabulary vocab = build_vocab(corpus, 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_cooccurrence(corpus, vocab, 10, mode(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cooccurrence)->ArgsProduct({{1 << 18, 1 << 20}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_GloveEpoch(benchmark::State& state) {
    const Corpus corpus = make_corpus(static_cast<std::size_t>(state.range(0)), 3000);
    const Vocabulary vocab = build_vocab(corpus, 1);
    const auto table = build_cooccurrence(corpus, vocab, 10, Execution::parallel);
    TrainConfig cfg;
    cfg.dim = 100;
    cfg.epochs = 1;
    cfg.min_frequency = 1;
    for (auto _ : state) benchmark::DoNotOptimize(train_glove(table, cfg, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(table.entries.size()));
}
BENCHMARK(BM_GloveEpoch)->ArgsProduct({{1 << 18}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ChangeDistances(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd xc(n, 300), xm(n, 300);
    for (Eigen::Index i = 0; i < xc.size(); ++i) {
        xc.data()[i] = normal(rng);
        xm.data()[i] = normal(rng);
    }
    const Eigen::MatrixXd r = procrustes_rotation(xc.topRows(std::min<Eigen::Index>(n, 2000)),
                                                  xm.topRows(std::min<Eigen::Index>(n, 2000)))
                                  .rotation;
    std::vector<char32_t> chars(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < chars.size(); ++i) chars[i] = static_cast<char32_t>(0x4E00 + i);
    for (auto _ : state) benchmark::DoNotOptimize(semantic_change_scores(xc, xm, r, chars, mode(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChangeDistances)->ArgsProduct({{10000}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_PositionDistributions(benchmark::State& state) {
    const Treebank tb = make_treebank(static_cast<std::size_t>(state.range(0)));
    const std::vector<std::string> fws = {"也", "之", "而", "者", "于"};
    for (auto _ : state) benchmark::DoNotOptimize(position_distributions(tb, fws, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tb.token_count()));
}
BENCHMARK(BM_PositionDistributions)->ArgsProduct({{50000}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_PermutationTest(benchmark::State& state) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    std::vector<double> x(2000), y(2000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = normal(rng);
        y[i] = 0.1 * x[i] + normal(rng);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(permutation_p_value(x, y, static_cast<std::size_t>(state.range(0)), 9, mode(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PermutationTest)->ArgsProduct({{2000}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
