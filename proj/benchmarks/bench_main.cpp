#include <map>

#include <benchmark/benchmark.h>

#include "mltm/eval.hpp"
#include "mltm/synthetic.hpp"
#include "mltm/trainer.hpp"
#include "mltm/transfer.hpp"

namespace {

using namespace mltm;

const SyntheticData& corpus_for(std::size_t docs) {
  static std::map<std::size_t, SyntheticData> cache;
  auto it = cache.find(docs);
  if (it == cache.end()) {
    SyntheticParams p;
    p.docs_per_language = docs;
    p.vocab_per_language = 2000;
    p.topics = 20;
    p.doc_length = 100;
    it = cache.emplace(docs, generate_synthetic(p)).first;
  }
  return it->second;
}

void BM_TransferBuild(benchmark::State& state) {
  const auto& data = corpus_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto m = build_transfer_matrix(data.corpus.side2, data.corpus.side1, data.dictionary);
    benchmark::DoNotOptimize(m.rows.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TransferBuild)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Sweep(benchmark::State& state) {
  const auto& data = corpus_for(500);
  const auto kind = static_cast<ModelKind>(state.range(0));
  TrainSpec spec;
  spec.kind = kind;
  spec.hyperparams.topics = 20;
  spec.hyperparams.train_iterations = 5;
  spec.dictionary = &data.dictionary;
  if (uses_transfer(kind)) {
    auto pair = build_transfer_pair(data.corpus, data.dictionary, {0.5, FocusScope::kDocWise});
    spec.transfer_to_side2 = std::move(pair.to_side2);
    spec.transfer_to_side1 = std::move(pair.to_side1);
  }
  for (auto _ : state) {
    auto result = train(data.corpus, spec);
    benchmark::DoNotOptimize(result.model.phi[0].data());
  }
  const auto tokens = data.corpus.side1.total_tokens() + data.corpus.side2.total_tokens();
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * spec.hyperparams.train_iterations * tokens));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Sweep)
    ->Arg(static_cast<int>(ModelKind::kLda))
    ->Arg(static_cast<int>(ModelKind::kHardLink))
    ->Arg(static_cast<int>(ModelKind::kSoftLink))
    ->Arg(static_cast<int>(ModelKind::kVocLink))
    ->Unit(benchmark::kMillisecond);

void BM_Cnpmi(benchmark::State& state) {
  const auto& data = corpus_for(250);
  const auto records = generate_reference(data, static_cast<std::size_t>(state.range(0)), 3);
  const auto ref = encode_reference(records, data.corpus.side1.vocabulary, data.corpus.side2.vocabulary);
  TopicModel model;
  model.hyperparams.topics = data.params.topics;
  model.vocabularies = {data.corpus.side1.vocabulary, data.corpus.side2.vocabulary};
  model.phi = data.phi;
  for (auto _ : state) benchmark::DoNotOptimize(cnpmi_model(model, ref).mean);
}
BENCHMARK(BM_Cnpmi)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
