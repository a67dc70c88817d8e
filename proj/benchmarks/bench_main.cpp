#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "patmine/differ.hpp"
#include "patmine/matcher.hpp"
#include "patmine/normalizer.hpp"
#include "patmine/pattern_store.hpp"

namespace {

using namespace patmine;

const std::vector<std::string> kPool = {
    "int count = 0;",
    "count = count + 1;",
    "String name = input.trim();",
    "if (name == null) {",
    "}",
    "result.add(name);",
    "log(\"processing \" + name);",
    "for (int i = 0; i < items.size(); i++) {",
    "total += items.get(i).weight();",
    "stream.close();",
};

std::string java_source(std::size_t lines, unsigned seed) {
  std::mt19937 rng(seed);
  std::string s = "public class Bench {\n  public int work(List<Item> items, String input) {\n";
  for (std::size_t i = 0; i < lines; ++i) s += "    " + kPool[rng() % kPool.size()] + "\n";
  s += "    return 0;\n  }\n}\n";
  return s;
}

void BM_Tokenize(benchmark::State& state) {
  auto src = java_source(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(src));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_Tokenize)->Arg(100)->Arg(1000)->Arg(10000);

void BM_AbstractFile(benchmark::State& state) {
  auto src = java_source(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(abstract_file(src, "Bench.java"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_AbstractFile)->Arg(100)->Arg(1000)->Arg(10000);

void BM_LcsAlignSmallEdit(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto before = abstract_file(java_source(n, 3), "A.java").digests();
  auto after = before;
  after[after.size() / 2] = md5("edited ;");
  for (auto _ : state) benchmark::DoNotOptimize(lcs_align(before, after));
}
BENCHMARK(BM_LcsAlignSmallEdit)->Arg(1000)->Arg(10000);

void BM_LcsAlignUnrelated(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto before = abstract_file(java_source(n, 4), "A.java").digests();
  auto after = abstract_file(java_source(n, 5), "A.java").digests();
  for (auto _ : state) benchmark::DoNotOptimize(lcs_align(before, after));
}
BENCHMARK(BM_LcsAlignUnrelated)->Arg(100)->Arg(1000)->Arg(3000);

void BM_MatchRevision(benchmark::State& state) {
  const std::string commit(40, 'a');
  std::vector<CodeDelta> deltas;
  std::mt19937 rng(6);
  for (int i = 0; i < 200; ++i) {
    auto file = abstract_file(java_source(3, static_cast<unsigned>(rng())), "P.java");
    CodeDelta d;
    d.commit_id = commit;
    d.path = "P.java";
    d.before.assign(file.statements.begin() + 2, file.statements.begin() + 4);
    d.after.push_back(file.statements.back());
    d.before_line_span = LineSpan{d.before.front().line_span.first, d.before.back().line_span.last};
    d.after_line_span = d.after.front().line_span;
    deltas.push_back(std::move(d));
  }
  auto store = PatternStore::build({{commit, "", "dev", 0, "BUG-1", true}}, deltas);
  std::vector<Psbp> psbps;
  for (const auto& p : store.patterns()) psbps.push_back({p.id, {commit}});

  std::vector<NormalizedFile> files;
  for (int f = 0; f < state.range(0); ++f) {
    files.push_back(abstract_file(java_source(300, static_cast<unsigned>(f)), "F" + std::to_string(f) + ".java"));
  }
  for (auto _ : state) benchmark::DoNotOptimize(match_revision(store, psbps, files, 1));
}
BENCHMARK(BM_MatchRevision)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
