#include <benchmark/benchmark.h>

#include "halfloop/dunkl.hpp"
#include "halfloop/gaudin.hpp"

using namespace halfloop;

namespace {

InnerModelSpec inner_spec(int L) {
  InnerModelSpec s;
  s.n = 2;
  s.N = 2;
  s.multiplicities = {1, 1};
  for (int l = 1; l <= L; ++l) {
    s.z.emplace_back(l);
    s.reps.push_back(RepMatrices::fundamental(2));
  }
  return s;
}

void BM_mul_parallel(benchmark::State& st) {
  const auto H = hamiltonians_inner(inner_spec(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(H[0] * H[1]);
}

void BM_mul_serial(benchmark::State& st) {
  const auto H = hamiltonians_inner(inner_spec(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mul_serial(H[0], H[1]));
}

void BM_hamiltonians_inner(benchmark::State& st) {
  const InnerModelSpec s = inner_spec(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hamiltonians_inner(s));
}

void BM_dunkl_power_sum(benchmark::State& st) {
  DunklSpec s;
  s.n = static_cast<int>(st.range(0));
  s.L = 2;
  for (auto _ : st) benchmark::DoNotOptimize(power_sum(s, 3));
}

}  // namespace

BENCHMARK(BM_mul_parallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mul_serial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hamiltonians_inner)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dunkl_power_sum)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
