#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "wii/catalog.hpp"
#include "wii/fft.hpp"
#include "wii/features.hpp"
#include "wii/nn/model.hpp"
#include "wii/seed.hpp"
#include "wii/waveform.hpp"

namespace {

void BM_FftShifted(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  std::vector<std::complex<float>> x(static_cast<std::size_t>(state.range(0)));
  for (auto& v : x) v = {g(rng), g(rng)};
  for (auto _ : state) {
    auto y = wii::fft_shifted<float>(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_FftShifted)->Arg(128)->Arg(1024);

void BM_SynthFrame(benchmark::State& state) {
  const auto& spec = wii::class_spec(static_cast<int>(state.range(0)));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto frame = wii::synth_frame(spec, {}, seed++);
    benchmark::DoNotOptimize(frame.data());
  }
}
BENCHMARK(BM_SynthFrame)->Arg(1)->Arg(12)->Arg(14);

void BM_ProposedForward(benchmark::State& state) {
  const auto arch = wii::nn::proposed_cnn(static_cast<int>(state.range(0)), 15);
  wii::nn::Model<float> model(arch, 1);
  wii::nn::Matrix<float> batch = wii::nn::Matrix<float>::Random(256, model.input_size());
  for (auto _ : state) {
    auto p = model.predict(batch);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ProposedForward)->Arg(128)->Arg(52)->Arg(26)->Unit(benchmark::kMillisecond);

void BM_ProposedTrainStep(benchmark::State& state) {
  const auto arch = wii::nn::proposed_cnn(static_cast<int>(state.range(0)), 15);
  wii::nn::Model<float> model(arch, 1);
  wii::nn::Matrix<float> batch = wii::nn::Matrix<float>::Random(256, model.input_size());
  wii::nn::Matrix<float> grad = wii::nn::Matrix<float>::Constant(256, 15, 1e-3f);
  wii::Rng rng(1);
  for (auto _ : state) {
    model.forward_logits(batch, wii::nn::Mode::train, rng);
    model.backward(grad);
    model.adam_step();
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ProposedTrainStep)->Arg(128)->Arg(52)->Arg(26)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
