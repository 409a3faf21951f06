#include "ocr/network.hpp"
#include "ocr/preprocess.hpp"
#include "ocr/rng.hpp"
#include "ocr/segment.hpp"
#include "ocr/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace ocr;

GrayImage bench_page() {
    // Same page for every preprocessing benchmark.
    std::vector<Example> digits;
    for (int d = 0; d < 5; ++d)
        digits.push_back({digit_glyph(d), std::uint8_t(d)});
    SyntheticParams p;
    p.noise_fraction = 0.02;
    return make_synthetic_page(digits, p, 1).page;
}

void bm_mean_shift(benchmark::State& state) {
    const GrayImage page = bench_page();
    for (auto _ : state)
        benchmark::DoNotOptimize(mean_shift_filter(page));
}
BENCHMARK(bm_mean_shift)->Unit(benchmark::kMillisecond);

void bm_median_blur(benchmark::State& state) {
    const GrayImage page = bench_page();
    for (auto _ : state)
        benchmark::DoNotOptimize(median_blur(page, 3));
}
BENCHMARK(bm_median_blur)->Unit(benchmark::kMillisecond);

void bm_canny(benchmark::State& state) {
    const GrayImage page = bench_page();
    for (auto _ : state)
        benchmark::DoNotOptimize(canny(page));
}
BENCHMARK(bm_canny)->Unit(benchmark::kMillisecond);

void bm_components_and_dedup(benchmark::State& state) {
    const BinaryImage edges = canny(bench_page());
    for (auto _ : state) {
        const auto comps = find_components(edges, 9);
        std::vector<Box> boxes;
        for (const auto& c : comps)
            boxes.push_back(c.box);
        benchmark::DoNotOptimize(dedup_boxes(boxes));
    }
}
BENCHMARK(bm_components_and_dedup)->Unit(benchmark::kMillisecond);

void bm_segment_page(benchmark::State& state) {
    const GrayImage page = bench_page();
    for (auto _ : state)
        benchmark::DoNotOptimize(segment_page(page));
}
BENCHMARK(bm_segment_page)->Unit(benchmark::kMillisecond);

void bm_forward(benchmark::State& state) {
    const Model model = make_model({784, 128, 10});
    Rng rng(2);
    std::vector<double> x(784);
    for (double& v : x)
        v = rng.real01();
    for (auto _ : state)
        benchmark::DoNotOptimize(forward(model, x));
}
BENCHMARK(bm_forward);

void bm_forward_backward(benchmark::State& state) {
    const Model model = make_model({784, 128, 10});
    Rng rng(3);
    std::vector<double> x(784);
    for (double& v : x)
        v = rng.real01();
    for (auto _ : state) {
        ForwardCache cache;
        forward(model, x, &cache);
        benchmark::DoNotOptimize(backward(model, cache, 4));
    }
}
BENCHMARK(bm_forward_backward);

void bm_adam_step(benchmark::State& state) {
    Model model = make_model({784, 128, 10});
    AdamState adam = make_adam_state(model);
    Gradients grads;
    for (const Matrix& w : model.weights)
        grads.weights.emplace_back(w.rows, w.cols);
    Rng rng(4);
    for (Matrix& g : grads.weights)
        for (double& v : g.data)
            v = rng.real(-0.1, 0.1);
    for (auto _ : state) {
        adam_step(model, grads, adam, 0.002);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(bm_adam_step);

} // namespace

BENCHMARK_MAIN();
