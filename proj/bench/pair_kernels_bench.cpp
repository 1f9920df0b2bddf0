// Serial reference vs OpenMP pair kernels on dense 1D and 2D windows.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include "fraclap/kernel.hpp"
#include "fraclap/pair_kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

struct Setup {
  fraclap::KernelWeights k;
  fraclap::PairView view;
  std::vector<double> u;
  std::vector<double> xi;
  std::vector<double> grad;

  Setup(int dim, double h, double p) {
    const fraclap::Window w = dim == 1 ? fraclap::Window::symmetric(1, h, {1.0, 0.0})
                                       : fraclap::Window::symmetric(2, h, {1.5, 1.0});
    k = fraclap::build_kernel(w, 0.5, p);
    view = fraclap::PairView{k.size(), p, k.w, k.kappa};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    u.resize(k.size());
    xi.resize(k.size());
    grad.resize(k.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = d(rng);
      xi[i] = d(rng);
    }
  }
};

// args: dim, 1/h, 10*p
Setup make(const benchmark::State& st) {
  return Setup(static_cast<int>(st.range(0)), 1.0 / static_cast<double>(st.range(1)),
               static_cast<double>(st.range(2)) / 10.0);
}

template <bool Parallel>
void seminorm_gradient(benchmark::State& st) {
  Setup s = make(st);
  for (auto _ : st) {
    const double v = Parallel ? fraclap::parallel::seminorm_gradient(s.view, s.u, s.grad)
                              : fraclap::serial::seminorm_gradient(s.view, s.u, s.grad);
    benchmark::DoNotOptimize(v);
  }
  st.counters["pairs"] = static_cast<double>(s.view.n * s.view.n);
}

template <bool Parallel>
void sign_split(benchmark::State& st) {
  Setup s = make(st);
  fraclap::SignSplit out;
  for (auto _ : st) {
    if (Parallel) {
      fraclap::parallel::sign_split(s.view, s.u, out);
    } else {
      fraclap::serial::sign_split(s.view, s.u, out);
    }
    benchmark::DoNotOptimize(out.n_plus);
  }
}

template <bool Parallel>
void pairing(benchmark::State& st) {
  Setup s = make(st);
  for (auto _ : st) {
    benchmark::DoNotOptimize(Parallel ? fraclap::parallel::pairing(s.view, s.u, s.xi)
                                      : fraclap::serial::pairing(s.view, s.u, s.xi));
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int p10 : {15, 20, 30}) {
    b->Args({1, 256, p10});
    b->Args({2, 16, p10});
  }
  b->Unit(benchmark::kMicrosecond);
}

} // namespace

BENCHMARK(seminorm_gradient<false>)->Apply(sizes);
BENCHMARK(seminorm_gradient<true>)->Apply(sizes);
BENCHMARK(sign_split<false>)->Apply(sizes);
BENCHMARK(sign_split<true>)->Apply(sizes);
BENCHMARK(pairing<false>)->Apply(sizes);
BENCHMARK(pairing<true>)->Apply(sizes);

BENCHMARK_MAIN();
