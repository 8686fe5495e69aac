// Compares the serial reference loops against the OpenMP kernels on the two
// hot paths: batched map analysis and the per-sample scaling solves inside
// constrained_path. Wall times only; on a single hardware thread the two
// columns should roughly match, which is itself worth checking.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "resetgeo/classical_geometry.hpp"
#include "resetgeo/parallel.hpp"
#include "resetgeo/random_ensembles.hpp"
#include "resetgeo/scaling_paths.hpp"

using namespace resetgeo;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial_s,
              parallel_s, parallel_s > 0.0 ? serial_s / parallel_s : 0.0);
}

}  // namespace

int main() {
  std::printf("worker cap: %d thread(s)\n\n", max_threads());

  // batched analysis: bracket + margin + a short geodesic estimate per map
  {
    const int n_maps = 150;
    const int d = 6;
    std::vector<StochasticMap> maps;
    std::vector<UndesiredSet> sets;
    for (int i = 0; i < n_maps; ++i) {
      Rng rng(mix_seed(2024, static_cast<std::uint64_t>(i)));
      maps.push_back(random_map(rng, d));
      sets.push_back(random_undesired_set(rng, d));
    }
    std::vector<double> sink(n_maps);
    const auto body = [&](int i) {
      const auto br = complexity_bracket(maps[i]);
      const auto tm = tradeoff_margin(maps[i], sets[i]);
      const auto est = geodesic_upper_estimate(maps[i], 16, 120);
      sink[i] = br.upper + tm.margin + est.length;
    };
    const double ser = seconds([&] { serial_for(n_maps, body); });
    const double par = seconds([&] { parallel_for(n_maps, body); });
    report("batched map analysis", ser, par);
    double acc = 0.0;
    for (double v : sink) acc += v;
    std::printf("  checksum %.12g\n", acc);
  }

  // constrained path: one sinkhorn solve per schedule sample
  {
    Rng rng(mix_seed(2025, 0));
    const StochasticMap T = random_positive_map(rng, 8, 0.05);
    const auto schedule = log_linear_schedule(T, 192);
    double len_serial = 0.0, len_parallel = 0.0;
    const double ser =
        seconds([&] { len_serial = path_length(constrained_path(T, schedule, 0.5, 1e-11, false)); });
    const double par =
        seconds([&] { len_parallel = path_length(constrained_path(T, schedule, 0.5, 1e-11, true)); });
    report("constrained path solves", ser, par);
    std::printf("  lengths %.12g / %.12g\n", len_serial, len_parallel);
  }

  return 0;
}
