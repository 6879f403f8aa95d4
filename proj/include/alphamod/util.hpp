#pragma once

#include <atomic>
#include <complex>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace alphamod {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Deterministic splitmix64 stream. All randomness in the toolkit flows
// through this so that identical seeds give bit-identical runs on any
// standard-conforming build.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    // uniform in [-1,1)
    double uniform_symm() { return 2.0 * uniform() - 1.0; }
    // uniform on the complex unit disc boundary scaled by a uniform radius
    cdouble complex_in_disc() {
        double r = uniform();
        double t = kTwoPi * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }
};

// Stable per-(check,trial) substream seeds.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    Rng r(base ^ (0x9e3779b97f4a7c15ull * (salt + 0x632be59bd9b4e019ull)));
    return r.next_u64();
}

inline int default_jobs() {
    if (const char* env = std::getenv("ALPHAMOD_JOBS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

// Index-pull worker pool; results must be written to disjoint slots so the
// outcome is independent of the job count.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = int(std::min<std::size_t>(std::size_t(jobs), n));
    pool.reserve(std::size_t(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace alphamod
