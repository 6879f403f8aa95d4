#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "alphamod/util.hpp"

namespace alphamod {
namespace detail {

// Cached FFTW plans. Planning is serialized (FFTW planning is not
// thread-safe); execution through fftw_execute_dft on distinct buffers is.
// Plans are created with FFTW_UNALIGNED so they can run on any
// std::vector-backed buffer.
class PlanCache {
  public:
    // key: rank, axis length, sign, howmany, istride, idist
    using Key = std::tuple<int, int, int, int, std::ptrdiff_t, std::ptrdiff_t>;

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int rank, int n, int sign, int howmany, std::ptrdiff_t stride,
                  std::ptrdiff_t dist) {
        Key key{rank, n, sign, howmany, stride, dist};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        for (int d = 0; d < rank; ++d) total *= std::size_t(n);
        std::size_t span = total * std::size_t(stride) + std::size_t(howmany) * std::size_t(dist);
        std::vector<cdouble> scratch(span + 1);
        std::vector<int> dims(std::size_t(rank), n);
        fftw_plan plan = fftw_plan_many_dft(
            rank, dims.data(), howmany,
            reinterpret_cast<fftw_complex*>(scratch.data()), nullptr, int(stride), int(dist),
            reinterpret_cast<fftw_complex*>(scratch.data()), nullptr, int(stride), int(dist),
            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

// In-place unnormalized DFT over a rank-dimensional cube of side n.
// sign = FFTW_FORWARD computes sum_j e^{-2 pi i jk/n} v_j.
inline void raw_dft(cdouble* data, int rank, int n, int sign) {
    fftw_plan plan = PlanCache::instance().get(rank, n, sign, 1, 1, 0);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

// In-place DFT applied to one index block of a (block0, block1) array stored
// row-major with each block a rank-dim cube of side n. block == 0 transforms
// the leading block for every trailing index, block == 1 the reverse.
inline void raw_dft_block(cdouble* data, int rank, int n, int sign, int block) {
    std::ptrdiff_t cube = 1;
    for (int d = 0; d < rank; ++d) cube *= n;
    int howmany = int(cube);
    std::ptrdiff_t stride = (block == 0) ? cube : 1;
    std::ptrdiff_t dist = (block == 0) ? 1 : cube;
    fftw_plan plan = PlanCache::instance().get(rank, n, sign, howmany, stride, dist);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace detail
}  // namespace alphamod
