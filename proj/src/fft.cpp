#include "voicelab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace voicelab::fft {

namespace {

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t n = 0;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, e] : plans_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.in);
            fftw_free(e.out);
        }
    }

    // key: (total size, n1 for 2d or 0 for 1d, sign)
    PlanEntry& get(std::size_t n0, std::size_t n1, int sign) {
        const auto key = std::make_tuple(n0, n1, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        PlanEntry e;
        const std::size_t total = n1 == 0 ? n0 : n0 * n1;
        e.n = total;
        e.in = fftw_alloc_complex(total);
        e.out = fftw_alloc_complex(total);
        if (!e.in || !e.out) throw std::bad_alloc();
        if (n1 == 0) {
            e.plan = fftw_plan_dft_1d(static_cast<int>(n0), e.in, e.out, sign, FFTW_ESTIMATE);
        } else {
            e.plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), e.in, e.out,
                                      sign, FFTW_ESTIMATE);
        }
        if (!e.plan) throw std::runtime_error("fftw plan creation failed");
        return plans_.emplace(key, e).first->second;
    }

    std::mutex mutex;

private:
    std::map<std::tuple<std::size_t, std::size_t, int>, PlanEntry> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::vector<std::complex<double>>& data, std::size_t n0, std::size_t n1, int sign) {
    if (data.empty()) return;
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mutex);
    PlanEntry& e = c.get(n0, n1, sign);
    std::memcpy(e.in, reinterpret_cast<const double*>(data.data()), e.n * sizeof(fftw_complex));
    fftw_execute(e.plan);
    std::memcpy(reinterpret_cast<double*>(data.data()), e.out, e.n * sizeof(fftw_complex));
}

void scale(std::vector<std::complex<double>>& data, double s) {
    for (auto& x : data) x *= s;
}

}  // namespace

void forward(std::vector<std::complex<double>>& data) {
    execute(data, data.size(), 0, FFTW_FORWARD);
}

void inverse(std::vector<std::complex<double>>& data) {
    execute(data, data.size(), 0, FFTW_BACKWARD);
    scale(data, 1.0 / static_cast<double>(data.size()));
}

void forward2d(std::vector<std::complex<double>>& data, std::size_t n0, std::size_t n1) {
    if (data.size() != n0 * n1) throw std::invalid_argument("forward2d: size mismatch");
    execute(data, n0, n1, FFTW_FORWARD);
}

void inverse2d(std::vector<std::complex<double>>& data, std::size_t n0, std::size_t n1) {
    if (data.size() != n0 * n1) throw std::invalid_argument("inverse2d: size mismatch");
    execute(data, n0, n1, FFTW_BACKWARD);
    scale(data, 1.0 / static_cast<double>(data.size()));
}

}  // namespace voicelab::fft
