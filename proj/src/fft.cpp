#include "fft.hpp"

#include "ttagg/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <string>

namespace ttagg::detail {

namespace {

struct PlanPair {
    fftw_plan forward;
    fftw_plan inverse;
};

// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(std::size_t length) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(length);
    if (it != cache.end()) return it->second;

    SpectrumBuffer scratch(1, length);
    double* real = scratch.fiber(0);
    auto* complex = reinterpret_cast<fftw_complex*>(real);
    const int n = static_cast<int>(length);
    PlanPair plans{fftw_plan_dft_r2c_1d(n, real, complex, FFTW_ESTIMATE),
                   fftw_plan_dft_c2r_1d(n, complex, real, FFTW_ESTIMATE)};
    if (plans.forward == nullptr || plans.inverse == nullptr) {
        throw NumericalError("FFTW failed to create a plan of length " + std::to_string(length));
    }
    return cache.emplace(length, plans).first->second;
}

} // namespace

void FftwFree::operator()(double* p) const noexcept { fftw_free(p); }

SpectrumBuffer::SpectrumBuffer(std::size_t fibers, std::size_t length)
    : fibers_(fibers), length_(length) {
    // room for L/2 + 1 complex bins, padded to 64 bytes so every fiber keeps
    // the alignment the cached plans were made with
    stride_ = (2 * (length / 2 + 1) + 7) / 8 * 8;
    const std::size_t total = std::max<std::size_t>(1, fibers * stride_);
    data_.reset(static_cast<double*>(fftw_malloc(total * sizeof(double))));
    if (!data_) throw std::bad_alloc();
}

void forward_in_place(SpectrumBuffer& buffer, std::size_t fiber) {
    const auto& plans = plans_for(buffer.length());
    double* real = buffer.fiber(fiber);
    fftw_execute_dft_r2c(plans.forward, real, reinterpret_cast<fftw_complex*>(real));
}

void inverse_in_place(SpectrumBuffer& buffer, std::size_t fiber) {
    const auto& plans = plans_for(buffer.length());
    double* real = buffer.fiber(fiber);
    fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(real), real);
}

} // namespace ttagg::detail
