#ifndef TTAGG_SRC_FFT_HPP_
#define TTAGG_SRC_FFT_HPP_

// Thin FFTW wrapper for the padded real transforms used by the gain
// operators. Plans are cached per length and built with FFTW_ESTIMATE, which
// keeps the chosen algorithm, and hence the rounding, identical run to run.

#include <cstddef>
#include <memory>

namespace ttagg::detail {

struct FftwFree {
    void operator()(double* p) const noexcept;
};

// Aligned storage for `fibers` in-place real transforms of length L. Each
// fiber holds L reals (after forward(): L/2 + 1 interleaved complex bins).
class SpectrumBuffer {
public:
    SpectrumBuffer(std::size_t fibers, std::size_t length);

    std::size_t fibers() const noexcept { return fibers_; }
    std::size_t length() const noexcept { return length_; }
    std::size_t bins() const noexcept { return length_ / 2 + 1; }

    double* fiber(std::size_t f) noexcept { return data_.get() + f * stride_; }
    const double* fiber(std::size_t f) const noexcept { return data_.get() + f * stride_; }

private:
    std::size_t fibers_;
    std::size_t length_;
    std::size_t stride_;
    std::unique_ptr<double[], FftwFree> data_;
};

// In-place transforms on a SpectrumBuffer fiber. Unnormalized: inverse(forward(x)) == L * x.
void forward_in_place(SpectrumBuffer& buffer, std::size_t fiber);
void inverse_in_place(SpectrumBuffer& buffer, std::size_t fiber);

} // namespace ttagg::detail

#endif // TTAGG_SRC_FFT_HPP_
