#include "rql/fft.hpp"

#include <mutex>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "rql/error.hpp"

namespace rql {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex *as_fftw(std::complex<double> *p) {
    return reinterpret_cast<fftw_complex *>(p);
}

} // namespace

Fft::Fft(std::size_t n) : size_(n) {
    if (n == 0) {
        throw InvalidArgument("FFT length must be positive");
    }
    std::vector<std::complex<double>> scratch(n);
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()),
                                as_fftw(scratch.data()), FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(len, as_fftw(scratch.data()),
                                 as_fftw(scratch.data()), FFTW_BACKWARD, flags);
}

Fft::Fft(std::size_t rows, std::size_t cols) : size_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw InvalidArgument("FFT shape must be positive");
    }
    std::vector<std::complex<double>> scratch(size_);
    std::lock_guard lock(planner_mutex());
    const int r = static_cast<int>(rows);
    const int c = static_cast<int>(cols);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_2d(r, c, as_fftw(scratch.data()),
                                as_fftw(scratch.data()), FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_2d(r, c, as_fftw(scratch.data()),
                                 as_fftw(scratch.data()), FFTW_BACKWARD, flags);
}

Fft::~Fft() { release(); }

Fft::Fft(Fft &&other) noexcept
    : size_(std::exchange(other.size_, 0)),
      forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

Fft &Fft::operator=(Fft &&other) noexcept {
    if (this != &other) {
        release();
        size_ = std::exchange(other.size_, 0);
        forward_ = std::exchange(other.forward_, nullptr);
        backward_ = std::exchange(other.backward_, nullptr);
    }
    return *this;
}

void Fft::release() noexcept {
    if (forward_ == nullptr && backward_ == nullptr) {
        return;
    }
    std::lock_guard lock(planner_mutex());
    if (forward_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    }
    if (backward_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(backward_));
    }
    forward_ = backward_ = nullptr;
}

void Fft::forward(std::span<std::complex<double>> data) const {
    if (data.size() != size_) {
        throw InvalidArgument("FFT buffer size mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(data.data()),
                     as_fftw(data.data()));
}

void Fft::backward(std::span<std::complex<double>> data) const {
    if (data.size() != size_) {
        throw InvalidArgument("FFT buffer size mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(data.data()),
                     as_fftw(data.data()));
}

} // namespace rql
