#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rql {

/// Unnormalized complex DFT plans (FFTW, estimate mode so results are
/// reproducible run to run). forward computes sum_j a_j e^{-2 pi i jk/n};
/// backward uses e^{+...}. Neither divides by n.
class Fft {
  public:
    /// 1D transform of length n.
    explicit Fft(std::size_t n);
    /// 2D row-major transform of shape rows x cols.
    Fft(std::size_t rows, std::size_t cols);
    ~Fft();

    Fft(const Fft &) = delete;
    Fft &operator=(const Fft &) = delete;
    Fft(Fft &&other) noexcept;
    Fft &operator=(Fft &&other) noexcept;

    [[nodiscard]] std::size_t size() const { return size_; }

    void forward(std::span<std::complex<double>> data) const;
    void backward(std::span<std::complex<double>> data) const;

  private:
    void release() noexcept;

    std::size_t size_ = 0;
    void *forward_ = nullptr;
    void *backward_ = nullptr;
};

} // namespace rql
