#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace conepath::fft {

using cplx = std::complex<double>;

// Smallest 2^a 3^b 5^c that is >= n.
inline std::size_t good_size(std::size_t n) {
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t p5 = 1; p5 < best; p5 *= 5)
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < n) v *= 2;
            if (v < best) best = v;
        }
    return best;
}

// Owning in-place complex FFT of fixed length. Plans use FFTW_ESTIMATE so the
// chosen algorithm, and with it the rounding, does not vary between runs.
class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw std::bad_alloc();
        forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(buf_);
    }

    std::size_t size() const noexcept { return n_; }

    std::span<cplx> data() noexcept { return {reinterpret_cast<cplx*>(buf_), n_}; }

    void forward() { fftw_execute(forward_); }
    // Unnormalized: backward(forward(x)) = n x.
    void backward() { fftw_execute(backward_); }

private:
    std::size_t n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

// Linear (non-circular) convolution with a fixed odd-length kernel centred at
// index W, by overlap-save on blocks of a fixed FFT size.
class OverlapSave {
public:
    explicit OverlapSave(std::span<const cplx> kernel) : taps_(kernel.size()) {
        if (taps_ % 2 == 0) throw std::invalid_argument("kernel length must be odd");
        block_ = good_size(std::max<std::size_t>(8 * taps_, 64));
        plan_ = std::make_unique<Plan>(block_);
        auto buf = plan_->data();
        std::fill(buf.begin(), buf.end(), cplx{});
        std::copy(kernel.begin(), kernel.end(), buf.begin());
        plan_->forward();
        spectrum_.assign(buf.begin(), buf.end());
        const double scale = 1.0 / static_cast<double>(block_);
        for (auto& s : spectrum_) s *= scale;
    }

    std::size_t half_width() const noexcept { return taps_ / 2; }

    // out[i] = sum_j kernel[j] * in[i - j + W] for i in [0, in.size() + 2W),
    // treating `in` as zero outside its range.
    std::vector<cplx> full(std::span<const cplx> in) {
        const std::size_t W = half_width();
        const std::size_t n_out = in.size() + 2 * W;
        std::vector<cplx> out(n_out);
        const std::size_t overlap = taps_ - 1;
        const std::size_t valid = block_ - overlap;
        auto buf = plan_->data();
        // output index i corresponds to input position i - 2W of the
        // zero-extended signal convolved with the causal kernel
        for (std::size_t start = 0; start < n_out; start += valid) {
            for (std::size_t k = 0; k < block_; ++k) {
                const long src = static_cast<long>(start + k) - static_cast<long>(overlap);
                buf[k] = (src >= 0 && src < static_cast<long>(in.size())) ? in[static_cast<std::size_t>(src)] : cplx{};
            }
            plan_->forward();
            for (std::size_t k = 0; k < block_; ++k) buf[k] *= spectrum_[k];
            plan_->backward();
            const std::size_t count = std::min(valid, n_out - start);
            for (std::size_t k = 0; k < count; ++k) out[start + k] = buf[overlap + k];
        }
        return out;
    }

private:
    std::size_t taps_;
    std::size_t block_ = 0;
    std::unique_ptr<Plan> plan_;
    std::vector<cplx> spectrum_;
};

} // namespace conepath::fft
