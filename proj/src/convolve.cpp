#include "fracfv/convolve.hpp"

#include <cstdlib>
#include <cstring>

#include <fftw3.h>

#include "fracfv/errors.hpp"

namespace fracfv {

namespace {
// FFTW plan creation/destruction is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

KernelConvolver2D::KernelConvolver2D(const KernelTable2D& table) {
    n_ = table.size();
    m_ = 2 * n_;
    const std::size_t total = static_cast<std::size_t>(m_) * m_;
    kernel_hat_.assign(total, {0.0, 0.0});
    work_.assign(total, {0.0, 0.0});

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan_fwd_ = fftw_plan_dft_2d(m_, m_, reinterpret_cast<fftw_complex*>(work_.data()),
                                     reinterpret_cast<fftw_complex*>(work_.data()), FFTW_FORWARD,
                                     FFTW_ESTIMATE);
        plan_bwd_ = fftw_plan_dft_2d(m_, m_, reinterpret_cast<fftw_complex*>(work_.data()),
                                     reinterpret_cast<fftw_complex*>(work_.data()), FFTW_BACKWARD,
                                     FFTW_ESTIMATE);
    }
    if (!plan_fwd_ || !plan_bwd_) throw SolverFailure("KernelConvolver2D: FFT planning failed");

    // Embed K(|p|,|q|), p,q in (-N, N), wrapping negatives to the top of the block.
    for (int p = -(n_ - 1); p <= n_ - 1; ++p) {
        const int pi = (p + m_) % m_;
        for (int q = -(n_ - 1); q <= n_ - 1; ++q) {
            const int qi = (q + m_) % m_;
            work_[static_cast<std::size_t>(qi) * m_ + pi] = table.entry(std::abs(p), std::abs(q));
        }
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(work_.data()),
                     reinterpret_cast<fftw_complex*>(work_.data()));
    kernel_hat_ = work_;
}

KernelConvolver2D::~KernelConvolver2D() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

Eigen::VectorXd KernelConvolver2D::apply(const Eigen::VectorXd& rho) const {
    if (rho.size() != static_cast<Eigen::Index>(n_) * n_)
        throw GridMismatch("KernelConvolver2D::apply: size mismatch");
    std::lock_guard<std::mutex> lock(mutex_);
    std::fill(work_.begin(), work_.end(), std::complex<double>{0.0, 0.0});
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            work_[static_cast<std::size_t>(j) * m_ + i] = rho[static_cast<Eigen::Index>(j) * n_ + i];

    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(work_.data()),
                     reinterpret_cast<fftw_complex*>(work_.data()));
    const double scale = 1.0 / (static_cast<double>(m_) * m_);
    for (std::size_t k = 0; k < work_.size(); ++k) work_[k] *= kernel_hat_[k] * scale;
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(work_.data()),
                     reinterpret_cast<fftw_complex*>(work_.data()));

    Eigen::VectorXd out(static_cast<Eigen::Index>(n_) * n_);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            out[static_cast<Eigen::Index>(j) * n_ + i] =
                work_[static_cast<std::size_t>(j) * m_ + i].real();
    return out;
}

} // namespace fracfv
