#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <Eigen/Core>

#include "fracfv/kernels.hpp"

namespace fracfv {

/// Applies the offset-indexed 2D kernel to a field in O(N^2 log N):
/// out[i,j] = sum_{k,l} rho[k,l] * K(|i-k|, |j-l|),
/// a symmetric block-Toeplitz matvec evaluated as a padded circular
/// convolution. The kernel spectrum is precomputed once per table.
/// apply() is serialised internally and bit-reproducible across runs.
class KernelConvolver2D {
public:
    explicit KernelConvolver2D(const KernelTable2D& table);
    ~KernelConvolver2D();

    KernelConvolver2D(const KernelConvolver2D&) = delete;
    KernelConvolver2D& operator=(const KernelConvolver2D&) = delete;

    int size() const { return n_; }

    /// rho and the result are x-fastest vectors of length N^2.
    Eigen::VectorXd apply(const Eigen::VectorXd& rho) const;

private:
    int n_ = 0;  // grid size N
    int m_ = 0;  // padded transform size (2N)
    std::vector<std::complex<double>> kernel_hat_;
    mutable std::vector<std::complex<double>> work_;
    mutable std::mutex mutex_;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

} // namespace fracfv
