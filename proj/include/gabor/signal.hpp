#pragma once

#include "gabor/lattice.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace gabor {

using cplx = std::complex<double>;

/// Length-L complex vector with cyclic indexing. Windows, duals and test
/// signals all live here.
using ComplexSignal = Eigen::VectorXcd;

/// N x M matrix of analysis coefficients c(n, m) = <f, g_{n,m}>.
using CoefficientArray = Eigen::MatrixXcd;

/// Window together with the lattice it is shifted along.
class GaborSystem {
public:
    GaborSystem(ComplexSignal window, LatticeParams lattice);

    const ComplexSignal& window() const noexcept { return window_; }
    const LatticeParams& lattice() const noexcept { return lattice_; }
    int length() const noexcept { return lattice_.L; }

    /// Same lattice, different window.
    GaborSystem with_window(ComplexSignal window) const { return {std::move(window), lattice_}; }

private:
    ComplexSignal window_;
    LatticeParams lattice_;
};

/// Table of the L-th roots of unity, exp(2 pi i k / L).
class UnitRoots {
public:
    explicit UnitRoots(int L);

    /// exp(2 pi i k / L) for any integer k.
    cplx operator()(std::int64_t k) const noexcept {
        std::int64_t r = k % L_;
        if (r < 0) r += L_;
        return table_[static_cast<std::size_t>(r)];
    }
    int size() const noexcept { return L_; }

private:
    int L_;
    std::vector<cplx> table_;
};

inline int wrap(std::int64_t i, int L) noexcept {
    std::int64_t r = i % L;
    return static_cast<int>(r < 0 ? r + L : r);
}

/// <x, y> = sum_t x[t] conj(y[t]); linear in the first argument.
cplx inner(const ComplexSignal& x, const ComplexSignal& y);

/// Time-frequency shift by lattice point (n a, m b):
/// result[t] = exp(2 pi i m b t / L) f[t - n a].
ComplexSignal tf_shift(const ComplexSignal& f, int n, int m, const LatticeParams& lat);

/// Raw time-frequency shift pi(x, w) f[t] = exp(2 pi i w t / L) f[t - x],
/// x and w in samples and DFT bins.
ComplexSignal tf_translate(const ComplexSignal& f, int x, int w);

CoefficientArray analysis(const ComplexSignal& f, const GaborSystem& sys);
ComplexSignal synthesis(const CoefficientArray& c, const GaborSystem& sys);

/// Unitary DFT, F[k] = L^{-1/2} sum_t f[t] exp(-2 pi i k t / L).
ComplexSignal unitary_dft(const ComplexSignal& f);

enum class GaussianAmplitude {
    UnitNorm, ///< rescaled to unit l2 norm
    Sampled,  ///< raw samples of 2^{1/4} exp(-pi x^2) at x = t / sqrt(L)
};

/// Periodized Gaussian g[t] = sum_{|j|<=3} exp(-pi (t + jL)^2 / L), which is
/// invariant under the unitary DFT.
ComplexSignal gaussian_window(const LatticeParams& lat, GaussianAmplitude amplitude = GaussianAmplitude::UnitNorm);

/// Unit-norm window with i.i.d. complex normal entries; deterministic in `seed`.
ComplexSignal random_window(const LatticeParams& lat, std::uint64_t seed);

} // namespace gabor
