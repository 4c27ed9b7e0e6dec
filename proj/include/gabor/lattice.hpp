#pragma once

#include <cstdint>
#include <string>

namespace gabor {

/// Separable time-frequency lattice on the cyclic group Z_L.
///
/// Time shifts are multiples of `a`, modulations multiples of `b` (in DFT
/// bins), both dividing `L`. The redundancy R = N*M/L = L/(a*b) is kept as the
/// reduced fraction q/p, where p/q = a*b/L is the discrete stand-in for the
/// continuous product ab.
struct LatticeParams {
    int L = 0;
    int a = 0;
    int b = 0;
    int N = 0; ///< number of time shifts, L / a
    int M = 0; ///< number of modulations, L / b
    int p = 0; ///< numerator of a*b/L in lowest terms
    int q = 0; ///< denominator of a*b/L in lowest terms

    /// False when N*M < L; such a system can never span C^L.
    bool can_be_frame = false;

    double redundancy() const noexcept { return static_cast<double>(q) / p; }
    double inverse_redundancy() const noexcept { return static_cast<double>(p) / q; }

    /// Zibulski-Zeevi grid extents (see zak.hpp).
    int zz_time_cells() const noexcept { return a / p; }
    int zz_freq_cells() const noexcept { return b / p; }

    std::string describe() const;

    friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

/// Validates divisibility and fills in the derived fields.
/// Throws ParameterError when a or b does not divide L or any value is
/// non-positive. A lattice with N*M < L is returned with can_be_frame = false.
LatticeParams make_lattice(int L, int a, int b);

} // namespace gabor
