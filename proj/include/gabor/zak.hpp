#pragma once

#include "gabor/frame_operator.hpp"
#include "gabor/signal.hpp"

#include <Eigen/Dense>

#include <vector>

namespace gabor {

/// Discrete Zak transform values, lambda x K with K = L / lambda:
///   Z(r, s) = K^{-1/2} sum_k f[r - k lambda] exp(2 pi i k s / K).
/// The transform is unitary: ||Z||_F = ||f||.
struct ZakArray {
    Eigen::MatrixXcd values;

    int lambda() const noexcept { return static_cast<int>(values.rows()); }
    int K() const noexcept { return static_cast<int>(values.cols()); }
};

ZakArray zak_forward(const ComplexSignal& f, int lambda);
ComplexSignal zak_inverse(const ZakArray& z);

/// Zibulski-Zeevi block field of a signal for a lattice with a*b/L = p/q.
///
/// With the Zak transform at lambda = M = L/b (so K = b), the p x q block at
/// grid point (r, s), r < a/p, s < b/p, is
///   Phi(r, s)(k, l) = sqrt(L/p) * Z(r - l a, s + k b/p),
/// where Z is extended quasi-periodically in r. The map f -> Phi^f is sqrt(L/p)
/// times a unitary map, and it turns the frame operator into left
/// multiplication by Phi^g Phi^g* on every block. Each eigenvalue of a block
/// Gram matrix is an eigenvalue of S with multiplicity q.
struct ZZField {
    LatticeParams lattice;
    std::vector<Eigen::MatrixXcd> blocks; ///< row-major over (r, s)

    int time_cells() const noexcept { return lattice.zz_time_cells(); }
    int freq_cells() const noexcept { return lattice.zz_freq_cells(); }
    int cell_count() const noexcept { return static_cast<int>(blocks.size()); }
    const Eigen::MatrixXcd& at(int r, int s) const { return blocks[static_cast<std::size_t>(r * freq_cells() + s)]; }

    /// Sum of squared block entries; equals (L/p) ||f||^2.
    double squared_norm() const;
};

ZZField zz_transform(const ComplexSignal& f, const LatticeParams& lat);
ComplexSignal zz_inverse(const ZZField& field);

/// Phi^g for the window of `sys`.
ZZField zz_matrices(const GaborSystem& sys);

/// Extreme eigenvalues of Phi Phi* over the grid. Never throws: a zero window
/// gives (0, 0), which FrameBounds::is_frame() reports as not a frame.
FrameBounds zz_frame_bounds(const GaborSystem& sys);
FrameBounds zz_field_bounds(const ZZField& window_field);

/// Blockwise phi(Phi^g Phi^g*) Phi^f; the result is Phi^{phi(S) f}.
ZZField zz_apply_phi_field(const ZZField& window_field, const ZZField& signal_field, const ScalarFunction& phi);

/// phi(S) f computed through p x p eigendecompositions on the grid.
ComplexSignal zz_apply_phi(const GaborSystem& sys, const ComplexSignal& f, const ScalarFunction& phi);

/// Canonical tight window for integer oversampling (p = 1) by normalizing the
/// 1 x q rows of Phi^g to unit length. Throws ParameterError for p != 1 and
/// NotAFrameError when a row vanishes.
ComplexSignal zak_tight_integer(const GaborSystem& sys);

} // namespace gabor
