#pragma once

#include "gabor/frame_operator.hpp"
#include "gabor/signal.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace gabor {

/// How S^{-1} g and S^{-1/2} g are evaluated.
enum class Backend {
    Dense,       ///< eigendecomposition of the L x L frame operator
    ZZ,          ///< p x p eigendecompositions on the Zibulski-Zeevi grid
    MatrixFreeCG ///< conjugate gradients on the Janssen representation; never forms S
};

/// Dense up to L = 512, ZZ above.
Backend default_backend(const LatticeParams& lat);

std::string_view backend_name(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

struct CgResult {
    ComplexSignal solution;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Conjugate gradients for a Hermitian positive definite operator given only
/// by its action.
CgResult conjugate_gradient(const std::function<ComplexSignal(const ComplexSignal&)>& apply, const ComplexSignal& rhs,
                            double tol, int max_iter);

/// gamma0 = S^{-1} g. Throws NotAFrameError when (g, a, b) is not a frame.
ComplexSignal canonical_dual(const GaborSystem& sys, Backend backend);
inline ComplexSignal canonical_dual(const GaborSystem& sys) {
    return canonical_dual(sys, default_backend(sys.lattice()));
}

/// h0 = S^{-1/2} g; (h0, a, b) is a normalized tight frame and ||h0||^2 = 1/R.
ComplexSignal canonical_tight(const GaborSystem& sys, Backend backend);
inline ComplexSignal canonical_tight(const GaborSystem& sys) {
    return canonical_tight(sys, default_backend(sys.lattice()));
}

/// (<h0, g> / <h0, h0>) h0, the closest window to g among all tight (not
/// necessarily normalized) windows.
ComplexSignal nearest_tight_scaled(const GaborSystem& sys);

struct NormIdentity {
    double dual_inner = 0.0;         ///< <g, S^{-1} g>
    double tight_norm_squared = 0.0; ///< ||h0||^2
    double inverse_redundancy = 0.0; ///< 1/R = a b / L
};

NormIdentity norm_identity(const GaborSystem& sys);

} // namespace gabor
