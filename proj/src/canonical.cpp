#include "gabor/canonical.hpp"

#include "gabor/error.hpp"
#include "gabor/iterate.hpp"
#include "gabor/zak.hpp"

#include <cmath>
#include <limits>

namespace gabor {
namespace {

constexpr double kCgTolerance = 1e-14;

void require_frame(const FrameBounds& bounds) {
    if (!bounds.is_frame()) {
        throw NotAFrameError("not a frame at working precision", bounds.lower, bounds.upper);
    }
}

/// phi(S) g via the dense eigendecomposition, after checking the frame bounds.
ComplexSignal dense_function(const GaborSystem& sys, const ScalarFunction& phi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_S(sys).matrix());
    const Eigen::VectorXd& ev = es.eigenvalues();
    require_frame(FrameBounds{std::max(0.0, ev[0]), ev[ev.size() - 1]});
    Eigen::VectorXd mapped = ev.unaryExpr([&](double s) { return phi(s); });
    const Eigen::MatrixXcd& V = es.eigenvectors();
    return V * (mapped.asDiagonal() * (V.adjoint() * sys.window()));
}

ComplexSignal zz_function(const GaborSystem& sys, const ScalarFunction& phi) {
    const ZZField field = zz_matrices(sys);
    require_frame(zz_field_bounds(field));
    return zz_inverse(zz_apply_phi_field(field, field, phi));
}

ComplexSignal cg_dual(const GaborSystem& sys) {
    if (sys.window().norm() == 0.0) throw NotAFrameError("zero window does not generate a frame", 0.0, 0.0);
    const JanssenCoefficients coeffs = janssen_coefficients(sys);
    const auto apply = [&](const ComplexSignal& f) { return apply_S_janssen(sys, coeffs, f); };
    const CgResult res = conjugate_gradient(apply, sys.window(), kCgTolerance, 4 * sys.length());
    if (!res.converged) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        throw NotAFrameError("conjugate gradients did not converge; frame operator is singular or nearly so", nan, nan);
    }
    return res.solution;
}

} // namespace

Backend default_backend(const LatticeParams& lat) { return lat.L <= 512 ? Backend::Dense : Backend::ZZ; }

std::string_view backend_name(Backend backend) {
    switch (backend) {
    case Backend::Dense: return "dense";
    case Backend::ZZ: return "zz";
    case Backend::MatrixFreeCG: return "cg";
    }
    return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) {
    if (name == "dense") return Backend::Dense;
    if (name == "zz") return Backend::ZZ;
    if (name == "cg") return Backend::MatrixFreeCG;
    return std::nullopt;
}

CgResult conjugate_gradient(const std::function<ComplexSignal(const ComplexSignal&)>& apply, const ComplexSignal& rhs,
                            double tol, int max_iter) {
    CgResult res;
    res.solution = ComplexSignal::Zero(rhs.size());
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        res.converged = true;
        return res;
    }
    ComplexSignal r = rhs;
    ComplexSignal p = r;
    double rr = r.squaredNorm();
    for (int it = 1; it <= max_iter; ++it) {
        const ComplexSignal Ap = apply(p);
        const double pAp = p.dot(Ap).real();
        if (!(pAp > 0.0)) break; // not positive definite
        const double step = rr / pAp;
        res.solution += step * p;
        r -= step * Ap;
        const double rr_next = r.squaredNorm();
        res.iterations = it;
        res.relative_residual = std::sqrt(rr_next) / rhs_norm;
        if (res.relative_residual <= tol) {
            res.converged = true;
            break;
        }
        p = r + (rr_next / rr) * p;
        rr = rr_next;
    }
    // Recursive residuals drift from the true one; report the true residual.
    if (res.converged) {
        res.relative_residual = (rhs - apply(res.solution)).norm() / rhs_norm;
    }
    return res;
}

ComplexSignal canonical_dual(const GaborSystem& sys, Backend backend) {
    switch (backend) {
    case Backend::Dense: return dense_function(sys, [](double s) { return 1.0 / s; });
    case Backend::ZZ: return zz_function(sys, [](double s) { return 1.0 / s; });
    case Backend::MatrixFreeCG: return cg_dual(sys);
    }
    throw ParameterError("unknown backend");
}

ComplexSignal canonical_tight(const GaborSystem& sys, Backend backend) {
    switch (backend) {
    case Backend::Dense: return dense_function(sys, [](double s) { return 1.0 / std::sqrt(s); });
    case Backend::ZZ: return zz_function(sys, [](double s) { return 1.0 / std::sqrt(s); });
    case Backend::MatrixFreeCG: {
        NewtonOptions opts;
        opts.backend = Backend::MatrixFreeCG;
        opts.tol = 1e-14;
        NewtonResult res = newton_tight(sys, ScalingRule::Norm, opts);
        if (!res.converged()) {
            throw ConvergenceError("matrix-free Newton iteration did not converge", res.trace.iterations());
        }
        return std::move(res.window);
    }
    }
    throw ParameterError("unknown backend");
}

ComplexSignal nearest_tight_scaled(const GaborSystem& sys) {
    const ComplexSignal h0 = canonical_tight(sys);
    return (inner(h0, sys.window()) / inner(h0, h0)) * h0;
}

NormIdentity norm_identity(const GaborSystem& sys) {
    const ComplexSignal dual = canonical_dual(sys);
    const ComplexSignal h0 = canonical_tight(sys);
    return NormIdentity{inner(sys.window(), dual).real(), h0.squaredNorm(), sys.lattice().inverse_redundancy()};
}

} // namespace gabor
