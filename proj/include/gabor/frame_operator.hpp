#pragma once

#include "gabor/signal.hpp"

#include <Eigen/Dense>

#include <functional>

namespace gabor {

/// Real function of a real spectral variable, used for the functional calculus
/// phi(S).
using ScalarFunction = std::function<double(double)>;

/// Relative threshold below which the lower frame bound is treated as zero.
inline constexpr double kFrameThreshold = 1e-12;

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool is_frame() const noexcept { return upper > 0.0 && lower > kFrameThreshold * upper; }
    double ratio() const noexcept { return upper > 0.0 ? lower / upper : 0.0; }
};

/// Dense Hermitian matrix. Construction checks Hermitian symmetry relative to
/// the largest entry.
class HermitianOperator {
public:
    explicit HermitianOperator(Eigen::MatrixXcd matrix, double tolerance = 1e-12);

    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

    ComplexSignal apply(const ComplexSignal& f) const;
    Eigen::VectorXd eigenvalues() const;

    /// phi(T) by eigendecomposition. Throws DomainError when phi is not finite
    /// at some eigenvalue.
    Eigen::MatrixXcd function(const ScalarFunction& phi) const;

private:
    Eigen::MatrixXcd matrix_;
};

/// Sf = sum_{n<N, m<M} <f, g_{n,m}> g_{n,m}, straight from analysis and synthesis.
ComplexSignal apply_S_naive(const GaborSystem& sys, const ComplexSignal& f);

/// The frame operator as an L x L matrix.
HermitianOperator dense_S(const GaborSystem& sys);

/// Extreme eigenvalues of dense_S. Throws NotAFrameError when the lower bound
/// is below kFrameThreshold times the upper one.
FrameBounds frame_bounds_dense(const GaborSystem& sys);

/// Correlations of g with its shifts along the adjoint lattice,
/// values(k, l) = <g, pi(k L/b, l L/a) g> for k < b, l < a.
struct JanssenCoefficients {
    Eigen::MatrixXcd values;
    LatticeParams lattice;
};

JanssenCoefficients janssen_coefficients(const GaborSystem& sys);

/// Janssen representation: Sf = R sum_{k,l} values(k, l) pi(k L/b, l L/a) f.
ComplexSignal apply_S_janssen(const GaborSystem& sys, const JanssenCoefficients& coeffs, const ComplexSignal& f);

/// sum_{k,l} |<g, pi(k L/b, l L/a) g>| over the b*a adjoint-lattice points.
double condition_a_sum(const GaborSystem& sys);

/// phi(S) f through the eigendecomposition of dense_S; the reference for every
/// other functional-calculus route.
ComplexSignal apply_phi_S(const GaborSystem& sys, const ComplexSignal& f, const ScalarFunction& phi);

/// S^alpha f from the binomial series around (A+B)/2, truncated after `terms`
/// terms. Converges geometrically with ratio (B-A)/(B+A).
ComplexSignal apply_power_series(const GaborSystem& sys, const ComplexSignal& f, double alpha, int terms,
                                 const FrameBounds& bounds);

} // namespace gabor
