#include "gabor/frame_operator.hpp"

#include "gabor/error.hpp"
#include "gabor/kernels.hpp"

#include <cmath>
#include <sstream>

namespace gabor {

HermitianOperator::HermitianOperator(Eigen::MatrixXcd matrix, double tolerance) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw ParameterError("Hermitian operator must be square");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerance * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (asymmetry " << asym << ")";
        throw ParameterError(os.str());
    }
}

ComplexSignal HermitianOperator::apply(const ComplexSignal& f) const {
    if (f.size() != matrix_.cols()) throw ParameterError("operator/signal dimension mismatch");
    return matrix_ * f;
}

Eigen::VectorXd HermitianOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::MatrixXcd HermitianOperator::function(const ScalarFunction& phi) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    Eigen::VectorXd mapped(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        mapped[i] = phi(lambda[i]);
        if (!std::isfinite(mapped[i])) {
            std::ostringstream os;
            os << "function is not finite at eigenvalue " << lambda[i];
            throw DomainError(os.str());
        }
    }
    const Eigen::MatrixXcd& V = es.eigenvectors();
    return V * mapped.asDiagonal() * V.adjoint();
}

ComplexSignal apply_S_naive(const GaborSystem& sys, const ComplexSignal& f) {
    return synthesis(analysis(f, sys), sys);
}

HermitianOperator dense_S(const GaborSystem& sys) {
    Eigen::MatrixXcd S;
    kernels::walnut_matrix(sys.window(), sys.lattice(), S);
    return HermitianOperator(std::move(S));
}

FrameBounds frame_bounds_dense(const GaborSystem& sys) {
    const Eigen::VectorXd ev = dense_S(sys).eigenvalues();
    const FrameBounds bounds{std::max(0.0, ev[0]), ev[ev.size() - 1]};
    if (!bounds.is_frame()) {
        std::ostringstream os;
        os << "not a frame at working precision (A=" << ev[0] << ", B=" << bounds.upper << ")";
        throw NotAFrameError(os.str(), bounds.lower, bounds.upper);
    }
    return bounds;
}

JanssenCoefficients janssen_coefficients(const GaborSystem& sys) {
    JanssenCoefficients out{{}, sys.lattice()};
    kernels::janssen_coefficients(sys.window(), sys.lattice(), out.values);
    return out;
}

ComplexSignal apply_S_janssen(const GaborSystem& sys, const JanssenCoefficients& coeffs, const ComplexSignal& f) {
    if (!(coeffs.lattice == sys.lattice())) throw ParameterError("Janssen coefficients belong to another lattice");
    ComplexSignal out;
    kernels::janssen_apply(coeffs.values, f, sys.lattice(), out);
    return out;
}

double condition_a_sum(const GaborSystem& sys) {
    return janssen_coefficients(sys).values.cwiseAbs().sum();
}

ComplexSignal apply_phi_S(const GaborSystem& sys, const ComplexSignal& f, const ScalarFunction& phi) {
    if (f.size() != sys.length()) throw ParameterError("apply_phi_S: signal length does not match lattice");
    return dense_S(sys).function(phi) * f;
}

ComplexSignal apply_power_series(const GaborSystem& sys, const ComplexSignal& f, double alpha, int terms,
                                 const FrameBounds& bounds) {
    if (terms <= 0) throw ParameterError("power series needs at least one term");
    if (!bounds.is_frame()) throw NotAFrameError("power series needs A > 0", bounds.lower, bounds.upper);
    const HermitianOperator S = dense_S(sys);
    const double center = 0.5 * (bounds.lower + bounds.upper);

    // s^alpha = center^alpha sum_n binom(alpha, n) (-v)^n,  v = 1 - s / center
    ComplexSignal power = f; // (-V)^n f
    ComplexSignal acc = f;
    double binom = 1.0;
    for (int n = 1; n < terms; ++n) {
        power = S.apply(power) / center - power;
        binom *= (alpha - (n - 1)) / n;
        acc += binom * power;
    }
    return std::pow(center, alpha) * acc;
}

} // namespace gabor
