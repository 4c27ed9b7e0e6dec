#pragma once

#include "gabor/canonical.hpp"
#include "gabor/frame_operator.hpp"
#include "gabor/signal.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gabor {

/// Choice of (alpha_k, beta_k) in g_{k+1} = (alpha_k g_k + beta_k gamma_k) / 2.
enum class ScalingRule {
    Unscaled,  ///< alpha = beta = 1
    Norm,      ///< alpha = 1/||g_k||, beta = 1/||gamma_k||
    Frobenius, ///< alpha = sqrt(||gamma_k|| / ||g_k||), beta = 1/alpha; minimizes ||alpha g - gamma/alpha||
    Optimal,   ///< alpha = 1/beta = (A_k B_k)^{-1/4}; needs the frame bounds every step
};

std::string_view rule_name(ScalingRule rule);

struct ScalingParameters {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Throws ParameterError for non-positive norms, or for Optimal without a
/// positive lower bound.
ScalingParameters scaling_parameters(double norm_window, double norm_dual, const FrameBounds& bounds,
                                     ScalingRule rule);

struct IterationRecord {
    int iter = 0;
    double error = 0.0;       ///< normalized error (test mode) or successive distance
    double norm_window = 0.0; ///< ||g_k||
    double norm_dual = 0.0;   ///< ||S_k^{-1} g_k||
    double lower = 0.0;       ///< A_k
    double upper = 0.0;       ///< B_k
    double ratio = 0.0;       ///< A_k / B_k
};

enum class TraceStatus { Converged, MaxIterations };

struct IterationTrace {
    std::string method;
    std::vector<IterationRecord> records; ///< records[0] is the starting window
    TraceStatus status = TraceStatus::MaxIterations;

    /// Number of update steps taken.
    int iterations() const noexcept { return records.empty() ? 0 : records.back().iter; }
    std::vector<double> errors() const;
};

/// `iter,error,norm_g,norm_dual,A_k,B_k,ratio`, one row per record, full
/// precision scientific notation.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

struct NewtonOptions {
    double tol = 1e-14;
    int max_iter = 50;
    Backend backend = Backend::Dense;
    /// When set, the error is ||g_k/||g_k|| - ref/||ref|||| (test mode);
    /// otherwise the distance between successive normalized iterates.
    std::optional<ComplexSignal> reference;
};

struct NewtonResult {
    ComplexSignal limit;  ///< last iterate g_k
    ComplexSignal window; ///< g_k rescaled to ||.||^2 = 1/R, the estimate of h0
    IterationTrace trace;

    bool converged() const noexcept { return trace.status == TraceStatus::Converged; }
};

/// Scaled Newton iteration g_{k+1} = (alpha_k g_k + beta_k S_k^{-1} g_k) / 2.
/// Stops when the error drops to opts.tol; on max_iter the trace status is
/// MaxIterations and the partial result is returned.
NewtonResult newton_tight(const GaborSystem& sys, ScalingRule rule, const NewtonOptions& opts);

struct InvSqrtOptions {
    double tol = 1e-12; ///< on ||X M X - I||_2
    int max_iter = 100;
};

struct InvSqrtResult {
    Eigen::MatrixXcd inverse_sqrt;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Called with (k, X_k) after every step and once with (0, I); returning true
/// stops the iteration early and counts as convergence.
using InvSqrtObserver = std::function<bool(int, const Eigen::MatrixXcd&)>;

/// X_0 = I, X_{k+1} = 2 X_k (I + M X_k^2)^{-1}.
InvSqrtResult sherif_inv_sqrt(const HermitianOperator& M, const InvSqrtOptions& opts,
                              const InvSqrtObserver& observer = {});

/// X_0 = I, X_{k+1} = X_k (I + 8 (I + 3 M X_k^2)^{-1}) / 3.
InvSqrtResult lakic_inv_sqrt(const HermitianOperator& M, const InvSqrtOptions& opts,
                             const InvSqrtObserver& observer = {});

enum class InvSqrtMethod { Sherif, Lakic };

struct TightResult {
    ComplexSignal window;
    IterationTrace trace;

    bool converged() const noexcept { return trace.status == TraceStatus::Converged; }
};

struct TightViaInvSqrtOptions {
    double tol = 1e-12;
    int max_iter = 100;
    std::optional<ComplexSignal> reference; ///< as in NewtonOptions
};

/// h0 = S^{-1/2} g with S^{-1/2} from Sherif's or Lakic's iteration on the
/// dense frame operator divided by (A+B)/2. Stops at opts.tol, or once the
/// error rises again after falling below 1e3 * opts.tol (Sherif's form is
/// unstable past convergence when S is badly conditioned); the window is then
/// the last iterate before the rise.
TightResult tight_via_inv_sqrt(const GaborSystem& sys, InvSqrtMethod method, const TightViaInvSqrtOptions& opts);

/// Least-squares slope of log e_{k+1} against log e_k over the consecutive
/// pairs with e_{k+1} in (1e-13, 1e-2) and e_k in (1e-13, 1). Throws
/// ParameterError when fewer than two pairs qualify.
double convergence_order(const std::vector<double>& errors);
double convergence_order(const IterationTrace& trace);

/// C_k of the recursion C_k = 4 C_{k-1} / (1 + C_{k-1})^2.
double ratio_recursion(double c0, int k);

/// One-step envelope for norm-scaled Newton started from bounds (A, B):
/// R 2 sqrt(AB)/(A+B) <= A_1 and B_1 <= R (A+B)^2 / (4AB).
struct RecursionBounds {
    double lower_bound = 0.0;          ///< bound on A_1
    double upper_bound = 0.0;          ///< bound on B_1
    std::vector<double> ratio_sequence; ///< C_0 = A/B, C_1, ...
};

RecursionBounds bound_recursion_envelope(double A, double B, double R, int steps = 8);

} // namespace gabor
