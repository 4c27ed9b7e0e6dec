#pragma once

#include "gabor/frame_operator.hpp"
#include "gabor/signal.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gabor {

/// Tightness slack accepted for a competitor window in minimality_gap.
inline constexpr double kCompetitorTightness = 1e-8;

struct MinimalityReport {
    double d_lower = 0.0;      ///< ||g - h0||
    double d_competitor = 0.0; ///< ||g - h||
    double d_upper = 0.0;      ///< ||g + h0||
    bool pass = false;
};

/// ||S_h - I||_2 for the frame operator of (h, lat).
double tightness_residual(const ComplexSignal& h, const LatticeParams& lat);

/// Distances of g to its canonical tight window, to the competitor h and to
/// -h0. Throws ParameterError when h is not normalized tight to 1e-8, and
/// NotAFrameError when (g, lat) is not a frame.
MinimalityReport minimality_gap(const ComplexSignal& g, const ComplexSignal& h, const LatticeParams& lat);

/// A normalized tight competitor: the canonical tight window of a random window.
ComplexSignal random_tight_window(const LatticeParams& lat, std::uint64_t seed);

struct KantorovichResult {
    double lhs = 0.0; ///< <M^{-1} f, f> / (||f|| ||M^{-1} f||)
    double rhs = 0.0; ///< 2 sqrt(AB) / (A+B)
};

/// Throws ParameterError for f = 0 or bounds outside 0 < A <= B.
KantorovichResult kantorovich_check(const HermitianOperator& M, const ComplexSignal& f, double A, double B);

/// (sqrt(A), sqrt(B)) / sqrt(A+B): equality case for M = diag(A, B).
ComplexSignal kantorovich_extremal_vector(double A, double B);

/// Hermitian Toeplitz matrix with `diagonal` on the diagonal and `off` on the
/// first off-diagonals.
HermitianOperator tridiagonal_toeplitz(int dim, double diagonal, double off);

/// For each N in `sizes`: || T_N^{-1/2} probe_N - (T^{-1/2} probe)_N || where
/// T_N is the central (2N+1) x (2N+1) section of T (dim(T) = 2C+1, centre C).
/// Throws ParameterError for even dimensions, sizes that are not increasing
/// or exceed C, and DomainError when a section is not positive definite.
std::vector<double> finite_section_convergence(const HermitianOperator& T, const std::vector<int>& sizes,
                                               const ComplexSignal& probe);

/// Window on a critically sampled lattice whose frame operator has the
/// eigenvalue values[c] on Zak grid cell c (raster order, a*b cells).
/// Throws ParameterError unless p = q = 1, the size matches and all values
/// are positive.
ComplexSignal zak_window_with_spectrum(const std::vector<double>& values, const LatticeParams& lat);

/// Window on a critically sampled lattice (a b = L) whose Zak modulus is
/// sqrt(B) on the first round(t_frac L) grid cells in raster order and
/// sqrt(A) elsewhere; its frame bounds are exactly (A, B) when both values
/// occur. Throws ParameterError otherwise.
ComplexSignal two_valued_zak_window(double A, double B, double t_frac, const LatticeParams& lat);

struct CheckResult {
    std::string check_name;
    std::uint64_t instance_seed = 0;
    nlohmann::json values;
    bool pass = false;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int instances = 5;
    /// Windows claimed to be normalized tight for the lattice they carry; each
    /// adds a `supplied_window_tight` check.
    std::vector<GaborSystem> supplied_tight;
};

struct VerificationReport {
    std::uint64_t seed = 0;
    int instances = 0;
    std::vector<CheckResult> checks;

    bool pass() const;
    nlohmann::json to_json() const;
};

/// Minimality, Kantorovich, backend equivalence, norm identity, one-step
/// envelope, tightness and finite-section checks on `instances` seeded random
/// frames. Never throws for a failing check; exceptions raised inside a check
/// are recorded as a failure of that check.
VerificationReport run_verification(const VerifyOptions& opts);

} // namespace gabor
