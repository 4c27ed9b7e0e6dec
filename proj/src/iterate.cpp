#include "gabor/iterate.hpp"

#include "gabor/error.hpp"
#include "gabor/kernels.hpp"
#include "gabor/zak.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace gabor {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Representation the Newton iteration runs in. States are linear images of
/// signals with ||signal|| = ||state||_F / scale, so every scaling rule can be
/// evaluated without leaving the representation.
struct NewtonSpace {
    Eigen::MatrixXcd start;
    double scale = 1.0;
    std::function<void(const Eigen::MatrixXcd&, Eigen::MatrixXcd&, FrameBounds&)> dual;
    std::function<Eigen::MatrixXcd(const ComplexSignal&)> embed;
    std::function<ComplexSignal(const Eigen::MatrixXcd&)> extract;
};

void require_frame(const FrameBounds& bounds) {
    if (!bounds.is_frame()) throw NotAFrameError("not a frame at working precision", bounds.lower, bounds.upper);
}

NewtonSpace dense_space(const GaborSystem& sys) {
    NewtonSpace space;
    space.start = sys.window();
    space.embed = [](const ComplexSignal& f) { return Eigen::MatrixXcd(f); };
    space.extract = [](const Eigen::MatrixXcd& x) { return ComplexSignal(x.col(0)); };
    space.dual = [lat = sys.lattice()](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& dual, FrameBounds& bounds) {
        Eigen::MatrixXcd S;
        kernels::walnut_matrix(x.col(0), lat, S);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
        const Eigen::VectorXd& ev = es.eigenvalues();
        bounds = FrameBounds{std::max(0.0, ev[0]), ev[ev.size() - 1]};
        require_frame(bounds);
        const Eigen::MatrixXcd& V = es.eigenvectors();
        dual = V * (ev.cwiseInverse().asDiagonal() * (V.adjoint() * x));
    };
    return space;
}

Eigen::MatrixXcd field_to_matrix(const ZZField& field) {
    const LatticeParams& lat = field.lattice;
    Eigen::MatrixXcd out(lat.p, static_cast<Eigen::Index>(lat.q) * field.cell_count());
    for (int c = 0; c < field.cell_count(); ++c) {
        out.middleCols(static_cast<Eigen::Index>(c) * lat.q, lat.q) = field.blocks[static_cast<std::size_t>(c)];
    }
    return out;
}

ZZField matrix_to_field(const Eigen::MatrixXcd& x, const LatticeParams& lat) {
    ZZField field{lat, {}};
    const int cells = static_cast<int>(x.cols() / lat.q);
    field.blocks.reserve(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) field.blocks.emplace_back(x.middleCols(static_cast<Eigen::Index>(c) * lat.q, lat.q));
    return field;
}

NewtonSpace zz_space(const GaborSystem& sys) {
    const LatticeParams lat = sys.lattice();
    NewtonSpace space;
    space.scale = std::sqrt(static_cast<double>(lat.L) / lat.p);
    space.embed = [lat](const ComplexSignal& f) { return field_to_matrix(zz_transform(f, lat)); };
    space.extract = [lat](const Eigen::MatrixXcd& x) { return zz_inverse(matrix_to_field(x, lat)); };
    space.start = space.embed(sys.window());
    space.dual = [lat](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& dual, FrameBounds& bounds) {
        const int cells = static_cast<int>(x.cols() / lat.q);
        dual.resize(x.rows(), x.cols());
        double lower = std::numeric_limits<double>::infinity();
        double upper = 0.0;
#pragma omp parallel for schedule(static) reduction(min : lower) reduction(max : upper)
        for (int c = 0; c < cells; ++c) {
            const auto cols = static_cast<Eigen::Index>(c) * lat.q;
            const Eigen::MatrixXcd block = x.middleCols(cols, lat.q);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block * block.adjoint());
            const Eigen::VectorXd& ev = es.eigenvalues();
            lower = std::min(lower, ev[0]);
            upper = std::max(upper, ev[ev.size() - 1]);
            const Eigen::MatrixXcd& V = es.eigenvectors();
            dual.middleCols(cols, lat.q) = V * (ev.cwiseInverse().asDiagonal() * (V.adjoint() * block));
        }
        bounds = FrameBounds{std::max(0.0, lower), upper};
        require_frame(bounds);
    };
    return space;
}

NewtonSpace cg_space(const GaborSystem& sys) {
    NewtonSpace space = dense_space(sys);
    space.dual = [lat = sys.lattice()](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& dual, FrameBounds& bounds) {
        const GaborSystem current(x.col(0), lat);
        bounds = zz_frame_bounds(current);
        require_frame(bounds);
        dual = canonical_dual(current, Backend::MatrixFreeCG);
    };
    return space;
}

double normalized_distance(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return (x / x.norm() - y / y.norm()).norm();
}

/// Spectral norm of X M X - I; the product is Hermitian up to rounding.
double inv_sqrt_residual(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& M) {
    const Eigen::Index n = M.rows();
    const Eigen::MatrixXcd R = X * M * X - Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd H = 0.5 * (R + R.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <class Step>
InvSqrtResult run_inv_sqrt(const HermitianOperator& M, const InvSqrtOptions& opts, const InvSqrtObserver& observer,
                           Step step) {
    const Eigen::Index n = M.dim();
    InvSqrtResult res;
    res.inverse_sqrt = Eigen::MatrixXcd::Identity(n, n);
    res.residual = inv_sqrt_residual(res.inverse_sqrt, M.matrix());
    if (observer && observer(0, res.inverse_sqrt)) {
        res.converged = true;
        return res;
    }
    if (res.residual <= opts.tol) {
        res.converged = true;
        return res;
    }
    for (int k = 1; k <= opts.max_iter; ++k) {
        res.inverse_sqrt = step(res.inverse_sqrt);
        res.iterations = k;
        if (!res.inverse_sqrt.allFinite()) break;
        res.residual = inv_sqrt_residual(res.inverse_sqrt, M.matrix());
        const bool stop = observer && observer(k, res.inverse_sqrt);
        if (stop || res.residual <= opts.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace

std::string_view rule_name(ScalingRule rule) {
    switch (rule) {
    case ScalingRule::Unscaled: return "unscaled";
    case ScalingRule::Norm: return "norm";
    case ScalingRule::Frobenius: return "frobenius";
    case ScalingRule::Optimal: return "optimal";
    }
    return "unknown";
}

ScalingParameters scaling_parameters(double norm_window, double norm_dual, const FrameBounds& bounds,
                                     ScalingRule rule) {
    if (!(norm_window > 0.0) || !(norm_dual > 0.0)) {
        throw ParameterError("scaling parameters need nonzero window and dual norms");
    }
    switch (rule) {
    case ScalingRule::Unscaled: return {1.0, 1.0};
    case ScalingRule::Norm: return {1.0 / norm_window, 1.0 / norm_dual};
    case ScalingRule::Frobenius: {
        const double alpha = std::sqrt(norm_dual / norm_window);
        return {alpha, 1.0 / alpha};
    }
    case ScalingRule::Optimal: {
        if (!(bounds.lower > 0.0) || !(bounds.upper >= bounds.lower)) {
            throw ParameterError("optimal scaling needs frame bounds 0 < A <= B");
        }
        const double alpha = std::pow(bounds.lower * bounds.upper, -0.25);
        return {alpha, 1.0 / alpha};
    }
    }
    throw ParameterError("unknown scaling rule");
}

std::vector<double> IterationTrace::errors() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.error);
    return out;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "iter,error,norm_g,norm_dual,A_k,B_k,ratio\n";
    out << std::scientific << std::setprecision(std::numeric_limits<double>::max_digits10 - 1);
    for (const auto& r : trace.records) {
        out << r.iter << ',' << r.error << ',' << r.norm_window << ',' << r.norm_dual << ',' << r.lower << ','
            << r.upper << ',' << r.ratio << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

NewtonResult newton_tight(const GaborSystem& sys, ScalingRule rule, const NewtonOptions& opts) {
    if (!(opts.tol > 0.0)) throw ParameterError("Newton tolerance must be positive");
    if (opts.max_iter < 0) throw ParameterError("max_iter must be non-negative");

    NewtonSpace space;
    switch (opts.backend) {
    case Backend::Dense: space = dense_space(sys); break;
    case Backend::ZZ: space = zz_space(sys); break;
    case Backend::MatrixFreeCG: space = cg_space(sys); break;
    }

    std::optional<Eigen::MatrixXcd> reference;
    if (opts.reference) {
        if (opts.reference->size() != sys.length()) throw ParameterError("reference window has the wrong length");
        reference = space.embed(*opts.reference);
    }

    NewtonResult result;
    result.trace.method = "newton-" + std::string(rule_name(rule));

    Eigen::MatrixXcd x = space.start;
    Eigen::MatrixXcd dual;
    FrameBounds bounds;
    space.dual(x, dual, bounds);

    auto record = [&](int k, double error) {
        result.trace.records.push_back(IterationRecord{k, error, x.norm() / space.scale, dual.norm() / space.scale,
                                                       bounds.lower, bounds.upper, bounds.ratio()});
    };
    record(0, reference ? normalized_distance(x, *reference) : kNaN);
    if (reference && result.trace.records.back().error <= opts.tol) {
        result.trace.status = TraceStatus::Converged;
    }

    double previous_error = kNaN;
    for (int k = 1; k <= opts.max_iter && result.trace.status != TraceStatus::Converged; ++k) {
        const ScalingParameters sp =
            scaling_parameters(x.norm() / space.scale, dual.norm() / space.scale, bounds, rule);
        Eigen::MatrixXcd next = 0.5 * (sp.alpha * x + sp.beta * dual);
        const double error = reference ? normalized_distance(next, *reference) : normalized_distance(next, x);
        x = std::move(next);
        space.dual(x, dual, bounds);
        record(k, error);

        if (error <= opts.tol) {
            result.trace.status = TraceStatus::Converged;
        } else if (!reference && previous_error <= 1e3 * opts.tol && error >= previous_error) {
            // Successive distances have hit the rounding floor.
            result.trace.status = TraceStatus::Converged;
        }
        previous_error = error;
    }

    result.limit = space.extract(x);
    result.window = result.limit / (result.limit.norm() * std::sqrt(sys.lattice().redundancy()));
    return result;
}

InvSqrtResult sherif_inv_sqrt(const HermitianOperator& M, const InvSqrtOptions& opts, const InvSqrtObserver& observer) {
    const Eigen::Index n = M.dim();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    return run_inv_sqrt(M, opts, observer, [&](const Eigen::MatrixXcd& X) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd inv = (I + M.matrix() * X * X).partialPivLu().inverse();
        return 2.0 * X * inv;
    });
}

InvSqrtResult lakic_inv_sqrt(const HermitianOperator& M, const InvSqrtOptions& opts, const InvSqrtObserver& observer) {
    const Eigen::Index n = M.dim();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    return run_inv_sqrt(M, opts, observer, [&](const Eigen::MatrixXcd& X) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd inv = (I + 3.0 * M.matrix() * X * X).partialPivLu().inverse();
        return X * (I + 8.0 * inv) / 3.0;
    });
}

TightResult tight_via_inv_sqrt(const GaborSystem& sys, InvSqrtMethod method, const TightViaInvSqrtOptions& opts) {
    const FrameBounds bounds = zz_frame_bounds(sys);
    require_frame(bounds);
    const double center = 0.5 * (bounds.lower + bounds.upper);
    const HermitianOperator M(dense_S(sys).matrix() / center);
    const double rescale = 1.0 / std::sqrt(center);

    std::optional<ComplexSignal> reference;
    if (opts.reference) reference = *opts.reference / opts.reference->norm();

    TightResult result;
    result.trace.method = method == InvSqrtMethod::Sherif ? "sherif" : "lakic";
    ComplexSignal previous;
    double previous_error = kNaN;

    const InvSqrtObserver observer = [&](int k, const Eigen::MatrixXcd& X) {
        ComplexSignal h = rescale * (X * sys.window());
        const ComplexSignal unit = h / h.norm();
        double error = kNaN;
        if (reference) {
            error = (unit - *reference).norm();
        } else if (k > 0) {
            error = (unit - previous).norm();
        }
        previous = unit;

        const ZZField field = zz_transform(h, sys.lattice());
        const FrameBounds hb = zz_field_bounds(field);
        const double field_scale = std::sqrt(static_cast<double>(sys.length()) / sys.lattice().p);
        double dual_norm = kNaN;
        if (hb.is_frame()) {
            dual_norm = std::sqrt(zz_apply_phi_field(field, field, [](double s) { return 1.0 / s; }).squared_norm()) /
                        field_scale;
        }
        result.trace.records.push_back(IterationRecord{k, error, h.norm(), dual_norm, hb.lower, hb.upper, hb.ratio()});
        // The uncoupled iterations amplify rounding once they have converged
        // (badly conditioned S); stop at the floor and keep the better iterate.
        const bool stalled = previous_error <= 1e3 * opts.tol && error >= previous_error;
        previous_error = error;
        if (stalled) return true;
        result.window = std::move(h);
        return error <= opts.tol;
    };

    const InvSqrtOptions inner_opts{reference ? 0.0 : opts.tol, opts.max_iter};
    const InvSqrtResult res = method == InvSqrtMethod::Sherif ? sherif_inv_sqrt(M, inner_opts, observer)
                                                              : lakic_inv_sqrt(M, inner_opts, observer);
    result.trace.status = res.converged ? TraceStatus::Converged : TraceStatus::MaxIterations;
    return result;
}

double convergence_order(const std::vector<double>& errors) {
    constexpr double lo = 1e-13, hi = 1e-2;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        const double e0 = errors[k], e1 = errors[k + 1];
        if (!std::isfinite(e0) || !std::isfinite(e1)) continue;
        if (e1 > lo && e1 < hi && e0 > lo && e0 < 1.0) {
            xs.push_back(std::log(e0));
            ys.push_back(std::log(e1));
        }
    }
    if (xs.size() < 2) {
        throw ParameterError("convergence order needs at least two consecutive error pairs in (1e-13, 1e-2)");
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw ParameterError("convergence order: degenerate error sequence");
    return sxy / sxx;
}

double convergence_order(const IterationTrace& trace) { return convergence_order(trace.errors()); }

double ratio_recursion(double c0, int k) {
    if (!(c0 > 0.0) || c0 > 1.0) throw ParameterError("ratio recursion needs C0 in (0, 1]");
    if (k < 0) throw ParameterError("ratio recursion needs k >= 0");
    double c = c0;
    for (int i = 0; i < k; ++i) c = std::min(1.0, 4.0 * c / ((1.0 + c) * (1.0 + c)));
    return c;
}

RecursionBounds bound_recursion_envelope(double A, double B, double R, int steps) {
    if (!(A > 0.0) || B < A) throw ParameterError("envelope needs 0 < A <= B");
    if (!(R > 0.0)) throw ParameterError("envelope needs R > 0");
    RecursionBounds out;
    out.lower_bound = R * 2.0 * std::sqrt(A * B) / (A + B);
    out.upper_bound = R * (A + B) * (A + B) / (4.0 * A * B);
    out.ratio_sequence.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) out.ratio_sequence.push_back(ratio_recursion(A / B, k));
    return out;
}

} // namespace gabor
