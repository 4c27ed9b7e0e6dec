#include "gabor/diagnostics.hpp"

#include "gabor/canonical.hpp"
#include "gabor/error.hpp"
#include "gabor/iterate.hpp"
#include "gabor/zak.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace gabor {
namespace {

using json = nlohmann::json;

// Lattices used by the verification suite: mixed p/q, all with R > 1.
const std::vector<std::array<int, 3>> kVerifyLattices = {
    {48, 6, 6}, {48, 4, 4}, {60, 4, 6}, {60, 6, 5}, {36, 4, 6}, {40, 4, 5},
};

double relative_diff(const ComplexSignal& x, const ComplexSignal& y) {
    const double scale = std::max(x.norm(), y.norm());
    return scale == 0.0 ? 0.0 : (x - y).norm() / scale;
}

Eigen::MatrixXcd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd out(rows, cols);
    for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = cplx(normal(rng), normal(rng));
    return out;
}

// Runs `body`, turning an exception into a failed check that carries the message.
void run_check(std::vector<CheckResult>& out, const std::string& name, std::uint64_t seed,
               const std::function<bool(json&)>& body) {
    CheckResult res{name, seed, json::object(), false};
    try {
        res.pass = body(res.values);
    } catch (const std::exception& e) {
        res.values["error"] = e.what();
        res.pass = false;
    }
    out.push_back(std::move(res));
}

void instance_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
    std::mt19937_64 rng(seed);
    const auto& shape = kVerifyLattices[rng() % kVerifyLattices.size()];
    const LatticeParams lat = make_lattice(shape[0], shape[1], shape[2]);
    const GaborSystem sys(random_window(lat, rng()), lat);
    const ComplexSignal probe = random_window(lat, rng());
    const std::uint64_t competitor_seed = rng();

    const ComplexSignal h0 = canonical_tight(sys, Backend::Dense);

    run_check(out, "tightness", seed, [&](json& v) {
        const double r = tightness_residual(h0, lat);
        v = {{"lattice", lat.describe()}, {"residual", r}};
        return r <= 1e-9;
    });

    run_check(out, "minimality", seed, [&](json& v) {
        constexpr int kCompetitors = 5;
        double worst = -std::numeric_limits<double>::infinity();
        bool pass = true;
        for (int c = 0; c < kCompetitors; ++c) {
            const MinimalityReport rep = minimality_gap(sys.window(), random_tight_window(lat, competitor_seed + c), lat);
            worst = std::max({worst, rep.d_lower - rep.d_competitor, rep.d_competitor - rep.d_upper});
            pass = pass && rep.pass;
        }
        const MinimalityReport self = minimality_gap(sys.window(), h0, lat);
        const MinimalityReport flipped = minimality_gap(sys.window(), -h0, lat);
        pass = pass && std::abs(self.d_lower - self.d_competitor) <= 1e-10 &&
               std::abs(flipped.d_competitor - flipped.d_upper) <= 1e-10;
        v = {{"competitors", kCompetitors}, {"worst_violation", worst}, {"d_lower", self.d_lower},
             {"d_upper", self.d_upper}};
        return pass;
    });

    run_check(out, "kantorovich", seed, [&](json& v) {
        std::mt19937_64 local(seed ^ 0x9e3779b97f4a7c15ULL);
        const int n = 2 + static_cast<int>(local() % 7);
        const Eigen::MatrixXcd X = random_matrix(n, n, local);
        const HermitianOperator M(X * X.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(n, n));
        const Eigen::VectorXd ev = M.eigenvalues();
        const ComplexSignal f = random_matrix(n, 1, local).col(0);
        const KantorovichResult k = kantorovich_check(M, f, ev[0], ev[n - 1]);

        const FrameBounds fb = frame_bounds_dense(sys);
        const KantorovichResult ks = kantorovich_check(dense_S(sys), probe, fb.lower, fb.upper);
        v = {{"dim", n}, {"lhs", k.lhs}, {"rhs", k.rhs}, {"frame_lhs", ks.lhs}, {"frame_rhs", ks.rhs}};
        return k.lhs >= k.rhs - 1e-12 && ks.lhs >= ks.rhs - 1e-12;
    });

    run_check(out, "backend_equivalence", seed, [&](json& v) {
        const ComplexSignal naive = apply_S_naive(sys, probe);
        const ComplexSignal dense = dense_S(sys).apply(probe);
        const ComplexSignal janssen = apply_S_janssen(sys, janssen_coefficients(sys), probe);
        const ComplexSignal zz = zz_apply_phi(sys, probe, [](double s) { return s; });
        const double apply_diff =
            std::max({relative_diff(naive, dense), relative_diff(naive, janssen), relative_diff(naive, zz)});

        const ComplexSignal dual_dense = canonical_dual(sys, Backend::Dense);
        const double dual_diff = std::max(relative_diff(dual_dense, canonical_dual(sys, Backend::ZZ)),
                                          relative_diff(dual_dense, canonical_dual(sys, Backend::MatrixFreeCG)));
        const double tight_diff = std::max(relative_diff(h0, canonical_tight(sys, Backend::ZZ)),
                                           relative_diff(h0, canonical_tight(sys, Backend::MatrixFreeCG)));
        v = {{"apply", apply_diff}, {"dual", dual_diff}, {"tight", tight_diff}};
        return apply_diff <= 1e-11 && dual_diff <= 1e-9 && tight_diff <= 1e-9;
    });

    run_check(out, "norm_identity", seed, [&](json& v) {
        const NormIdentity id = norm_identity(sys);
        v = {{"dual_inner", id.dual_inner},
             {"tight_norm_squared", id.tight_norm_squared},
             {"inverse_redundancy", id.inverse_redundancy}};
        return std::abs(id.dual_inner - id.inverse_redundancy) <= 1e-10 &&
               std::abs(id.tight_norm_squared - id.inverse_redundancy) <= 1e-10;
    });

    run_check(out, "recursion_envelope", seed, [&](json& v) {
        NewtonOptions opts;
        opts.max_iter = 1;
        const NewtonResult res = newton_tight(sys, ScalingRule::Norm, opts);
        const IterationRecord& r0 = res.trace.records.at(0);
        const IterationRecord& r1 = res.trace.records.at(1);
        const RecursionBounds env = bound_recursion_envelope(r0.lower, r0.upper, lat.redundancy(), 1);
        v = {{"A0", r0.lower}, {"B0", r0.upper}, {"A1", r1.lower}, {"B1", r1.upper},
             {"lower_bound", env.lower_bound}, {"upper_bound", env.upper_bound}};
        return r1.lower >= env.lower_bound - 1e-9 && r1.upper <= env.upper_bound + 1e-9;
    });
}

} // namespace

double tightness_residual(const ComplexSignal& h, const LatticeParams& lat) {
    const Eigen::VectorXd ev = dense_S(GaborSystem(h, lat)).eigenvalues();
    return std::max(std::abs(ev[0] - 1.0), std::abs(ev[ev.size() - 1] - 1.0));
}

MinimalityReport minimality_gap(const ComplexSignal& g, const ComplexSignal& h, const LatticeParams& lat) {
    if (h.size() != lat.L) throw ParameterError("competitor window has the wrong length");
    const double residual = tightness_residual(h, lat);
    if (!(residual <= kCompetitorTightness)) {
        throw ParameterError("competitor window is not normalized tight (residual " + std::to_string(residual) + ")");
    }
    const ComplexSignal h0 = canonical_tight(GaborSystem(g, lat));
    MinimalityReport rep;
    rep.d_lower = (g - h0).norm();
    rep.d_competitor = (g - h).norm();
    rep.d_upper = (g + h0).norm();
    rep.pass = rep.d_lower <= rep.d_competitor + 1e-10 && rep.d_competitor <= rep.d_upper + 1e-10;
    return rep;
}

ComplexSignal random_tight_window(const LatticeParams& lat, std::uint64_t seed) {
    return canonical_tight(GaborSystem(random_window(lat, seed), lat), Backend::Dense);
}

KantorovichResult kantorovich_check(const HermitianOperator& M, const ComplexSignal& f, double A, double B) {
    if (f.size() != M.dim()) throw ParameterError("vector length does not match the operator");
    if (f.norm() == 0.0) throw ParameterError("Kantorovich check needs f != 0");
    if (!(A > 0.0) || !(B >= A)) throw ParameterError("Kantorovich check needs 0 < A <= B");
    const ComplexSignal x = M.matrix().ldlt().solve(f);
    return KantorovichResult{inner(x, f).real() / (f.norm() * x.norm()), 2.0 * std::sqrt(A * B) / (A + B)};
}

ComplexSignal kantorovich_extremal_vector(double A, double B) {
    ComplexSignal f(2);
    f << std::sqrt(A), std::sqrt(B);
    return f / std::sqrt(A + B);
}

HermitianOperator tridiagonal_toeplitz(int dim, double diagonal, double off) {
    if (dim < 1) throw ParameterError("dimension must be positive");
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        T(i, i) = diagonal;
        if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = off;
    }
    return HermitianOperator(std::move(T));
}

std::vector<double> finite_section_convergence(const HermitianOperator& T, const std::vector<int>& sizes,
                                               const ComplexSignal& probe) {
    const int dim = T.dim();
    if (dim % 2 == 0) throw ParameterError("finite sections need an odd dimension 2C+1");
    if (probe.size() != dim) throw ParameterError("probe length does not match the operator");
    const int centre = dim / 2;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 0 || sizes[i] > centre) throw ParameterError("section size out of range");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw ParameterError("section sizes must be increasing");
    }
    const auto inv_sqrt = [](double s) {
        if (!(s > 0.0)) throw DomainError("section is not positive definite");
        return 1.0 / std::sqrt(s);
    };
    const ComplexSignal full = T.function(inv_sqrt) * probe;

    std::vector<double> errors;
    errors.reserve(sizes.size());
    for (int n : sizes) {
        const int lo = centre - n, len = 2 * n + 1;
        const HermitianOperator section(T.matrix().block(lo, lo, len, len));
        const ComplexSignal approx = section.function(inv_sqrt) * probe.segment(lo, len);
        errors.push_back((approx - full.segment(lo, len)).norm());
    }
    return errors;
}

ComplexSignal zak_window_with_spectrum(const std::vector<double>& values, const LatticeParams& lat) {
    if (lat.p != 1 || lat.q != 1) throw ParameterError("prescribed spectrum needs a critically sampled lattice (a b = L)");
    const int cells = lat.zz_time_cells() * lat.zz_freq_cells();
    if (static_cast<int>(values.size()) != cells) throw ParameterError("need one value per Zak grid cell");
    ZZField field{lat, {}};
    field.blocks.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("spectrum values must be positive");
        field.blocks.push_back(Eigen::MatrixXcd::Constant(1, 1, std::sqrt(v)));
    }
    return zz_inverse(field);
}

ComplexSignal two_valued_zak_window(double A, double B, double t_frac, const LatticeParams& lat) {
    if (!(A > 0.0) || !(B >= A)) throw ParameterError("two-valued window needs 0 < A <= B");
    if (!(t_frac >= 0.0 && t_frac <= 1.0)) throw ParameterError("t_frac must lie in [0, 1]");
    if (lat.p != 1 || lat.q != 1) throw ParameterError("two-valued window needs a critically sampled lattice (a b = L)");
    const int cells = lat.zz_time_cells() * lat.zz_freq_cells();
    const auto upper_cells = static_cast<int>(std::lround(t_frac * cells));
    if (std::abs(static_cast<double>(upper_cells) / cells - t_frac) > 1.0 / lat.L) {
        throw ParameterError("grid too small to realize t_frac");
    }
    std::vector<double> values(static_cast<std::size_t>(cells), A);
    std::fill_n(values.begin(), upper_cells, B);
    return zak_window_with_spectrum(values, lat);
}

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
    json list = json::array();
    for (const auto& c : checks) {
        list.push_back({{"check_name", c.check_name}, {"instance_seed", c.instance_seed}, {"values", c.values},
                        {"pass", c.pass}});
    }
    return {{"seed", seed}, {"instances", instances}, {"pass", pass()}, {"checks", std::move(list)}};
}

VerificationReport run_verification(const VerifyOptions& opts) {
    if (opts.instances < 0) throw ParameterError("instance count must be non-negative");
    VerificationReport report;
    report.seed = opts.seed;
    report.instances = opts.instances;

    for (int i = 0; i < opts.instances; ++i) {
        instance_checks(opts.seed * 1000 + static_cast<std::uint64_t>(i), report.checks);
    }

    run_check(report.checks, "kantorovich_extremal", opts.seed, [](json& v) {
        constexpr double A = 1.0, B = 4.0;
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
        D(0, 0) = A;
        D(1, 1) = B;
        const KantorovichResult k = kantorovich_check(HermitianOperator(D), kantorovich_extremal_vector(A, B), A, B);
        v = {{"lhs", k.lhs}, {"rhs", k.rhs}};
        return std::abs(k.lhs - k.rhs) <= 1e-12;
    });

    run_check(report.checks, "finite_sections", opts.seed, [&](json& v) {
        const HermitianOperator T = tridiagonal_toeplitz(101, 2.0, 0.5);
        ComplexSignal probe = ComplexSignal::Zero(101);
        probe(50) = 1.0;
        const std::vector<double> errors = finite_section_convergence(T, {5, 10, 20, 40}, probe);
        v = {{"sizes", {5, 10, 20, 40}}, {"errors", errors}};
        for (std::size_t k = 1; k < errors.size(); ++k) {
            if (!(errors[k] < errors[k - 1])) return false;
        }
        return true;
    });

    for (std::size_t i = 0; i < opts.supplied_tight.size(); ++i) {
        const GaborSystem& sys = opts.supplied_tight[i];
        run_check(report.checks, "supplied_window_tight", i, [&](json& v) {
            const double r = tightness_residual(sys.window(), sys.lattice());
            v = {{"lattice", sys.lattice().describe()}, {"residual", r}};
            return r <= kCompetitorTightness;
        });
    }
    return report;
}

} // namespace gabor
