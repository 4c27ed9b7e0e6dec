#include "support.hpp"

#include "gabor/canonical.hpp"
#include "gabor/diagnostics.hpp"
#include "gabor/error.hpp"
#include "gabor/iterate.hpp"
#include "gabor/zak.hpp"

#include <doctest.h>

using namespace gabor;

namespace {

/// Frame bounds before and after one norm-scaled Newton step.
std::pair<IterationRecord, IterationRecord> one_norm_step(const GaborSystem& sys) {
    NewtonOptions opts;
    opts.max_iter = 1;
    const NewtonResult res = newton_tight(sys, ScalingRule::Norm, opts);
    return {res.trace.records.at(0), res.trace.records.at(1)};
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("tightness residual") {
    const LatticeParams lat = make_lattice(240, 15, 15);
    const GaborSystem sys(gaussian_window(lat), lat);
    CHECK(tightness_residual(canonical_tight(sys), lat) <= 1e-9);
    const FrameBounds fb = frame_bounds_dense(sys);
    CHECK(tightness_residual(sys.window(), lat) ==
          doctest::Approx(std::max(std::abs(fb.lower - 1.0), std::abs(fb.upper - 1.0))).epsilon(1e-12));
    CHECK(tightness_residual(ComplexSignal::Zero(lat.L), lat) == 1.0);
}

TEST_CASE("minimality gap") {
    const LatticeParams lat = make_lattice(48, 6, 6);
    const GaborSystem sys(random_window(lat, 1), lat);
    const ComplexSignal h0 = canonical_tight(sys);

    const MinimalityReport self = minimality_gap(sys.window(), h0, lat);
    CHECK(self.d_lower == doctest::Approx(self.d_competitor).epsilon(1e-12));
    CHECK(self.pass);
    const MinimalityReport flip = minimality_gap(sys.window(), -h0, lat);
    CHECK(flip.d_competitor == doctest::Approx(flip.d_upper).epsilon(1e-12));
    CHECK(flip.pass);

    CHECK_THROWS_AS(minimality_gap(sys.window(), sys.window(), lat), ParameterError);
    CHECK_THROWS_AS(minimality_gap(ComplexSignal::Zero(48), h0, lat), NotAFrameError);

    const auto& lattices = testing::small_lattices();
    for (std::uint64_t f = 0; f < 10; ++f) {
        const auto& [L, a, b] = lattices[f % lattices.size()];
        const LatticeParams l = make_lattice(L, a, b);
        const ComplexSignal g = random_window(l, 100 + f);
        for (std::uint64_t c = 0; c < 20; ++c) {
            const MinimalityReport rep = minimality_gap(g, random_tight_window(l, 1000 * f + c), l);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("Kantorovich inequality") {
    SUBCASE("scalar operator") {
        const HermitianOperator M(3.0 * Eigen::MatrixXcd::Identity(3, 3));
        const KantorovichResult k = kantorovich_check(M, testing::random_matrix(3, 1, 1).col(0), 3.0, 3.0);
        CHECK(k.lhs == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(k.rhs == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("diag(1, 4) with f = (1, 1)/sqrt(2)") {
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
        D(0, 0) = 1.0;
        D(1, 1) = 4.0;
        ComplexSignal f(2);
        f << 1.0, 1.0;
        f /= std::sqrt(2.0);
        const KantorovichResult k = kantorovich_check(HermitianOperator(D), f, 1.0, 4.0);
        CHECK(k.lhs == doctest::Approx(0.625 / (std::sqrt(17.0) / (4.0 * std::sqrt(2.0)))).epsilon(1e-14));
        CHECK(k.lhs == doctest::Approx(0.8575).epsilon(1e-4));
        CHECK(k.rhs == doctest::Approx(0.8));
        // the extremal vector attains equality
        const KantorovichResult e = kantorovich_check(HermitianOperator(D), kantorovich_extremal_vector(1.0, 4.0), 1.0, 4.0);
        CHECK(std::abs(e.lhs - e.rhs) <= 1e-12);
    }
    SUBCASE("random SPD instances") {
        for (std::uint64_t s = 0; s < 100; ++s) {
            const int n = 2 + static_cast<int>(s % 9);
            const double lo = 0.01 + 0.1 * (s % 5), hi = lo * (1.0 + static_cast<double>(s % 13));
            const HermitianOperator M(testing::spd_with_spectrum(n, lo, hi, 5000 + s));
            const KantorovichResult k = kantorovich_check(M, testing::random_matrix(n, 1, 6000 + s).col(0), lo, hi);
            CHECK(k.lhs >= k.rhs - 1e-12);
        }
    }
    SUBCASE("errors") {
        const HermitianOperator M(Eigen::MatrixXcd::Identity(2, 2));
        CHECK_THROWS_AS(kantorovich_check(M, ComplexSignal::Zero(2), 1.0, 1.0), ParameterError);
        CHECK_THROWS_AS(kantorovich_check(M, ComplexSignal::Ones(2), 0.0, 1.0), ParameterError);
        CHECK_THROWS_AS(kantorovich_check(M, ComplexSignal::Ones(3), 1.0, 1.0), ParameterError);
    }
}

TEST_CASE("finite sections") {
    SUBCASE("diagonal operator: sections are exact") {
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(21, 21);
        for (int i = 0; i < 21; ++i) D(i, i) = 1.0 + 0.1 * i;
        const auto errs = finite_section_convergence(HermitianOperator(D), {1, 3, 5, 10}, ComplexSignal::Ones(21));
        for (double e : errs) CHECK(e < 1e-15);
    }
    SUBCASE("tridiagonal Toeplitz witness") {
        const HermitianOperator T = tridiagonal_toeplitz(101, 2.0, 0.5);
        ComplexSignal delta = ComplexSignal::Zero(101);
        delta[50] = 1.0;
        ComplexSignal bump(101);
        for (int i = 0; i < 101; ++i) bump[i] = std::exp(-0.5 * std::pow((i - 50) / 3.0, 2));
        for (const ComplexSignal& probe : {delta, bump}) {
            const auto errs = finite_section_convergence(T, {5, 10, 20, 40}, probe);
            REQUIRE(errs.size() == 4);
            for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
        }
    }
    SUBCASE("identity plus rank one") {
        ComplexSignal u(61);
        for (int i = 0; i < 61; ++i) u[i] = std::exp(-std::abs(i - 30) / 4.0);
        const HermitianOperator T(Eigen::MatrixXcd::Identity(61, 61) + u * u.adjoint());
        ComplexSignal probe = ComplexSignal::Zero(61);
        probe[30] = 1.0;
        const auto errs = finite_section_convergence(T, {2, 5, 10, 20}, probe);
        for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
    }
    SUBCASE("errors") {
        const HermitianOperator T = tridiagonal_toeplitz(11, 2.0, 0.5);
        const ComplexSignal p = ComplexSignal::Ones(11);
        CHECK_THROWS_AS(finite_section_convergence(tridiagonal_toeplitz(10, 2.0, 0.5), {1}, ComplexSignal::Ones(10)),
                        ParameterError);
        CHECK_THROWS_AS(finite_section_convergence(T, {3, 2}, p), ParameterError);
        CHECK_THROWS_AS(finite_section_convergence(T, {6}, p), ParameterError);
        CHECK_THROWS_AS(finite_section_convergence(tridiagonal_toeplitz(11, 0.5, 1.0), {2}, p), DomainError);
    }
}

TEST_CASE("two-valued Zak window") {
    const LatticeParams lat = make_lattice(256, 16, 16);
    SUBCASE("frame bounds are exactly (A, B)") {
        const ComplexSignal g = two_valued_zak_window(1.0, 4.0, 0.3, lat);
        const FrameBounds fb = frame_bounds_dense(GaborSystem(g, lat));
        CHECK(fb.lower == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fb.upper == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("t = 0 is tight up to scale") {
        const GaborSystem sys(two_valued_zak_window(1.0, 4.0, 0.0, lat), lat);
        const auto [r0, r1] = one_norm_step(sys);
        CHECK(r0.lower == doctest::Approx(r0.upper).epsilon(1e-12));
        CHECK(r1.lower == doctest::Approx(r1.upper).epsilon(1e-12));
    }
    SUBCASE("t = 1/2: one step makes the frame tight") {
        const GaborSystem sys(two_valued_zak_window(1.0, 4.0, 0.5, lat), lat);
        const auto [r0, r1] = one_norm_step(sys);
        CHECK(r1.lower == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(r1.upper == doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("A_1 envelope is approached when sqrt(AB) joins a balanced {A, B} spectrum") {
        // 127 cells at A, 128 at B, one at sqrt(AB); the gap is O(1/L) relative to R - bound
        for (const double B : {4.0, 1.01}) {
            std::vector<double> spectrum(256, 1.0);
            std::fill(spectrum.begin(), spectrum.begin() + 128, B);
            spectrum.back() = std::sqrt(B);
            const auto [r0, r1] = one_norm_step(GaborSystem(zak_window_with_spectrum(spectrum, lat), lat));
            const double bound = 2.0 * std::sqrt(B) / (1.0 + B);
            const double gap = r1.lower / lat.redundancy() - bound;
            CHECK(gap >= -1e-12);
            CHECK(gap <= (1.0 - bound) / 128.0);
            if (B < 2.0) CHECK(gap < 1e-6);
        }
    }
    SUBCASE("B_1 approaches its envelope as the small set shrinks") {
        const double A = 1.0, B = 4.0, target = (A + B) * (A + B) / (4.0 * A * B);
        const GaborSystem sys(two_valued_zak_window(A, B, 1.0 - 2.0 / lat.L, lat), lat);
        const auto [r0, r1] = one_norm_step(sys);
        CHECK(r1.upper / lat.redundancy() <= target + 1e-12);
        CHECK(std::abs(r1.upper / lat.redundancy() - target) < 5e-2);
    }
    SUBCASE("difference of the two Zak moduli after one step") {
        const double A = 1.0, B = 1.1, t = 0.25;
        const GaborSystem sys(two_valued_zak_window(A, B, t, lat), lat);
        const auto [r0, r1] = one_norm_step(sys);
        const double formula = (1.0 - 2.0 * t) * std::pow(std::sqrt(B) - std::sqrt(A), 2) / (2.0 * std::sqrt(A * B));
        // difference of the two Zak moduli of g_1
        const double measured = std::sqrt(r1.upper / lat.redundancy()) - std::sqrt(r1.lower / lat.redundancy());
        CHECK(std::abs(measured - formula) < 1e-3);
        CHECK(std::abs(measured - formula) < 5e-2 * formula);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(two_valued_zak_window(1.0, 4.0, 0.5, make_lattice(240, 15, 15)), ParameterError);
        CHECK_THROWS_AS(two_valued_zak_window(4.0, 1.0, 0.5, lat), ParameterError);
        CHECK_THROWS_AS(two_valued_zak_window(1.0, 4.0, 1.5, lat), ParameterError);
        CHECK_THROWS_AS(zak_window_with_spectrum(std::vector<double>(255, 1.0), lat), ParameterError);
        CHECK_THROWS_AS(zak_window_with_spectrum(std::vector<double>(256, 0.0), lat), ParameterError);
    }
}

TEST_CASE("verification suite") {
    VerifyOptions opts;
    opts.seed = 3;
    opts.instances = 3;
    const VerificationReport rep = run_verification(opts);
    CHECK(rep.pass());
    const nlohmann::json doc = rep.to_json();
    CHECK(doc["pass"] == true);
    CHECK(doc["seed"] == 3);
    CHECK(doc["instances"] == 3);
    REQUIRE(doc["checks"].is_array());
    for (const auto& c : doc["checks"]) {
        CHECK(c.contains("check_name"));
        CHECK(c["instance_seed"].is_number_unsigned());
        CHECK(c["values"].is_object());
        CHECK(c["pass"].is_boolean());
    }
    CHECK(doc.dump() == run_verification(opts).to_json().dump());

    SUBCASE("a tampered tight window fails") {
        const LatticeParams lat = make_lattice(48, 6, 6);
        ComplexSignal h = canonical_tight(GaborSystem(random_window(lat, 9), lat));
        VerifyOptions good;
        good.instances = 0;
        good.supplied_tight.emplace_back(h, lat);
        CHECK(run_verification(good).pass());
        h[7] += 0.01;
        VerifyOptions bad = good;
        bad.supplied_tight = {GaborSystem(h, lat)};
        const VerificationReport r = run_verification(bad);
        CHECK_FALSE(r.pass());
        CHECK(r.checks.back().check_name == "supplied_window_tight");
        CHECK_FALSE(r.checks.back().pass);
    }
}

}
