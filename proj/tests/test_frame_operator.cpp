#include "support.hpp"

#include "gabor/canonical.hpp"
#include "gabor/error.hpp"
#include "gabor/frame_operator.hpp"
#include "gabor/zak.hpp"

#include <doctest.h>

using namespace gabor;
using testing::rel_err;

TEST_SUITE("frame_operator") {

TEST_CASE("apply_S_naive against the brute-force oracle") {
    for (const auto& c : testing::oracle()["cases"]) {
        const LatticeParams lat = testing::lattice_of(c);
        CAPTURE(lat.describe());
        const GaborSystem sys(testing::signal_from(c["window"]), lat);
        const ComplexSignal f = testing::signal_from(c["probe"]);
        const ComplexSignal expected = testing::signal_from(c["S_probe"]);
        CHECK(rel_err(apply_S_naive(sys, f), expected) < 1e-13);
        CHECK(rel_err(dense_S(sys).apply(f), expected) < 1e-13);
        CHECK(rel_err(apply_S_janssen(sys, janssen_coefficients(sys), f), expected) < 1e-12);

        const FrameBounds fb = frame_bounds_dense(sys);
        CHECK(fb.lower == doctest::Approx(c["lower"].get<double>()).epsilon(1e-12));
        CHECK(fb.upper == doctest::Approx(c["upper"].get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("apply_S_naive structural properties") {
    SUBCASE("full lattice is L ||g||^2 times the identity") {
        const LatticeParams lat = make_lattice(8, 1, 1);
        const GaborSystem sys(2.0 * random_window(lat, 1), lat);
        const ComplexSignal f = random_window(lat, 2);
        CHECK(rel_err(apply_S_naive(sys, f), 8.0 * 4.0 * f) < 1e-14);
        CHECK(rel_err(dense_S(sys).matrix(), 32.0 * Eigen::MatrixXcd::Identity(8, 8)) < 1e-14);
    }
    SUBCASE("small hand example equals the dense matrix") {
        const LatticeParams lat = make_lattice(4, 2, 2);
        ComplexSignal g(4);
        g << 1.0, 1.0, 0.0, 0.0;
        g /= std::sqrt(2.0);
        const GaborSystem sys(g, lat);
        // S = 2 sum_n g[t-2n] conj(g[s-2n]) on t = s mod 2: diagonal with entries 2 * (1/2 + 0) ... = 1.
        CHECK(rel_err(dense_S(sys).matrix(), Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
        const ComplexSignal f = random_window(lat, 4);
        CHECK(rel_err(apply_S_naive(sys, f), f) < 1e-15);
    }
    SUBCASE("Hermitian, positive, linear") {
        const LatticeParams lat = make_lattice(24, 4, 3);
        const GaborSystem sys(random_window(lat, 5), lat);
        const ComplexSignal f = random_window(lat, 6), h = random_window(lat, 7);
        CHECK(std::abs(inner(apply_S_naive(sys, f), h) - inner(f, apply_S_naive(sys, h))) < 1e-14);
        CHECK(inner(apply_S_naive(sys, f), f).real() >= 0.0);
        const cplx alpha(0.3, -1.7);
        CHECK(rel_err(apply_S_naive(sys, alpha * f), alpha * apply_S_naive(sys, f)) < 1e-14);
    }
    SUBCASE("length mismatch") {
        const LatticeParams lat = make_lattice(12, 3, 2);
        CHECK_THROWS_AS(apply_S_naive(GaborSystem(random_window(lat, 1), lat), ComplexSignal::Zero(6)), ParameterError);
    }
}

TEST_CASE("dense_S") {
    const LatticeParams lat = make_lattice(36, 4, 6);
    const GaborSystem sys(random_window(lat, 8), lat);
    const HermitianOperator S = dense_S(sys);
    CHECK(std::abs(S.matrix().trace() - cplx(lat.N * lat.M * sys.window().squaredNorm())) < 1e-12);
    CHECK((S.matrix() - S.matrix().adjoint()).norm() == 0.0);
    for (int j = 0; j < lat.L; j += 5) {
        ComplexSignal e = ComplexSignal::Zero(lat.L);
        e[j] = 1.0;
        CHECK(rel_err(S.matrix().col(j), apply_S_naive(sys, e)) < 1e-13);
    }
}

TEST_CASE("HermitianOperator rejects non-Hermitian input") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(HermitianOperator{m}, ParameterError);
    CHECK_THROWS_AS(HermitianOperator(Eigen::MatrixXcd::Zero(2, 3)), ParameterError);
}

TEST_CASE("frame_bounds_dense") {
    SUBCASE("tight window") {
        const LatticeParams lat = make_lattice(48, 6, 6);
        const ComplexSignal h = canonical_tight(GaborSystem(random_window(lat, 2), lat));
        const FrameBounds fb = frame_bounds_dense(GaborSystem(h, lat));
        CHECK(std::abs(fb.lower - 1.0) < 1e-10);
        CHECK(std::abs(fb.upper - 1.0) < 1e-10);
    }
    SUBCASE("delta window on the full lattice") {
        const LatticeParams lat = make_lattice(6, 1, 1);
        ComplexSignal d = ComplexSignal::Zero(6);
        d[0] = 1.0;
        const FrameBounds fb = frame_bounds_dense(GaborSystem(d, lat));
        CHECK(fb.lower == doctest::Approx(6.0));
        CHECK(fb.upper == doctest::Approx(6.0));
    }
    SUBCASE("Gaussian 240/15/15 against the oracle and the ZZ backend") {
        const LatticeParams lat = make_lattice(240, 15, 15);
        const GaborSystem sys(gaussian_window(lat), lat);
        const FrameBounds fb = frame_bounds_dense(sys);
        const auto& o = testing::oracle()["gaussian_240_15_15"];
        CHECK(fb.lower == doctest::Approx(o["lower"].get<double>()).epsilon(1e-11));
        CHECK(fb.upper == doctest::Approx(o["upper"].get<double>()).epsilon(1e-11));
        const FrameBounds zz = zz_frame_bounds(sys);
        CHECK(std::abs(zz.lower - fb.lower) < 1e-10);
        CHECK(std::abs(zz.upper - fb.upper) < 1e-10);
    }
    SUBCASE("not a frame") {
        const LatticeParams lat = make_lattice(12, 3, 2);
        CHECK_THROWS_AS(frame_bounds_dense(GaborSystem(ComplexSignal::Zero(12), lat)), NotAFrameError);
        ComplexSignal short_window = ComplexSignal::Zero(12);
        short_window[0] = 1.0; // support shorter than a: rows t = 1, 2 are never covered
        try {
            frame_bounds_dense(GaborSystem(short_window, lat));
            FAIL("expected NotAFrameError");
        } catch (const NotAFrameError& e) {
            CHECK(e.lower() < 1e-12);
            CHECK(e.upper() > 0.0);
        }
    }
}

TEST_CASE("janssen coefficients") {
    const LatticeParams lat = make_lattice(48, 6, 6);
    const GaborSystem sys(gaussian_window(lat), lat);
    const JanssenCoefficients c = janssen_coefficients(sys);
    REQUIRE(c.values.rows() == lat.b);
    REQUIRE(c.values.cols() == lat.a);
    CHECK(std::abs(c.values(0, 0) - 1.0) < 1e-14);
    for (int k = 1; k <= lat.b / 2; ++k) CHECK(std::abs(c.values(k, 0)) < std::abs(c.values(k - 1, 0)));
    for (int l = 1; l <= lat.a / 2; ++l) CHECK(std::abs(c.values(0, l)) < std::abs(c.values(0, l - 1)));

    const ComplexSignal f = random_window(lat, 3);
    CHECK(rel_err(apply_S_janssen(sys, c, f), apply_S_naive(sys, f)) < 1e-12);
    CHECK(apply_S_janssen(sys, c, ComplexSignal::Zero(lat.L)).norm() == 0.0);
    const ComplexSignal f2 = random_window(lat, 4);
    CHECK(rel_err(apply_S_janssen(sys, c, 2.0 * f - f2), 2.0 * apply_S_janssen(sys, c, f) - apply_S_janssen(sys, c, f2)) <
          1e-13);

    const GaborSystem other(random_window(make_lattice(48, 4, 6), 1), make_lattice(48, 4, 6));
    CHECK_THROWS_AS(apply_S_janssen(other, c, f), ParameterError);
}

TEST_CASE("condition A sum") {
    const LatticeParams lat = make_lattice(48, 6, 6);
    CHECK(condition_a_sum(GaborSystem(random_window(lat, 1), lat)) >= 1.0);

    const LatticeParams full = make_lattice(4, 1, 1);
    ComplexSignal d = ComplexSignal::Zero(4);
    d[0] = 1.0;
    // adjoint shifts (4k, 4l) are all trivial: a*b = 1 term of modulus 1
    CHECK(condition_a_sum(GaborSystem(d, full)) == doctest::Approx(1.0));

    const LatticeParams big = make_lattice(240, 15, 15);
    const GaborSystem gs(gaussian_window(big), big);
    const double s = condition_a_sum(gs);
    CHECK(std::isfinite(s));
    CHECK(s == condition_a_sum(gs));
}

TEST_CASE("apply_phi_S functional calculus") {
    const LatticeParams lat = make_lattice(36, 4, 6);
    const GaborSystem sys(random_window(lat, 9), lat);
    const ComplexSignal f = random_window(lat, 10);
    CHECK(rel_err(apply_phi_S(sys, f, [](double s) { return s; }), apply_S_naive(sys, f)) < 1e-12);
    CHECK(rel_err(apply_phi_S(sys, f, [](double) { return 1.0; }), f) < 1e-12);
    const ComplexSignal half = apply_phi_S(sys, f, [](double s) { return std::sqrt(s); });
    CHECK(rel_err(apply_phi_S(sys, half, [](double s) { return 1.0 / std::sqrt(s); }), f) < 1e-10);

    SUBCASE("spectral mapping") {
        const Eigen::VectorXd ev = dense_S(sys).eigenvalues();
        for (const ScalarFunction& phi : std::vector<ScalarFunction>{
                 [](double s) { return s * s; }, [](double s) { return 1.0 / s; },
                 [](double s) { return 1.0 / std::sqrt(s); }}) {
            Eigen::MatrixXcd P(lat.L, lat.L);
            for (int j = 0; j < lat.L; ++j) {
                ComplexSignal e = ComplexSignal::Zero(lat.L);
                e[j] = 1.0;
                P.col(j) = apply_phi_S(sys, e, phi);
            }
            Eigen::VectorXd mapped = ev.unaryExpr([&](double s) { return phi(s); });
            std::sort(mapped.begin(), mapped.end());
            const Eigen::VectorXd got = HermitianOperator(0.5 * (P + P.adjoint()), 1e-9).eigenvalues();
            CHECK((got - mapped).norm() / mapped.norm() < 1e-10);
        }
    }
    SUBCASE("domain error") {
        const GaborSystem bad(ComplexSignal::Zero(lat.L), lat);
        CHECK_THROWS_AS(apply_phi_S(bad, f, [](double s) { return 1.0 / std::sqrt(s); }), DomainError);
    }
}

TEST_CASE("power series for S^alpha") {
    // (B - A)/(B + A) must be small enough for 60 terms to reach 1e-8.
    const LatticeParams lat = make_lattice(48, 4, 4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GaborSystem sys(random_window(lat, 300 + seed), lat);
        const FrameBounds fb = frame_bounds_dense(sys);
        const double rho = (fb.upper - fb.lower) / (fb.upper + fb.lower);
        const ComplexSignal f = random_window(lat, 400 + seed);
        const ComplexSignal exact = apply_phi_S(sys, f, [](double s) { return std::pow(s, -0.5); });
        const double err = rel_err(apply_power_series(sys, f, -0.5, 60, fb), exact);
        CAPTURE(rho);
        CHECK(err <= 4.0 * std::pow(rho, 60) / (1.0 - rho) + 1e-13);
        if (rho <= 0.6) CHECK(err < 1e-8);
    }
    SUBCASE("alpha = 1 is exact after two terms") {
        const GaborSystem sys(random_window(lat, 1), lat);
        const ComplexSignal f = random_window(lat, 2);
        CHECK(rel_err(apply_power_series(sys, f, 1.0, 2, frame_bounds_dense(sys)), apply_S_naive(sys, f)) < 1e-13);
    }
}

TEST_CASE("backend equivalence on 20 seeded instances") {
    const auto& lattices = testing::small_lattices();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto& [L, a, b] = lattices[seed % lattices.size()];
        const LatticeParams lat = make_lattice(L, a, b);
        const GaborSystem sys(random_window(lat, 500 + seed), lat);
        const ComplexSignal f = random_window(lat, 600 + seed);
        const ComplexSignal naive = apply_S_naive(sys, f);
        CHECK(rel_err(dense_S(sys).apply(f), naive) < 1e-11);
        CHECK(rel_err(apply_S_janssen(sys, janssen_coefficients(sys), f), naive) < 1e-11);
        CHECK(rel_err(zz_apply_phi(sys, f, [](double s) { return s; }), naive) < 1e-11);
    }
}

}
