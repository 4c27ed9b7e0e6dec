#include "gabor/signal.hpp"

#include "gabor/error.hpp"
#include "gabor/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gabor {

GaborSystem::GaborSystem(ComplexSignal window, LatticeParams lattice)
    : window_(std::move(window)), lattice_(lattice) {
    if (window_.size() != lattice_.L) {
        throw ParameterError("window length " + std::to_string(window_.size()) + " does not match L=" +
                             std::to_string(lattice_.L));
    }
}

UnitRoots::UnitRoots(int L) : L_(L), table_(static_cast<std::size_t>(L)) {
    if (L <= 0) throw ParameterError("UnitRoots: L must be positive");
    for (int k = 0; k < L; ++k) {
        table_[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / L);
    }
}

cplx inner(const ComplexSignal& x, const ComplexSignal& y) {
    if (x.size() != y.size()) throw ParameterError("inner product of signals with different lengths");
    // Eigen's dot() conjugates its left operand.
    return y.dot(x);
}

ComplexSignal tf_translate(const ComplexSignal& f, int x, int w) {
    const int L = static_cast<int>(f.size());
    const UnitRoots roots(L);
    ComplexSignal out(L);
    for (int t = 0; t < L; ++t) {
        out[t] = roots(static_cast<std::int64_t>(w) * t) * f[wrap(static_cast<std::int64_t>(t) - x, L)];
    }
    return out;
}

ComplexSignal tf_shift(const ComplexSignal& f, int n, int m, const LatticeParams& lat) {
    if (f.size() != lat.L) throw ParameterError("tf_shift: signal length does not match lattice");
    return tf_translate(f, wrap(n, lat.N) * lat.a, wrap(m, lat.M) * lat.b);
}

CoefficientArray analysis(const ComplexSignal& f, const GaborSystem& sys) {
    if (f.size() != sys.length()) throw ParameterError("analysis: signal length does not match lattice");
    CoefficientArray c;
    kernels::analysis(f, sys.window(), sys.lattice(), c);
    return c;
}

ComplexSignal synthesis(const CoefficientArray& c, const GaborSystem& sys) {
    const LatticeParams& lat = sys.lattice();
    if (c.rows() != lat.N || c.cols() != lat.M) throw ParameterError("synthesis: coefficient array must be N x M");
    ComplexSignal out;
    kernels::synthesis(c, sys.window(), sys.lattice(), out);
    return out;
}

ComplexSignal unitary_dft(const ComplexSignal& f) {
    const int L = static_cast<int>(f.size());
    const UnitRoots roots(L);
    const double scale = 1.0 / std::sqrt(static_cast<double>(L));
    ComplexSignal out(L);
    for (int k = 0; k < L; ++k) {
        cplx acc = 0.0;
        for (int t = 0; t < L; ++t) acc += f[t] * roots(-static_cast<std::int64_t>(k) * t);
        out[k] = scale * acc;
    }
    return out;
}

ComplexSignal gaussian_window(const LatticeParams& lat, GaussianAmplitude amplitude) {
    const int L = lat.L;
    ComplexSignal g(L);
    for (int t = 0; t < L; ++t) {
        // Centered index keeps the periodization symmetric: g[t] = g[L - t].
        const double x = (t <= L / 2) ? t : t - L;
        double acc = 0.0;
        for (int j = -3; j <= 3; ++j) {
            const double y = x + static_cast<double>(j) * L;
            acc += std::exp(-std::numbers::pi * y * y / L);
        }
        g[t] = acc;
    }
    if (amplitude == GaussianAmplitude::UnitNorm) {
        g /= g.norm();
    } else {
        g *= std::pow(2.0, 0.25);
    }
    return g;
}

ComplexSignal random_window(const LatticeParams& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexSignal g(lat.L);
    for (int t = 0; t < lat.L; ++t) {
        const double re = normal(rng);
        const double im = normal(rng);
        g[t] = cplx(re, im);
    }
    return g / g.norm();
}

} // namespace gabor
