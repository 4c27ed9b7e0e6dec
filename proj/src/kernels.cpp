#include "gabor/kernels.hpp"

#include "gabor/error.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace gabor::kernels {
namespace {

void require_length(const ComplexSignal& x, int L, const char* what) {
    if (x.size() != L) {
        throw ParameterError(std::string(what) + ": length " + std::to_string(x.size()) + " does not match L=" +
                             std::to_string(L));
    }
}

cplx polar_phase(double numerator, double denominator) {
    return std::polar(1.0, 2.0 * std::numbers::pi * numerator / denominator);
}

} // namespace

int max_threads() { return omp_get_max_threads(); }

void analysis(const ComplexSignal& f, const ComplexSignal& g, const LatticeParams& lat, CoefficientArray& out) {
    require_length(f, lat.L, "analysis signal");
    require_length(g, lat.L, "analysis window");
    const int L = lat.L, N = lat.N, M = lat.M, a = lat.a, b = lat.b;
    const UnitRoots roots(L);
    out.resize(N, M);

    // exp(-2 pi i m b t / L) depends on t only through t mod M, so each row is
    // a length-M DFT of the folded product f * conj(shifted g).
#pragma omp parallel
    {
        std::vector<cplx> folded(static_cast<std::size_t>(M));
#pragma omp for schedule(static)
        for (int n = 0; n < N; ++n) {
            for (int j = 0; j < M; ++j) {
                cplx acc = 0.0;
                for (int i = 0; i < b; ++i) {
                    const int t = j + i * M;
                    acc += f[t] * std::conj(g[wrap(t - static_cast<std::int64_t>(n) * a, L)]);
                }
                folded[static_cast<std::size_t>(j)] = acc;
            }
            for (int m = 0; m < M; ++m) {
                cplx acc = 0.0;
                for (int j = 0; j < M; ++j) {
                    acc += folded[static_cast<std::size_t>(j)] * roots(-static_cast<std::int64_t>(m) * j * b);
                }
                out(n, m) = acc;
            }
        }
    }
}

void synthesis(const CoefficientArray& c, const ComplexSignal& g, const LatticeParams& lat, ComplexSignal& out) {
    require_length(g, lat.L, "synthesis window");
    if (c.rows() != lat.N || c.cols() != lat.M) {
        throw ParameterError("synthesis: coefficient array must be N x M");
    }
    const int L = lat.L, N = lat.N, M = lat.M, a = lat.a, b = lat.b;
    const UnitRoots roots(L);

    // modulated(n, j) = sum_m c(n, m) exp(2 pi i m j / M)
    Eigen::MatrixXcd modulated(N, M);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < N; ++n) {
        for (int j = 0; j < M; ++j) {
            cplx acc = 0.0;
            for (int m = 0; m < M; ++m) {
                acc += c(n, m) * roots(static_cast<std::int64_t>(m) * j * b);
            }
            modulated(n, j) = acc;
        }
    }

    out.resize(L);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < L; ++t) {
        cplx acc = 0.0;
        for (int n = 0; n < N; ++n) {
            acc += g[wrap(t - static_cast<std::int64_t>(n) * a, L)] * modulated(n, t % M);
        }
        out[t] = acc;
    }
}

void walnut_matrix(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out) {
    require_length(g, lat.L, "frame operator window");
    const int L = lat.L, N = lat.N, M = lat.M, a = lat.a;
    out.setZero(L, L);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < L; ++t) {
        for (int s = t % M; s < L; s += M) {
            cplx acc = 0.0;
            for (int n = 0; n < N; ++n) {
                const std::int64_t shift = static_cast<std::int64_t>(n) * a;
                acc += g[wrap(t - shift, L)] * std::conj(g[wrap(s - shift, L)]);
            }
            out(t, s) = static_cast<double>(M) * acc;
        }
    }
}

void janssen_coefficients(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out) {
    require_length(g, lat.L, "Janssen window");
    const int L = lat.L, N = lat.N, M = lat.M, a = lat.a, b = lat.b;
    const UnitRoots roots(L);
    out.resize(b, a);
#pragma omp parallel for collapse(2) schedule(static)
    for (int k = 0; k < b; ++k) {
        for (int l = 0; l < a; ++l) {
            cplx acc = 0.0;
            for (int t = 0; t < L; ++t) {
                const cplx shifted = roots(static_cast<std::int64_t>(l) * N * t) *
                                     g[wrap(t - static_cast<std::int64_t>(k) * M, L)];
                acc += g[t] * std::conj(shifted);
            }
            out(k, l) = acc;
        }
    }
}

void janssen_apply(const Eigen::MatrixXcd& coeffs, const ComplexSignal& f, const LatticeParams& lat,
                   ComplexSignal& out) {
    require_length(f, lat.L, "Janssen input");
    if (coeffs.rows() != lat.b || coeffs.cols() != lat.a) {
        throw ParameterError("Janssen coefficients do not match the lattice");
    }
    const int L = lat.L, N = lat.N, M = lat.M, a = lat.a, b = lat.b;
    const double R = lat.redundancy();
    const UnitRoots roots(L);
    out.resize(L);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < L; ++t) {
        cplx acc = 0.0;
        for (int k = 0; k < b; ++k) {
            const cplx ft = f[wrap(t - static_cast<std::int64_t>(k) * M, L)];
            for (int l = 0; l < a; ++l) {
                acc += coeffs(k, l) * roots(static_cast<std::int64_t>(l) * N * t) * ft;
            }
        }
        out[t] = R * acc;
    }
}

void zak(const ComplexSignal& f, int lambda, Eigen::MatrixXcd& out) {
    const int L = static_cast<int>(f.size());
    if (lambda <= 0 || L % lambda != 0) {
        throw ParameterError("Zak parameter must divide the signal length");
    }
    const int K = L / lambda;
    const double scale = 1.0 / std::sqrt(static_cast<double>(K));
    const UnitRoots roots(L);
    out.resize(lambda, K);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < lambda; ++r) {
        for (int s = 0; s < K; ++s) {
            cplx acc = 0.0;
            for (int k = 0; k < K; ++k) {
                acc += f[wrap(r - static_cast<std::int64_t>(k) * lambda, L)] *
                       roots(static_cast<std::int64_t>(k) * s * lambda);
            }
            out(r, s) = scale * acc;
        }
    }
}

void zak_inverse(const Eigen::MatrixXcd& z, ComplexSignal& out) {
    const int lambda = static_cast<int>(z.rows());
    const int K = static_cast<int>(z.cols());
    const int L = lambda * K;
    const double scale = 1.0 / std::sqrt(static_cast<double>(K));
    const UnitRoots roots(L);
    out.resize(L);
#pragma omp parallel for collapse(2) schedule(static)
    for (int r = 0; r < lambda; ++r) {
        for (int k = 0; k < K; ++k) {
            cplx acc = 0.0;
            for (int s = 0; s < K; ++s) {
                acc += z(r, s) * roots(-static_cast<std::int64_t>(k) * s * lambda);
            }
            out[wrap(r - static_cast<std::int64_t>(k) * lambda, L)] = scale * acc;
        }
    }
}

namespace reference {

void analysis(const ComplexSignal& f, const ComplexSignal& g, const LatticeParams& lat, CoefficientArray& out) {
    require_length(f, lat.L, "analysis signal");
    require_length(g, lat.L, "analysis window");
    const int L = lat.L;
    out.resize(lat.N, lat.M);
    for (int n = 0; n < lat.N; ++n) {
        for (int m = 0; m < lat.M; ++m) {
            cplx acc = 0.0;
            for (int t = 0; t < L; ++t) {
                const cplx atom = polar_phase(static_cast<double>(m) * lat.b * t, L) * g[wrap(t - n * lat.a, L)];
                acc += f[t] * std::conj(atom);
            }
            out(n, m) = acc;
        }
    }
}

void synthesis(const CoefficientArray& c, const ComplexSignal& g, const LatticeParams& lat, ComplexSignal& out) {
    require_length(g, lat.L, "synthesis window");
    const int L = lat.L;
    out.setZero(L);
    for (int n = 0; n < lat.N; ++n) {
        for (int m = 0; m < lat.M; ++m) {
            for (int t = 0; t < L; ++t) {
                out[t] += c(n, m) * polar_phase(static_cast<double>(m) * lat.b * t, L) * g[wrap(t - n * lat.a, L)];
            }
        }
    }
}

void walnut_matrix(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out) {
    require_length(g, lat.L, "frame operator window");
    const int L = lat.L;
    out.setZero(L, L);
    ComplexSignal atom(L);
    for (int n = 0; n < lat.N; ++n) {
        for (int m = 0; m < lat.M; ++m) {
            for (int t = 0; t < L; ++t) {
                atom[t] = polar_phase(static_cast<double>(m) * lat.b * t, L) * g[wrap(t - n * lat.a, L)];
            }
            out += atom * atom.adjoint();
        }
    }
}

void janssen_coefficients(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out) {
    require_length(g, lat.L, "Janssen window");
    out.resize(lat.b, lat.a);
    for (int k = 0; k < lat.b; ++k) {
        for (int l = 0; l < lat.a; ++l) {
            out(k, l) = inner(g, tf_translate(g, k * lat.M, l * lat.N));
        }
    }
}

void janssen_apply(const Eigen::MatrixXcd& coeffs, const ComplexSignal& f, const LatticeParams& lat,
                   ComplexSignal& out) {
    require_length(f, lat.L, "Janssen input");
    out.setZero(lat.L);
    for (int k = 0; k < lat.b; ++k) {
        for (int l = 0; l < lat.a; ++l) {
            out += coeffs(k, l) * tf_translate(f, k * lat.M, l * lat.N);
        }
    }
    out *= lat.redundancy();
}

void zak(const ComplexSignal& f, int lambda, Eigen::MatrixXcd& out) {
    const int L = static_cast<int>(f.size());
    if (lambda <= 0 || L % lambda != 0) {
        throw ParameterError("Zak parameter must divide the signal length");
    }
    const int K = L / lambda;
    out.resize(lambda, K);
    for (int r = 0; r < lambda; ++r) {
        for (int s = 0; s < K; ++s) {
            cplx acc = 0.0;
            for (int k = 0; k < K; ++k) {
                acc += f[wrap(r - k * lambda, L)] * polar_phase(static_cast<double>(k) * s, K);
            }
            out(r, s) = acc / std::sqrt(static_cast<double>(K));
        }
    }
}

void zak_inverse(const Eigen::MatrixXcd& z, ComplexSignal& out) {
    const int lambda = static_cast<int>(z.rows());
    const int K = static_cast<int>(z.cols());
    const int L = lambda * K;
    out.setZero(L);
    for (int r = 0; r < lambda; ++r) {
        for (int k = 0; k < K; ++k) {
            cplx acc = 0.0;
            for (int s = 0; s < K; ++s) {
                acc += z(r, s) * polar_phase(-static_cast<double>(k) * s, K);
            }
            out[wrap(r - k * lambda, L)] = acc / std::sqrt(static_cast<double>(K));
        }
    }
}

} // namespace reference
} // namespace gabor::kernels
