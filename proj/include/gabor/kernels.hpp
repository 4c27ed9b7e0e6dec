#pragma once

// Hot loops of the library. The functions in `gabor::kernels` are the
// production versions: OpenMP-parallel over output indices, with every output
// element accumulated in a fixed order, so the result is bitwise identical for
// any thread count. `gabor::kernels::reference` holds direct serial
// transcriptions of the defining sums; they are slow and exist for tests and
// the benchmark.

#include "gabor/lattice.hpp"
#include "gabor/signal.hpp"

#include <Eigen/Dense>

namespace gabor::kernels {

/// c(n, m) = sum_t f[t] conj(g[t - n a]) exp(-2 pi i m b t / L).
void analysis(const ComplexSignal& f, const ComplexSignal& g, const LatticeParams& lat, CoefficientArray& out);

/// out[t] = sum_{n,m} c(n, m) g[t - n a] exp(2 pi i m b t / L).
void synthesis(const CoefficientArray& c, const ComplexSignal& g, const LatticeParams& lat, ComplexSignal& out);

/// Frame operator as a dense matrix via the Walnut form:
/// S(t, s) = M sum_n g[t - n a] conj(g[s - n a]) if t = s (mod M), else 0.
void walnut_matrix(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out);

/// b x a matrix of adjoint-lattice correlations <g, pi(k M, l N) g>.
void janssen_coefficients(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out);

/// out = R sum_{k,l} coeffs(k, l) pi(k M, l N) f.
void janssen_apply(const Eigen::MatrixXcd& coeffs, const ComplexSignal& f, const LatticeParams& lat, ComplexSignal& out);

/// Discrete Zak transform with parameter lambda (K = L / lambda):
/// out(r, s) = K^{-1/2} sum_k f[r - k lambda] exp(2 pi i k s / K), r < lambda, s < K.
void zak(const ComplexSignal& f, int lambda, Eigen::MatrixXcd& out);

/// Inverse of zak().
void zak_inverse(const Eigen::MatrixXcd& z, ComplexSignal& out);

/// Number of threads the parallel kernels will use.
int max_threads();

namespace reference {

void analysis(const ComplexSignal& f, const ComplexSignal& g, const LatticeParams& lat, CoefficientArray& out);
void synthesis(const CoefficientArray& c, const ComplexSignal& g, const LatticeParams& lat, ComplexSignal& out);
void walnut_matrix(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out);
void janssen_coefficients(const ComplexSignal& g, const LatticeParams& lat, Eigen::MatrixXcd& out);
void janssen_apply(const Eigen::MatrixXcd& coeffs, const ComplexSignal& f, const LatticeParams& lat, ComplexSignal& out);
void zak(const ComplexSignal& f, int lambda, Eigen::MatrixXcd& out);
void zak_inverse(const Eigen::MatrixXcd& z, ComplexSignal& out);

} // namespace reference
} // namespace gabor::kernels
