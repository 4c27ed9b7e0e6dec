#pragma once

#include "gabor/lattice.hpp"
#include "gabor/signal.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <string>

namespace testing {

using gabor::ComplexSignal;

inline const nlohmann::json& oracle() {
    static const nlohmann::json doc = [] {
        std::ifstream in(std::string(GABOR_ORACLE_DIR) + "/oracle.json");
        return nlohmann::json::parse(in);
    }();
    return doc;
}

inline ComplexSignal signal_from(const nlohmann::json& pairs) {
    ComplexSignal out(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = {pairs[i][0].get<double>(), pairs[i][1].get<double>()};
    }
    return out;
}

inline gabor::LatticeParams lattice_of(const nlohmann::json& c) {
    return gabor::make_lattice(c["L"].get<int>(), c["a"].get<int>(), c["b"].get<int>());
}

inline double rel_err(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    const double scale = std::max(x.norm(), y.norm());
    return scale == 0.0 ? 0.0 : (x - y).norm() / scale;
}

inline Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {normal(rng), normal(rng)};
    return m;
}

/// Hermitian positive definite matrix with eigenvalues spread over [lo, hi].
inline Eigen::MatrixXcd spd_with_spectrum(int n, double lo, double hi, std::uint64_t seed) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(n, n, seed));
    const Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = lo + (hi - lo) * i / std::max(1, n - 1);
    Eigen::MatrixXcd M = Q * d.asDiagonal() * Q.adjoint();
    return 0.5 * (M + M.adjoint());
}

/// Lattices with R > 1 and mixed p/q, L <= 64.
inline const std::vector<std::array<int, 3>>& small_lattices() {
    static const std::vector<std::array<int, 3>> list = {
        {12, 2, 3}, {12, 3, 2}, {24, 4, 3}, {16, 2, 2}, {36, 4, 6}, {48, 6, 6}, {60, 4, 6}, {60, 6, 5}, {64, 4, 8},
        {40, 4, 5},
    };
    return list;
}

} // namespace testing
