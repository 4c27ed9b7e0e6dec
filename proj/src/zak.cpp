#include "gabor/zak.hpp"

#include "gabor/error.hpp"
#include "gabor/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gabor {
namespace {

/// Where entry (k, l) of block (r, s) lives in the lambda x K Zak array, and the
/// quasi-periodicity phase picked up on the way.
struct ZakSite {
    int row;
    int col;
    cplx phase;
};

class ZZLayout {
public:
    explicit ZZLayout(const LatticeParams& lat)
        : lat_(lat), cells_(lat.zz_time_cells() * lat.zz_freq_cells()),
          sites_(static_cast<std::size_t>(cells_) * lat.p * lat.q) {
        const int lambda = lat.M;
        const int freq_step = lat.b / lat.p;
        const UnitRoots roots(lat.L);
        for (int r = 0; r < lat.zz_time_cells(); ++r) {
            for (int s = 0; s < lat.zz_freq_cells(); ++s) {
                const int cell = r * lat.zz_freq_cells() + s;
                for (int k = 0; k < lat.p; ++k) {
                    for (int l = 0; l < lat.q; ++l) {
                        const std::int64_t zr = static_cast<std::int64_t>(r) - static_cast<std::int64_t>(l) * lat.a;
                        const int zs = s + k * freq_step;
                        const std::int64_t wraps = (zr >= 0) ? zr / lambda : -((-zr + lambda - 1) / lambda);
                        const int row = static_cast<int>(zr - wraps * lambda);
                        // Z(r + j lambda, s) = exp(2 pi i j s / K) Z(r, s), and 2 pi j s / K = 2 pi j s lambda / L.
                        site(cell, k, l) = ZakSite{row, zs, roots(wraps * zs * lambda)};
                    }
                }
            }
        }
    }

    ZakSite& site(int cell, int k, int l) {
        return sites_[(static_cast<std::size_t>(cell) * lat_.p + k) * lat_.q + l];
    }
    const ZakSite& site(int cell, int k, int l) const {
        return sites_[(static_cast<std::size_t>(cell) * lat_.p + k) * lat_.q + l];
    }
    int cells() const noexcept { return cells_; }

private:
    LatticeParams lat_;
    int cells_;
    std::vector<ZakSite> sites_;
};

double block_scale(const LatticeParams& lat) { return std::sqrt(static_cast<double>(lat.L) / lat.p); }

void require_lattice(const LatticeParams& lat) {
    if (lat.a % lat.p != 0 || lat.b % lat.p != 0) {
        // Cannot happen for lattices built by make_lattice; p divides a and b.
        throw ParameterError("Zibulski-Zeevi grid requires p | a and p | b");
    }
}

} // namespace

ZakArray zak_forward(const ComplexSignal& f, int lambda) {
    ZakArray z;
    kernels::zak(f, lambda, z.values);
    return z;
}

ComplexSignal zak_inverse(const ZakArray& z) {
    ComplexSignal f;
    kernels::zak_inverse(z.values, f);
    return f;
}

double ZZField::squared_norm() const {
    double acc = 0.0;
    for (const auto& B : blocks) acc += B.squaredNorm();
    return acc;
}

ZZField zz_transform(const ComplexSignal& f, const LatticeParams& lat) {
    if (f.size() != lat.L) throw ParameterError("zz_transform: signal length does not match lattice");
    require_lattice(lat);
    const ZakArray z = zak_forward(f, lat.M);
    const ZZLayout layout(lat);
    const double scale = block_scale(lat);

    ZZField field{lat, std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(layout.cells()))};
#pragma omp parallel for schedule(static)
    for (int cell = 0; cell < layout.cells(); ++cell) {
        Eigen::MatrixXcd block(lat.p, lat.q);
        for (int k = 0; k < lat.p; ++k) {
            for (int l = 0; l < lat.q; ++l) {
                const ZakSite& site = layout.site(cell, k, l);
                block(k, l) = scale * site.phase * z.values(site.row, site.col);
            }
        }
        field.blocks[static_cast<std::size_t>(cell)] = std::move(block);
    }
    return field;
}

ComplexSignal zz_inverse(const ZZField& field) {
    const LatticeParams& lat = field.lattice;
    const ZZLayout layout(lat);
    if (field.cell_count() != layout.cells()) throw ParameterError("zz_inverse: field does not match its lattice");
    const double scale = block_scale(lat);

    ZakArray z{Eigen::MatrixXcd(lat.M, lat.b)};
#pragma omp parallel for schedule(static)
    for (int cell = 0; cell < layout.cells(); ++cell) {
        const Eigen::MatrixXcd& block = field.blocks[static_cast<std::size_t>(cell)];
        for (int k = 0; k < lat.p; ++k) {
            for (int l = 0; l < lat.q; ++l) {
                const ZakSite& site = layout.site(cell, k, l);
                z.values(site.row, site.col) = std::conj(site.phase) * block(k, l) / scale;
            }
        }
    }
    return zak_inverse(z);
}

ZZField zz_matrices(const GaborSystem& sys) { return zz_transform(sys.window(), sys.lattice()); }

FrameBounds zz_field_bounds(const ZZField& window_field) {
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
#pragma omp parallel for schedule(static) reduction(min : lower) reduction(max : upper)
    for (int cell = 0; cell < window_field.cell_count(); ++cell) {
        const Eigen::MatrixXcd& block = window_field.blocks[static_cast<std::size_t>(cell)];
        const Eigen::MatrixXcd gram = block * block.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        lower = std::min(lower, es.eigenvalues()[0]);
        upper = std::max(upper, es.eigenvalues()[es.eigenvalues().size() - 1]);
    }
    return FrameBounds{std::max(0.0, lower), upper};
}

FrameBounds zz_frame_bounds(const GaborSystem& sys) { return zz_field_bounds(zz_matrices(sys)); }

ZZField zz_apply_phi_field(const ZZField& window_field, const ZZField& signal_field, const ScalarFunction& phi) {
    if (!(window_field.lattice == signal_field.lattice)) throw ParameterError("fields belong to different lattices");
    ZZField out{signal_field.lattice, std::vector<Eigen::MatrixXcd>(signal_field.blocks.size())};
    bool domain_ok = true;
    double bad_value = 0.0;
#pragma omp parallel for schedule(static)
    for (int cell = 0; cell < window_field.cell_count(); ++cell) {
        const auto idx = static_cast<std::size_t>(cell);
        const Eigen::MatrixXcd& G = window_field.blocks[idx];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G * G.adjoint());
        Eigen::VectorXd mapped(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < mapped.size(); ++i) {
            mapped[i] = phi(es.eigenvalues()[i]);
            if (!std::isfinite(mapped[i])) {
#pragma omp critical(gabor_zz_domain)
                {
                    domain_ok = false;
                    bad_value = es.eigenvalues()[i];
                }
            }
        }
        const Eigen::MatrixXcd& V = es.eigenvectors();
        out.blocks[idx] = V * (mapped.asDiagonal() * (V.adjoint() * signal_field.blocks[idx]));
    }
    if (!domain_ok) {
        std::ostringstream os;
        os << "function is not finite at block eigenvalue " << bad_value;
        throw DomainError(os.str());
    }
    return out;
}

ComplexSignal zz_apply_phi(const GaborSystem& sys, const ComplexSignal& f, const ScalarFunction& phi) {
    return zz_inverse(zz_apply_phi_field(zz_matrices(sys), zz_transform(f, sys.lattice()), phi));
}

ComplexSignal zak_tight_integer(const GaborSystem& sys) {
    const LatticeParams& lat = sys.lattice();
    if (lat.p != 1) {
        throw ParameterError("Zak shortcut needs integer oversampling (p = 1), got p=" + std::to_string(lat.p));
    }
    ZZField field = zz_matrices(sys);
    double largest = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& row : field.blocks) {
        largest = std::max(largest, row.norm());
        smallest = std::min(smallest, row.norm());
    }
    // The squared row norms are the eigenvalues of S.
    if (!(largest > 0.0) || smallest * smallest <= kFrameThreshold * largest * largest) {
        throw NotAFrameError("Zak transform of the window vanishes on the grid", smallest * smallest,
                             largest * largest);
    }
    for (auto& row : field.blocks) row /= row.norm();
    return zz_inverse(field);
}

} // namespace gabor
