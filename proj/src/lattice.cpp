#include "gabor/lattice.hpp"

#include "gabor/error.hpp"

#include <numeric>
#include <sstream>

namespace gabor {

std::string LatticeParams::describe() const {
    std::ostringstream os;
    os << "L=" << L << " a=" << a << " b=" << b << " N=" << N << " M=" << M << " R=" << q << "/" << p;
    return os.str();
}

LatticeParams make_lattice(int L, int a, int b) {
    if (L <= 0 || a <= 0 || b <= 0) {
        throw ParameterError("lattice parameters must be positive");
    }
    if (L % a != 0) {
        throw ParameterError("time step a=" + std::to_string(a) + " does not divide L=" + std::to_string(L));
    }
    if (L % b != 0) {
        throw ParameterError("frequency step b=" + std::to_string(b) + " does not divide L=" + std::to_string(L));
    }

    LatticeParams lat;
    lat.L = L;
    lat.a = a;
    lat.b = b;
    lat.N = L / a;
    lat.M = L / b;

    const std::int64_t ab = static_cast<std::int64_t>(a) * b;
    const std::int64_t g = std::gcd(ab, static_cast<std::int64_t>(L));
    lat.p = static_cast<int>(ab / g);
    lat.q = static_cast<int>(L / g);
    lat.can_be_frame = static_cast<std::int64_t>(lat.N) * lat.M >= L;
    return lat;
}

} // namespace gabor
