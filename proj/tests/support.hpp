#pragma once

// Shared test helpers. The transform oracle here is the O(q^{2d}) definition
// evaluated termwise; it must stay independent of the library's axis-pass
// implementation so the comparison means something.

#include <complex>
#include <random>
#include <vector>

#include "fqsalem/constructions.hpp"
#include "fqsalem/lattice.hpp"

namespace testsupport {

using namespace fqsalem;

inline std::vector<std::complex<double>> naive_transform(const PointSet& set,
                                                         felem twist = 1) {
    const Ambient& amb = set.ambient();
    std::vector<std::complex<double>> out(amb.size);
    const auto members = set.indices();
    std::vector<Point> pts;
    pts.reserve(members.size());
    for (auto i : members) pts.push_back(amb.decode(i));
    for (std::uint64_t xi = 0; xi < amb.size; ++xi) {
        const Point x = amb.decode(xi);
        std::complex<double> acc{0.0, 0.0};
        for (const Point& y : pts) {
            const felem d = dot(amb, x, y);
            acc += std::conj(amb.field.chi(amb.field.mul(twist, d)));
        }
        out[xi] = acc / static_cast<double>(amb.size);
    }
    return out;
}

inline PointSet bernoulli_set(const Ambient& amb, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PointSet s(amb);
    for (std::uint64_t i = 0; i < amb.size; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < density) s.insert(i);
    }
    return s;
}

inline PointSet parabola(const Ambient& amb) {
    return polynomial_curve(amb, {Poly{0, 1}, Poly{0, 0, 1}});
}

}  // namespace testsupport
