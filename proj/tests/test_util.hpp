/// Shared helpers for the test suites: deterministic random fields and
/// comparison utilities.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "mirrorflow/pipeline.hpp"
#include "mirrorflow/reflection.hpp"
#include "mirrorflow/spectral.hpp"

namespace mftest {

using namespace mirrorflow;

constexpr double kPi = 3.14159265358979323846;

/// Uniform doubles in [-1,1), identical on every platform.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}
    double operator()() { return (rng_() >> 11) * 0x1.0p-52 - 1.0; }
    std::complex<double> complex_unit() { return {(*this)(), (*this)()}; }

private:
    std::mt19937_64 rng_;
};

/// Random real band-limited field on the periodic cube, |k_i| <= band.
inline VectorField random_band_limited(const GridSpec& cube, int band, std::uint64_t seed) {
    Uniform u(seed);
    SpectralVectorField s(cube);
    for (int k1 = 0; k1 <= band; ++k1)
        for (int k2 = -band; k2 <= band; ++k2)
            for (int k3 = -band; k3 <= band; ++k3) {
                if (k1 == 0 && (k2 < 0 || (k2 == 0 && k3 <= 0))) continue;
                for (int c = 0; c < 3; ++c) s.set_mode_pair(c, k1, k2, k3, u.complex_unit());
            }
    return to_physical(s);
}

/// Divergence-free random band-limited field.
inline VectorField random_solenoidal(const GridSpec& cube, int band, std::uint64_t seed) {
    return leray_project(random_band_limited(cube, band, seed));
}

/// Divergence-free, mirror-symmetric random field (band may differ along x3).
inline VectorField random_mirror_symmetric(const GridSpec& cube, int band_tang, int band3,
                                           std::uint64_t seed) {
    Uniform u(seed);
    SpectralVectorField s(cube);
    for (int k1 = 0; k1 <= band_tang; ++k1)
        for (int k2 = -band_tang; k2 <= band_tang; ++k2)
            for (int k3 = -band3; k3 <= band3; ++k3) {
                if (k1 == 0 && (k2 < 0 || (k2 == 0 && k3 <= 0))) continue;
                for (int c = 0; c < 3; ++c) s.set_mode_pair(c, k1, k2, k3, u.complex_unit());
            }
    const SpectralVectorField gs = mirror_symmetry(s);
    for (int c = 0; c < 3; ++c) {
        auto& sc = s.component(c);
        const auto& gc = gs.component(c);
        for (std::size_t p = 0; p < sc.size(); ++p) sc[p] = 0.5 * (sc[p] + gc[p]);
    }
    s = leray_project(s);
    return to_physical(s);
}

inline double rel_linf(const VectorField& a, const VectorField& b) {
    const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
    return max_abs_diff(a, b) / scale;
}

inline VectorField shear_mode(const GridSpec& g) {
    return VectorField::from_function(
        g, [](double, double, double z) {
            return std::array<double, 3>{std::cos(2.0 * kPi * z), 0.0, 0.0};
        });
}

} // namespace mftest
