#include "mirrorflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace mirrorflow {

namespace {

constexpr double kPi = std::numbers::pi;

void require_cube(const GridSpec& g, const char* op) {
    if (g.geometry() != Geometry::PeriodicCube)
        throw GeometryError(std::string(op) + " requires a periodic cube grid");
}

/// Process-wide cache of FFTW_ESTIMATE|FFTW_UNALIGNED plans, one pair per grid
/// size. Plan creation is not thread-safe and is guarded; execution via the
/// new-array interface is safe concurrently.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    void forward(const GridSpec& g, const double* in, std::complex<double>* out) {
        fftw_plan p = get3d(g).fwd;
        // FFTW r2c does not modify the input for out-of-place transforms.
        fftw_execute_dft_r2c(p, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }

    // Destroys `in` (multi-dimensional c2r), callers pass a scratch copy.
    void backward(const GridSpec& g, std::complex<double>* in, double* out) {
        fftw_plan p = get3d(g).bwd;
        fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(in), out);
    }

    void forward2d(int n1, int n2, const double* in, std::complex<double>* out) {
        fftw_plan p = get2d(n1, n2).fwd;
        fftw_execute_dft_r2c(p, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }

    void backward2d(int n1, int n2, std::complex<double>* in, double* out) {
        fftw_plan p = get2d(n1, n2).bwd;
        fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(in), out);
    }

private:
    struct Plans {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    Plans& get3d(const GridSpec& g) { return get({g.n1(), g.n2(), g.n3()}); }
    Plans& get2d(int n1, int n2) { return get({n1, n2, 1}); }

    Plans& get(const std::array<int, 3>& key) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        const auto [n1, n2, n3] = key;
        const std::size_t nr = static_cast<std::size_t>(n1) * n2 * n3;
        const std::size_t nc = static_cast<std::size_t>(n1 / 2 + 1) * n2 * n3;
        std::vector<double> r(nr);
        std::vector<std::complex<double>> c(nc);
        Plans p;
        // Dimensions reversed: x1 is the fastest-varying (innermost) index.
        if (n3 == 1) {
            p.fwd = fftw_plan_dft_r2c_2d(n2, n1, r.data(),
                                         reinterpret_cast<fftw_complex*>(c.data()),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
            p.bwd = fftw_plan_dft_c2r_2d(n2, n1, reinterpret_cast<fftw_complex*>(c.data()),
                                         r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        } else {
            p.fwd = fftw_plan_dft_r2c_3d(n3, n2, n1, r.data(),
                                         reinterpret_cast<fftw_complex*>(c.data()),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
            p.bwd = fftw_plan_dft_c2r_3d(n3, n2, n1,
                                         reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        if (!p.fwd || !p.bwd) throw Error("FFTW plan creation failed");
        return cache_.emplace(key, p).first->second;
    }

    std::mutex mu_;
    std::map<std::array<int, 3>, Plans> cache_;
};

struct ModeIter {
    const GridSpec& g;
    int nk1;
    template <typename Fn> // Fn(linear index, k1, k2, k3)
    void operator()(Fn&& fn) const {
        std::size_t p = 0;
        for (int i3 = 0; i3 < g.n3(); ++i3) {
            const int k3 = freq_of_index(i3, g.n3());
            for (int i2 = 0; i2 < g.n2(); ++i2) {
                const int k2 = freq_of_index(i2, g.n2());
                for (int i1 = 0; i1 < nk1; ++i1, ++p) fn(p, i1, k2, k3);
            }
        }
    }
};

/// Parseval weight: interior k1 planes represent a conjugate pair.
inline double k1_weight(int k1, int n1) { return (k1 == 0 || k1 == n1 / 2) ? 1.0 : 2.0; }

/// i*kappa derivative factor along one axis; Nyquist zeroed.
inline double deriv_kappa(int k, int n) { return (k == n / 2) ? 0.0 : kPi * k; }

void backward_one(const GridSpec& g, const std::vector<std::complex<double>>& c,
                  std::vector<double>& out) {
    std::vector<std::complex<double>> scratch = c; // c2r destroys its input
    const double inv = 1.0 / static_cast<double>(g.size());
    out.resize(g.size());
    PlanCache::instance().backward(g, scratch.data(), out.data());
    for (auto& v : out) v *= inv;
}

} // namespace

SpectralVectorField::SpectralVectorField(const GridSpec& grid) : grid_(grid) {
    require_cube(grid, "SpectralVectorField");
    for (auto& c : coeff_) c.assign(spectral_size(), {0.0, 0.0});
}

std::complex<double> SpectralVectorField::coefficient(int c, int k1, int k2, int k3) const {
    const int n2 = grid_.n2(), n3 = grid_.n3();
    bool conj = false;
    if (k1 < 0) {
        conj = true;
        k1 = -k1;
        k2 = -k2;
        k3 = -k3;
    }
    const int i2 = (k2 % n2 + n2) % n2;
    const int i3 = (k3 % n3 + n3) % n3;
    const double phase = ((k1 + k2 + k3) % 2 == 0) ? 1.0 : -1.0;
    std::complex<double> v = coeff_[c][idx(k1, i2, i3)];
    v *= phase / static_cast<double>(grid_.size());
    return conj ? std::conj(v) : v;
}

void SpectralVectorField::set_mode_pair(int c, int k1, int k2, int k3,
                                        std::complex<double> value) {
    if (k1 < 0) throw Error("set_mode_pair requires k1 >= 0");
    const int n2 = grid_.n2(), n3 = grid_.n3();
    const double phase = ((k1 + k2 + k3) % 2 == 0) ? 1.0 : -1.0;
    const std::complex<double> raw =
        value * phase * static_cast<double>(grid_.size());
    coeff_[c][idx(k1, (k2 % n2 + n2) % n2, (k3 % n3 + n3) % n3)] = raw;
    if (k1 == 0) // the Hermitian partner lives in the stored k1=0 plane
        coeff_[c][idx(0, (-k2 % n2 + n2) % n2, (-k3 % n3 + n3) % n3)] = std::conj(raw);
}

double SpectralVectorField::max_outside_dealias_mask() const {
    const int n1 = grid_.n1(), n2 = grid_.n2(), n3 = grid_.n3();
    double m = 0.0;
    ModeIter it{grid_, nk1()};
    for (int c = 0; c < 3; ++c)
        it([&](std::size_t p, int k1, int k2, int k3) {
            if (3 * std::abs(k1) > n1 || 3 * std::abs(k2) > n2 || 3 * std::abs(k3) > n3)
                m = std::max(m, std::abs(coeff_[c][p]));
        });
    return m / static_cast<double>(grid_.size());
}

SpectralVectorField to_spectral(const VectorField& f) {
    require_cube(f.grid(), "to_spectral");
    SpectralVectorField g(f.grid());
    for (int c = 0; c < 3; ++c)
        PlanCache::instance().forward(f.grid(), f.component(c).data(),
                                      g.component(c).data());
    return g;
}

VectorField to_physical(const SpectralVectorField& g) {
    VectorField f(g.grid());
    for (int c = 0; c < 3; ++c) backward_one(g.grid(), g.component(c), f.component(c));
    return f;
}

namespace {

/// out_k = i*kappa_axis * in_k with the Nyquist plane of `axis` zeroed.
void spectral_derivative(const GridSpec& g, const std::vector<std::complex<double>>& in,
                         int axis, std::vector<std::complex<double>>& out) {
    const int nk1 = g.n1() / 2 + 1;
    out.resize(in.size());
    ModeIter it{g, nk1};
    it([&](std::size_t p, int k1, int k2, int k3) {
        const int k = axis == 0 ? k1 : (axis == 1 ? k2 : k3);
        const double kap = deriv_kappa(k, g.n(axis));
        out[p] = std::complex<double>(0.0, kap) * in[p];
    });
}

} // namespace

ScalarField divergence(const VectorField& f) {
    require_cube(f.grid(), "divergence");
    const SpectralVectorField g = to_spectral(f);
    std::vector<std::complex<double>> acc(g.spectral_size(), {0.0, 0.0}), tmp;
    for (int axis = 0; axis < 3; ++axis) {
        spectral_derivative(f.grid(), g.component(axis), axis, tmp);
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += tmp[p];
    }
    ScalarField out(f.grid());
    backward_one(f.grid(), acc, out.data());
    return out;
}

VectorField curl(const VectorField& f) {
    require_cube(f.grid(), "curl");
    const SpectralVectorField g = to_spectral(f);
    SpectralVectorField h(f.grid());
    std::vector<std::complex<double>> a, b;
    const auto cross = [&](int out_c, int da, int ca, int db, int cb) {
        spectral_derivative(f.grid(), g.component(ca), da, a);
        spectral_derivative(f.grid(), g.component(cb), db, b);
        auto& o = h.component(out_c);
        for (std::size_t p = 0; p < o.size(); ++p) o[p] = a[p] - b[p];
    };
    cross(0, 1, 2, 2, 1); // d2 f3 - d3 f2
    cross(1, 2, 0, 0, 2); // d3 f1 - d1 f3
    cross(2, 0, 1, 1, 0); // d1 f2 - d2 f1
    return to_physical(h);
}

VectorField gradient(const ScalarField& s) {
    require_cube(s.grid(), "gradient");
    const GridSpec& g = s.grid();
    std::vector<std::complex<double>> spec(
        static_cast<std::size_t>(g.n1() / 2 + 1) * g.n2() * g.n3());
    PlanCache::instance().forward(g, s.data().data(), spec.data());
    SpectralVectorField h(g);
    for (int axis = 0; axis < 3; ++axis)
        spectral_derivative(g, spec, axis, h.component(axis));
    return to_physical(h);
}

VectorField laplacian(const VectorField& f) {
    require_cube(f.grid(), "laplacian");
    SpectralVectorField g = to_spectral(f);
    const GridSpec& gr = f.grid();
    ModeIter it{gr, g.nk1()};
    for (int c = 0; c < 3; ++c) {
        auto& comp = g.component(c);
        it([&](std::size_t p, int k1, int k2, int k3) {
            const double kx = kPi * k1, ky = kPi * k2, kz = kPi * k3;
            comp[p] *= -(kx * kx + ky * ky + kz * kz);
        });
    }
    return to_physical(g);
}

std::vector<double> partial_derivative(const SpectralVectorField& f, int comp, int axis) {
    std::vector<std::complex<double>> spec;
    spectral_derivative(f.grid(), f.component(comp), axis, spec);
    std::vector<double> out;
    backward_one(f.grid(), spec, out);
    return out;
}

SpectralVectorField advect_spectral(const SpectralVectorField& u, double* max_speed) {
    const GridSpec& g = u.grid();
    std::array<std::vector<double>, 3> uphys;
    for (int c = 0; c < 3; ++c) backward_one(g, u.component(c), uphys[c]);

    if (max_speed) {
        double m = 0.0;
        for (std::size_t p = 0; p < uphys[0].size(); ++p) {
            const double s = std::sqrt(uphys[0][p] * uphys[0][p] + uphys[1][p] * uphys[1][p] +
                                       uphys[2][p] * uphys[2][p]);
            m = std::max(m, s);
        }
        *max_speed = m;
    }

    SpectralVectorField out(g);
    std::vector<std::complex<double>> dspec;
    std::vector<double> dphys, acc;
    for (int j = 0; j < 3; ++j) {
        acc.assign(g.size(), 0.0);
        for (int m = 0; m < 3; ++m) {
            spectral_derivative(g, u.component(j), m, dspec);
            backward_one(g, dspec, dphys);
            const auto& um = uphys[m];
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += um[p] * dphys[p];
        }
        PlanCache::instance().forward(g, acc.data(), out.component(j).data());
    }
    dealias_two_thirds(out);
    return out;
}

VectorField advect(const VectorField& u) {
    require_cube(u.grid(), "advect");
    return to_physical(advect_spectral(to_spectral(u)));
}

SpectralVectorField leray_project(const SpectralVectorField& g) {
    SpectralVectorField out = g;
    ModeIter it{g.grid(), g.nk1()};
    it([&](std::size_t p, int k1, int k2, int k3) {
        const double kx = kPi * k1, ky = kPi * k2, kz = kPi * k3;
        const double k2n = kx * kx + ky * ky + kz * kz;
        if (k2n == 0.0) return; // mean mode unchanged
        const std::complex<double> dot =
            (kx * out.component(0)[p] + ky * out.component(1)[p] + kz * out.component(2)[p]) /
            k2n;
        out.component(0)[p] -= kx * dot;
        out.component(1)[p] -= ky * dot;
        out.component(2)[p] -= kz * dot;
    });
    return out;
}

VectorField leray_project(const VectorField& f) {
    require_cube(f.grid(), "leray_project");
    return to_physical(leray_project(to_spectral(f)));
}

void dealias_two_thirds(SpectralVectorField& g) {
    const int n1 = g.grid().n1(), n2 = g.grid().n2(), n3 = g.grid().n3();
    ModeIter it{g.grid(), g.nk1()};
    for (int c = 0; c < 3; ++c) {
        auto& comp = g.component(c);
        it([&](std::size_t p, int k1, int k2, int k3) {
            if (3 * std::abs(k1) > n1 || 3 * std::abs(k2) > n2 || 3 * std::abs(k3) > n3)
                comp[p] = {0.0, 0.0};
        });
    }
}

double sobolev_norm(const SpectralVectorField& g, int l) {
    const GridSpec& gr = g.grid();
    const double vol = 8.0;
    const double invN2 = 1.0 / (static_cast<double>(gr.size()) * static_cast<double>(gr.size()));
    double sum = 0.0;
    ModeIter it{gr, g.nk1()};
    for (int c = 0; c < 3; ++c) {
        const auto& comp = g.component(c);
        it([&](std::size_t p, int k1, int k2, int k3) {
            const double kx = kPi * k1, ky = kPi * k2, kz = kPi * k3;
            const double mult = std::pow(1.0 + kx * kx + ky * ky + kz * kz, l);
            sum += k1_weight(k1, gr.n1()) * mult * std::norm(comp[p]) * invN2;
        });
    }
    return std::sqrt(vol * sum);
}

double sobolev_norm(const VectorField& f, int l) {
    require_cube(f.grid(), "sobolev_norm");
    return sobolev_norm(to_spectral(f), l);
}

double l2_norm_physical(const VectorField& f) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : f.component(c)) sum += v * v;
    const double vol = 8.0; // periodic quadrature over (-1,1)^3
    return std::sqrt(vol * sum / static_cast<double>(f.grid().size()));
}

double kinetic_energy(const SpectralVectorField& g) {
    const double n = sobolev_norm(g, 0);
    return 0.5 * n * n;
}

double grad_norm_sq(const SpectralVectorField& g) {
    const GridSpec& gr = g.grid();
    const double vol = 8.0;
    const double invN2 = 1.0 / (static_cast<double>(gr.size()) * static_cast<double>(gr.size()));
    double sum = 0.0;
    ModeIter it{gr, g.nk1()};
    for (int c = 0; c < 3; ++c) {
        const auto& comp = g.component(c);
        it([&](std::size_t p, int k1, int k2, int k3) {
            const double kx = kPi * k1, ky = kPi * k2, kz = kPi * k3;
            sum += k1_weight(k1, gr.n1()) * (kx * kx + ky * ky + kz * kz) * std::norm(comp[p]) *
                   invN2;
        });
    }
    return vol * sum;
}

std::vector<double> tangential_derivative_plane(const std::vector<double>& slice, int n1,
                                                int n2, int axis) {
    if (axis != 0 && axis != 1) throw Error("tangential_derivative_plane: axis must be 0 or 1");
    if (slice.size() != static_cast<std::size_t>(n1) * n2)
        throw Error("tangential_derivative_plane: slice size mismatch");
    const int nk1 = n1 / 2 + 1;
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(nk1) * n2);
    PlanCache::instance().forward2d(n1, n2, slice.data(), spec.data());
    std::size_t p = 0;
    for (int i2 = 0; i2 < n2; ++i2) {
        const int k2 = freq_of_index(i2, n2);
        for (int i1 = 0; i1 < nk1; ++i1, ++p) {
            const int k = axis == 0 ? i1 : k2;
            const double kap = deriv_kappa(k, axis == 0 ? n1 : n2);
            spec[p] *= std::complex<double>(0.0, kap);
        }
    }
    std::vector<double> out(slice.size());
    PlanCache::instance().backward2d(n1, n2, spec.data(), out.data());
    const double inv = 1.0 / (static_cast<double>(n1) * n2);
    for (auto& v : out) v *= inv;
    return out;
}

double divergence_rel_spectral(const SpectralVectorField& g) {
    const GridSpec& gr = g.grid();
    double div_max = 0.0, scale = 0.0;
    ModeIter it{gr, g.nk1()};
    it([&](std::size_t p, int k1, int k2, int k3) {
        const double kx = deriv_kappa(k1, gr.n1()), ky = deriv_kappa(k2, gr.n2()),
                     kz = deriv_kappa(k3, gr.n3());
        const std::complex<double> d = std::complex<double>(0.0, 1.0) *
                                       (kx * g.component(0)[p] + ky * g.component(1)[p] +
                                        kz * g.component(2)[p]);
        const double kmag = std::sqrt(kx * kx + ky * ky + kz * kz);
        const double umag = std::sqrt(std::norm(g.component(0)[p]) +
                                      std::norm(g.component(1)[p]) +
                                      std::norm(g.component(2)[p]));
        div_max = std::max(div_max, std::abs(d));
        scale = std::max(scale, kmag * umag);
    });
    return scale > 0.0 ? div_max / scale : 0.0;
}

} // namespace mirrorflow
