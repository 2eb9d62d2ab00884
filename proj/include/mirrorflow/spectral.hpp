#pragma once

#include <complex>
#include <vector>

#include "mirrorflow/field.hpp"

namespace mirrorflow {

/// Fourier coefficients of a real field on the periodic cube, real-to-complex
/// half-spectrum layout: k1 index 0..n1/2 (fastest), k2 and k3 full, negative
/// frequencies at index n - |k|. Storage is the unnormalized forward FFT of the
/// sample array; the inverse transform divides by n1*n2*n3.
///
/// The logical coefficient c_k of f(x) = sum_k c_k exp(i*pi*k.x) on (-1,1)^3
/// relates to storage by c_k = (-1)^(k1+k2+k3) * raw_k / (n1*n2*n3); use
/// coefficient()/set_mode_pair() for that convention. Wavenumber kappa = pi*k.
class SpectralVectorField {
public:
    explicit SpectralVectorField(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    int nk1() const { return grid_.n1() / 2 + 1; }
    std::size_t spectral_size() const {
        return static_cast<std::size_t>(nk1()) * grid_.n2() * grid_.n3();
    }

    std::size_t idx(int i1, int i2, int i3) const {
        return static_cast<std::size_t>(i1) +
               static_cast<std::size_t>(nk1()) *
                   (static_cast<std::size_t>(i2) + static_cast<std::size_t>(grid_.n2()) * i3);
    }

    std::vector<std::complex<double>>& component(int c) { return coeff_[c]; }
    const std::vector<std::complex<double>>& component(int c) const { return coeff_[c]; }

    /// Logical coefficient (normalized, math phase convention) at integer
    /// wavevector k, each |k_i| <= n_i/2. Negative k1 resolved by Hermitian
    /// symmetry.
    std::complex<double> coefficient(int c, int k1, int k2, int k3) const;

    /// Set the logical coefficients at +k and -k to [value] and conj(value)
    /// (keeps the field real). Requires k1 >= 0; for k1 = 0 both entries live
    /// in stored planes and are written explicitly.
    void set_mode_pair(int c, int k1, int k2, int k3, std::complex<double> value);

    /// Max |coefficient| over modes outside the two-thirds mask.
    double max_outside_dealias_mask() const;

    bool operator==(const SpectralVectorField& o) const = default;

private:
    GridSpec grid_;
    std::array<std::vector<std::complex<double>>, 3> coeff_;
};

SpectralVectorField to_spectral(const VectorField& f);
VectorField to_physical(const SpectralVectorField& g);

/// Integer frequency of storage index along one axis (Nyquist mapped to +n/2).
inline int freq_of_index(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

/// Spectral calculus on the periodic cube; exact for band-limited fields.
/// Odd-order derivative multipliers zero the Nyquist planes.
ScalarField divergence(const VectorField& f);
VectorField curl(const VectorField& f);
VectorField gradient(const ScalarField& s);
VectorField laplacian(const VectorField& f);

/// (u . grad) u computed pseudo-spectrally (physical products, spectral
/// derivatives) with the two-thirds dealias mask applied to the result.
VectorField advect(const VectorField& u);
SpectralVectorField advect_spectral(const SpectralVectorField& u, double* max_speed = nullptr);

/// Projection onto divergence-free fields: multiplier I - kappa kappa^T/|kappa|^2
/// per mode, k=0 unchanged.
SpectralVectorField leray_project(const SpectralVectorField& g);
VectorField leray_project(const VectorField& f);

/// Zero all modes with |k_i| > n_i/3 in place.
void dealias_two_thirds(SpectralVectorField& g);

/// d/dx_axis of one component, spectral multiplier, returned as physical samples.
std::vector<double> partial_derivative(const SpectralVectorField& f, int comp, int axis);

/// Spectral tangential derivative (axis 0 or 1) of a single x3-plane slice
/// (n1 x n2 samples, x1-fastest); both tangential axes are periodic with
/// period 2 in every geometry.
std::vector<double> tangential_derivative_plane(const std::vector<double>& slice, int n1,
                                                int n2, int axis);

/// Discrete H^l norm (sum_k (1+|kappa|^2)^l |c_k|^2 * vol)^(1/2); l = 0 is the
/// L2 norm.
double sobolev_norm(const VectorField& f, int l);
double sobolev_norm(const SpectralVectorField& g, int l);

/// Physical-space L2 norm (vol * mean square)^(1/2), any geometry, plain mean
/// over samples (periodic quadrature).
double l2_norm_physical(const VectorField& f);

/// Energy 0.5*||u||_L2^2 and enstrophy-type gradient norm ||grad u||_L2^2.
double kinetic_energy(const SpectralVectorField& g);
double grad_norm_sq(const SpectralVectorField& g);

/// max_k |sum_m i kappa_m c_m(k)| / max(eps, max_k |kappa||c|): relative
/// spectral divergence.
double divergence_rel_spectral(const SpectralVectorField& g);

} // namespace mirrorflow
