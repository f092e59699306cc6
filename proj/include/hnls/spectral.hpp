#pragma once

#include <array>
#include <span>
#include <vector>

#include "hnls/field.hpp"

namespace hnls {

/// Derivative orders per axis, e.g. {2, 1} for d^3/dx^2 dy.
struct MultiIndex {
  std::array<int, 2> p{0, 0};

  int order() const { return p[0] + p[1]; }
  bool operator==(const MultiIndex&) const = default;
};

/// Unnormalised forward transform (FFTW sign convention -1).
ComplexField fft_forward(const ComplexField& f);
/// Inverse transform including the 1/N factor.
ComplexField fft_inverse(const ComplexField& f);

/// Fourier-collocation derivative of the given order along one axis.
/// Odd orders drop the Nyquist bin.
ComplexField spectral_derivative(const ComplexField& f, int order, int axis);
RealField spectral_derivative(const RealField& f, int order, int axis);

/// All requested mixed partials from a single forward transform.
std::vector<ComplexField> spectral_partials(const ComplexField& f, std::span<const MultiIndex> alphas);

std::vector<RealField> gradient(const RealField& f);
RealField divergence(std::span<const RealField> v);
ComplexField laplacian(const ComplexField& f);

/// Multiply the spectrum by symbol(k) bin by bin; symbol has grid.size()
/// entries in FFT order.
ComplexField apply_symbol(const ComplexField& f, std::span<const Complex> symbol);

/// |k|^2 per FFT bin.
std::vector<double> wavenumber_squared(const Grid& grid);

/// Exact periodic translation f(x - shift) of a band-limited field.
ComplexField translate(const ComplexField& f, std::array<double, 2> shift);

}  // namespace hnls
