#pragma once

#include "fraclab/grid.hpp"

#include <cstdint>

namespace fraclab::families {

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

/// k * exp(1 - 1/(1 - |x/radius|^2)) inside the ball, 0 outside; peak k at the centre.
ComplexField smooth_bump(const GridSpec& grid, double k, double radius = 1.0, std::complex<double> centre = {});

/// Radial mollifier of unit mass supported in |x| < eps, sampled on the
/// displacement lattice (centred at index 0) and renormalised to unit
/// discrete mass. Below grid scale it degenerates to the lattice delta.
ComplexField mollifier(const GridSpec& grid, double eps);

/// Periodic convolution with `mollifier(grid, eps)` done in Fourier space.
ComplexField mollify(const ComplexField& f, double eps);

/// k * (chi_{|z|<radius} * rho_eps), evaluated by exact radial quadrature, so
/// it does not depend on the grid. Planar only.
ComplexField mollified_disk(const GridSpec& grid, double k, double eps, double radius = 1.0);

/// Radius below which |mu| <= k for the logarithmic example.
double log_example_radius(double k);

/// Taper used by the logarithmic example: 1 for r <= taper_start * r_w, 0 for r >= r_w.
double log_example_window(double r, double k, double taper_start);

/// mu = (z / (2 conj z)) / (log|z| - 1/2), the Beltrami coefficient of
/// phi(z) = z (log|z| - 1), times the window. The singular point sits at
/// -(spacing/2)(1+i): off the sample lattice and on a vertex shared by the
/// dyadic cells of every size.
ComplexField log_example(const GridSpec& grid, double k, double taper_start = 0.8);

/// d phi = log|z| - 1/2 with the same window and centre as log_example.
ComplexField log_example_derivative(const GridSpec& grid, double k, double taper_start = 0.8);

/// Seeded sum of low Fourier modes on the box [-radius, radius)^n with
/// |wavenumber| <= band, times a smooth window vanishing for |x| >= radius,
/// rescaled to sup norm k. Depends only on (seed, radius, band), not on N.
ComplexField random_bandlimited(const GridSpec& grid, double k, std::uint64_t seed, double radius = 1.0,
                                int band = 3);

/// k * (1 - |z|/radius)_+.
ComplexField tent(const GridSpec& grid, double k, double radius = 0.5);

}  // namespace fraclab::families
