#pragma once

#include "qlti/errors.hpp"
#include "qlti/grid.hpp"
#include "qlti/sdm.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qlti {

// One monochromatic local-oscillator line at signed frequency Omega with
// complex quadrature weights w (length 2n for an n-mode spectrum). Lines
// stay symbolic; they are never discretized onto a grid.
struct DeltaLine {
    double Omega = 0.0;
    Eigen::VectorXcd w;
};

// A local oscillator: either a finite set of delta lines or a sampled
// envelope alpha(Omega) on a non-negative grid with alpha(-Omega) =
// alpha(Omega)* implied.
struct LocalOscillator {
    std::vector<DeltaLine> lines;
    bool sampled = false;
    FrequencyGrid env_grid;
    std::vector<Eigen::VectorXcd> envelope;
};

// Single quadrature at DC: one line (0, amplitude * (cos theta, sin theta)).
LocalOscillator homodyne_lo(double theta, double amplitude = 1.0);

// Carrier at omega0 beating both sidebands: lines (alpha0/2)(1, -i) at
// +omega0 and the conjugate at -omega0.
LocalOscillator heterodyne_lo(double omega0, std::complex<double> alpha0);

// Two-line oscillator matched to a signed-frequency pair: effective weight
// alpha0 = [alpha_p + alpha_m*; i(alpha_m* - alpha_p)] / 2 placed as
// (alpha0/sqrt2, omega0) plus the conjugate line, so the zero-frequency
// photocurrent reads alpha0^dag S[omega0] alpha0 directly.
LocalOscillator synodyne_lo(double omega0, std::complex<double> alpha_plus,
                            std::complex<double> alpha_minus);

// The same two-line layout with the effective weight vector given directly
// (any number of modes).
LocalOscillator probe_lo(double omega0, const Eigen::VectorXcd& alpha0);

LocalOscillator sampled_lo(FrequencyGrid env_grid,
                           std::vector<Eigen::VectorXcd> envelope);

// Photocurrent spectrum S_II[omega] = sum_k w_k^dag S[omega + Omega_k] w_k
// for delta lines (coincident lines merge coherently first), or the
// trapezoid integral over the sampled envelope. Spectrum values off the
// stored grid are linearly interpolated (reported through diag); outside
// the grid range is an error.
double photocurrent_at(const SpectralDensityMatrix& S,
                       const LocalOscillator& lo, double omega,
                       Diagnostics* diag = nullptr);

Eigen::VectorXd photocurrent_spectrum(const SpectralDensityMatrix& S,
                                      const LocalOscillator& lo,
                                      const FrequencyGrid& out,
                                      Diagnostics* diag = nullptr);

// Recover the full 2x2 spectral density at omega0 of a single-mode spectrum
// from five two-line measurements: probes (1,0), (0,1), (1,1)/sqrt2 and
// (1, -+i)/sqrt2.
Eigen::Matrix2cd reconstruct_sdm(const SpectralDensityMatrix& S,
                                 double omega0, Diagnostics* diag = nullptr);

// Same recovery for n modes: diagonal blocks by the five-probe rule,
// off-diagonal blocks from joint probes with relative phases 1, -1, +-i.
Eigen::MatrixXcd multimode_reconstruct(const SpectralDensityMatrix& S,
                                       double omega0,
                                       Diagnostics* diag = nullptr);

} // namespace qlti
