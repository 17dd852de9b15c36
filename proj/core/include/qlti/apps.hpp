#pragma once

#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"
#include "qlti/sdm.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qlti {

// Field reflection of a one-port cavity with round-trip time tau_rt,
// detuning phase phi0 and mirror reflectivity R, at signed frequency omega:
// F = sqrt(R) (1 - e^{2 i phi}) / (1 - R e^{2 i phi}), phi = omega tau_rt
// + phi0. Detuning breaks F[-omega] = F[omega]*, which is the whole point.
std::complex<double> cavity_F(double R, double phi0, double tau_rt,
                              double omega);

// Spectral density of a squeezer (strength r) filtered by the cavity
// response at the two signed sidebands. Only |F| and the joint phase
// arg(F+ F-)/2 enter. Both |F| must be <= 1.
Eigen::Matrix2cd lossy_squeezer_sample(std::complex<double> F_plus,
                                       std::complex<double> F_minus,
                                       double r);

SpectralDensityMatrix lossy_squeezer_sdm(double R, double phi0,
                                         double tau_rt, double r,
                                         const FrequencyGrid& grid);

// Squeezing visibility of one lossy-squeezer sample: lambda_complex is the
// smallest eigenvalue of S (true squeezing), lambda_real the smallest
// eigenvalue of Re S (what quadrature scans see; independent of the joint
// phase). The squeezing is hidden when lambda_complex < 1/2 <= lambda_real.
// r_lim = arctanh(2 F+ F- / (F+^2 + F-^2)) in magnitudes is the strength at
// which lambda_real crosses back up through 1/2.
struct HiddenSqueezing {
    double lambda_complex = 0.0;
    double lambda_real = 0.0;
    double r_lim = 0.0;
    bool hidden = false;
};

double squeezing_r_lim(std::complex<double> F_plus,
                       std::complex<double> F_minus);

HiddenSqueezing hidden_squeezing_metrics(std::complex<double> F_plus,
                                         std::complex<double> F_minus,
                                         double r);

// Frequency-flat two-mode scheme: two single-mode squeezers (r1, r2)
// followed by a fixed interferometer, vacuum input, first mode kept. The
// kept spectrum is already in invariant form [Sigma, i Delta; -i Delta,
// Sigma] with Sigma = (cosh 2r1 + cosh 2r2)/4 and Delta = (sinh^2 r2 -
// sinh^2 r1)/2: the two sidebands carry the photon numbers of the two
// squeezers, sinh^2 r2 at +omega and sinh^2 r1 at -omega.
struct TwoModeSqueezer {
    Eigen::Matrix4cd M;
    Eigen::Matrix2cd S_kept;
    double Sigma = 0.0;
    double Delta = 0.0;
};

TwoModeSqueezer two_mode_squeezer(double r1, double r2);

// Feedback oscillator: a delay-line resonator with coupling eta and loop
// delay tau. Row order (q_out, q_anc, p_out, p_anc), column order
// (q_0, q_anc, p_0, p_anc). The three coefficients with D = 1 + e^{i omega
// tau}:
//   H_0 = (sqrt(eta) + e^{i omega tau} / sqrt(eta)) / D
//   H_G = (1/sqrt(eta) - sqrt(eta)) / D
//   H_A = (1/sqrt(eta) + sqrt(eta) e^{i omega tau}) / D
// with |H_0|^2 - |H_G|^2 = 1. Frequencies with omega tau within 1e-6 of an
// odd multiple of pi sit on a loop resonance pole and are rejected.
struct OscillatorCoefficients {
    std::complex<double> H0, HG, HA;
};

OscillatorCoefficients oscillator_coefficients(double eta, double tau,
                                               double omega);

MatrixFunction oscillator_transfer(double eta, double tau,
                                   const FrequencyGrid& grid);

// Closed-form inverse of the transfer matrix, for consistency checks.
MatrixFunction oscillator_transfer_inverse(double eta, double tau,
                                           const FrequencyGrid& grid);

// Per-frequency uncertainty product of the oscillator output over vacuum,
// against the attainable floor (|H_G|^2 + 1/2)^2. The oscillator saturates
// the floor, so ratio = achieved / bound stays at 1.
struct OscillatorBoundRow {
    double omega = 0.0;
    double bound = 0.0;
    double achieved = 0.0;
    double ratio = 0.0;
};

std::vector<OscillatorBoundRow> oscillator_bound(double eta, double tau,
                                                 const FrequencyGrid& grid);

} // namespace qlti
