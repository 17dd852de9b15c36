#include "qlti/apps.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qlti {
namespace {

using cplx = std::complex<double>;

constexpr double kPassiveTol = 1e-12;

double checked_magnitude(cplx F, const char* which) {
    const double f = std::abs(F);
    if (f > 1.0 + kPassiveTol) {
        throw SchemaError(std::string("cavity response ") + which +
                          " has magnitude " + std::to_string(f) +
                          " above one");
    }
    return std::min(f, 1.0);
}

} // namespace

std::complex<double> cavity_F(double R, double phi0, double tau_rt,
                              double omega) {
    if (!(R >= 0.0 && R <= 1.0)) {
        throw SchemaError("mirror reflectivity must lie in [0, 1]");
    }
    const double phi = omega * tau_rt + phi0;
    const cplx e = std::polar(1.0, 2.0 * phi);
    const cplx den = 1.0 - R * e;
    if (std::abs(den) < 1e-12) {
        throw DegeneracyError("cavity response has a pole at phase " +
                              std::to_string(phi));
    }
    return std::sqrt(R) * (1.0 - e) / den;
}

Eigen::Matrix2cd lossy_squeezer_sample(std::complex<double> F_plus,
                                       std::complex<double> F_minus,
                                       double r) {
    const double fp = checked_magnitude(F_plus, "F[+omega]");
    const double fm = checked_magnitude(F_minus, "F[-omega]");
    const double theta = 0.5 * std::arg(F_plus * F_minus);
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double s2r = std::sinh(2.0 * r);
    const double sum = (fp * fp + fm * fm) * sh2;
    const double cross = fp * fm * s2r;

    Eigen::Matrix2cd S;
    S(0, 0) = 0.5 * (1.0 + sum + cross * std::cos(2.0 * theta));
    S(1, 1) = 0.5 * (1.0 + sum - cross * std::cos(2.0 * theta));
    S(0, 1) = 0.5 * (cross * std::sin(2.0 * theta) +
                     cplx(0.0, 1.0) * (fp * fp - fm * fm) * sh2);
    S(1, 0) = std::conj(S(0, 1));
    return S;
}

SpectralDensityMatrix lossy_squeezer_sdm(double R, double phi0,
                                         double tau_rt, double r,
                                         const FrequencyGrid& grid) {
    std::vector<Eigen::MatrixXcd> samples;
    samples.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid[k];
        samples.push_back(lossy_squeezer_sample(
            cavity_F(R, phi0, tau_rt, w), cavity_F(R, phi0, tau_rt, -w), r));
    }
    return SpectralDensityMatrix(
        MatrixFunction(grid, std::move(samples), ZeroReality::Enforce));
}

double squeezing_r_lim(std::complex<double> F_plus,
                       std::complex<double> F_minus) {
    const double fp = std::abs(F_plus);
    const double fm = std::abs(F_minus);
    const double s = fp * fp + fm * fm;
    if (s == 0.0) {
        return 0.0;
    }
    return std::atanh(std::min(2.0 * fp * fm / s, 1.0));
}

HiddenSqueezing hidden_squeezing_metrics(std::complex<double> F_plus,
                                         std::complex<double> F_minus,
                                         double r) {
    const Eigen::Matrix2cd S = lossy_squeezer_sample(F_plus, F_minus, r);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(S);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> esr(
        Eigen::Matrix2d(S.real()));

    HiddenSqueezing h;
    h.lambda_complex = es.eigenvalues()(0);
    h.lambda_real = esr.eigenvalues()(0);
    h.r_lim = squeezing_r_lim(F_plus, F_minus);
    h.hidden = h.lambda_complex < 0.5 && h.lambda_real >= 0.5;
    return h;
}

TwoModeSqueezer two_mode_squeezer(double r1, double r2) {
    const double s = std::numbers::sqrt2 / 2.0;
    const cplx is(0.0, s);

    Eigen::Matrix2cd W1, W2;
    W1 << s, -is, -is, s;
    W2 << s, -s, s, s;

    // Squeezers first, then the interferometer: anything passive ahead of
    // the squeezers is invisible on vacuum input.
    Eigen::Vector4d dd(std::exp(r1), std::exp(r2), std::exp(-r1),
                       std::exp(-r2));
    Eigen::Matrix4cd M = dd.cast<cplx>().asDiagonal();

    Eigen::Matrix4cd w2l = Eigen::Matrix4cd::Zero();
    w2l.topLeftCorner<2, 2>() = W2;
    w2l.bottomRightCorner<2, 2>() = W2;
    M = w2l * M;

    // Mode 1 fully swapped into the p sector, mode 2 passed through.
    Eigen::Matrix4cd cs = Eigen::Matrix4cd::Zero();
    cs(0, 2) = -1.0;
    cs(2, 0) = 1.0;
    cs(1, 1) = 1.0;
    cs(3, 3) = 1.0;
    M = cs * M;

    Eigen::Matrix4cd w1l = Eigen::Matrix4cd::Zero();
    w1l.topLeftCorner<2, 2>() = W1;
    w1l.bottomRightCorner<2, 2>() = W1;
    M = w1l * M;

    TwoModeSqueezer out;
    out.M = M;
    const Eigen::Matrix4cd S_full = 0.5 * M * M.adjoint();
    const Eigen::Vector2i keep(0, 2);
    out.S_kept = S_full(keep, keep);
    out.Sigma = out.S_kept(0, 0).real();
    out.Delta = out.S_kept(0, 1).imag();
    return out;
}

OscillatorCoefficients oscillator_coefficients(double eta, double tau,
                                               double omega) {
    if (!(eta > 0.0)) {
        throw SchemaError("oscillator coupling must be positive");
    }
    const double x = omega * tau;
    const double k = std::round((x / std::numbers::pi - 1.0) / 2.0);
    const double pole = (2.0 * k + 1.0) * std::numbers::pi;
    if (std::abs(x - pole) < 1e-6) {
        throw DegeneracyError(
            "loop phase " + std::to_string(x) +
            " sits on a resonance pole of the feedback oscillator");
    }
    const cplx e = std::polar(1.0, x);
    const cplx den = 1.0 + e;
    const double se = std::sqrt(eta);

    OscillatorCoefficients c;
    c.H0 = (se + e / se) / den;
    c.HG = (1.0 / se - se) / den;
    c.HA = (1.0 / se + se * e) / den;
    return c;
}

namespace {

MatrixFunction oscillator_build(double eta, double tau,
                                const FrequencyGrid& grid, bool inverse) {
    std::vector<Eigen::MatrixXcd> samples;
    samples.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = oscillator_coefficients(eta, tau, grid[k]);
        const cplx e = std::polar(1.0, grid[k] * tau);
        Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
        if (!inverse) {
            M(0, 0) = c.H0;
            M(0, 1) = c.HG;
            M(1, 0) = e * c.HG;
            M(1, 1) = c.HA;
            M(2, 2) = c.H0;
            M(2, 3) = -c.HG;
            M(3, 2) = -e * c.HG;
            M(3, 3) = c.HA;
        } else {
            M(0, 0) = c.HA;
            M(0, 1) = -c.HG;
            M(1, 0) = -e * c.HG;
            M(1, 1) = c.H0;
            M(2, 2) = c.HA;
            M(2, 3) = c.HG;
            M(3, 2) = e * c.HG;
            M(3, 3) = c.H0;
        }
        samples.push_back(M);
    }
    return MatrixFunction(grid, std::move(samples), ZeroReality::Enforce);
}

} // namespace

MatrixFunction oscillator_transfer(double eta, double tau,
                                   const FrequencyGrid& grid) {
    return oscillator_build(eta, tau, grid, false);
}

MatrixFunction oscillator_transfer_inverse(double eta, double tau,
                                           const FrequencyGrid& grid) {
    return oscillator_build(eta, tau, grid, true);
}

std::vector<OscillatorBoundRow> oscillator_bound(double eta, double tau,
                                                 const FrequencyGrid& grid) {
    const MatrixFunction M = oscillator_transfer(eta, tau, grid);
    std::vector<OscillatorBoundRow> rows(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd& Mk = M.sample(k);
        const auto c = oscillator_coefficients(eta, tau, grid[k]);
        const double hg2 = std::norm(c.HG);
        const double S_qq = 0.5 * Mk.row(0).squaredNorm();
        const double S_pp = 0.5 * Mk.row(2).squaredNorm();

        OscillatorBoundRow& row = rows[k];
        row.omega = grid[k];
        row.bound = (hg2 + 0.5) * (hg2 + 0.5);
        row.achieved = S_qq * S_pp;
        row.ratio = row.achieved / row.bound;
    }
    return rows;
}

} // namespace qlti
