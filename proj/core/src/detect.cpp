#include "qlti/detect.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

namespace qlti {

namespace {

using cplx = std::complex<double>;

std::vector<DeltaLine> merge_lines(const std::vector<DeltaLine>& lines,
                                   Eigen::Index dim) {
    std::vector<DeltaLine> merged;
    for (const DeltaLine& L : lines) {
        if (L.w.size() != dim) {
            throw SchemaError("local oscillator: line weight size does not "
                              "match the spectrum");
        }
        bool found = false;
        for (DeltaLine& M : merged) {
            if (std::abs(M.Omega - L.Omega) <=
                1e-12 * std::max(1.0, std::abs(L.Omega))) {
                M.w += L.w; // coherent: amplitudes at one frequency add
                found = true;
                break;
            }
        }
        if (!found) {
            merged.push_back(L);
        }
    }
    return merged;
}

double quad_form(const Eigen::MatrixXcd& S, const Eigen::VectorXcd& w) {
    return std::real(w.dot(S * w));
}

} // namespace

LocalOscillator homodyne_lo(double theta, double amplitude) {
    LocalOscillator lo;
    Eigen::VectorXcd w(2);
    w << amplitude * std::cos(theta), amplitude * std::sin(theta);
    lo.lines.push_back(DeltaLine{0.0, std::move(w)});
    return lo;
}

LocalOscillator heterodyne_lo(double omega0, std::complex<double> alpha0) {
    LocalOscillator lo;
    Eigen::VectorXcd wp(2), wm(2);
    wp << 0.5 * alpha0, cplx(0.0, -0.5) * alpha0;
    wm = wp.conjugate();
    lo.lines.push_back(DeltaLine{omega0, std::move(wp)});
    lo.lines.push_back(DeltaLine{-omega0, std::move(wm)});
    return lo;
}

LocalOscillator probe_lo(double omega0, const Eigen::VectorXcd& alpha0) {
    LocalOscillator lo;
    const double s = 1.0 / std::sqrt(2.0);
    lo.lines.push_back(DeltaLine{omega0, s * alpha0});
    lo.lines.push_back(DeltaLine{-omega0, s * alpha0.conjugate()});
    return lo;
}

LocalOscillator synodyne_lo(double omega0, std::complex<double> alpha_plus,
                            std::complex<double> alpha_minus) {
    Eigen::VectorXcd a0(2);
    const cplx am = std::conj(alpha_minus);
    a0 << 0.5 * (alpha_plus + am),
        cplx(0.0, 0.5) * (am - alpha_plus);
    return probe_lo(omega0, a0);
}

LocalOscillator sampled_lo(FrequencyGrid env_grid,
                           std::vector<Eigen::VectorXcd> envelope) {
    if (env_grid.size() < 2 || envelope.size() != env_grid.size()) {
        throw SchemaError("sampled local oscillator: needs at least two "
                          "envelope samples matching the grid");
    }
    const Eigen::Index dim = envelope.front().size();
    for (const auto& a : envelope) {
        if (a.size() != dim || !a.allFinite()) {
            throw SchemaError("sampled local oscillator: inconsistent or "
                              "non-finite envelope sample");
        }
    }
    LocalOscillator lo;
    lo.sampled = true;
    lo.env_grid = std::move(env_grid);
    lo.envelope = std::move(envelope);
    return lo;
}

double photocurrent_at(const SpectralDensityMatrix& S,
                       const LocalOscillator& lo, double omega,
                       Diagnostics* diag) {
    const Eigen::Index dim = 2 * S.n_modes();
    if (!lo.sampled) {
        if (lo.lines.empty()) {
            throw SchemaError("local oscillator has no lines");
        }
        double acc = 0.0;
        for (const DeltaLine& L : merge_lines(lo.lines, dim)) {
            acc += quad_form(S.eval_interp(omega + L.Omega, diag), L.w);
        }
        return acc;
    }
    if (lo.envelope.front().size() != dim) {
        throw SchemaError("local oscillator: envelope size does not match "
                          "the spectrum");
    }
    // fold the signed integral onto the non-negative envelope grid:
    // integral over Omega of a^dag(Omega) S[omega + Omega] a(Omega) / 2 pi
    // = integral over Omega >= 0 of (f(Omega) + f(-Omega)).
    const std::size_t K = lo.env_grid.size();
    std::vector<double> F(K);
    for (std::size_t i = 0; i < K; ++i) {
        const double W = lo.env_grid[i];
        const Eigen::VectorXcd& a = lo.envelope[i];
        const Eigen::VectorXcd ac = a.conjugate();
        F[i] = quad_form(S.eval_interp(omega + W, diag), a) +
               quad_form(S.eval_interp(omega - W, diag), ac);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < K; ++i) {
        acc += (lo.env_grid[i + 1] - lo.env_grid[i]) * 0.5 *
               (F[i] + F[i + 1]);
    }
    return acc / (2.0 * std::numbers::pi);
}

Eigen::VectorXd photocurrent_spectrum(const SpectralDensityMatrix& S,
                                      const LocalOscillator& lo,
                                      const FrequencyGrid& out,
                                      Diagnostics* diag) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(out.size()));
    Diagnostics local;
    for (std::size_t k = 0; k < out.size(); ++k) {
        r(static_cast<Eigen::Index>(k)) =
            photocurrent_at(S, lo, out[k], &local);
    }
    if (diag && !local.warnings.empty()) {
        std::ostringstream msg;
        msg << "photocurrent spectrum used linear interpolation for "
            << local.warnings.size()
            << " spectrum evaluations (first: " << local.warnings.front()
            << ")";
        diag->warn(msg.str());
    }
    return r;
}

Eigen::Matrix2cd reconstruct_sdm(const SpectralDensityMatrix& S,
                                 double omega0, Diagnostics* diag) {
    if (S.n_modes() != 1) {
        throw SchemaError("reconstruct_sdm: expects a single-mode spectrum "
                          "(use multimode_reconstruct otherwise)");
    }
    auto Q = [&](cplx c0, cplx c1) {
        Eigen::VectorXcd a(2);
        a << c0, c1;
        return photocurrent_at(S, probe_lo(omega0, a), 0.0, diag);
    };
    const double s = 1.0 / std::sqrt(2.0);
    const double sqq = Q(1.0, 0.0);
    const double spp = Q(0.0, 1.0);
    const double re = Q(s, s) - 0.5 * (sqq + spp);
    const double im = 0.5 * (Q(s, cplx(0.0, -s)) - Q(s, cplx(0.0, s)));
    Eigen::Matrix2cd est;
    est << sqq, cplx(re, im), cplx(re, -im), spp;
    return est;
}

Eigen::MatrixXcd multimode_reconstruct(const SpectralDensityMatrix& S,
                                       double omega0, Diagnostics* diag) {
    const Eigen::Index n = S.n_modes();
    const Eigen::Index dim = 2 * n;
    auto Qv = [&](const Eigen::VectorXcd& w) {
        return photocurrent_at(S, probe_lo(omega0, w), 0.0, diag);
    };
    auto unit = [&](Eigen::Index mode, int mu) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(dim);
        w(mode + (mu == 0 ? 0 : n)) = 1.0;
        return w;
    };
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd est(dim, dim);

    for (Eigen::Index a = 0; a < n; ++a) {
        const Eigen::VectorXcd eq = unit(a, 0), ep = unit(a, 1);
        const double sqq = Qv(eq);
        const double spp = Qv(ep);
        const double re = Qv(s * (eq + ep)) - 0.5 * (sqq + spp);
        const double im =
            0.5 * (Qv(s * (eq - cplx(0.0, 1.0) * ep)) -
                   Qv(s * (eq + cplx(0.0, 1.0) * ep)));
        est(a, a) = sqq;
        est(n + a, n + a) = spp;
        est(a, n + a) = cplx(re, im);
        est(n + a, a) = cplx(re, -im);
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            for (int mu = 0; mu < 2; ++mu) {
                const Eigen::VectorXcd ea = unit(a, mu);
                const double Qa = Qv(ea);
                for (int nu = 0; nu < 2; ++nu) {
                    const Eigen::VectorXcd eb = unit(b, nu);
                    const double Qb = Qv(eb);
                    auto C = [&](cplx z) {
                        return 0.5 * (Qv(ea + z * eb) - Qa - Qb);
                    };
                    const cplx i1(0.0, 1.0);
                    const cplx Bmn =
                        0.5 * (C(1.0) - C(-1.0)) -
                        i1 * 0.5 * (C(i1) - C(-i1));
                    const Eigen::Index ra = a + (mu == 0 ? 0 : n);
                    const Eigen::Index cb = b + (nu == 0 ? 0 : n);
                    est(ra, cb) = Bmn;
                    est(cb, ra) = std::conj(Bmn);
                }
            }
        }
    }
    return 0.5 * (est + est.adjoint().eval());
}

} // namespace qlti
