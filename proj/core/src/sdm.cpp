#include "qlti/sdm.hpp"

#include "qlti/parallel.hpp"
#include "qlti/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <sstream>
#include <vector>

namespace qlti {

namespace {

using cplx = std::complex<double>;

void require_sdm_shape(const MatrixFunction& f) {
    if (!f.square() || f.rows() <= 0 || f.rows() % 2 != 0) {
        throw SchemaError("spectral density: matrix function must be square "
                          "with even size");
    }
}

void phase_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const double a = std::abs(v(imax));
    if (a > 0.0) {
        v *= std::conj(v(imax)) / a;
    }
}

} // namespace

SpectralDensityMatrix::SpectralDensityMatrix(MatrixFunction f) {
    require_sdm_shape(f);
    std::vector<Eigen::MatrixXcd> fixed(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Eigen::MatrixXcd& S = f.sample(k);
        const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
        if ((S - S.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            std::ostringstream msg;
            msg << "spectral density: sample at omega=" << f.grid()[k]
                << " is not Hermitian";
            throw SchemaError(msg.str());
        }
        Eigen::MatrixXcd H = 0.5 * (S + S.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            H, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -1e-10 * scale) {
            std::ostringstream msg;
            msg << "spectral density: sample at omega=" << f.grid()[k]
                << " is not positive semidefinite (min eigenvalue "
                << es.eigenvalues()(0) << ")";
            throw SchemaError(msg.str());
        }
        fixed[k] = std::move(H);
    }
    f_ = MatrixFunction(f.grid(), std::move(fixed), ZeroReality::Allow);
}

double uncertainty_margin(const Eigen::MatrixXcd& S) {
    if (S.rows() != S.cols() || S.rows() % 2 != 0 || S.rows() <= 0) {
        throw SchemaError("uncertainty margin: needs a square matrix of "
                          "even size");
    }
    const Eigen::Index n = S.rows() / 2;
    const Eigen::MatrixXcd A =
        S + cplx(0.0, 0.5) * symplectic_form(n).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (A + A.adjoint().eval()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double SpectralDensityMatrix::physicality_margin(std::size_t k) const {
    return uncertainty_margin(f_.sample(k));
}

bool SpectralDensityMatrix::physical(double tol) const {
    for (std::size_t k = 0; k < f_.size(); ++k) {
        if (physicality_margin(k) < -tol) {
            return false;
        }
    }
    return true;
}

SpectralDensityMatrix vacuum_sdm(const FrequencyGrid& grid, Eigen::Index n) {
    if (n <= 0) {
        throw SchemaError("vacuum spectrum: mode count must be positive");
    }
    return SpectralDensityMatrix(MatrixFunction::constant(
        grid, 0.5 * Eigen::MatrixXcd::Identity(2 * n, 2 * n)));
}

SpectralDensityMatrix transform_sdm(const MatrixFunction& M,
                                    const SpectralDensityMatrix& S) {
    if (!(M.grid() == S.grid())) {
        throw SchemaError("transform: map and spectrum grids differ");
    }
    if (M.cols() != 2 * S.n_modes() || M.rows() <= 0 || M.rows() % 2 != 0) {
        throw SchemaError("transform: map shape does not match the "
                          "spectrum");
    }
    std::vector<Eigen::MatrixXcd> out(S.size());
    for (std::size_t k = 0; k < S.size(); ++k) {
        Eigen::MatrixXcd T = M.sample(k) * S.sample(k) * M.sample(k).adjoint();
        T = 0.5 * (T + T.adjoint().eval());
        const double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            T, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -1e-10 * scale) {
            std::ostringstream msg;
            msg << "transform: output spectrum lost positivity at omega="
                << S.grid()[k];
            throw NumericError(msg.str());
        }
        out[k] = std::move(T);
    }
    return SpectralDensityMatrix(
        MatrixFunction(S.grid(), std::move(out), ZeroReality::Allow));
}

Eigen::VectorXd WilliamsonSample::occupation_plus() const {
    return sigma + delta - Eigen::VectorXd::Constant(sigma.size(), 0.5);
}

Eigen::VectorXd WilliamsonSample::occupation_minus() const {
    return sigma - delta - Eigen::VectorXd::Constant(sigma.size(), 0.5);
}

Eigen::MatrixXcd williamson_invariant_matrix(const Eigen::VectorXd& sigma,
                                             const Eigen::VectorXd& delta) {
    const Eigen::Index n = sigma.size();
    if (delta.size() != n || n <= 0) {
        throw SchemaError("invariant matrix: sigma and delta sizes differ");
    }
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        C(j, j) = sigma(j);
        C(n + j, n + j) = sigma(j);
        C(j, n + j) = cplx(0.0, delta(j));
        C(n + j, j) = cplx(0.0, -delta(j));
    }
    return C;
}

WilliamsonForm williamson(const SpectralDensityMatrix& S, Diagnostics* diag) {
    const Eigen::Index n = S.n_modes();
    const std::size_t K = S.size();
    const Eigen::MatrixXcd J = symplectic_form(n).cast<cplx>();
    const double Jnorm = J.norm();

    WilliamsonForm form;
    form.grid = S.grid();
    form.n_modes = n;
    form.samples.resize(K);
    std::vector<std::exception_ptr> errs(K);
    std::vector<std::vector<std::string>> warns(K);

    parallel_for(K, [&](std::size_t k) {
        const double omega = S.grid()[k];
        try {
            const Eigen::MatrixXcd& Sk = S.sample(k);
            const double scale = std::max(1.0, Sk.cwiseAbs().maxCoeff());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Sk);
            if (es.info() != Eigen::Success) {
                throw NumericError("spectrum eigendecomposition failed");
            }
            if (es.eigenvalues()(0) < 1e-12 * scale) {
                std::ostringstream msg;
                msg << "spectrum is singular at omega=" << omega
                    << " (min eigenvalue " << es.eigenvalues()(0) << ")";
                throw DegeneracyError(msg.str());
            }
            const Eigen::VectorXd rt = es.eigenvalues().cwiseSqrt();
            const Eigen::MatrixXcd Sh = es.eigenvectors() *
                                        rt.cast<cplx>().asDiagonal() *
                                        es.eigenvectors().adjoint();
            const Eigen::MatrixXcd Shi =
                es.eigenvectors() *
                rt.cwiseInverse().cast<cplx>().asDiagonal() *
                es.eigenvectors().adjoint();

            Eigen::MatrixXcd B = Sh * (cplx(0.0, 1.0) * J) * Sh;
            B = 0.5 * (B + B.adjoint().eval());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb(B);
            if (esb.info() != Eigen::Success) {
                throw NumericError("congruence eigendecomposition failed");
            }
            const Eigen::VectorXd lam = esb.eigenvalues();
            if (lam(n - 1) >= 0.0 || lam(n) <= 0.0) {
                throw NumericError("congruence spectrum is not split into "
                                   "n negative and n positive values");
            }

            WilliamsonSample& ws = form.samples[k];
            ws.mu.resize(2 * n);
            Eigen::MatrixXcd W(2 * n, 2 * n);
            for (Eigen::Index j = 0; j < n; ++j) {
                ws.mu(j) = lam(2 * n - 1 - j); // positives descending
                W.col(j) = esb.eigenvectors().col(2 * n - 1 - j);
                phase_gauge(W.col(j));
            }
            const bool real_mode = omega == 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (real_mode) {
                    // S real at omega=0 makes B purely imaginary, so the
                    // conjugate of a +mu eigenvector is exactly the -mu one.
                    ws.mu(n + j) = -ws.mu(j);
                    W.col(n + j) = W.col(j).conjugate();
                } else {
                    ws.mu(n + j) = lam(j); // most negative first
                    W.col(n + j) = esb.eigenvectors().col(j);
                    phase_gauge(W.col(n + j));
                }
            }

            Eigen::MatrixXcd Vhat(2 * n, 2 * n);
            for (Eigen::Index j = 0; j < 2 * n; ++j) {
                Vhat.col(j) =
                    Shi * W.col(j) * std::sqrt(std::abs(ws.mu(j)));
            }
            Eigen::VectorXd sgn(2 * n);
            sgn.head(n).setConstant(1.0);
            sgn.tail(n).setConstant(-1.0);
            Eigen::MatrixXcd M = (cplx(0.0, -1.0) * J) * Vhat *
                                 sgn.cast<cplx>().asDiagonal() *
                                 ladder_map(n).adjoint();
            if (real_mode) {
                M = M.real().cast<cplx>();
            }

            ws.sigma = 0.5 * (ws.mu.head(n) - ws.mu.tail(n));
            ws.delta = 0.5 * (ws.mu.head(n) + ws.mu.tail(n));
            ws.margin = uncertainty_margin(Sk);
            ws.physical =
                (ws.sigma - ws.delta.cwiseAbs()).minCoeff() >= 0.5 - 1e-9;
            if (!ws.physical) {
                std::ostringstream msg;
                msg << "spectrum at omega=" << omega
                    << " is not realizable by a quantum state (sigma - "
                       "|delta| < 1/2)";
                warns[k].push_back(msg.str());
            }

            const Eigen::MatrixXcd C =
                williamson_invariant_matrix(ws.sigma, ws.delta);
            const double res_j = (M * J * M.adjoint() - J).norm();
            const double res_c = (M * C * M.adjoint() - Sk).norm();
            if (res_j > 1e-9 * Jnorm ||
                res_c > 1e-9 * std::max(1.0, Sk.norm())) {
                std::ostringstream msg;
                msg << "invariant-form reduction failed at omega=" << omega
                    << " (group residual " << res_j
                    << ", reconstruction residual " << res_c << ")";
                throw NumericError(msg.str());
            }
            ws.M = std::move(M);
        } catch (...) {
            errs[k] = std::current_exception();
        }
    });

    for (const auto& e : errs) {
        if (e) {
            std::rethrow_exception(e); // first failing frequency, own type
        }
    }
    if (diag) {
        for (const auto& w : warns) {
            for (const auto& msg : w) {
                diag->warn(msg);
            }
        }
    }
    return form;
}

BoundPair single_mode_bound(const Eigen::MatrixXcd& S) {
    if (S.rows() != 2 || S.cols() != 2) {
        throw SchemaError("single-mode bound: needs a 2 x 2 sample");
    }
    BoundPair b;
    b.lhs = std::real(S(0, 0)) * std::real(S(1, 1)) - std::norm(S(0, 1));
    b.rhs = 0.25 + std::abs(std::imag(S(0, 1)));
    return b;
}

OpenSystemBound open_system_bound(const MatrixFunction& G,
                                  const MatrixFunction& N,
                                  const SpectralDensityMatrix& S_in) {
    if (!(G.grid() == N.grid()) || !(G.grid() == S_in.grid())) {
        throw SchemaError("output bound: grids differ");
    }
    if (G.rows() != N.rows() || G.rows() % 2 != 0 || G.rows() <= 0 ||
        G.cols() % 2 != 0 || N.cols() % 2 != 0 ||
        G.cols() != 2 * S_in.n_modes()) {
        throw SchemaError("output bound: shapes do not match");
    }
    const Eigen::Index m = G.rows() / 2;
    const Eigen::Index ell = N.cols() / 2;
    const std::size_t K = G.size();

    OpenSystemBound out;
    out.grid = G.grid();
    out.lhs.resize(static_cast<Eigen::Index>(K), m);
    out.rhs.resize(static_cast<Eigen::Index>(K), m);
    out.rhs_noise.resize(static_cast<Eigen::Index>(K), m);

    for (std::size_t k = 0; k < K; ++k) {
        const Eigen::MatrixXcd& Gk = G.sample(k);
        const Eigen::MatrixXcd& Nk = N.sample(k);
        const Eigen::MatrixXcd GS =
            Gk * S_in.sample(k) * Gk.adjoint();
        const Eigen::MatrixXcd Sout = GS + 0.5 * Nk * Nk.adjoint();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double sqq = std::real(Sout(i, i));
            const double spp = std::real(Sout(m + i, m + i));
            out.lhs(static_cast<Eigen::Index>(k), i) =
                std::sqrt(std::max(0.0, sqq * spp));
            const double det_g =
                std::real(GS(i, i)) * std::real(GS(m + i, m + i)) -
                std::norm(GS(i, m + i));
            double noise = 0.0;
            for (Eigen::Index j = 0; j < ell; ++j) {
                const cplx det_n = Nk(i, j) * Nk(m + i, ell + j) -
                                   Nk(i, ell + j) * Nk(m + i, j);
                noise += std::abs(det_n);
            }
            noise *= 0.5;
            out.rhs_noise(static_cast<Eigen::Index>(k), i) = noise;
            out.rhs(static_cast<Eigen::Index>(k), i) =
                std::sqrt(std::max(0.0, det_g)) + noise;
        }
    }
    return out;
}

MatrixFunction sdm_to_ladder(const SpectralDensityMatrix& S) {
    const Eigen::Index n = S.n_modes();
    const Eigen::MatrixXcd P = ladder_map(n);
    std::vector<Eigen::MatrixXcd> out(S.size());
    for (std::size_t k = 0; k < S.size(); ++k) {
        out[k] = P.transpose() * S.sample(k) * P.conjugate();
    }
    return MatrixFunction(S.grid(), std::move(out), ZeroReality::Allow);
}

} // namespace qlti
