#include "qlti/quantize.hpp"

#include "qlti/parallel.hpp"
#include "qlti/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace qlti {

namespace {

using cplx = std::complex<double>;

void require_even(Eigen::Index rows, Eigen::Index cols, const char* who) {
    if (rows <= 0 || rows % 2 != 0 || cols < 0 || cols % 2 != 0) {
        std::ostringstream msg;
        msg << who << ": dimensions must be even (got " << rows << " x "
            << cols << ")";
        throw SchemaError(msg.str());
    }
}

// Rotate the phase of v so that its largest-magnitude component is real
// positive (first such component on ties).
void phase_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const double a = std::abs(v(imax));
    if (a > 0.0) {
        v *= std::conj(v(imax)) / a;
    }
}

struct DeficitSplit {
    int d_plus = 0;
    int d_minus = 0;
    Eigen::MatrixXcd u_plus;  // descending eigenvalue order
    Eigen::MatrixXcd u_minus; // descending |eigenvalue| order
    Eigen::VectorXd lam_plus;
    Eigen::VectorXd lam_minus; // absolute values
    bool near_threshold = false;
};

DeficitSplit split_deficit(const Eigen::MatrixXcd& Z, double rank_tol,
                           bool real_mode, double zero_floor) {
    const Eigen::Index d = Z.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Z);
    if (es.info() != Eigen::Success) {
        throw NumericError("deficit eigendecomposition failed");
    }
    const Eigen::VectorXd lam = es.eigenvalues(); // ascending
    DeficitSplit out;
    const double lmax = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
    // Below the rounding scale of i J - G (i J) G^dag the whole deficit is
    // zero; the relative threshold alone would retain pure noise there.
    if (lmax <= zero_floor) {
        out.u_plus.resize(d, 0);
        out.u_minus.resize(d, 0);
        return out;
    }
    const double thr = rank_tol * lmax;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double a = std::abs(lam(i));
        if (a > 0.1 * thr && a < 10.0 * thr) {
            out.near_threshold = true;
        }
        if (lam(i) > thr) {
            ++out.d_plus;
        } else if (lam(i) < -thr) {
            ++out.d_minus;
        }
    }
    out.lam_plus.resize(out.d_plus);
    out.u_plus.resize(d, out.d_plus);
    for (int i = 0; i < out.d_plus; ++i) {
        const Eigen::Index src = d - 1 - i; // descending
        out.lam_plus(i) = lam(src);
        out.u_plus.col(i) = es.eigenvectors().col(src);
        phase_gauge(out.u_plus.col(i));
    }
    if (real_mode) {
        if (out.d_plus != out.d_minus) {
            throw NumericError(
                "real transfer at omega=0 must have a sign-balanced deficit "
                "spectrum");
        }
        // For purely imaginary Z the -lambda eigenvector is the exact
        // conjugate of the +lambda one; constructing it that way keeps the
        // noise factor real.
        out.lam_minus = out.lam_plus;
        out.u_minus = out.u_plus.conjugate();
    } else {
        out.lam_minus.resize(out.d_minus);
        out.u_minus.resize(d, out.d_minus);
        for (int i = 0; i < out.d_minus; ++i) {
            out.lam_minus(i) = -lam(i); // most negative first
            out.u_minus.col(i) = es.eigenvectors().col(i);
            phase_gauge(out.u_minus.col(i));
        }
    }
    return out;
}

} // namespace

Eigen::MatrixXcd ccr_deficit(const Eigen::MatrixXcd& G) {
    require_even(G.rows(), G.cols(), "ccr deficit");
    const Eigen::Index m = G.rows() / 2;
    const Eigen::Index n = G.cols() / 2;
    const cplx i1(0.0, 1.0);
    const Eigen::MatrixXcd Jout = i1 * symplectic_form(m).cast<cplx>();
    const Eigen::MatrixXcd Jin = i1 * symplectic_form(n).cast<cplx>();
    Eigen::MatrixXcd Z = Jout - G * Jin * G.adjoint();
    const double scale = std::max(1.0, Z.cwiseAbs().maxCoeff());
    if ((Z - Z.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NumericError("ccr deficit lost Hermiticity");
    }
    return 0.5 * (Z + Z.adjoint().eval());
}

Eigen::MatrixXcd ccr_deficit(const MatrixFunction& G, double omega) {
    return ccr_deficit(G.eval(omega));
}

NoiseModel minimal_noise(const MatrixFunction& G, double rank_tol,
                         Diagnostics* diag) {
    require_even(G.rows(), G.cols(), "minimal noise");
    if (rank_tol <= 0.0 || rank_tol >= 1.0) {
        throw SchemaError("minimal noise: rank_tol must lie in (0, 1)");
    }
    const Eigen::Index m2 = G.rows();
    const std::size_t K = G.size();

    std::vector<Eigen::MatrixXcd> Ns(K);
    std::vector<NoiseSpectrum> spec(K);
    std::vector<std::string> errs(K);
    std::vector<std::vector<std::string>> warns(K);

    parallel_for(K, [&](std::size_t k) {
        const double omega = G.grid()[k];
        try {
            const Eigen::MatrixXcd Z = ccr_deficit(G.sample(k));
            const bool real_mode = omega == 0.0;
            const double gmax =
                G.sample(k).size() ? G.sample(k).cwiseAbs().maxCoeff() : 0.0;
            const double zero_floor =
                1e-12 *
                std::max(1.0, gmax * gmax *
                                  static_cast<double>(G.sample(k).cols()));
            const DeficitSplit sp =
                split_deficit(Z, rank_tol, real_mode, zero_floor);
            if (sp.near_threshold) {
                std::ostringstream msg;
                msg << "deficit spectrum within a factor 10 of the rank "
                       "threshold at omega="
                    << omega << "; consider adjusting rank_tol";
                warns[k].push_back(msg.str());
            }
            const int dp = sp.d_plus;
            const int dm = sp.d_minus;
            const int ell = std::max(dp, dm);
            NoiseSpectrum& s = spec[k];
            s.ell = ell;
            s.d_plus = dp;
            s.d_minus = dm;
            if (ell == 0) {
                Ns[k].setZero(m2, 0);
                return;
            }
            Eigen::MatrixXcd Gamma =
                Eigen::MatrixXcd::Zero(dp + dm, 2 * ell);
            Eigen::MatrixXcd Uu(m2, dp + dm);
            for (int i = 0; i < dp; ++i) {
                Gamma(i, i) = std::sqrt(sp.lam_plus(i));
                Uu.col(i) = sp.u_plus.col(i);
            }
            for (int i = 0; i < dm; ++i) {
                Gamma(dp + i, ell + i) = std::sqrt(sp.lam_minus(i));
                Uu.col(dp + i) = sp.u_minus.col(i);
            }
            Eigen::MatrixXcd N = Uu * Gamma * ladder_map(ell).adjoint();
            const cplx i1(0.0, 1.0);
            const Eigen::MatrixXcd Jl =
                i1 * symplectic_form(ell).cast<cplx>();
            const double res = (N * Jl * N.adjoint() - Z).norm();
            if (res > 1e-9 * std::max(1.0, Z.norm())) {
                std::ostringstream msg;
                msg << "omega=" << omega << " (residual " << res << ")";
                errs[k] = msg.str();
                return;
            }
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(N);
            const Eigen::VectorXd sv = svd.singularValues();
            s.gamma.assign(sv.data(), sv.data() + sv.size());
            Ns[k] = std::move(N);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "omega=" << omega << " (" << e.what() << ")";
            errs[k] = msg.str();
        }
    });

    std::string joined;
    for (const auto& e : errs) {
        if (!e.empty()) {
            joined += joined.empty() ? e : "; " + e;
        }
    }
    if (!joined.empty()) {
        throw NumericError("minimal noise factorization failed at: " + joined);
    }
    if (diag) {
        for (const auto& w : warns) {
            for (const auto& msg : w) {
                diag->warn(msg);
            }
        }
    }

    int ell_max = 0;
    for (const auto& s : spec) {
        ell_max = std::max(ell_max, s.ell);
    }
    std::vector<Eigen::MatrixXcd> padded(K);
    for (std::size_t k = 0; k < K; ++k) {
        const int ell = spec[k].ell;
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(m2, 2 * ell_max);
        if (ell > 0) {
            P.block(0, 0, m2, ell) = Ns[k].block(0, 0, m2, ell);
            P.block(0, ell_max, m2, ell) = Ns[k].block(0, ell, m2, ell);
        }
        padded[k] = std::move(P);
    }

    NoiseModel model;
    model.G = G;
    model.N = MatrixFunction(G.grid(), std::move(padded));
    model.per_freq = std::move(spec);
    return model;
}

namespace {

// Index permutation realizing conjugation at omega=0 in the blockwise ladder
// basis of (input, noise) columns: swap the annihilation and creation halves
// of each block.
std::vector<Eigen::Index> conjugate_partner_map(Eigen::Index n,
                                                Eigen::Index ell) {
    std::vector<Eigen::Index> part(2 * (n + ell));
    for (Eigen::Index j = 0; j < n; ++j) {
        part[j] = n + j;
        part[n + j] = j;
    }
    for (Eigen::Index j = 0; j < ell; ++j) {
        part[2 * n + j] = 2 * n + ell + j;
        part[2 * n + ell + j] = 2 * n + j;
    }
    return part;
}

} // namespace

Dilation dilate(const NoiseModel& model, Diagnostics* diag) {
    const MatrixFunction& G = model.G;
    const MatrixFunction& N = model.N;
    require_even(G.rows(), G.cols(), "dilate");
    if (N.rows() != G.rows() || !(N.grid() == G.grid())) {
        throw SchemaError("dilate: noise factor does not match the transfer "
                          "matrix grid or row count");
    }
    if (model.per_freq.size() != G.size()) {
        throw SchemaError("dilate: per-frequency records do not match grid");
    }
    const Eigen::Index m = G.rows() / 2;
    const Eigen::Index n = G.cols() / 2;
    const Eigen::Index ell = N.cols() / 2;
    const Eigen::Index a = n + ell - m;
    if (a < 0) {
        throw SchemaError("dilate: needs at least as many input plus noise "
                          "modes as output modes");
    }
    const Eigen::Index t = n + ell; // total modes per side
    const std::size_t K = G.size();

    // Blockwise ladder maps for the input side and the output side.
    Eigen::MatrixXcd Pin = Eigen::MatrixXcd::Zero(2 * t, 2 * t);
    Pin.block(0, 0, 2 * n, 2 * n) = ladder_map(n);
    Pin.block(2 * n, 2 * n, 2 * ell, 2 * ell) = ladder_map(ell);
    Eigen::MatrixXcd Pout = Eigen::MatrixXcd::Zero(2 * t, 2 * t);
    Pout.block(0, 0, 2 * m, 2 * m) = ladder_map(m);
    if (a > 0) {
        Pout.block(2 * m, 2 * m, 2 * a, 2 * a) = ladder_map(a);
    }

    Eigen::ArrayXd sig(2 * t);
    sig.segment(0, n).setConstant(1.0);
    sig.segment(n, n).setConstant(-1.0);
    sig.segment(2 * n, ell).setConstant(1.0);
    sig.segment(2 * n + ell, ell).setConstant(-1.0);

    const std::vector<Eigen::Index> part = conjugate_partner_map(n, ell);

    // Global (q..., p...) orderings from the blockwise layout.
    std::vector<Eigen::Index> row_from(2 * t), col_from(2 * t);
    for (Eigen::Index g = 0; g < m; ++g) row_from[g] = g;
    for (Eigen::Index g = 0; g < a; ++g) row_from[m + g] = 2 * m + g;
    for (Eigen::Index g = 0; g < m; ++g) row_from[m + a + g] = m + g;
    for (Eigen::Index g = 0; g < a; ++g) row_from[2 * m + a + g] = 2 * m + a + g;
    for (Eigen::Index g = 0; g < n; ++g) col_from[g] = g;
    for (Eigen::Index g = 0; g < ell; ++g) col_from[n + g] = 2 * n + g;
    for (Eigen::Index g = 0; g < n; ++g) col_from[n + ell + g] = n + g;
    for (Eigen::Index g = 0; g < ell; ++g) col_from[2 * n + ell + g] = 2 * n + ell + g;

    Dilation dil;
    dil.m = m;
    dil.n = n;
    dil.ell = ell;
    dil.a = a;
    for (Eigen::Index i = 0; i < m; ++i) dil.out_rows.push_back(i);
    for (Eigen::Index i = 0; i < m; ++i) dil.out_rows.push_back(m + a + i);
    for (Eigen::Index i = 0; i < a; ++i) dil.anc_rows.push_back(m + i);
    for (Eigen::Index i = 0; i < a; ++i) dil.anc_rows.push_back(2 * m + a + i);
    for (Eigen::Index j = 0; j < n; ++j) dil.in_cols.push_back(j);
    for (Eigen::Index j = 0; j < n; ++j) dil.in_cols.push_back(n + ell + j);
    for (Eigen::Index j = 0; j < ell; ++j) dil.noise_cols.push_back(n + j);
    for (Eigen::Index j = 0; j < ell; ++j) dil.noise_cols.push_back(2 * n + ell + j);

    const Eigen::MatrixXd Jt = symplectic_form(t);
    const double Jnorm = Jt.norm();

    std::vector<Eigen::MatrixXcd> Ms(K);
    std::vector<std::string> errs(K);
    std::vector<std::vector<std::string>> warns(K);

    auto inner = [&sig](const Eigen::RowVectorXcd& u,
                        const Eigen::RowVectorXcd& v) -> cplx {
        return (u.array() * sig.transpose() * v.conjugate().array()).sum();
    };

    parallel_for(K, [&](std::size_t k) {
        const double omega = G.grid()[k];
        try {
            Eigen::MatrixXcd GN(2 * m, 2 * t);
            GN.block(0, 0, 2 * m, 2 * n) = G.sample(k);
            if (ell > 0) {
                GN.block(0, 2 * n, 2 * m, 2 * ell) = N.sample(k);
            }
            const Eigen::MatrixXcd A =
                ladder_map(m).adjoint() * GN * Pin;
            const bool real_mode = omega == 0.0;

            std::vector<Eigen::RowVectorXcd> rows;
            std::vector<double> signs;
            rows.reserve(static_cast<std::size_t>(2 * t));
            for (Eigen::Index i = 0; i < 2 * m; ++i) {
                rows.push_back(A.row(i));
                signs.push_back(i < m ? 1.0 : -1.0);
            }

            std::vector<Eigen::RowVectorXcd> plus_rows, minus_rows;
            Eigen::Index plus_left = a, minus_left = a;
            std::vector<bool> used(static_cast<std::size_t>(2 * t), false);

            while (plus_left > 0 || minus_left > 0) {
                double best = 0.0;
                Eigen::Index best_j = -1;
                Eigen::RowVectorXcd best_v;
                for (Eigen::Index j = 0; j < 2 * t; ++j) {
                    if (used[static_cast<std::size_t>(j)]) continue;
                    Eigen::RowVectorXcd v =
                        Eigen::RowVectorXcd::Zero(2 * t);
                    v(j) = 1.0;
                    for (int pass = 0; pass < 2; ++pass) {
                        for (std::size_t r = 0; r < rows.size(); ++r) {
                            v -= signs[r] * inner(v, rows[r]) * rows[r];
                        }
                    }
                    const double nu = std::real(inner(v, v));
                    const bool ok = real_mode
                                        ? nu > 0.0
                                        : (nu > 0.0 ? plus_left > 0
                                                    : minus_left > 0);
                    if (ok && std::abs(nu) > std::abs(best)) {
                        best = nu;
                        best_j = j;
                        best_v = std::move(v);
                    }
                }
                if (best_j < 0 || std::abs(best) < 1e-10) {
                    std::ostringstream msg;
                    msg << "omega=" << omega
                        << " (no usable completion direction, best metric "
                           "norm "
                        << std::abs(best) << ")";
                    errs[k] = msg.str();
                    return;
                }
                if (std::abs(best) < 1e-6) {
                    std::ostringstream msg;
                    msg << "dilation completion pivot has small metric norm "
                        << std::abs(best) << " at omega=" << omega;
                    warns[k].push_back(msg.str());
                }
                used[static_cast<std::size_t>(best_j)] = true;
                Eigen::RowVectorXcd r = best_v / std::sqrt(std::abs(best));
                if (real_mode) {
                    Eigen::RowVectorXcd w(2 * t);
                    for (Eigen::Index j = 0; j < 2 * t; ++j) {
                        w(part[static_cast<std::size_t>(j)]) =
                            std::conj(r(j));
                    }
                    plus_rows.push_back(r);
                    minus_rows.push_back(w);
                    rows.push_back(std::move(r));
                    signs.push_back(1.0);
                    rows.push_back(std::move(w));
                    signs.push_back(-1.0);
                    --plus_left;
                    --minus_left;
                } else {
                    const double sgn = best > 0.0 ? 1.0 : -1.0;
                    (sgn > 0.0 ? plus_rows : minus_rows).push_back(r);
                    rows.push_back(std::move(r));
                    signs.push_back(sgn);
                    (sgn > 0.0 ? plus_left : minus_left) -= 1;
                }
            }

            Eigen::MatrixXcd At(2 * t, 2 * t);
            At.topRows(2 * m) = A;
            for (Eigen::Index i = 0; i < a; ++i) {
                At.row(2 * m + i) = plus_rows[static_cast<std::size_t>(i)];
                At.row(2 * m + a + i) =
                    minus_rows[static_cast<std::size_t>(i)];
            }
            const Eigen::MatrixXcd Mb = Pout * At * Pin.adjoint();

            Eigen::MatrixXcd Mg(2 * t, 2 * t);
            for (Eigen::Index r = 0; r < 2 * t; ++r) {
                for (Eigen::Index c = 0; c < 2 * t; ++c) {
                    Mg(r, c) = Mb(row_from[static_cast<std::size_t>(r)],
                                  col_from[static_cast<std::size_t>(c)]);
                }
            }
            for (Eigen::Index i = 0; i < 2 * m; ++i) {
                for (Eigen::Index j = 0; j < 2 * n; ++j) {
                    Mg(dil.out_rows[static_cast<std::size_t>(i)],
                       dil.in_cols[static_cast<std::size_t>(j)]) =
                        G.sample(k)(i, j);
                }
                for (Eigen::Index j = 0; j < 2 * ell; ++j) {
                    Mg(dil.out_rows[static_cast<std::size_t>(i)],
                       dil.noise_cols[static_cast<std::size_t>(j)]) =
                        N.sample(k)(i, j);
                }
            }
            if (real_mode) {
                Mg = Mg.real().cast<cplx>();
            }
            const double res =
                (Mg * Jt.cast<cplx>() * Mg.adjoint() - Jt.cast<cplx>())
                    .norm();
            if (res > 1e-9 * Jnorm) {
                std::ostringstream msg;
                msg << "omega=" << omega << " (group residual " << res
                    << ")";
                errs[k] = msg.str();
                return;
            }
            Ms[k] = std::move(Mg);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "omega=" << omega << " (" << e.what() << ")";
            errs[k] = msg.str();
        }
    });

    std::string joined;
    for (const auto& e : errs) {
        if (!e.empty()) {
            joined += joined.empty() ? e : "; " + e;
        }
    }
    if (!joined.empty()) {
        throw NumericError("dilation failed at: " + joined);
    }
    if (diag) {
        for (const auto& w : warns) {
            for (const auto& msg : w) {
                diag->warn(msg);
            }
        }
    }

    dil.M_ext = MatrixFunction(G.grid(), std::move(Ms));
    return dil;
}

} // namespace qlti
