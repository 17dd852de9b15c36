#include "qlti/decompose.hpp"

#include "qlti/parallel.hpp"
#include "qlti/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace qlti {

namespace {

using cplx = std::complex<double>;

constexpr double kInputTol = 1e-8;  // gate on claimed properties of inputs
constexpr double kPostTol = 1e-9;   // own postconditions
constexpr double kUnitCluster = 1e-8;

void require_even_square(const Eigen::MatrixXcd& M, const char* who) {
    if (M.rows() != M.cols() || M.rows() <= 0 || M.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << who << ": matrix must be square with even size (got "
            << M.rows() << " x " << M.cols() << ")";
        throw SchemaError(msg.str());
    }
}

void require_hermitian(const Eigen::MatrixXcd& H, const char* who) {
    const double scale = std::max(1.0, H.norm());
    if ((H - H.adjoint()).norm() > kInputTol * scale) {
        throw SchemaError(std::string(who) + ": matrix is not Hermitian");
    }
}

void require_group(const Eigen::MatrixXcd& M, const char* who) {
    const double Jnorm = std::sqrt(static_cast<double>(M.rows()));
    if (conjugate_symplectic_residual(M) > kInputTol * Jnorm) {
        throw SchemaError(std::string(who) +
                          ": matrix is not in the group (M J M^dag != J)");
    }
}

void require_unitary(const Eigen::MatrixXcd& Q, const char* who) {
    const Eigen::Index d = Q.rows();
    const double scale = std::sqrt(static_cast<double>(d));
    if ((Q.adjoint() * Q - Eigen::MatrixXcd::Identity(d, d)).norm() >
        kInputTol * scale) {
        throw SchemaError(std::string(who) + ": matrix is not unitary");
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

Eigen::MatrixXcd blkdiag2(const Eigen::MatrixXcd& V) {
    const Eigen::Index n = V.rows();
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    B.topLeftCorner(n, n) = V;
    B.bottomRightCorner(n, n) = V;
    return B;
}

} // namespace

SortedEigen sort_eigenelements(const Eigen::MatrixXcd& H) {
    require_even_square(H, "sort_eigenelements");
    require_hermitian(H, "sort_eigenelements");
    const Eigen::Index n = H.rows() / 2;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (H + H.adjoint().eval()));
    if (es.info() != Eigen::Success) {
        throw NumericError("sort_eigenelements: eigendecomposition failed");
    }
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam(0) <= 0.0) {
        throw SchemaError("sort_eigenelements: matrix is not positive "
                          "definite");
    }

    SortedEigen out;
    out.values.resize(2 * n);
    out.vectors.resize(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = lam(n + i);
        out.vectors.col(i) = es.eigenvectors().col(n + i);
        out.values(n + i) = lam(n - 1 - i);
        out.vectors.col(n + i) = es.eigenvectors().col(n - 1 - i);
    }
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        phase_gauge(out.vectors.col(i));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(out.values(i) * out.values(n + i) - 1.0) > 1e-6) {
            throw NumericError("sort_eigenelements: eigenvalues do not pair "
                               "into reciprocals");
        }
    }
    return out;
}

SpectralFactorization symplectic_spectral(const Eigen::MatrixXcd& H) {
    require_even_square(H, "symplectic_spectral");
    require_hermitian(H, "symplectic_spectral");
    require_group(H, "symplectic_spectral");
    const Eigen::Index n2 = H.rows();
    const Eigen::Index n = n2 / 2;
    const Eigen::MatrixXcd J = symplectic_form(n).cast<cplx>();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (H + H.adjoint().eval()));
    if (es.info() != Eigen::Success) {
        throw NumericError("symplectic_spectral: eigendecomposition failed");
    }
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam(0) <= 0.0) {
        throw SchemaError("symplectic_spectral: matrix is not positive "
                          "definite");
    }

    std::vector<Eigen::Index> unit_idx, above_idx;
    for (Eigen::Index i = 0; i < n2; ++i) {
        if (std::abs(lam(i) - 1.0) <= kUnitCluster) {
            unit_idx.push_back(i);
        } else if (lam(i) > 1.0) {
            above_idx.push_back(i); // ascending, solver order
        }
    }
    const Eigen::Index mu = static_cast<Eigen::Index>(unit_idx.size());
    const Eigen::Index na = static_cast<Eigen::Index>(above_idx.size());
    if (mu % 2 != 0 || mu + 2 * na != n2) {
        throw NumericError("symplectic_spectral: spectrum does not split "
                           "into reciprocal pairs and a unit block");
    }
    const Eigen::Index mp = mu / 2;

    // Eigenvectors above 1, phase-fixed; partners -J x have the reciprocal
    // eigenvalue and pair to X^dag J Y = 1 exactly.
    Eigen::MatrixXcd X(n2, na), Y(n2, na);
    for (Eigen::Index i = 0; i < na; ++i) {
        X.col(i) = es.eigenvectors().col(above_idx[static_cast<std::size_t>(i)]);
        phase_gauge(X.col(i));
        Y.col(i) = -(J * X.col(i));
    }

    // Unit block: split by the signature of the restricted form F^dag iJ F.
    Eigen::MatrixXcd UE(n2, mu);
    if (mu > 0) {
        Eigen::MatrixXcd F(n2, mu);
        for (Eigen::Index i = 0; i < mu; ++i) {
            F.col(i) = es.eigenvectors().col(unit_idx[static_cast<std::size_t>(i)]);
        }
        const Eigen::MatrixXcd K = cplx(0.0, 1.0) * (F.adjoint() * J * F);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esk(
            0.5 * (K + K.adjoint().eval()));
        if (esk.info() != Eigen::Success) {
            throw NumericError("symplectic_spectral: unit-block form "
                               "diagonalization failed");
        }
        const Eigen::VectorXd kap = esk.eigenvalues();
        for (Eigen::Index i = 0; i < mu; ++i) {
            if (std::abs(std::abs(kap(i)) - 1.0) > 1e-6) {
                throw NumericError("symplectic_spectral: unit-block form is "
                                   "not an involution");
            }
        }
        if ((kap.array() > 0.0).count() != mp) {
            throw NumericError("symplectic_spectral: unit-block signature is "
                               "unbalanced");
        }
        Eigen::MatrixXcd Vpp(mu, mu);
        Vpp.leftCols(mp) = esk.eigenvectors().rightCols(mp); // +1 first
        Vpp.rightCols(mp) = esk.eigenvectors().leftCols(mp);
        for (Eigen::Index i = 0; i < mu; ++i) {
            phase_gauge(Vpp.col(i));
        }
        UE = F * Vpp * ladder_map(mp).adjoint();
    }

    SpectralFactorization out;
    out.U.resize(n2, n2);
    out.d.resize(n);
    out.U.leftCols(mp) = UE.leftCols(mp);
    out.U.block(0, mp, n2, na) = X;
    out.U.block(0, n, n2, mp) = UE.rightCols(mp);
    out.U.rightCols(na) = Y;
    out.d.head(mp).setOnes();
    for (Eigen::Index i = 0; i < na; ++i) {
        out.d(mp + i) = lam(above_idx[static_cast<std::size_t>(i)]);
    }

    const double Jnorm = std::sqrt(static_cast<double>(n2));
    Eigen::VectorXd dfull(n2);
    dfull.head(n) = out.d;
    dfull.tail(n) = out.d.cwiseInverse();
    const Eigen::MatrixXcd rec =
        out.U * dfull.cast<cplx>().asDiagonal() * out.U.adjoint();
    const bool ok =
        (out.U.adjoint() * out.U - Eigen::MatrixXcd::Identity(n2, n2))
                .norm() <= kPostTol * Jnorm &&
        (out.U * J * out.U.adjoint() - J).norm() <= kPostTol * Jnorm &&
        (rec - H).norm() <= kPostTol * std::max(1.0, H.norm());
    if (!ok) {
        throw NumericError("symplectic_spectral: postconditions failed "
                           "(basis not symplectic-unitary or reconstruction "
                           "off)");
    }
    return out;
}

CsdFactors csd_sp(const Eigen::MatrixXcd& Q) {
    require_even_square(Q, "csd_sp");
    require_unitary(Q, "csd_sp");
    require_group(Q, "csd_sp");
    const Eigen::Index n = Q.rows() / 2;

    const Eigen::MatrixXcd P = ladder_map(n);
    const Eigen::MatrixXcd Qp = P.adjoint() * Q * P;
    const double offnorm =
        std::max(Qp.topRightCorner(n, n).norm(),
                 Qp.bottomLeftCorner(n, n).norm());
    if (offnorm > kInputTol * std::sqrt(static_cast<double>(n))) {
        throw SchemaError("csd_sp: matrix is not block-diagonal in the "
                          "ladder basis");
    }
    const Eigen::MatrixXcd Q1 = Qp.topLeftCorner(n, n);
    const Eigen::MatrixXcd Q2 = Qp.bottomRightCorner(n, n);

    // X = Q2^dag Q1 = W^dag e^{2i theta} W; diagonalize it through the
    // commuting Hermitian pair (X + X^dag)/2, (X - X^dag)/2i so degenerate
    // rotation angles stay stable.
    const Eigen::MatrixXcd X = Q2.adjoint() * Q1;
    const Eigen::MatrixXcd A = 0.5 * (X + X.adjoint().eval());
    const Eigen::MatrixXcd B =
        (X - X.adjoint().eval()) / cplx(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esa(A);
    if (esa.info() != Eigen::Success) {
        throw NumericError("csd_sp: eigendecomposition failed");
    }
    Eigen::MatrixXcd Z(n, n);
    Eigen::Index c0 = 0;
    while (c0 < n) {
        Eigen::Index c1 = c0 + 1;
        while (c1 < n &&
               esa.eigenvalues()(c1) - esa.eigenvalues()(c1 - 1) <=
                   kUnitCluster) {
            ++c1;
        }
        const Eigen::Index w = c1 - c0;
        if (w == 1) {
            Z.col(c0) = esa.eigenvectors().col(c0);
        } else {
            const Eigen::MatrixXcd F = esa.eigenvectors().middleCols(c0, w);
            Eigen::MatrixXcd Bc = F.adjoint() * B * F;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb(
                0.5 * (Bc + Bc.adjoint().eval()));
            if (esb.info() != Eigen::Success) {
                throw NumericError("csd_sp: cluster diagonalization failed");
            }
            Z.middleCols(c0, w) = F * esb.eigenvectors();
        }
        c0 = c1;
    }

    Eigen::VectorXd theta(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double alpha = std::real(Z.col(k).dot(A * Z.col(k)));
        const double beta = std::real(Z.col(k).dot(B * Z.col(k)));
        double t = 0.5 * std::atan2(beta, alpha);
        if (t <= -0.5 * std::numbers::pi) {
            t += std::numbers::pi;
        } else if (t > 0.5 * std::numbers::pi) {
            t -= std::numbers::pi;
        }
        theta(k) = t;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&theta](Eigen::Index a, Eigen::Index b) {
                         return theta(a) > theta(b);
                     });
    CsdFactors out;
    out.theta.resize(n);
    Eigen::MatrixXcd Zs(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.theta(k) = theta(order[static_cast<std::size_t>(k)]);
        Zs.col(k) = Z.col(order[static_cast<std::size_t>(k)]);
        phase_gauge(Zs.col(k));
    }

    out.W = Zs.adjoint();
    Eigen::VectorXcd eim(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        eim(k) = std::exp(cplx(0.0, -out.theta(k)));
    }
    out.V = Q1 * Zs * eim.asDiagonal();

    const Eigen::MatrixXcd rec =
        blkdiag2(out.V) * cs_rotation(out.theta).cast<cplx>() *
        blkdiag2(out.W);
    if ((rec - Q).norm() >
        kPostTol * std::sqrt(static_cast<double>(2 * n))) {
        throw NumericError("csd_sp: reconstruction failed");
    }
    return out;
}

SvdSp svd_sp(const Eigen::MatrixXcd& M) {
    require_even_square(M, "svd_sp");
    require_group(M, "svd_sp");
    const Eigen::Index n2 = M.rows();

    Eigen::MatrixXcd MM = M.adjoint() * M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (MM + MM.adjoint().eval()));
    if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) {
        throw NumericError("svd_sp: M^dag M is not positive definite");
    }
    const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
    Eigen::MatrixXcd H = es.eigenvectors() * sq.cast<cplx>().asDiagonal() *
                         es.eigenvectors().adjoint();
    H = 0.5 * (H + H.adjoint().eval());
    const Eigen::MatrixXcd Upol = M * es.eigenvectors() *
                                  sq.cwiseInverse().cast<cplx>().asDiagonal() *
                                  es.eigenvectors().adjoint();

    const SpectralFactorization sf = symplectic_spectral(H);
    SvdSp out;
    out.A = Upol * sf.U;
    out.B = sf.U.adjoint();
    out.d = sf.d;

    const double Jnorm = std::sqrt(static_cast<double>(n2));
    Eigen::VectorXd dfull(n2);
    dfull.head(n2 / 2) = out.d;
    dfull.tail(n2 / 2) = out.d.cwiseInverse();
    const Eigen::MatrixXcd rec =
        out.A * dfull.cast<cplx>().asDiagonal() * out.B;
    const bool ok =
        (out.A.adjoint() * out.A -
         Eigen::MatrixXcd::Identity(n2, n2)).norm() <= kPostTol * Jnorm &&
        conjugate_symplectic_residual(out.A) <= kPostTol * Jnorm &&
        (rec - M).norm() <= kPostTol * std::max(1.0, M.norm());
    if (!ok) {
        throw NumericError("svd_sp: postconditions failed");
    }
    return out;
}

Eigen::MatrixXd cs_rotation(const Eigen::VectorXd& theta) {
    const Eigen::Index n = theta.size();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double c = std::cos(theta(k));
        const double s = std::sin(theta(k));
        R(k, k) = c;
        R(n + k, n + k) = c;
        R(k, n + k) = -s;
        R(n + k, k) = s;
    }
    return R;
}

namespace {

// First component (walking in the given order) that carries weight, made
// real positive; returns the phase applied.
cplx pivot_phase(const Eigen::VectorXcd& v) {
    const double thr = 1e-12 * v.norm();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > thr) {
            return std::polar(1.0, -std::arg(v(i)));
        }
    }
    return cplx(1.0, 0.0);
}

} // namespace

OpticalCircuit optical_decomposition(const MatrixFunction& M,
                                     Diagnostics* diag) {
    if (!M.square() || M.rows() % 2 != 0 || M.rows() <= 0) {
        throw SchemaError("optical_decomposition: needs a square matrix "
                          "function of even size");
    }
    const Eigen::Index n = M.rows() / 2;
    const std::size_t K = M.size();

    OpticalCircuit circ;
    circ.grid = M.grid();
    circ.n_modes = n;
    circ.factors.resize(K);
    circ.errors.assign(K, std::string());

    parallel_for(K, [&](std::size_t k) {
        try {
            const Eigen::MatrixXcd& Mk = M.sample(k);
            const SvdSp sv = svd_sp(Mk);
            const CsdFactors ca = csd_sp(sv.A);
            const CsdFactors cb = csd_sp(sv.B);

            CircuitFactors f;
            f.V1 = ca.V;
            f.theta1 = ca.theta;
            f.W1 = ca.W;
            f.r = sv.d.array().log().max(0.0);
            f.W2 = cb.V;
            f.theta2 = cb.theta;
            f.V2 = cb.W;

            for (Eigen::Index j = 0; j < n; ++j) {
                const cplx ph = pivot_phase(f.V1.col(j));
                f.V1.col(j) *= ph;
                f.W1.row(j) *= std::conj(ph);
            }
            for (Eigen::Index j = 0; j < n; ++j) {
                const cplx ph = pivot_phase(f.W1.col(j));
                f.W1.col(j) *= ph;
                f.W2.row(j) *= std::conj(ph);
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                const cplx ph = pivot_phase(f.V2.row(i).transpose());
                f.V2.row(i) *= ph;
                f.W2.col(i) *= std::conj(ph);
            }

            const Eigen::MatrixXcd rec = circuit_sample(f);
            const double res = (rec - Mk).norm();
            if (res > 1e-8 * std::max(1.0, Mk.norm())) {
                std::ostringstream msg;
                msg << "reconstruction residual " << res
                    << " exceeds tolerance";
                circ.errors[k] = msg.str();
                return;
            }
            circ.factors[k] = std::move(f);
        } catch (const std::exception& e) {
            circ.errors[k] = e.what();
        }
    });

    if (diag) {
        for (std::size_t k = 0; k < K; ++k) {
            if (!circ.errors[k].empty()) {
                std::ostringstream msg;
                msg << "optical decomposition failed at omega="
                    << M.grid()[k] << ": " << circ.errors[k];
                diag->warn(msg.str());
            }
        }
    }
    return circ;
}

bool OpticalCircuit::ok() const {
    for (const auto& e : errors) {
        if (!e.empty()) {
            return false;
        }
    }
    return true;
}

Eigen::MatrixXcd circuit_sample(const CircuitFactors& f) {
    const Eigen::Index n = f.V1.rows();
    Eigen::VectorXd dfull(2 * n);
    dfull.head(n) = f.r.array().exp();
    dfull.tail(n) = (-f.r.array()).exp();
    return blkdiag2(f.V1) * cs_rotation(f.theta1).cast<cplx>() *
           blkdiag2(f.W1) * dfull.cast<cplx>().asDiagonal() *
           blkdiag2(f.W2) * cs_rotation(f.theta2).cast<cplx>() *
           blkdiag2(f.V2);
}

MatrixFunction circuit_eval(const OpticalCircuit& c) {
    std::string bad;
    for (std::size_t k = 0; k < c.errors.size(); ++k) {
        if (!c.errors[k].empty()) {
            std::ostringstream msg;
            msg << "omega=" << c.grid[k];
            bad += bad.empty() ? msg.str() : "; " + msg.str();
        }
    }
    if (!bad.empty()) {
        throw SchemaError("circuit_eval: circuit has failed frequencies: " +
                          bad);
    }
    std::vector<Eigen::MatrixXcd> samples(c.factors.size());
    for (std::size_t k = 0; k < c.factors.size(); ++k) {
        samples[k] = circuit_sample(c.factors[k]);
    }
    // Factors are complex even at omega=0; the product is real only to the
    // reconstruction tolerance, so skip the strict reality scrub.
    return MatrixFunction(c.grid, std::move(samples), ZeroReality::Allow);
}

} // namespace qlti
