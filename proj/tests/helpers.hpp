#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <random>

// Shared generators for the test suites. The group-element builder here goes
// through the matrix exponential of an algebra element, independent of the
// library's own generator, so the two constructions cross-validate.
namespace testutil {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd random_complex(Eigen::Index r, Eigen::Index c,
                                       std::mt19937_64& gen) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            M(i, j) = cplx(dist(gen), dist(gen));
        }
    }
    return M;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& gen,
                                         double scale = 1.0) {
    const Eigen::MatrixXcd A = random_complex(n, n, gen);
    return scale * 0.5 * (A + A.adjoint());
}

inline Eigen::MatrixXcd random_unitary(Eigen::Index n, std::mt19937_64& gen) {
    const Eigen::MatrixXcd A = random_complex(n, n, gen);
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
}

inline Eigen::MatrixXd form_J(Eigen::Index n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n).setIdentity();
    J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return J;
}

// exp(J H) with H Hermitian lies in the conjugate symplectic group; with H
// real symmetric the element is real (the omega = 0 case).
inline Eigen::MatrixXcd exp_group_element(Eigen::Index n,
                                          std::mt19937_64& gen,
                                          double scale = 0.4,
                                          bool real_element = false) {
    Eigen::MatrixXcd H = random_hermitian(2 * n, gen, scale);
    if (real_element) {
        H = H.real().cast<cplx>();
    }
    const Eigen::MatrixXcd L = form_J(n).cast<cplx>() * H;
    return L.exp();
}

// Unitary group elements are ladder-block-diagonal: P diag(U1, U2) P^dag.
inline Eigen::MatrixXcd unitary_group_element(Eigen::Index n,
                                              std::mt19937_64& gen) {
    const cplx i1(0.0, 1.0);
    Eigen::MatrixXcd P(2 * n, 2 * n);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    P.topLeftCorner(n, n) = I;
    P.topRightCorner(n, n) = I;
    P.bottomLeftCorner(n, n) = -i1 * I;
    P.bottomRightCorner(n, n) = i1 * I;
    P /= std::sqrt(2.0);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    B.topLeftCorner(n, n) = random_unitary(n, gen);
    B.bottomRightCorner(n, n) = random_unitary(n, gen);
    return P * B * P.adjoint();
}

} // namespace testutil
