#pragma once

#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace qlti {

// Eigen-elements of a Hermitian positive definite group element H, reordered
// so values = (l_1..l_n ascending, all >= 1, then their reciprocals in
// matching order) and vectors holds the eigenvectors in the same order.
struct SortedEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

SortedEigen sort_eigenelements(const Eigen::MatrixXcd& H);

// Spectral factorization H = U diag(d, d^-1) U^dag of a Hermitian positive
// definite group element, with U unitary and in the group and d >= 1. The
// unit-eigenvalue subspace (|lambda - 1| <= 1e-8) is given a symplectic-
// adapted basis; its entries of d are literally 1. d is ordered as (1...,
// then the eigenvalues > 1 ascending).
struct SpectralFactorization {
    Eigen::MatrixXcd U;
    Eigen::VectorXd d;
};

SpectralFactorization symplectic_spectral(const Eigen::MatrixXcd& H);

// Cosine-sine factorization Q = diag(V,V) [C -S; S C] diag(W,W) of a unitary
// group element, with V, W in U(n), C = diag(cos theta), S = diag(sin theta)
// and theta in (-pi/2, pi/2], sorted descending.
struct CsdFactors {
    Eigen::MatrixXcd V, W;
    Eigen::VectorXd theta;
};

CsdFactors csd_sp(const Eigen::MatrixXcd& Q);

// Group-adapted singular value decomposition M = A diag(d, d^-1) B with A, B
// unitary group elements and d >= 1 (ordered as in symplectic_spectral).
struct SvdSp {
    Eigen::MatrixXcd A, B;
    Eigen::VectorXd d;
};

SvdSp svd_sp(const Eigen::MatrixXcd& M);

// The rotation [C -S; S C] built from a vector of angles.
Eigen::MatrixXd cs_rotation(const Eigen::VectorXd& theta);

// One frequency of the seven-factor optical form
//   M = diag(V1,V1) CS(theta1) diag(W1,W1) diag(e^r, e^-r)
//       diag(W2,W2) CS(theta2) diag(V2,V2)
// with V1, W1, W2, V2 in U(n) and r >= 0: passive interferometers around a
// bank of single-mode squeezers. Column phases of V1 and W1 and row phases
// of V2 are gauge-fixed (first significant pivot real positive), with the
// compensating phases pushed into W1 and W2.
struct CircuitFactors {
    Eigen::MatrixXcd V1, W1, W2, V2;
    Eigen::VectorXd theta1, r, theta2;
};

struct OpticalCircuit {
    FrequencyGrid grid;
    Eigen::Index n_modes = 0;
    std::vector<CircuitFactors> factors;
    // One entry per frequency; empty string means the factorization
    // succeeded there. Failures are isolated per frequency.
    std::vector<std::string> errors;

    bool ok() const;
};

OpticalCircuit optical_decomposition(const MatrixFunction& M,
                                     Diagnostics* diag = nullptr);

// Multiply one frequency's factors back together.
Eigen::MatrixXcd circuit_sample(const CircuitFactors& f);

// Rebuild the full matrix function; throws if any frequency failed.
MatrixFunction circuit_eval(const OpticalCircuit& c);

} // namespace qlti
