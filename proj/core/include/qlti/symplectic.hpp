#pragma once

#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qlti {

// Quadrature ordering is (q_1..q_n, p_1..p_n) throughout.

// The symplectic form J = [0 1; -1 0] (2n x 2n real, J^2 = -1).
Eigen::MatrixXd symplectic_form(Eigen::Index n);

// The quadrature-to-ladder basis change P = (1/sqrt2) [1 1; -i i], unitary,
// with P^dag (iJ) P = diag(1_n, -1_n).
Eigen::MatrixXcd ladder_map(Eigen::Index n);

// Frobenius norm of M J M^dag - J for a single square sample.
double conjugate_symplectic_residual(const Eigen::MatrixXcd& M);

// Residual at one grid frequency of a square matrix function.
double conjugate_symplectic_residual(const MatrixFunction& M, double omega);

// Relative membership test: residual <= tol * ||J||_F at every frequency.
bool is_conjugate_symplectic(const MatrixFunction& M, double tol = 1e-10);

// Closed-form group inverse -J M^dag J (valid when M J M^dag = J).
Eigen::MatrixXcd group_inverse(const Eigen::MatrixXcd& M);
MatrixFunction group_inverse(const MatrixFunction& M);

// Seeded random group element exp(J H[omega]) with H Hermitian per frequency
// (real symmetric at omega=0) and spectral size set by magnitude, so the
// result has a bounded norm and membership residual <= 1e-10 relative.
MatrixFunction random_group_element(const FrequencyGrid& grid, Eigen::Index n,
                                    std::uint64_t seed, double magnitude = 1.0);

// A frequency-sampled element Lambda of the group's Lie algebra:
// Lambda[omega] J is Hermitian, equivalently Lambda = J H with H Hermitian,
// and exp(Lambda[omega]) is a group element.
struct AlgebraElement {
    FrequencyGrid grid;
    Eigen::Index n = 0;
    std::vector<Eigen::MatrixXcd> Lambda;

    // Coefficient of the quadratic form generating the dynamics: J Lambda,
    // Hermitian whenever Lambda is in the algebra.
    Eigen::MatrixXcd hamiltonian_coefficient(std::size_t i) const;
};

// Principal matrix logarithm per frequency, verified to land in the algebra
// (exp roundtrip and Lambda J Hermiticity to 1e-8). Frequencies where M has
// eigenvalues near the negative real axis and the principal branch fails are
// collected into one error rather than silently patched.
AlgebraElement generator_of(const MatrixFunction& M,
                            Diagnostics* diag = nullptr);

// Ladder-picture conjugation A = P^dag M P per frequency. For group input the
// result satisfies A I A^dag = I with I = diag(1_n, -1_n).
MatrixFunction to_ladder(const MatrixFunction& M);

// Residual of the indefinite-unitarity condition A I A^dag = I.
double indefinite_unitary_residual(const Eigen::MatrixXcd& A);

// Real two-photon embedding at one frequency: PP diag(M[+w], M[-w]) PP^dag
// with PP the ladder map at doubled size. The first 2n rows are the "A" set
// of two-photon quadratures, the last 2n the "B" set. For group input the
// result X is real and satisfies X JJ X^T = JJ with JJ = diag(J, J).
Eigen::MatrixXd two_photon_embed(const MatrixFunction& M, double omega);

// The block form diag(J_2n, J_2n) preserved by two-photon embeddings.
Eigen::MatrixXd two_photon_form(Eigen::Index n);

} // namespace qlti
