#pragma once

#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qlti {

// A symmetrized spectral density matrix S[omega] (2n x 2n): Hermitian and
// positive semidefinite at every grid frequency, with the conjugation
// symmetry S[-omega] = S[omega]* inherited from the sample storage.
// Physicality (S + iJ/2 >= 0) is a queried property, not an invariant:
// classical spectra that violate it are representable on purpose.
class SpectralDensityMatrix {
public:
    SpectralDensityMatrix() = default;
    explicit SpectralDensityMatrix(MatrixFunction f);

    const MatrixFunction& fn() const { return f_; }
    const FrequencyGrid& grid() const { return f_.grid(); }
    Eigen::Index n_modes() const { return f_.rows() / 2; }
    std::size_t size() const { return f_.size(); }
    const Eigen::MatrixXcd& sample(std::size_t i) const {
        return f_.sample(i);
    }
    Eigen::MatrixXcd eval(double omega, double tol = 1e-9) const {
        return f_.eval(omega, tol);
    }
    Eigen::MatrixXcd eval_interp(double omega,
                                 Diagnostics* diag = nullptr) const {
        return f_.eval_interp(omega, diag);
    }

    // Smallest eigenvalue of S + iJ/2 at sample k; >= 0 iff the spectrum is
    // realizable by a quantum state.
    double physicality_margin(std::size_t k) const;
    bool physical(double tol = 0.0) const;

private:
    MatrixFunction f_;
};

// Smallest eigenvalue of S + iJ/2 for one Hermitian sample.
double uncertainty_margin(const Eigen::MatrixXcd& S);

// Vacuum spectrum: identity / 2 at every frequency.
SpectralDensityMatrix vacuum_sdm(const FrequencyGrid& grid, Eigen::Index n);

// Congruence transport S_out = M S_in M^dag per frequency; M may be
// rectangular (2m x 2n). The result must stay positive semidefinite.
SpectralDensityMatrix transform_sdm(const MatrixFunction& M,
                                    const SpectralDensityMatrix& S);

// One frequency of the invariant form: per-mode blocks [sigma, i delta;
// -i delta, sigma] with sigma_j - |delta_j| >= 1/2 iff physical. mu holds
// the signed congruence spectrum (n positive values descending, then n
// negative values with largest magnitude first), paired index j with n + j:
// sigma_j = (mu_j - mu_{n+j})/2, delta_j = (mu_j + mu_{n+j})/2.
struct WilliamsonSample {
    Eigen::MatrixXcd M; // congruence: M C M^dag = S with C the invariant form
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma, delta;
    double margin = 0.0;
    bool physical = false;

    // Mean photon-number spectra at the two signed frequencies.
    Eigen::VectorXd occupation_plus() const;  // sigma + delta - 1/2
    Eigen::VectorXd occupation_minus() const; // sigma - delta - 1/2
};

struct WilliamsonForm {
    FrequencyGrid grid;
    Eigen::Index n_modes = 0;
    std::vector<WilliamsonSample> samples;
};

// Assemble the invariant-form matrix from sigma and delta.
Eigen::MatrixXcd williamson_invariant_matrix(const Eigen::VectorXd& sigma,
                                             const Eigen::VectorXd& delta);

// Reduce a positive definite spectrum to invariant form by a group
// congruence at every frequency. Near-singular spectra raise
// DegeneracyError; non-physical ones only set the flag (and a diagnostic).
// Postconditions at each frequency: M J M^dag = J and M C M^dag = S to
// 1e-9 relative.
WilliamsonForm williamson(const SpectralDensityMatrix& S,
                          Diagnostics* diag = nullptr);

// Product bound for one mode: lhs = S_qq S_pp - |S_qp|^2 against
// rhs = 1/4 + |Im S_qp|. lhs >= rhs for physical spectra, with equality
// exactly at sigma = 1/2 + |delta|.
struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

BoundPair single_mode_bound(const Eigen::MatrixXcd& S);

// Output uncertainty products of an open system against the attainable
// floor: for each output mode i,
//   lhs_i = sqrt(S_out_qq,i S_out_pp,i)  with  S_out = G S_in G^dag
//                                             + N N^dag / 2,
//   rhs_i = sqrt(det2(G S_in G^dag; i)) + sum_j |det2(N; i, j)| / 2,
// where det2 picks the 2x2 (q_i, p_i) sub-block. rhs_noise keeps the noise
// term alone. Matrices are (frequency x output mode).
struct OpenSystemBound {
    FrequencyGrid grid;
    Eigen::MatrixXd lhs, rhs, rhs_noise;
};

OpenSystemBound open_system_bound(const MatrixFunction& G,
                                  const MatrixFunction& N,
                                  const SpectralDensityMatrix& S_in);

// Ladder-basis spectrum P^T S P^*; its diagonal minus 1/2 lists the
// occupations at (-omega_1.., then +omega_1..).
MatrixFunction sdm_to_ladder(const SpectralDensityMatrix& S);

} // namespace qlti
