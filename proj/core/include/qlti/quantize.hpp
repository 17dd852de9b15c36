#pragma once

#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qlti {

// Commutator deficit of a candidate open-system map G[omega] (2m x 2n):
// Z = i J_out - G (i J_in) G^dag, Hermitian. Z = 0 iff G alone preserves the
// canonical commutators; otherwise the added noise must make up exactly Z.
Eigen::MatrixXcd ccr_deficit(const Eigen::MatrixXcd& G);
Eigen::MatrixXcd ccr_deficit(const MatrixFunction& G, double omega);

// Per-frequency bookkeeping for a minimal noise factor: the number of noise
// modes ell = max(d_plus, d_minus) where d_plus/d_minus count the strictly
// positive/negative eigenvalues of the deficit (rank-decided at rank_tol),
// and gamma holds all singular values of N in descending order.
struct NoiseSpectrum {
    int ell = 0;
    int d_plus = 0;
    int d_minus = 0;
    std::vector<double> gamma;
};

// A quantized open system: the classical map G plus a minimal noise coupling
// N with N (i J_ell) N^dag = Z at every frequency. N is stored with
// 2*ell_max columns (ell_max the largest mode count over the grid); at
// frequencies where fewer modes are needed the trailing columns are zero.
struct NoiseModel {
    MatrixFunction G;
    MatrixFunction N;
    std::vector<NoiseSpectrum> per_freq;

    Eigen::Index out_modes() const { return G.rows() / 2; }
    Eigen::Index in_modes() const { return G.cols() / 2; }
    Eigen::Index max_noise_modes() const { return N.cols() / 2; }
};

// Minimum-rank noise factor for a transfer matrix G[omega] (2m x 2n).
// Eigenvalues of the deficit with |lambda| <= rank_tol * max|lambda| are
// treated as zero; near-threshold spectra are reported through diag. At
// omega = 0 (real G) the factor is real. Postcondition: the noise identity
// holds to 1e-9 relative at every frequency.
NoiseModel minimal_noise(const MatrixFunction& G, double rank_tol = 1e-10,
                         Diagnostics* diag = nullptr);

// A closed (conjugate symplectic) dilation of an open system: M_ext[omega]
// square of size 2(n + ell), containing G on (out_rows x in_cols) and N on
// (out_rows x noise_cols) verbatim, with a = n + ell - m ancilla output
// modes on the remaining rows. Orderings are global (q..., p...) across
// input + noise modes on columns and output + ancilla modes on rows.
struct Dilation {
    MatrixFunction M_ext;
    Eigen::Index m = 0;   // output modes of G
    Eigen::Index n = 0;   // input modes of G
    Eigen::Index ell = 0; // noise modes (max over grid)
    Eigen::Index a = 0;   // ancilla output modes, n + ell - m

    std::vector<Eigen::Index> out_rows;   // rows carrying G and N
    std::vector<Eigen::Index> anc_rows;   // complementary rows
    std::vector<Eigen::Index> in_cols;    // columns carrying G
    std::vector<Eigen::Index> noise_cols; // columns carrying N
};

// Complete a quantized system to a closed one by appending ancilla output
// rows, chosen by a pivoted hyperbolic Gram-Schmidt sweep over standard
// basis seeds (paired with their conjugate partners at omega = 0 so the
// extension stays real there). Requires m <= n + ell. Postconditions: M_ext
// is in the group to 1e-9 relative, and the G and N blocks are recovered
// bit-for-bit from the stored index maps.
Dilation dilate(const NoiseModel& model, Diagnostics* diag = nullptr);

} // namespace qlti
