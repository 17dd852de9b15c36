#pragma once

#include "qlti/errors.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace qlti {

// A two-mode rotation T(theta, phi) = [e^{i phi} c, -s; e^{i phi} s, c]
// acting on the neighboring mode pair (mode, mode + 1).
struct MeshRotation {
    Eigen::Index mode = 0;
    double theta = 0.0;
    double phi = 0.0;
};

// A single-mode phase e^{i phi}.
struct MeshPhase {
    Eigen::Index mode = 0;
    double phi = 0.0;
};

using MeshElement = std::variant<MeshRotation, MeshPhase>;

// A planar program for an n-mode unitary: the product of the element
// matrices, leftmost element first, reproduces the unitary.
struct MeshProgram {
    Eigen::Index n_modes = 0;
    std::vector<MeshElement> elements;
};

// Rectangular nearest-neighbor factorization of a unitary: alternating
// column and row elimination sweeps, with the residual diagonal commuted to
// the front as explicit phases. Postcondition: replaying the program matches
// U to 1e-10 relative.
MeshProgram mesh_decompose(const Eigen::MatrixXcd& U);

// The n x n matrix of one element.
Eigen::MatrixXcd mesh_element_matrix(const MeshElement& e, Eigen::Index n);

// In-order product of all element matrices.
Eigen::MatrixXcd mesh_eval(const MeshProgram& p);

} // namespace qlti
