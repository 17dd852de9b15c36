#include "qlti/mesh.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace qlti {

namespace {

using cplx = std::complex<double>;

struct Rot {
    Eigen::Index mode;
    double theta;
    double phi;
};

// Apply T(theta, phi) on rows (mode, mode+1) from the left.
void apply_left(Eigen::MatrixXcd& U, const Rot& t) {
    const cplx e = std::polar(1.0, t.phi);
    const double c = std::cos(t.theta), s = std::sin(t.theta);
    const Eigen::RowVectorXcd top = U.row(t.mode);
    const Eigen::RowVectorXcd bot = U.row(t.mode + 1);
    U.row(t.mode) = e * c * top - s * bot;
    U.row(t.mode + 1) = e * s * top + c * bot;
}

// Apply T(theta, phi)^dag on columns (mode, mode+1) from the right.
void apply_right_adjoint(Eigen::MatrixXcd& U, const Rot& t) {
    const cplx e = std::polar(1.0, -t.phi);
    const double c = std::cos(t.theta), s = std::sin(t.theta);
    const Eigen::VectorXcd left = U.col(t.mode);
    const Eigen::VectorXcd right = U.col(t.mode + 1);
    U.col(t.mode) = e * c * left - s * right;
    U.col(t.mode + 1) = e * s * left + c * right;
}

} // namespace

MeshProgram mesh_decompose(const Eigen::MatrixXcd& U) {
    const Eigen::Index n = U.rows();
    if (n <= 0 || U.cols() != n) {
        throw SchemaError("mesh_decompose: matrix must be square and "
                          "non-empty");
    }
    const double scale = std::sqrt(static_cast<double>(n));
    if ((U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)).norm() >
        1e-8 * scale) {
        throw SchemaError("mesh_decompose: matrix is not unitary");
    }

    Eigen::MatrixXcd A = U;
    std::vector<Rot> rights; // applied as A <- A T^dag, first applied first
    std::vector<Rot> lefts;  // applied as A <- T A, first applied first

    for (Eigen::Index i = 0; i < n - 1; ++i) {
        if (i % 2 == 0) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                const Eigen::Index r = n - 1 - j;
                const Eigen::Index c = i - j;
                Rot t;
                t.mode = c;
                t.phi = std::arg(A(r, c)) - std::arg(A(r, c + 1));
                t.theta = std::atan2(std::abs(A(r, c)), std::abs(A(r, c + 1)));
                apply_right_adjoint(A, t);
                A(r, c) = 0.0;
                rights.push_back(t);
            }
        } else {
            for (Eigen::Index j = 0; j <= i; ++j) {
                const Eigen::Index r = n - 1 - i + j;
                const Eigen::Index c = j;
                Rot t;
                t.mode = r - 1;
                t.phi = std::arg(-A(r, c)) - std::arg(A(r - 1, c));
                t.theta = std::atan2(std::abs(A(r, c)), std::abs(A(r - 1, c)));
                apply_left(A, t);
                A(r, c) = 0.0;
                lefts.push_back(t);
            }
        }
    }

    // Now (lefts...) U (rights^dag...) = D, so
    // U = lefts[0]^dag ... lefts[q-1]^dag D rights[p-1] ... rights[0].
    // Pull D to the front through each left inverse:
    // T(theta, phi)^dag diag(d1, d2) = diag(-e^{-i phi} d2, d2)
    //                                  T(theta, arg(-d1 / d2)).
    Eigen::VectorXcd d = A.diagonal();
    std::vector<Rot> mids(lefts.size());
    for (std::size_t i = lefts.size(); i-- > 0;) {
        const Rot& L = lefts[i];
        const cplx d1 = d(L.mode);
        const cplx d2 = d(L.mode + 1);
        Rot t;
        t.mode = L.mode;
        t.theta = L.theta;
        t.phi = std::arg(-d1 / d2);
        mids[i] = t;
        d(L.mode) = -std::polar(1.0, -L.phi) * d2;
    }

    MeshProgram prog;
    prog.n_modes = n;
    prog.elements.reserve(static_cast<std::size_t>(n) + lefts.size() +
                          rights.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        prog.elements.push_back(MeshPhase{i, std::arg(d(i))});
    }
    for (const Rot& t : mids) {
        prog.elements.push_back(MeshRotation{t.mode, t.theta, t.phi});
    }
    for (std::size_t i = rights.size(); i-- > 0;) {
        const Rot& t = rights[i];
        prog.elements.push_back(MeshRotation{t.mode, t.theta, t.phi});
    }

    const double res = (mesh_eval(prog) - U).norm();
    if (res > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "mesh_decompose: replay residual " << res
            << " exceeds tolerance";
        throw NumericError(msg.str());
    }
    return prog;
}

Eigen::MatrixXcd mesh_element_matrix(const MeshElement& e, Eigen::Index n) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
    if (const auto* r = std::get_if<MeshRotation>(&e)) {
        if (r->mode < 0 || r->mode + 1 >= n) {
            throw SchemaError("mesh element: rotation mode out of range");
        }
        const cplx ph = std::polar(1.0, r->phi);
        const double c = std::cos(r->theta), s = std::sin(r->theta);
        M(r->mode, r->mode) = ph * c;
        M(r->mode, r->mode + 1) = -s;
        M(r->mode + 1, r->mode) = ph * s;
        M(r->mode + 1, r->mode + 1) = c;
    } else {
        const auto& p = std::get<MeshPhase>(e);
        if (p.mode < 0 || p.mode >= n) {
            throw SchemaError("mesh element: phase mode out of range");
        }
        M(p.mode, p.mode) = std::polar(1.0, p.phi);
    }
    return M;
}

Eigen::MatrixXcd mesh_eval(const MeshProgram& p) {
    if (p.n_modes <= 0) {
        throw SchemaError("mesh_eval: program has no modes");
    }
    Eigen::MatrixXcd M =
        Eigen::MatrixXcd::Identity(p.n_modes, p.n_modes);
    for (const MeshElement& e : p.elements) {
        M = M * mesh_element_matrix(e, p.n_modes);
    }
    return M;
}

} // namespace qlti
