#include "qlti/symplectic.hpp"

#include "qlti/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qlti {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cplx = std::complex<double>;

void require_even_square(const MatrixXcd& M, const char* who) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0) {
        std::ostringstream msg;
        msg << who << ": expected a square 2n x 2n matrix, got " << M.rows()
            << " x " << M.cols();
        throw SchemaError(msg.str());
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Bit-reproducible standard normals: Box-Muller over the raw 53-bit stream.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = ((rng_() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = (rng_() >> 11) * 0x1.0p-53;       // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace

MatrixXd symplectic_form(Index n) {
    MatrixXd J = MatrixXd::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = MatrixXd::Identity(n, n);
    J.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
    return J;
}

MatrixXcd ladder_map(Index n) {
    const double s = 1.0 / std::sqrt(2.0);
    MatrixXcd P = MatrixXcd::Zero(2 * n, 2 * n);
    P.topLeftCorner(n, n) = s * MatrixXcd::Identity(n, n);
    P.topRightCorner(n, n) = s * MatrixXcd::Identity(n, n);
    P.bottomLeftCorner(n, n) = cplx(0.0, -s) * MatrixXcd::Identity(n, n);
    P.bottomRightCorner(n, n) = cplx(0.0, s) * MatrixXcd::Identity(n, n);
    return P;
}

double conjugate_symplectic_residual(const MatrixXcd& M) {
    require_even_square(M, "conjugate_symplectic_residual");
    const Index n = M.rows() / 2;
    const MatrixXd J = symplectic_form(n);
    return (M * J * M.adjoint() - J).norm();
}

double conjugate_symplectic_residual(const MatrixFunction& M, double omega) {
    return conjugate_symplectic_residual(M.eval(omega));
}

bool is_conjugate_symplectic(const MatrixFunction& M, double tol) {
    if (!M.square() || M.rows() % 2 != 0) return false;
    const double scale = std::sqrt(static_cast<double>(M.rows()));
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (conjugate_symplectic_residual(M.sample(i)) > tol * scale) {
            return false;
        }
    }
    return true;
}

MatrixXcd group_inverse(const MatrixXcd& M) {
    require_even_square(M, "group_inverse");
    const Index n = M.rows() / 2;
    const MatrixXd J = symplectic_form(n);
    return -J * M.adjoint() * J;
}

MatrixFunction group_inverse(const MatrixFunction& M) {
    std::vector<MatrixXcd> out(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        out[i] = group_inverse(M.sample(i));
    }
    return MatrixFunction(M.grid(), std::move(out));
}

MatrixFunction random_group_element(const FrequencyGrid& grid, Index n,
                                    std::uint64_t seed, double magnitude) {
    if (n < 1) throw SchemaError("random_group_element: n must be >= 1");
    const Index d = 2 * n;
    const MatrixXd J = symplectic_form(n);
    std::vector<MatrixXcd> samples(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        NormalStream gauss(splitmix64(seed ^ splitmix64(k + 1)));
        const double norm = magnitude / (2.0 * std::sqrt(static_cast<double>(d)));
        if (grid[k] == 0.0) {
            MatrixXd A(d, d);
            for (Index r = 0; r < d; ++r) {
                for (Index c = 0; c < d; ++c) A(r, c) = gauss();
            }
            const MatrixXd H = norm * (A + A.transpose());
            samples[k] = (J * H).exp().cast<cplx>();
        } else {
            MatrixXcd A(d, d);
            const double s = 1.0 / std::sqrt(2.0);
            for (Index r = 0; r < d; ++r) {
                for (Index c = 0; c < d; ++c) {
                    const double re = gauss();
                    const double im = gauss();
                    A(r, c) = cplx(s * re, s * im);
                }
            }
            const MatrixXcd H = norm * (A + A.adjoint());
            samples[k] = (J.cast<cplx>() * H).exp();
        }
        const double res = conjugate_symplectic_residual(samples[k]);
        if (res > 1e-10 * std::sqrt(static_cast<double>(d))) {
            std::ostringstream msg;
            msg << "random_group_element: membership residual " << res
                << " at omega=" << grid[k]
                << "; reduce the magnitude parameter";
            throw NumericError(msg.str());
        }
    });
    return MatrixFunction(grid, std::move(samples));
}

MatrixXcd AlgebraElement::hamiltonian_coefficient(std::size_t i) const {
    return symplectic_form(n).cast<cplx>() * Lambda.at(i);
}

AlgebraElement generator_of(const MatrixFunction& M, Diagnostics* diag) {
    if (!M.square() || M.rows() % 2 != 0) {
        throw SchemaError("generator_of: input must be square 2n x 2n");
    }
    const Index n = M.rows() / 2;
    const MatrixXd J = symplectic_form(n);
    AlgebraElement out;
    out.grid = M.grid();
    out.n = n;
    out.Lambda.resize(M.size());
    std::vector<std::string> failures(M.size());
    std::vector<std::string> warnings(M.size());
    parallel_for(M.size(), [&](std::size_t k) {
        const MatrixXcd& Mk = M.sample(k);
        const MatrixXcd L = Mk.log();
        out.Lambda[k] = L;
        const double scale = std::max(1.0, Mk.norm());
        const double roundtrip = (L.exp() - Mk).norm() / scale;
        const MatrixXcd LJ = L * J;
        const double herm =
            (LJ - LJ.adjoint()).norm() / std::max(1.0, LJ.norm());
        bool near_branch_cut = false;
        Eigen::ComplexEigenSolver<MatrixXcd> eig(Mk, false);
        for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
            const cplx lambda = eig.eigenvalues()(i);
            if (lambda.real() < 0.0 &&
                std::abs(lambda.imag()) <= 1e-12 * std::abs(lambda)) {
                near_branch_cut = true;
            }
        }
        if (roundtrip > 1e-8 || herm > 1e-8) {
            std::ostringstream msg;
            msg << "omega=" << M.grid()[k] << ": exp-roundtrip residual "
                << roundtrip << ", algebra Hermiticity residual " << herm;
            if (near_branch_cut) {
                msg << " (eigenvalue on the negative real axis; principal "
                       "log branch fails here)";
            }
            failures[k] = msg.str();
        } else if (near_branch_cut) {
            std::ostringstream msg;
            msg << "generator_of: omega=" << M.grid()[k]
                << " has an eigenvalue near the negative real axis; the "
                   "principal branch is ill-conditioned there";
            warnings[k] = msg.str();
        }
    });
    if (diag) {
        for (auto& w : warnings) {
            if (!w.empty()) diag->warn(std::move(w));
        }
    }
    std::ostringstream msg;
    bool failed = false;
    msg << "generator_of: principal logarithm left the algebra at:";
    for (const auto& f : failures) {
        if (!f.empty()) {
            failed = true;
            msg << "\n  " << f;
        }
    }
    if (failed) throw NumericError(msg.str());
    return out;
}

MatrixFunction to_ladder(const MatrixFunction& M) {
    if (!M.square() || M.rows() % 2 != 0) {
        throw SchemaError("to_ladder: input must be square 2n x 2n");
    }
    const MatrixXcd P = ladder_map(M.rows() / 2);
    std::vector<MatrixXcd> out(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        out[i] = P.adjoint() * M.sample(i) * P;
    }
    return MatrixFunction(M.grid(), std::move(out), ZeroReality::Allow);
}

double indefinite_unitary_residual(const MatrixXcd& A) {
    require_even_square(A, "indefinite_unitary_residual");
    const Index n = A.rows() / 2;
    MatrixXd I = MatrixXd::Identity(2 * n, 2 * n);
    I.bottomRightCorner(n, n) *= -1.0;
    return (A * I * A.adjoint() - I).norm();
}

MatrixXd two_photon_form(Index n) {
    const MatrixXd J = symplectic_form(n);
    MatrixXd JJ = MatrixXd::Zero(4 * n, 4 * n);
    JJ.topLeftCorner(2 * n, 2 * n) = J;
    JJ.bottomRightCorner(2 * n, 2 * n) = J;
    return JJ;
}

MatrixXd two_photon_embed(const MatrixFunction& M, double omega) {
    if (!M.square() || M.rows() % 2 != 0) {
        throw SchemaError("two_photon_embed: input must be square 2n x 2n");
    }
    const Index d = M.rows();
    const MatrixXcd plus = M.eval(omega);
    const MatrixXcd minus = M.eval(-omega);
    MatrixXcd D = MatrixXcd::Zero(2 * d, 2 * d);
    D.topLeftCorner(d, d) = plus;
    D.bottomRightCorner(d, d) = minus;
    const MatrixXcd PP = ladder_map(d);
    const MatrixXcd X = PP * D * PP.adjoint();
    const double scale = std::max(1.0, X.norm());
    const double imag_max = X.imag().cwiseAbs().maxCoeff();
    if (imag_max > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "two_photon_embed: embedding at omega=" << omega
            << " is not real (max imaginary part " << imag_max
            << "); input violates the reality symmetry";
        throw NumericError(msg.str());
    }
    return X.real();
}

} // namespace qlti
