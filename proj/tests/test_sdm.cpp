#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlti/sdm.hpp"
#include "qlti/symplectic.hpp"

#include "helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace qlti;
using testutil::cplx;

namespace {

// Invariant form transported by a random group congruence. sigma + delta and
// sigma - delta are both descending, so the canonical pairing keeps the mode
// order as given.
SpectralDensityMatrix transported_sdm(const Eigen::VectorXd& sigma,
                                      const Eigen::VectorXd& delta,
                                      const FrequencyGrid& grid,
                                      unsigned seed) {
    const Eigen::Index n = sigma.size();
    const Eigen::MatrixXcd C = williamson_invariant_matrix(sigma, delta);
    std::mt19937_64 gen(seed);
    std::vector<Eigen::MatrixXcd> samples;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd T =
            testutil::exp_group_element(n, gen, 0.4, grid[k] == 0.0);
        samples.push_back(T * C * T.adjoint());
    }
    return SpectralDensityMatrix(
        MatrixFunction(grid, std::move(samples), ZeroReality::Allow));
}

} // namespace

TEST_CASE("construction validates shape and Hermiticity") {
    const FrequencyGrid grid({1.0});
    CHECK_THROWS_AS(SpectralDensityMatrix(MatrixFunction::constant(
                        grid, Eigen::MatrixXcd::Identity(3, 3))),
                    SchemaError);

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2, 2);
    A(0, 1) = cplx(0.0, 0.5); // not matched by A(1,0)
    CHECK_THROWS_AS(SpectralDensityMatrix(MatrixFunction::constant(grid, A)),
                    SchemaError);

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(2, 2);
    B(1, 1) = -0.1;
    CHECK_THROWS_AS(SpectralDensityMatrix(MatrixFunction::constant(grid, B)),
                    SchemaError);
}

TEST_CASE("tiny asymmetry is re-symmetrized") {
    const FrequencyGrid grid({1.0});
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2, 2);
    A(0, 1) = 1e-14;
    const SpectralDensityMatrix S(MatrixFunction::constant(grid, A));
    const Eigen::MatrixXcd& fixed = S.sample(0);
    CHECK((fixed - fixed.adjoint()).norm() == 0.0);
}

TEST_CASE("the vacuum sits exactly on the uncertainty boundary") {
    const FrequencyGrid grid({0.0, 1.0, 2.0});
    for (Eigen::Index n : {1, 2, 4}) {
        const SpectralDensityMatrix S = vacuum_sdm(grid, n);
        for (std::size_t k = 0; k < S.size(); ++k) {
            CHECK(std::abs(S.physicality_margin(k)) < 1e-12);
        }
        CHECK(S.physical(1e-12));
    }
}

TEST_CASE("congruence transport matches the direct product") {
    const FrequencyGrid grid({0.0, 0.6});
    const SpectralDensityMatrix S = vacuum_sdm(grid, 2);
    const MatrixFunction M = random_group_element(grid, 2, 15);
    const SpectralDensityMatrix out = transform_sdm(M, S);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Eigen::MatrixXcd want =
            0.5 * M.sample(k) * M.sample(k).adjoint();
        CHECK((out.sample(k) - want).norm() < 1e-12 * want.norm());
    }
    // A group congruence of a physical spectrum stays physical.
    CHECK(out.physical(1e-9));
}

TEST_CASE("rectangular transport reduces the mode count") {
    const FrequencyGrid grid({0.5});
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(2, 4);
    P(0, 0) = 1.0; // keep mode 1 of 2
    P(1, 2) = 1.0;
    const MatrixFunction M(grid, {P}, ZeroReality::Allow);
    const SpectralDensityMatrix out = transform_sdm(M, vacuum_sdm(grid, 2));
    CHECK(out.n_modes() == 1);
    CHECK((out.sample(0) - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() <
          1e-15);
}

TEST_CASE("invariant form round-trips through the reduction") {
    const FrequencyGrid grid({0.4, 1.3});
    Eigen::VectorXd sigma(3), delta(3);
    sigma << 3.0, 1.5, 0.8;
    delta << 0.5, -0.2, 0.1;
    const SpectralDensityMatrix S = transported_sdm(sigma, delta, grid, 101);
    const WilliamsonForm w = williamson(S);
    REQUIRE(w.samples.size() == grid.size());
    for (const WilliamsonSample& ws : w.samples) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(ws.sigma(j) == doctest::Approx(sigma(j)).epsilon(1e-8));
            CHECK(ws.delta(j) == doctest::Approx(delta(j)).epsilon(1e-8));
        }
        CHECK(ws.physical);
    }
}

TEST_CASE("reduction postconditions hold") {
    const FrequencyGrid grid({0.7});
    Eigen::VectorXd sigma(2), delta(2);
    sigma << 2.0, 0.9;
    delta << 0.3, 0.05;
    const SpectralDensityMatrix S = transported_sdm(sigma, delta, grid, 103);
    const WilliamsonForm w = williamson(S);
    const WilliamsonSample& ws = w.samples[0];
    const Eigen::MatrixXcd J = symplectic_form(2).cast<cplx>();
    const Eigen::MatrixXcd C =
        williamson_invariant_matrix(ws.sigma, ws.delta);
    CHECK((ws.M * J * ws.M.adjoint() - J).norm() < 1e-9 * J.norm());
    CHECK((ws.M * C * ws.M.adjoint() - S.sample(0)).norm() <
          1e-9 * std::max(1.0, S.sample(0).norm()));
}

TEST_CASE("the invariants do not move under group congruence") {
    const FrequencyGrid grid({0.9});
    Eigen::VectorXd sigma(2), delta(2);
    sigma << 1.4, 0.8;
    delta << -0.25, 0.15;
    const SpectralDensityMatrix S = transported_sdm(sigma, delta, grid, 107);
    const WilliamsonForm base = williamson(S);
    std::mt19937_64 gen(109);
    for (int trial = 0; trial < 6; ++trial) {
        const Eigen::MatrixXcd T = testutil::exp_group_element(2, gen, 0.5);
        const MatrixFunction Tf(grid, {T}, ZeroReality::Allow);
        const WilliamsonForm moved = williamson(transform_sdm(Tf, S));
        const WilliamsonSample& a = base.samples[0];
        const WilliamsonSample& b = moved.samples[0];
        for (Eigen::Index j = 0; j < 2; ++j) {
            CHECK(b.sigma(j) == doctest::Approx(a.sigma(j)).epsilon(1e-8));
            CHECK(b.delta(j) == doctest::Approx(a.delta(j)).epsilon(1e-8));
        }
        Eigen::VectorXd ma = a.mu, mb = b.mu;
        std::sort(ma.data(), ma.data() + ma.size());
        std::sort(mb.data(), mb.data() + mb.size());
        CHECK((ma - mb).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("real spectra at zero frequency have symmetric invariants") {
    const FrequencyGrid grid({0.0, 1.1});
    Eigen::VectorXd sigma(2), delta(2);
    sigma << 2.2, 1.1;
    delta << 0.0, 0.0;
    const SpectralDensityMatrix S = transported_sdm(sigma, delta, grid, 113);
    const WilliamsonForm w = williamson(S);
    const WilliamsonSample& ws = w.samples[0];
    CHECK(ws.delta(0) == 0.0);
    CHECK(ws.delta(1) == 0.0);
    CHECK(ws.sigma(0) == doctest::Approx(2.2).epsilon(1e-8));
    CHECK(ws.sigma(1) == doctest::Approx(1.1).epsilon(1e-8));
    CHECK(ws.M.imag().norm() == 0.0);
}

TEST_CASE("unrealizable spectra are flagged, not rejected") {
    const FrequencyGrid grid({0.8});
    Eigen::VectorXd sigma(1), delta(1);
    sigma << 0.4; // below the vacuum floor
    delta << 0.0;
    const SpectralDensityMatrix S = transported_sdm(sigma, delta, grid, 127);
    CHECK_FALSE(S.physical());
    Diagnostics diag;
    const WilliamsonForm w = williamson(S, &diag);
    CHECK_FALSE(w.samples[0].physical);
    CHECK_FALSE(diag.warnings.empty());
    CHECK(w.samples[0].sigma(0) == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("singular spectra are a guarded degeneracy") {
    const FrequencyGrid grid({0.5});
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(2, 2);
    S(0, 0) = 1.0; // p quadrature carries no noise at all
    const SpectralDensityMatrix sdm(
        MatrixFunction(grid, {S}, ZeroReality::Allow));
    CHECK_THROWS_AS(williamson(sdm), DegeneracyError);
}

TEST_CASE("occupations read off the ladder diagonal") {
    const FrequencyGrid grid({0.4});
    Eigen::VectorXd sigma(1), delta(1);
    sigma << 2.0;
    delta << 0.5;
    const Eigen::MatrixXcd C = williamson_invariant_matrix(sigma, delta);
    const SpectralDensityMatrix S(
        MatrixFunction(grid, {C}, ZeroReality::Allow));
    const MatrixFunction lad = sdm_to_ladder(S);
    CHECK(std::abs(lad.sample(0)(0, 0) - cplx(1.5, 0.0)) < 1e-12);
    CHECK(std::abs(lad.sample(0)(1, 1) - cplx(2.5, 0.0)) < 1e-12);
    CHECK(std::abs(lad.sample(0)(0, 1)) < 1e-12);

    const WilliamsonForm w = williamson(S);
    CHECK(w.samples[0].occupation_plus()(0) == doctest::Approx(2.0));
    CHECK(w.samples[0].occupation_minus()(0) == doctest::Approx(1.0));
}

TEST_CASE("the product bound is tight exactly on the boundary family") {
    for (double d : {0.0, 0.2, 0.7}) {
        Eigen::VectorXd sigma(1), delta(1);
        sigma << 0.5 + d;
        delta << d;
        const Eigen::MatrixXcd C = williamson_invariant_matrix(sigma, delta);
        const BoundPair b = single_mode_bound(C);
        CHECK(b.lhs == doctest::Approx(b.rhs).epsilon(1e-12));

        // Off the boundary the product strictly exceeds the floor.
        sigma(0) += 0.1;
        const BoundPair c =
            single_mode_bound(williamson_invariant_matrix(sigma, delta));
        CHECK(c.lhs > c.rhs + 1e-3);
    }
}

TEST_CASE("pure loss saturates the output bound") {
    const FrequencyGrid grid({0.0, 1.0});
    for (double eta : {0.2, 0.5, 0.8}) {
        const MatrixFunction G = MatrixFunction::constant(
            grid, std::sqrt(eta) * Eigen::MatrixXcd::Identity(2, 2));
        const MatrixFunction N = MatrixFunction::constant(
            grid, std::sqrt(1.0 - eta) * Eigen::MatrixXcd::Identity(2, 2));
        const OpenSystemBound b =
            open_system_bound(G, N, vacuum_sdm(grid, 1));
        for (Eigen::Index k = 0; k < 2; ++k) {
            CHECK(b.lhs(k, 0) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(b.rhs(k, 0) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(b.rhs_noise(k, 0) ==
                  doctest::Approx(0.5 * (1.0 - eta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed systems drop the noise term from the bound") {
    const FrequencyGrid grid({0.3});
    std::mt19937_64 gen(131);
    const Eigen::MatrixXcd M = testutil::exp_group_element(2, gen);
    const MatrixFunction G(grid, {M}, ZeroReality::Allow);
    const MatrixFunction N(grid, {Eigen::MatrixXcd::Zero(4, 0)},
                           ZeroReality::Allow);
    const OpenSystemBound b = open_system_bound(G, N, vacuum_sdm(grid, 2));
    for (Eigen::Index i = 0; i < 2; ++i) {
        CHECK(b.rhs_noise(0, i) == 0.0);
        CHECK(b.lhs(0, i) >= b.rhs(0, i) - 1e-9);
    }
}
