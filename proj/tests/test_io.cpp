#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlti/decompose.hpp"
#include "qlti/io.hpp"
#include "qlti/quantize.hpp"
#include "qlti/symplectic.hpp"

#include "helpers.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

using namespace qlti;
using testutil::cplx;

TEST_CASE("matrix functions round-trip exactly") {
    const FrequencyGrid grid({0.0, 0.5, 1.25});
    std::mt19937_64 gen(301);
    std::vector<Eigen::MatrixXcd> samples;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Eigen::MatrixXcd A = testutil::random_complex(4, 2, gen);
        if (grid[k] == 0.0) A = A.real().cast<cplx>();
        samples.push_back(A);
    }
    const MatrixFunction fn(grid, samples);
    const std::string text = matfn_to_json(fn);
    const MatfnDocument doc = matfn_from_json(text);
    CHECK(doc.kind.empty());
    CHECK_FALSE(doc.blocks.has_value());
    REQUIRE(doc.fn.rows() == 4);
    REQUIRE(doc.fn.cols() == 2);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK((doc.fn.sample(k) - samples[k]).norm() == 0.0);
        CHECK(doc.fn.grid()[k] == grid[k]);
    }
}

TEST_CASE("kind and block tags survive the round trip") {
    const FrequencyGrid grid({0.0});
    const MatrixFunction fn = MatrixFunction::constant(
        grid, 0.5 * Eigen::MatrixXcd::Identity(2, 2));
    MatfnBlocks blocks;
    blocks.m = 1;
    blocks.n = 1;
    blocks.ell = 1;
    blocks.a = 1;
    const std::string text = matfn_to_json(fn, "sdm", blocks);
    const MatfnDocument doc = matfn_from_json(text);
    CHECK(doc.kind == "sdm");
    REQUIRE(doc.blocks.has_value());
    CHECK(doc.blocks->m == 1);
    CHECK(doc.blocks->ell == 1);
    CHECK(document_schema(text) == "qlti.matfn/1");
}

TEST_CASE("unknown fields are ignored on read") {
    const FrequencyGrid grid({1.0});
    const std::string text = matfn_to_json(MatrixFunction::constant(
        grid, Eigen::MatrixXcd::Identity(2, 2)));
    // splice an extra field into the object
    std::string patched = text;
    patched.insert(patched.find('{') + 1, "\"future_field\": [1, 2, 3],");
    const MatfnDocument doc = matfn_from_json(patched);
    CHECK(doc.fn.rows() == 2);
}

TEST_CASE("malformed matrix documents are schema errors") {
    CHECK_THROWS_AS(matfn_from_json("not json at all"), SchemaError);
    CHECK_THROWS_AS(matfn_from_json("{\"schema\": \"qlti.matfn/2\"}"),
                    SchemaError);
    CHECK_THROWS_AS(matfn_from_json("{\"schema\": \"qlti.matfn/1\"}"),
                    SchemaError);
    // wrong ordering tag
    const std::string text = matfn_to_json(MatrixFunction::constant(
        FrequencyGrid({1.0}), Eigen::MatrixXcd::Identity(2, 2)));
    std::string bad = text;
    const auto pos = bad.find("qqpp");
    bad.replace(pos, 4, "qpqp");
    CHECK_THROWS_AS(matfn_from_json(bad), SchemaError);
}

TEST_CASE("circuits round-trip factor by factor") {
    std::mt19937_64 gen(307);
    const FrequencyGrid grid({0.0, 0.9});
    std::vector<Eigen::MatrixXcd> samples;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        samples.push_back(
            testutil::exp_group_element(2, gen, 0.5, grid[k] == 0.0));
    }
    const MatrixFunction M(grid, samples);
    const OpticalCircuit c = optical_decomposition(M);
    REQUIRE(c.ok());

    for (bool with_mesh : {false, true}) {
        const std::string text = circuit_to_json(c, with_mesh);
        CHECK(document_schema(text) == "qlti.circuit/1");
        CHECK((text.find("\"mesh\"") != std::string::npos) == with_mesh);
        const OpticalCircuit back = circuit_from_json(text);
        REQUIRE(back.ok());
        REQUIRE(back.factors.size() == c.factors.size());
        for (std::size_t k = 0; k < c.factors.size(); ++k) {
            CHECK((back.factors[k].V1 - c.factors[k].V1).norm() == 0.0);
            CHECK((back.factors[k].W1 - c.factors[k].W1).norm() == 0.0);
            CHECK((back.factors[k].W2 - c.factors[k].W2).norm() == 0.0);
            CHECK((back.factors[k].V2 - c.factors[k].V2).norm() == 0.0);
            CHECK((back.factors[k].theta1 - c.factors[k].theta1).norm() ==
                  0.0);
            CHECK((back.factors[k].r - c.factors[k].r).norm() == 0.0);
            CHECK((back.factors[k].theta2 - c.factors[k].theta2).norm() ==
                  0.0);
        }
        const MatrixFunction R = circuit_eval(back);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK((R.sample(k) - samples[k]).norm() <
                  1e-8 * std::max(1.0, samples[k].norm()));
        }
    }
}

TEST_CASE("failed circuits cannot be serialized") {
    OpticalCircuit c;
    c.grid = FrequencyGrid({1.0});
    c.n_modes = 1;
    c.factors.resize(1);
    c.errors = {"did not factor"};
    CHECK_THROWS_AS(circuit_to_json(c), NumericError);
}

TEST_CASE("noise models round-trip with their spectra") {
    const FrequencyGrid grid({0.0, 0.6});
    const MatrixFunction G = MatrixFunction::constant(
        grid, std::sqrt(0.5) * Eigen::MatrixXcd::Identity(2, 2));
    const NoiseModel model = minimal_noise(G);
    const std::string text = noise_to_json(model);
    CHECK(document_schema(text) == "qlti.noise/1");
    const NoiseModel back = noise_from_json(text);
    REQUIRE(back.per_freq.size() == model.per_freq.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK((back.G.sample(k) - model.G.sample(k)).norm() == 0.0);
        CHECK((back.N.sample(k) - model.N.sample(k)).norm() == 0.0);
        CHECK(back.per_freq[k].ell == model.per_freq[k].ell);
        CHECK(back.per_freq[k].d_plus == model.per_freq[k].d_plus);
        CHECK(back.per_freq[k].d_minus == model.per_freq[k].d_minus);
        REQUIRE(back.per_freq[k].gamma.size() ==
                model.per_freq[k].gamma.size());
        for (std::size_t i = 0; i < model.per_freq[k].gamma.size(); ++i) {
            CHECK(back.per_freq[k].gamma[i] == model.per_freq[k].gamma[i]);
        }
    }
}

TEST_CASE("noise records must be consistent") {
    const FrequencyGrid grid({0.5});
    const MatrixFunction G = MatrixFunction::constant(
        grid, std::sqrt(0.5) * Eigen::MatrixXcd::Identity(2, 2),
        ZeroReality::Allow);
    const NoiseModel model = minimal_noise(G);
    std::string text = noise_to_json(model);
    // corrupt ell so it disagrees with d_plus/d_minus
    const auto pos = text.find("\"ell\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 8, "\"ell\": 7");
    CHECK_THROWS_AS(noise_from_json(text), SchemaError);
}

TEST_CASE("transfer specifications evaluate their rational entries") {
    TransferFunctionSpec spec;
    spec.rows = 2;
    spec.cols = 2;
    spec.entries.resize(4);
    // diag: 0.8 / (1 - 0.2 i omega), off-diag zero
    spec.entries[0].num = {0.8};
    spec.entries[0].den = {1.0, -0.2};
    spec.entries[3] = spec.entries[0];

    const std::string text = tfspec_to_json(spec);
    CHECK(document_schema(text) == "qlti.tfspec/1");
    const TransferFunctionSpec back = tfspec_from_json(text);
    CHECK(back.rows == 2);
    REQUIRE(back.entries.size() == 4);
    CHECK(back.entries[0].num == spec.entries[0].num);
    CHECK(back.entries[0].den == spec.entries[0].den);

    const FrequencyGrid grid({0.0, 1.0, 3.0});
    const MatrixFunction fn = sample_transfer_function(back, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const cplx want = 0.8 / (1.0 - cplx(0.0, 0.2) * grid[k]);
        CHECK(std::abs(fn.sample(k)(0, 0) - want) < 1e-15);
        CHECK(std::abs(fn.sample(k)(0, 1)) == 0.0);
        CHECK(std::abs(fn.sample(k)(1, 1) - want) < 1e-15);
    }
}

TEST_CASE("delays multiply in a unit-modulus phase") {
    TransferFunctionSpec spec;
    spec.rows = 1;
    spec.cols = 1;
    spec.entries.resize(1);
    spec.entries[0].num = {1.0};
    spec.entries[0].den = {1.0};
    spec.entries[0].delay = 0.7;
    const FrequencyGrid grid({0.0, 2.0});
    const MatrixFunction fn = sample_transfer_function(spec, grid);
    CHECK(std::abs(fn.sample(0)(0, 0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(fn.sample(1)(0, 0) - std::polar(1.0, 1.4)) < 1e-15);
}

TEST_CASE("a pole on the grid is a guarded degeneracy") {
    TransferFunctionSpec spec;
    spec.rows = 1;
    spec.cols = 1;
    spec.entries.resize(1);
    spec.entries[0].num = {1.0};
    spec.entries[0].den = {0.0, 1.0}; // 1/s: pole at omega = 0
    CHECK_THROWS_AS(
        sample_transfer_function(spec, FrequencyGrid({0.0, 1.0})),
        DegeneracyError);
    // off the pole it is fine
    const MatrixFunction fn =
        sample_transfer_function(spec, FrequencyGrid({1.0, 2.0}));
    CHECK(std::abs(fn.sample(0)(0, 0) - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("an identically zero denominator is malformed") {
    const std::string text =
        "{\"schema\": \"qlti.tfspec/1\", \"rows\": 1, \"cols\": 1, "
        "\"ordering\": \"qqpp\", \"entries\": [{\"num\": [1.0], "
        "\"den\": [0.0, 0.0], \"delay\": 0.0}]}";
    CHECK_THROWS_AS(tfspec_from_json(text), SchemaError);
}

TEST_CASE("seventeen digits reproduce every double") {
    for (double x : {0.1, 1.0 / 3.0, 2.0 * std::numbers::pi, -1e-17,
                     12345.6789, 5.0e300}) {
        const std::string s = format_g17(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_g17(0.0) == "0");
    CHECK(format_g17(-2.0) == "-2");
}

TEST_CASE("csv tables carry a version line and a header") {
    const std::string text = csv_table("qlti.csv/1 demo", {"a", "b"},
                                       {{1.0, 2.5}, {3.0, -4.0}});
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# qlti.csv/1 demo");
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1,2.5");
    std::getline(in, line);
    CHECK(line == "3,-4");
    CHECK_THROWS_AS(csv_table("v", {"a"}, {{1.0, 2.0}}), Error);
}

TEST_CASE("round trips preserve documents byte for byte") {
    const FrequencyGrid grid({0.0, 1.0});
    std::mt19937_64 gen(311);
    std::vector<Eigen::MatrixXcd> samples;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Eigen::MatrixXcd A = testutil::random_complex(2, 2, gen);
        if (grid[k] == 0.0) A = A.real().cast<cplx>();
        samples.push_back(A);
    }
    const MatrixFunction fn(grid, samples);
    const std::string once = matfn_to_json(fn);
    const std::string twice = matfn_to_json(matfn_from_json(once).fn);
    CHECK(once == twice);
}
