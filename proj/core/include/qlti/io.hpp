#pragma once

#include "qlti/decompose.hpp"
#include "qlti/errors.hpp"
#include "qlti/matfn.hpp"
#include "qlti/quantize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qlti {

// Block shape carried by dilation documents: G is 2m x 2n, with ell noise
// modes and a = n + ell - m ancilla output modes.
struct MatfnBlocks {
    Eigen::Index m = 0, n = 0, ell = 0, a = 0;
};

// A qlti.matfn/1 document: the sampled matrix function plus optional
// metadata ("kind" tags spectral densities, "blocks" tags dilations).
// Unknown fields are ignored on read.
struct MatfnDocument {
    MatrixFunction fn;
    std::string kind;
    std::optional<MatfnBlocks> blocks;
};

std::string matfn_to_json(const MatrixFunction& fn,
                          const std::string& kind = "",
                          const std::optional<MatfnBlocks>& blocks = {});
MatfnDocument matfn_from_json(const std::string& text);

// qlti.circuit/1: the per-frequency seven-factor form. All frequencies must
// have factorized successfully. with_mesh additionally embeds a planar
// rotation program for each unitary factor at each frequency; mesh programs
// are advisory on read (the factors are authoritative) and are not parsed
// back.
std::string circuit_to_json(const OpticalCircuit& c, bool with_mesh = false);
OpticalCircuit circuit_from_json(const std::string& text);

// qlti.noise/1: {model: {G, N}, per_freq: [{ell, d_plus, d_minus, gamma}]}.
std::string noise_to_json(const NoiseModel& model);
NoiseModel noise_from_json(const std::string& text);

// qlti.tfspec/1: a classical transfer matrix given entry-wise as rational
// functions of s = i omega with real ascending coefficients, times a delay
// factor e^{i omega delay}. Entries are row-major.
struct TransferFunctionEntry {
    std::vector<double> num{0.0};
    std::vector<double> den{1.0};
    double delay = 0.0;
};

struct TransferFunctionSpec {
    Eigen::Index rows = 0, cols = 0;
    std::vector<TransferFunctionEntry> entries;
};

std::string tfspec_to_json(const TransferFunctionSpec& spec);
TransferFunctionSpec tfspec_from_json(const std::string& text);

// Evaluate the rational entries on a grid. Reality symmetry holds by
// construction (real coefficients, real delay). A denominator vanishing on
// the grid is a degeneracy error.
MatrixFunction sample_transfer_function(const TransferFunctionSpec& spec,
                                        const FrequencyGrid& grid);

// The "schema" field of a JSON document, for format dispatch.
std::string document_schema(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Shortest lossless decimal form at 17 significant digits, locale-free.
std::string format_g17(double x);

// CSV with a '#'-prefixed version line, a header row, and %.17g numbers.
std::string csv_table(const std::string& version,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

} // namespace qlti
