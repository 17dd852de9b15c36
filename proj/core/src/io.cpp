#include "qlti/io.hpp"

#include "qlti/mesh.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <utility>

namespace qlti {
namespace {

using nlohmann::json;
using cplx = std::complex<double>;

json parse_checked(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("JSON parse error: ") + e.what());
    }
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw SchemaError(std::string("missing required field \"") + key +
                          "\"");
    }
    return *it;
}

void require_schema(const json& j, const std::string& want) {
    const std::string got = require(j, "schema").get<std::string>();
    if (got != want) {
        throw SchemaError("expected schema \"" + want + "\", found \"" + got +
                          "\"");
    }
}

std::vector<double> double_list(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_array()) {
        throw SchemaError(std::string("field \"") + key +
                          "\" must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw SchemaError(std::string("field \"") + key +
                              "\" must contain only numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

// One flattened row-major matrix per frequency, split into re/im planes.
std::pair<json, json> planes(const std::vector<Eigen::MatrixXcd>& samples) {
    json re = json::array();
    json im = json::array();
    for (const auto& M : samples) {
        json fr = json::array();
        json fi = json::array();
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                fr.push_back(M(i, j).real());
                fi.push_back(M(i, j).imag());
            }
        }
        re.push_back(std::move(fr));
        im.push_back(std::move(fi));
    }
    return {std::move(re), std::move(im)};
}

std::vector<Eigen::MatrixXcd> unplanes(const json& re, const json& im,
                                       Eigen::Index rows, Eigen::Index cols,
                                       std::size_t nfreq) {
    if (!re.is_array() || !im.is_array() || re.size() != nfreq ||
        im.size() != nfreq) {
        throw SchemaError("re/im must hold one flattened matrix per "
                          "frequency");
    }
    const std::size_t flat = static_cast<std::size_t>(rows * cols);
    std::vector<Eigen::MatrixXcd> samples;
    samples.reserve(nfreq);
    for (std::size_t k = 0; k < nfreq; ++k) {
        const json& fr = re[k];
        const json& fi = im[k];
        if (fr.size() != flat || fi.size() != flat) {
            throw SchemaError("matrix at frequency index " +
                              std::to_string(k) + " has " +
                              std::to_string(fr.size()) + " entries, expected " +
                              std::to_string(flat));
        }
        Eigen::MatrixXcd M(rows, cols);
        std::size_t p = 0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j, ++p) {
                M(i, j) = cplx(fr[p].get<double>(), fi[p].get<double>());
            }
        }
        samples.push_back(std::move(M));
    }
    return samples;
}

json matfn_object(const MatrixFunction& fn, const std::string& kind,
                  const std::optional<MatfnBlocks>& blocks) {
    json j;
    j["schema"] = "qlti.matfn/1";
    j["n_modes"] = fn.cols() / 2;
    j["rows"] = fn.rows();
    j["cols"] = fn.cols();
    j["ordering"] = "qqpp";
    j["frequencies"] = fn.grid().values();
    auto [re, im] = planes(fn.samples());
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    if (!kind.empty()) {
        j["kind"] = kind;
    }
    if (blocks) {
        j["blocks"] = {{"m", blocks->m},
                       {"n", blocks->n},
                       {"ell", blocks->ell},
                       {"a", blocks->a}};
    }
    return j;
}

MatfnDocument matfn_document(const json& j) {
    require_schema(j, "qlti.matfn/1");
    const std::string ordering = require(j, "ordering").get<std::string>();
    if (ordering != "qqpp") {
        throw SchemaError("unsupported ordering \"" + ordering +
                          "\", expected \"qqpp\"");
    }
    const auto rows = require(j, "rows").get<Eigen::Index>();
    const auto cols = require(j, "cols").get<Eigen::Index>();
    if (rows <= 0 || cols < 0) {
        throw SchemaError("rows must be positive and cols non-negative");
    }
    if (j.contains("n_modes") &&
        j["n_modes"].get<Eigen::Index>() != cols / 2) {
        throw SchemaError("n_modes must equal cols / 2");
    }
    FrequencyGrid grid(double_list(j, "frequencies"));
    auto samples = unplanes(require(j, "re"), require(j, "im"), rows, cols,
                            grid.size());

    MatfnDocument doc;
    doc.fn = MatrixFunction(std::move(grid), std::move(samples));
    doc.kind = j.value("kind", "");
    if (j.contains("blocks")) {
        const json& b = j["blocks"];
        MatfnBlocks blocks;
        blocks.m = require(b, "m").get<Eigen::Index>();
        blocks.n = require(b, "n").get<Eigen::Index>();
        blocks.ell = require(b, "ell").get<Eigen::Index>();
        blocks.a = require(b, "a").get<Eigen::Index>();
        doc.blocks = blocks;
    }
    return doc;
}

json unitary_planes(const std::vector<CircuitFactors>& factors,
                    Eigen::MatrixXcd CircuitFactors::*member) {
    json re = json::array();
    json im = json::array();
    for (const auto& f : factors) {
        const Eigen::MatrixXcd& M = f.*member;
        json fr = json::array();
        json fi = json::array();
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                fr.push_back(M(i, j).real());
                fi.push_back(M(i, j).imag());
            }
        }
        re.push_back(std::move(fr));
        im.push_back(std::move(fi));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

json angle_lists(const std::vector<CircuitFactors>& factors,
                 Eigen::VectorXd CircuitFactors::*member) {
    json out = json::array();
    for (const auto& f : factors) {
        const Eigen::VectorXd& v = f.*member;
        out.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    return out;
}

void read_unitaries(const json& factors, const char* key,
                    std::vector<CircuitFactors>& out, Eigen::Index n,
                    Eigen::MatrixXcd CircuitFactors::*member) {
    const json& u = require(factors, key);
    auto samples = unplanes(require(u, "re"), require(u, "im"), n, n,
                            out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].*member = std::move(samples[k]);
    }
}

void read_angles(const json& factors, const char* key,
                 std::vector<CircuitFactors>& out, Eigen::Index n,
                 Eigen::VectorXd CircuitFactors::*member) {
    const json& lists = require(factors, key);
    if (!lists.is_array() || lists.size() != out.size()) {
        throw SchemaError(std::string("factor \"") + key +
                          "\" must hold one list per frequency");
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!lists[k].is_array() ||
            lists[k].size() != static_cast<std::size_t>(n)) {
            throw SchemaError(std::string("factor \"") + key +
                              "\" at frequency index " + std::to_string(k) +
                              " must hold " + std::to_string(n) + " numbers");
        }
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = lists[k][static_cast<std::size_t>(i)].get<double>();
        }
        out[k].*member = std::move(v);
    }
}

json mesh_program_json(const MeshProgram& p) {
    json out = json::array();
    for (const auto& e : p.elements) {
        if (const auto* rot = std::get_if<MeshRotation>(&e)) {
            out.push_back({{"type", "rotation"},
                           {"modes", {rot->mode, rot->mode + 1}},
                           {"theta", rot->theta},
                           {"phi", rot->phi}});
        } else {
            const auto& ph = std::get<MeshPhase>(e);
            out.push_back(
                {{"type", "phase"}, {"mode", ph.mode}, {"phi", ph.phi}});
        }
    }
    return out;
}

json mesh_lists(const std::vector<CircuitFactors>& factors,
                Eigen::MatrixXcd CircuitFactors::*member) {
    json out = json::array();
    for (const auto& f : factors) {
        out.push_back(mesh_program_json(mesh_decompose(f.*member)));
    }
    return out;
}

void require_no_failures(const OpticalCircuit& c) {
    std::string failed;
    for (std::size_t k = 0; k < c.errors.size(); ++k) {
        if (!c.errors[k].empty()) {
            if (!failed.empty()) {
                failed += ", ";
            }
            failed += std::to_string(k);
        }
    }
    if (!failed.empty()) {
        throw NumericError(
            "cannot serialize a circuit with failed frequencies: " + failed);
    }
}

} // namespace

std::string matfn_to_json(const MatrixFunction& fn, const std::string& kind,
                          const std::optional<MatfnBlocks>& blocks) {
    return matfn_object(fn, kind, blocks).dump(2) + "\n";
}

MatfnDocument matfn_from_json(const std::string& text) {
    return matfn_document(parse_checked(text));
}

std::string circuit_to_json(const OpticalCircuit& c, bool with_mesh) {
    require_no_failures(c);
    json j;
    j["schema"] = "qlti.circuit/1";
    j["n_modes"] = c.n_modes;
    j["frequencies"] = c.grid.values();
    json factors;
    factors["V1"] = unitary_planes(c.factors, &CircuitFactors::V1);
    factors["theta1"] = angle_lists(c.factors, &CircuitFactors::theta1);
    factors["W1"] = unitary_planes(c.factors, &CircuitFactors::W1);
    factors["r"] = angle_lists(c.factors, &CircuitFactors::r);
    factors["W2"] = unitary_planes(c.factors, &CircuitFactors::W2);
    factors["theta2"] = angle_lists(c.factors, &CircuitFactors::theta2);
    factors["V2"] = unitary_planes(c.factors, &CircuitFactors::V2);
    j["factors"] = std::move(factors);
    if (with_mesh) {
        json mesh;
        mesh["V1"] = mesh_lists(c.factors, &CircuitFactors::V1);
        mesh["W1"] = mesh_lists(c.factors, &CircuitFactors::W1);
        mesh["W2"] = mesh_lists(c.factors, &CircuitFactors::W2);
        mesh["V2"] = mesh_lists(c.factors, &CircuitFactors::V2);
        j["mesh"] = std::move(mesh);
    }
    return j.dump(2) + "\n";
}

OpticalCircuit circuit_from_json(const std::string& text) {
    const json j = parse_checked(text);
    require_schema(j, "qlti.circuit/1");
    const auto n = require(j, "n_modes").get<Eigen::Index>();
    if (n <= 0) {
        throw SchemaError("n_modes must be positive");
    }

    OpticalCircuit c;
    c.grid = FrequencyGrid(double_list(j, "frequencies"));
    c.n_modes = n;
    c.factors.resize(c.grid.size());
    c.errors.assign(c.grid.size(), "");

    const json& factors = require(j, "factors");
    read_unitaries(factors, "V1", c.factors, n, &CircuitFactors::V1);
    read_angles(factors, "theta1", c.factors, n, &CircuitFactors::theta1);
    read_unitaries(factors, "W1", c.factors, n, &CircuitFactors::W1);
    read_angles(factors, "r", c.factors, n, &CircuitFactors::r);
    read_unitaries(factors, "W2", c.factors, n, &CircuitFactors::W2);
    read_angles(factors, "theta2", c.factors, n, &CircuitFactors::theta2);
    read_unitaries(factors, "V2", c.factors, n, &CircuitFactors::V2);
    return c;
}

std::string noise_to_json(const NoiseModel& model) {
    json j;
    j["schema"] = "qlti.noise/1";
    j["model"] = {{"G", matfn_object(model.G, "", {})},
                  {"N", matfn_object(model.N, "", {})}};
    json per_freq = json::array();
    for (const auto& s : model.per_freq) {
        per_freq.push_back({{"ell", s.ell},
                            {"d_plus", s.d_plus},
                            {"d_minus", s.d_minus},
                            {"gamma", s.gamma}});
    }
    j["per_freq"] = std::move(per_freq);
    return j.dump(2) + "\n";
}

NoiseModel noise_from_json(const std::string& text) {
    const json j = parse_checked(text);
    require_schema(j, "qlti.noise/1");
    const json& model = require(j, "model");

    NoiseModel out;
    out.G = matfn_document(require(model, "G")).fn;
    out.N = matfn_document(require(model, "N")).fn;
    if (!(out.G.grid() == out.N.grid())) {
        throw SchemaError("G and N must share one frequency grid");
    }
    if (out.N.rows() != out.G.rows()) {
        throw SchemaError("G and N must have the same number of rows");
    }

    const json& per_freq = require(j, "per_freq");
    if (!per_freq.is_array() || per_freq.size() != out.G.grid().size()) {
        throw SchemaError("per_freq must hold one record per frequency");
    }
    out.per_freq.reserve(per_freq.size());
    for (const auto& rec : per_freq) {
        NoiseSpectrum s;
        s.ell = require(rec, "ell").get<int>();
        s.d_plus = require(rec, "d_plus").get<int>();
        s.d_minus = require(rec, "d_minus").get<int>();
        s.gamma = double_list(rec, "gamma");
        if (s.ell < 0 || s.ell > out.max_noise_modes() ||
            s.ell != std::max(s.d_plus, s.d_minus)) {
            throw SchemaError("inconsistent noise-mode counts in per_freq");
        }
        out.per_freq.push_back(std::move(s));
    }
    return out;
}

std::string tfspec_to_json(const TransferFunctionSpec& spec) {
    json j;
    j["schema"] = "qlti.tfspec/1";
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
    j["ordering"] = "qqpp";
    json entries = json::array();
    for (const auto& e : spec.entries) {
        entries.push_back(
            {{"num", e.num}, {"den", e.den}, {"delay", e.delay}});
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

TransferFunctionSpec tfspec_from_json(const std::string& text) {
    const json j = parse_checked(text);
    require_schema(j, "qlti.tfspec/1");
    const std::string ordering = require(j, "ordering").get<std::string>();
    if (ordering != "qqpp") {
        throw SchemaError("unsupported ordering \"" + ordering +
                          "\", expected \"qqpp\"");
    }

    TransferFunctionSpec spec;
    spec.rows = require(j, "rows").get<Eigen::Index>();
    spec.cols = require(j, "cols").get<Eigen::Index>();
    if (spec.rows <= 0 || spec.cols <= 0) {
        throw SchemaError("rows and cols must be positive");
    }
    const json& entries = require(j, "entries");
    if (!entries.is_array() ||
        entries.size() != static_cast<std::size_t>(spec.rows * spec.cols)) {
        throw SchemaError("entries must hold rows * cols row-major records");
    }
    spec.entries.reserve(entries.size());
    for (const auto& rec : entries) {
        TransferFunctionEntry e;
        e.num = double_list(rec, "num");
        e.den = double_list(rec, "den");
        e.delay = require(rec, "delay").get<double>();
        if (e.num.empty() || e.den.empty()) {
            throw SchemaError("num and den must be non-empty");
        }
        bool den_nonzero = false;
        for (double c : e.den) {
            den_nonzero = den_nonzero || c != 0.0;
        }
        if (!den_nonzero) {
            throw SchemaError("den must have a nonzero coefficient");
        }
        spec.entries.push_back(std::move(e));
    }
    return spec;
}

MatrixFunction sample_transfer_function(const TransferFunctionSpec& spec,
                                        const FrequencyGrid& grid) {
    if (spec.entries.size() !=
        static_cast<std::size_t>(spec.rows * spec.cols)) {
        throw SchemaError("entries must hold rows * cols row-major records");
    }
    auto polyval = [](const std::vector<double>& c, cplx s) {
        cplx acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) {
            acc = acc * s + c[k];
        }
        return acc;
    };

    std::vector<Eigen::MatrixXcd> samples;
    samples.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const cplx s(0.0, grid[k]);
        Eigen::MatrixXcd M(spec.rows, spec.cols);
        std::size_t p = 0;
        for (Eigen::Index i = 0; i < spec.rows; ++i) {
            for (Eigen::Index j = 0; j < spec.cols; ++j, ++p) {
                const auto& e = spec.entries[p];
                double scale = 0.0;
                for (double c : e.den) {
                    scale = std::max(scale, std::abs(c));
                }
                const cplx den = polyval(e.den, s);
                if (std::abs(den) < 1e-12 * scale) {
                    throw DegeneracyError(
                        "denominator of entry (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") vanishes at frequency " +
                        std::to_string(grid[k]));
                }
                M(i, j) = std::polar(1.0, grid[k] * e.delay) *
                          polyval(e.num, s) / den;
            }
        }
        samples.push_back(std::move(M));
    }
    return MatrixFunction(grid, std::move(samples));
}

std::string document_schema(const std::string& text) {
    const json j = parse_checked(text);
    return j.value("schema", "");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error("cannot write file: " + path);
    }
}

std::string format_g17(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string csv_table(const std::string& version,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out = "# " + version + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + header[i];
    }
    out += "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw Error("CSV row width does not match the header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ",";
            }
            out += format_g17(row[i]);
        }
        out += "\n";
    }
    return out;
}

} // namespace qlti
