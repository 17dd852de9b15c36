#include "qlti/apps.hpp"
#include "qlti/decompose.hpp"
#include "qlti/detect.hpp"
#include "qlti/io.hpp"
#include "qlti/quantize.hpp"
#include "qlti/sdm.hpp"
#include "qlti/symplectic.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using namespace qlti;
using cplx = std::complex<double>;

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        write_text_file(out_path, payload);
    }
}

void report_warnings(const Diagnostics& diag) {
    for (const auto& w : diag.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

struct GridFlags {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 0;
    std::string spacing = "linear";

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid-start", start, "First grid frequency");
        cmd->add_option("--grid-stop", stop, "Last grid frequency");
        cmd->add_option("--grid-count", count, "Number of grid points");
        cmd->add_option("--grid-spacing", spacing,
                        "Grid spacing (linear or log)")
            ->check(CLI::IsMember({"linear", "log"}));
    }

    bool given() const { return count > 0; }

    FrequencyGrid make() const {
        return FrequencyGrid::make(start, stop, count,
                                   spacing == "log" ? GridSpacing::Log
                                                    : GridSpacing::Linear);
    }
};

FrequencyGrid sweep_grid(const std::vector<double>& sweep) {
    if (sweep.size() != 3 || sweep[2] < 2.0) {
        throw SchemaError("--sweep takes start stop count with count >= 2");
    }
    return FrequencyGrid::linspace(sweep[0], sweep[1],
                                   static_cast<std::size_t>(sweep[2]));
}

// ---------------------------------------------------------------- check

void check_group_fn(const MatrixFunction& M, double tol) {
    if (!M.square() || M.rows() == 0 || M.rows() % 2 != 0) {
        throw SchemaError("group membership needs a square even-sized matrix");
    }
    const double Jnorm = std::sqrt(static_cast<double>(M.rows()));
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t k = 0; k < M.size(); ++k) {
        const double rel =
            conjugate_symplectic_residual(M, M.grid()[k]) / Jnorm;
        worst = std::max(worst, rel);
        if (rel > tol) {
            ++failures;
            std::cerr << "frequency index " << k
                      << " (omega = " << format_g17(M.grid()[k])
                      << "): residual " << format_g17(rel)
                      << " exceeds tolerance " << format_g17(tol) << "\n";
        }
    }
    if (failures) {
        throw NumericError("group membership failed at " +
                           std::to_string(failures) + " of " +
                           std::to_string(M.size()) + " frequencies");
    }
    std::cout << "check passed: " << M.size()
              << " frequencies, max group residual " << format_g17(worst)
              << "\n";
}

void check_sdm_doc(const MatrixFunction& fn) {
    SpectralDensityMatrix S(fn);
    double margin = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
        const double m = S.physicality_margin(k);
        margin = k == 0 ? m : std::min(margin, m);
    }
    std::cout << "check passed: valid spectral density over " << S.size()
              << " frequencies, min physicality margin " << format_g17(margin)
              << (S.physical(1e-12) ? " (physical)" : " (not physical)")
              << "\n";
}

void check_noise_doc(const NoiseModel& m, double tol) {
    const Eigen::Index L = m.max_noise_modes();
    const Eigen::MatrixXcd iJl =
        cplx(0.0, 1.0) * symplectic_form(L).cast<cplx>();
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t k = 0; k < m.G.size(); ++k) {
        const Eigen::MatrixXcd Z = ccr_deficit(m.G.sample(k));
        const Eigen::MatrixXcd& N = m.N.sample(k);
        const double rel = (N * iJl * N.adjoint() - Z).norm() /
                           std::max(1.0, Z.norm());
        worst = std::max(worst, rel);
        if (rel > tol) {
            ++failures;
            std::cerr << "frequency index " << k
                      << " (omega = " << format_g17(m.G.grid()[k])
                      << "): noise identity residual " << format_g17(rel)
                      << " exceeds tolerance " << format_g17(tol) << "\n";
        }
    }
    if (failures) {
        throw NumericError("noise identity failed at " +
                           std::to_string(failures) + " of " +
                           std::to_string(m.G.size()) + " frequencies");
    }
    std::cout << "check passed: " << m.G.size()
              << " frequencies, max noise identity residual "
              << format_g17(worst) << "\n";
}

struct CheckOpts {
    std::string input;
    double tol = 1e-8;
};

void run_check(const CheckOpts& o) {
    const std::string text = read_text_file(o.input);
    const std::string schema = document_schema(text);
    if (schema == "qlti.matfn/1") {
        const MatfnDocument doc = matfn_from_json(text);
        if (doc.kind == "sdm") {
            check_sdm_doc(doc.fn);
        } else {
            check_group_fn(doc.fn, o.tol);
        }
    } else if (schema == "qlti.circuit/1") {
        check_group_fn(circuit_eval(circuit_from_json(text)), o.tol);
    } else if (schema == "qlti.noise/1") {
        check_noise_doc(noise_from_json(text), o.tol);
    } else {
        throw SchemaError("cannot check a document with schema \"" + schema +
                          "\"");
    }
}

// ------------------------------------------------------------- quantize

struct QuantizeOpts {
    std::string input, output;
    double rank_tol = 1e-10;
    GridFlags grid;
};

void run_quantize(const QuantizeOpts& o) {
    const std::string text = read_text_file(o.input);
    const std::string schema = document_schema(text);
    MatrixFunction G;
    if (schema == "qlti.matfn/1") {
        if (o.grid.given()) {
            throw SchemaError(
                "grid flags apply to transfer-function input only; the "
                "matrix document carries its own grid");
        }
        G = matfn_from_json(text).fn;
    } else if (schema == "qlti.tfspec/1") {
        if (!o.grid.given()) {
            throw SchemaError("transfer-function input needs --grid-start, "
                              "--grid-stop and --grid-count");
        }
        G = sample_transfer_function(tfspec_from_json(text), o.grid.make());
    } else {
        throw SchemaError("quantize expects a matrix or transfer-function "
                          "document, found schema \"" +
                          schema + "\"");
    }

    Diagnostics diag;
    const NoiseModel model = minimal_noise(G, o.rank_tol, &diag);
    report_warnings(diag);
    int ell_max = 0;
    for (const auto& s : model.per_freq) {
        ell_max = std::max(ell_max, s.ell);
    }
    std::cerr << "quantized " << G.rows() << "x" << G.cols() << " map over "
              << G.size() << " frequencies, up to " << ell_max
              << " noise modes\n";
    emit(noise_to_json(model), o.output);
}

// --------------------------------------------------------------- dilate

struct DilateOpts {
    std::string input, output;
};

void run_dilate(const DilateOpts& o) {
    const NoiseModel model = noise_from_json(read_text_file(o.input));
    Diagnostics diag;
    const Dilation d = dilate(model, &diag);
    report_warnings(diag);
    std::cerr << "dilated to a closed " << d.M_ext.rows() << "x"
              << d.M_ext.cols() << " system with " << d.a
              << " ancilla output modes\n";
    const MatfnBlocks blocks{d.m, d.n, d.ell, d.a};
    emit(matfn_to_json(d.M_ext, "", blocks), o.output);
}

// ------------------------------------------------------------ decompose

struct DecomposeOpts {
    std::string input, output;
    bool with_mesh = false;
};

void run_decompose(const DecomposeOpts& o) {
    const MatfnDocument doc = matfn_from_json(read_text_file(o.input));
    Diagnostics diag;
    const OpticalCircuit c = optical_decomposition(doc.fn, &diag);
    report_warnings(diag);
    std::cerr << "decomposed " << c.n_modes << "-mode circuit over "
              << c.grid.size() << " frequencies\n";
    emit(circuit_to_json(c, o.with_mesh), o.output);
}

// ----------------------------------------------------------- williamson

struct WilliamsonOpts {
    std::string input, output;
};

void run_williamson(const WilliamsonOpts& o) {
    const MatfnDocument doc = matfn_from_json(read_text_file(o.input));
    SpectralDensityMatrix S(doc.fn);
    Diagnostics diag;
    const WilliamsonForm wf = williamson(S, &diag);
    report_warnings(diag);

    const Eigen::Index n = wf.n_modes;
    std::vector<std::string> header{"omega"};
    for (Eigen::Index i = 1; i <= n; ++i) {
        header.push_back("sigma_" + std::to_string(i));
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
        header.push_back("delta_" + std::to_string(i));
    }
    header.push_back("margin");

    std::vector<std::vector<double>> rows;
    rows.reserve(wf.samples.size());
    for (std::size_t k = 0; k < wf.samples.size(); ++k) {
        const WilliamsonSample& s = wf.samples[k];
        std::vector<double> row{wf.grid[k]};
        for (Eigen::Index i = 0; i < n; ++i) {
            row.push_back(s.sigma(i));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            row.push_back(s.delta(i));
        }
        row.push_back(s.margin);
        rows.push_back(std::move(row));
    }
    emit(csv_table("qlti.csv/1 williamson", header, rows), o.output);
}

// ---------------------------------------------------------------- bound

struct BoundOpts {
    std::string input, output;
};

void run_bound(const BoundOpts& o) {
    const NoiseModel model = noise_from_json(read_text_file(o.input));
    const SpectralDensityMatrix vac =
        vacuum_sdm(model.G.grid(), model.in_modes());
    const OpenSystemBound b = open_system_bound(model.G, model.N, vac);

    const Eigen::Index m = b.lhs.cols();
    std::vector<std::string> header{"omega"};
    for (Eigen::Index i = 1; i <= m; ++i) {
        header.push_back("lhs_" + std::to_string(i));
    }
    for (Eigen::Index i = 1; i <= m; ++i) {
        header.push_back("rhs_" + std::to_string(i));
    }
    for (Eigen::Index i = 1; i <= m; ++i) {
        header.push_back("rhs_noise_" + std::to_string(i));
    }

    std::vector<std::vector<double>> rows;
    rows.reserve(b.grid.size());
    for (std::size_t k = 0; k < b.grid.size(); ++k) {
        std::vector<double> row{b.grid[k]};
        for (Eigen::Index i = 0; i < m; ++i) {
            row.push_back(b.lhs(static_cast<Eigen::Index>(k), i));
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            row.push_back(b.rhs(static_cast<Eigen::Index>(k), i));
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            row.push_back(b.rhs_noise(static_cast<Eigen::Index>(k), i));
        }
        rows.push_back(std::move(row));
    }
    emit(csv_table("qlti.csv/1 bound", header, rows), o.output);
}

// --------------------------------------------------------------- detect

struct DetectOpts {
    std::string input, output, mode, lo_path, tomography;
    double theta = 0.0;
    double amp = 1.0;
    double omega0 = 0.0;
    double alpha_re = 1.0, alpha_im = 0.0;
    double ap_re = 1.0, ap_im = 0.0, am_re = 0.0, am_im = 0.0;
    std::vector<double> out_sweep;
};

void run_detect(const DetectOpts& o) {
    const MatfnDocument doc = matfn_from_json(read_text_file(o.input));
    SpectralDensityMatrix S(doc.fn);

    LocalOscillator lo;
    bool dc_default = false;
    if (o.mode == "homodyne") {
        if (S.n_modes() != 1) {
            throw SchemaError("homodyne detection addresses one mode");
        }
        lo = homodyne_lo(o.theta, o.amp);
    } else if (o.mode == "heterodyne") {
        if (S.n_modes() != 1) {
            throw SchemaError("heterodyne detection addresses one mode");
        }
        lo = heterodyne_lo(o.omega0, cplx(o.alpha_re, o.alpha_im));
        dc_default = true;
    } else if (o.mode == "synodyne") {
        if (S.n_modes() != 1) {
            throw SchemaError("synodyne detection addresses one mode");
        }
        lo = synodyne_lo(o.omega0, cplx(o.ap_re, o.ap_im),
                         cplx(o.am_re, o.am_im));
        dc_default = true;
    } else {
        if (o.lo_path.empty()) {
            throw SchemaError("general mode needs --lo with a sampled "
                              "envelope document");
        }
        const MatfnDocument env = matfn_from_json(read_text_file(o.lo_path));
        if (env.fn.cols() != 1 || env.fn.rows() != 2 * S.n_modes()) {
            throw SchemaError("the envelope document must hold one column of "
                              "2 n_modes quadrature weights per frequency");
        }
        std::vector<Eigen::VectorXcd> envelope;
        envelope.reserve(env.fn.size());
        for (std::size_t k = 0; k < env.fn.size(); ++k) {
            envelope.push_back(env.fn.sample(k).col(0));
        }
        lo = sampled_lo(env.fn.grid(), std::move(envelope));
    }

    FrequencyGrid out;
    if (!o.out_sweep.empty()) {
        out = sweep_grid(o.out_sweep);
    } else if (dc_default) {
        // A carrier at omega0 shifts the evaluation window; only the DC
        // photocurrent is guaranteed to stay on the stored grid.
        out = FrequencyGrid({0.0});
    } else {
        out = S.grid();
    }

    Diagnostics diag;
    const Eigen::VectorXd vals = photocurrent_spectrum(S, lo, out, &diag);
    report_warnings(diag);

    std::vector<std::vector<double>> rows;
    rows.reserve(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        rows.push_back({out[k], vals(static_cast<Eigen::Index>(k))});
    }
    emit(csv_table("qlti.csv/1 detect", {"omega", "spectrum"}, rows),
         o.output);

    if (!o.tomography.empty()) {
        if (o.omega0 < 0.0) {
            throw SchemaError("tomography needs --omega0 >= 0");
        }
        Diagnostics tdiag;
        const Eigen::MatrixXcd est =
            S.n_modes() == 1
                ? Eigen::MatrixXcd(reconstruct_sdm(S, o.omega0, &tdiag))
                : multimode_reconstruct(S, o.omega0, &tdiag);
        report_warnings(tdiag);
        MatrixFunction fn(FrequencyGrid({o.omega0}), {est});
        write_text_file(o.tomography, matfn_to_json(fn, "sdm"));
        std::cerr << "tomographic reconstruction at omega = "
                  << format_g17(o.omega0) << " written to " << o.tomography
                  << "\n";
    }
}

// ----------------------------------------------------------------- demo

struct CavityDemoOpts {
    double R = 0.99, phi0 = 0.0, tau = 1.0, r = 1.0;
    std::vector<double> sweep{0.0, 3.0, 65.0};
    std::string output, sdm_path;
};

void run_demo_cavity(const CavityDemoOpts& o) {
    const FrequencyGrid grid = sweep_grid(o.sweep);
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid[k];
        const cplx Fp = cavity_F(o.R, o.phi0, o.tau, w);
        const cplx Fm = cavity_F(o.R, o.phi0, o.tau, -w);
        const HiddenSqueezing h = hidden_squeezing_metrics(Fp, Fm, o.r);
        rows.push_back({w, Fp.real(), Fp.imag(), Fm.real(), Fm.imag(),
                        h.lambda_complex, h.lambda_real, h.r_lim,
                        h.hidden ? 1.0 : 0.0});
    }
    emit(csv_table("qlti.csv/1 demo-cavity",
                   {"omega", "F_plus_re", "F_plus_im", "F_minus_re",
                    "F_minus_im", "lambda_complex", "lambda_real", "r_lim",
                    "hidden"},
                   rows),
         o.output);
    if (!o.sdm_path.empty()) {
        const SpectralDensityMatrix S =
            lossy_squeezer_sdm(o.R, o.phi0, o.tau, o.r, grid);
        write_text_file(o.sdm_path, matfn_to_json(S.fn(), "sdm"));
    }
}

struct OscillatorDemoOpts {
    double eta = 0.5, tau = 1.0;
    std::vector<double> sweep{0.0, 3.0, 64.0};
    std::string output, sdm_path;
};

void run_demo_oscillator(const OscillatorDemoOpts& o) {
    const FrequencyGrid grid = sweep_grid(o.sweep);
    const std::vector<OscillatorBoundRow> bound =
        oscillator_bound(o.eta, o.tau, grid);
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = oscillator_coefficients(o.eta, o.tau, grid[k]);
        rows.push_back({grid[k], c.H0.real(), c.H0.imag(), c.HG.real(),
                        c.HG.imag(), bound[k].bound, bound[k].achieved,
                        bound[k].ratio});
    }
    emit(csv_table("qlti.csv/1 demo-oscillator",
                   {"omega", "H0_re", "H0_im", "HG_re", "HG_im", "bound",
                    "achieved", "ratio"},
                   rows),
         o.output);
    if (!o.sdm_path.empty()) {
        const MatrixFunction M = oscillator_transfer(o.eta, o.tau, grid);
        const SpectralDensityMatrix S =
            transform_sdm(M, vacuum_sdm(grid, 2));
        write_text_file(o.sdm_path, matfn_to_json(S.fn(), "sdm"));
    }
}

struct TwoModeDemoOpts {
    double r1 = 1.0, r2 = 0.5;
    std::string output, sdm_path;
};

void run_demo_two_mode(const TwoModeDemoOpts& o) {
    std::vector<std::vector<double>> rows;
    const int steps = 11;
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        const double r1 = t * o.r1;
        const double r2 = t * o.r2;
        const TwoModeSqueezer tm = two_mode_squeezer(r1, r2);
        const double s1 = std::sinh(r1), s2 = std::sinh(r2);
        rows.push_back({r1, r2, tm.Sigma, tm.Delta,
                        0.5 * (s2 * s2 + s1 * s1) + 0.5,
                        0.5 * (s2 * s2 - s1 * s1)});
    }
    emit(csv_table("qlti.csv/1 demo-two-mode",
                   {"r1", "r2", "sigma", "delta", "sigma_formula",
                    "delta_formula"},
                   rows),
         o.output);
    if (!o.sdm_path.empty()) {
        const TwoModeSqueezer tm = two_mode_squeezer(o.r1, o.r2);
        Eigen::VectorXd sig(1), del(1);
        sig << tm.Sigma;
        del << tm.Delta;
        // Delta is odd in omega, so the frequency-flat sample is placed at
        // a nonzero frequency where a complex off-diagonal is admissible.
        MatrixFunction fn(FrequencyGrid({1.0}),
                          {williamson_invariant_matrix(sig, del)});
        write_text_file(o.sdm_path, matfn_to_json(fn, "sdm"));
    }
}

// ----------------------------------------------------------------- main

void setup(CLI::App& app) {
    app.require_subcommand(1);

    {
        auto o = std::make_shared<CheckOpts>();
        auto* cmd = app.add_subcommand(
            "check", "Verify a document: group membership for matrices and "
                     "circuits, the noise identity for quantized models, "
                     "validity for spectral densities");
        cmd->add_option("input", o->input, "Input JSON document")->required();
        cmd->add_option("--tol", o->tol, "Relative residual tolerance");
        cmd->callback([o] { run_check(*o); });
    }
    {
        auto o = std::make_shared<QuantizeOpts>();
        auto* cmd = app.add_subcommand(
            "quantize", "Compute the minimal noise model of a classical "
                        "transfer matrix");
        cmd->add_option("input", o->input,
                        "Matrix or transfer-function JSON document")
            ->required();
        cmd->add_option("-o,--output", o->output, "Output path (default "
                                                  "stdout)");
        cmd->add_option("--rank-tol", o->rank_tol,
                        "Relative eigenvalue cutoff for the deficit rank");
        o->grid.attach(cmd);
        cmd->callback([o] { run_quantize(*o); });
    }
    {
        auto o = std::make_shared<DilateOpts>();
        auto* cmd = app.add_subcommand(
            "dilate", "Complete a quantized model to a closed system");
        cmd->add_option("input", o->input, "Noise-model JSON document")
            ->required();
        cmd->add_option("-o,--output", o->output, "Output path (default "
                                                  "stdout)");
        cmd->callback([o] { run_dilate(*o); });
    }
    {
        auto o = std::make_shared<DecomposeOpts>();
        auto* cmd = app.add_subcommand(
            "decompose", "Factor a closed system into optical elements");
        cmd->add_option("input", o->input, "Matrix JSON document")
            ->required();
        cmd->add_option("-o,--output", o->output, "Output path (default "
                                                  "stdout)");
        cmd->add_flag("--mesh", o->with_mesh,
                      "Embed planar rotation programs for each unitary");
        cmd->callback([o] { run_decompose(*o); });
    }
    {
        auto o = std::make_shared<WilliamsonOpts>();
        auto* cmd = app.add_subcommand(
            "williamson", "Reduce a spectral density to invariant form");
        cmd->add_option("input", o->input, "Spectral density JSON document")
            ->required();
        cmd->add_option("-o,--output", o->output, "Output CSV path (default "
                                                  "stdout)");
        cmd->callback([o] { run_williamson(*o); });
    }
    {
        auto o = std::make_shared<BoundOpts>();
        auto* cmd = app.add_subcommand(
            "bound", "Output-uncertainty bound of a quantized model over "
                     "vacuum input");
        cmd->add_option("input", o->input, "Noise-model JSON document")
            ->required();
        cmd->add_option("-o,--output", o->output, "Output CSV path (default "
                                                  "stdout)");
        cmd->callback([o] { run_bound(*o); });
    }
    {
        auto o = std::make_shared<DetectOpts>();
        auto* cmd = app.add_subcommand(
            "detect", "Photocurrent spectra and tomography for a spectral "
                      "density");
        cmd->add_option("input", o->input, "Spectral density JSON document")
            ->required();
        cmd->add_option("--mode", o->mode, "Detection mode")
            ->required()
            ->check(CLI::IsMember(
                {"homodyne", "heterodyne", "synodyne", "general"}));
        cmd->add_option("-o,--output", o->output, "Output CSV path (default "
                                                  "stdout)");
        cmd->add_option("--theta", o->theta, "Homodyne quadrature angle");
        cmd->add_option("--amp", o->amp, "Homodyne amplitude");
        cmd->add_option("--omega0", o->omega0,
                        "Carrier frequency (heterodyne, synodyne, "
                        "tomography)");
        cmd->add_option("--alpha-re", o->alpha_re,
                        "Heterodyne amplitude, real part");
        cmd->add_option("--alpha-im", o->alpha_im,
                        "Heterodyne amplitude, imaginary part");
        cmd->add_option("--alpha-plus-re", o->ap_re,
                        "Synodyne upper-sideband amplitude, real part");
        cmd->add_option("--alpha-plus-im", o->ap_im,
                        "Synodyne upper-sideband amplitude, imaginary part");
        cmd->add_option("--alpha-minus-re", o->am_re,
                        "Synodyne lower-sideband amplitude, real part");
        cmd->add_option("--alpha-minus-im", o->am_im,
                        "Synodyne lower-sideband amplitude, imaginary part");
        cmd->add_option("--lo", o->lo_path,
                        "Sampled envelope document (general mode)");
        cmd->add_option("--out-sweep", o->out_sweep,
                        "Output frequencies: start stop count")
            ->expected(3);
        cmd->add_option("--tomography", o->tomography,
                        "Reconstruct the spectral density at --omega0 and "
                        "write it to this path");
        cmd->callback([o] { run_detect(*o); });
    }
    {
        auto* demo = app.add_subcommand("demo", "Worked examples");
        demo->require_subcommand(1);
        {
            auto o = std::make_shared<CavityDemoOpts>();
            auto* cmd = demo->add_subcommand(
                "cavity", "Cavity-filtered squeezer and its hidden-squeezing "
                          "metrics");
            cmd->add_option("--R", o->R, "Mirror power reflectivity");
            cmd->add_option("--phi0", o->phi0, "Cavity detuning phase");
            cmd->add_option("--tau", o->tau, "Cavity round-trip time");
            cmd->add_option("--r", o->r, "Squeezing strength");
            cmd->add_option("--sweep", o->sweep,
                            "Frequency sweep: start stop count")
                ->expected(3);
            cmd->add_option("-o,--output", o->output,
                            "Output CSV path (default stdout)");
            cmd->add_option("--sdm", o->sdm_path,
                            "Also write the filtered spectral density here");
            cmd->callback([o] { run_demo_cavity(*o); });
        }
        {
            auto o = std::make_shared<OscillatorDemoOpts>();
            auto* cmd = demo->add_subcommand(
                "oscillator",
                "Feedback oscillator transfer and its saturated bound");
            cmd->add_option("--eta", o->eta, "Coupler reflectivity");
            cmd->add_option("--tau", o->tau, "Loop delay");
            cmd->add_option("--sweep", o->sweep,
                            "Frequency sweep: start stop count")
                ->expected(3);
            cmd->add_option("-o,--output", o->output,
                            "Output CSV path (default stdout)");
            cmd->add_option("--sdm", o->sdm_path,
                            "Also write the vacuum-driven output spectral "
                            "density here");
            cmd->callback([o] { run_demo_oscillator(*o); });
        }
        {
            auto o = std::make_shared<TwoModeDemoOpts>();
            auto* cmd = demo->add_subcommand(
                "two-mode",
                "Two-squeezer scheme and its invariant-form spectrum");
            cmd->add_option("--r1", o->r1, "First squeezing strength");
            cmd->add_option("--r2", o->r2, "Second squeezing strength");
            cmd->add_option("-o,--output", o->output,
                            "Output CSV path (default stdout)");
            cmd->add_option("--sdm", o->sdm_path,
                            "Also write the kept-mode spectral density here");
            cmd->callback([o] { run_demo_two_mode(*o); });
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum LTI systems: quantization, dilation, optical "
                 "synthesis, invariant spectra, detection"};
    setup(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
