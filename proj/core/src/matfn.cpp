#include "qlti/matfn.hpp"

#include <cmath>
#include <sstream>

namespace qlti {

namespace {

double max_abs_entry(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

MatrixFunction::MatrixFunction(FrequencyGrid grid,
                               std::vector<Eigen::MatrixXcd> samples,
                               ZeroReality zero)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw SchemaError("matrix function: sample count does not match grid");
    }
    if (samples_.empty()) {
        throw SchemaError("matrix function: needs at least one sample");
    }
    rows_ = samples_[0].rows();
    cols_ = samples_[0].cols();
    if (rows_ <= 0 || cols_ < 0) {
        throw SchemaError("matrix function: samples must have at least one row");
    }
    for (const auto& s : samples_) {
        if (s.rows() != rows_ || s.cols() != cols_) {
            throw SchemaError("matrix function: inconsistent sample shapes");
        }
        if (!s.allFinite()) {
            throw SchemaError("matrix function: non-finite sample entry");
        }
    }
    if (zero == ZeroReality::Enforce && grid_[0] == 0.0 && samples_[0].size() > 0) {
        auto& s0 = samples_[0];
        const double scale = std::max(1.0, max_abs_entry(s0));
        const double imag_max = s0.imag().cwiseAbs().maxCoeff();
        if (imag_max > 1e-12 * scale) {
            std::ostringstream msg;
            msg << "matrix function: sample at omega=0 must be real "
                   "(max imaginary part "
                << imag_max << ")";
            throw SchemaError(msg.str());
        }
        s0 = s0.real().cast<std::complex<double>>();
    }
}

MatrixFunction MatrixFunction::constant(FrequencyGrid grid,
                                        const Eigen::MatrixXcd& value,
                                        ZeroReality zero) {
    std::vector<Eigen::MatrixXcd> samples(grid.size(), value);
    return MatrixFunction(std::move(grid), std::move(samples), zero);
}

Eigen::MatrixXcd MatrixFunction::eval(double omega, double tol) const {
    const double mag = std::abs(omega);
    const std::size_t i = grid_.find(mag, tol * std::max(1.0, mag));
    if (i == FrequencyGrid::npos) {
        std::ostringstream msg;
        msg << "matrix function: frequency " << omega << " not on the grid";
        throw NumericError(msg.str());
    }
    return omega < 0.0 ? samples_[i].conjugate() : samples_[i];
}

Eigen::MatrixXcd MatrixFunction::eval_interp(double omega, Diagnostics* diag,
                                             double tol) const {
    const double mag = std::abs(omega);
    const std::size_t hit = grid_.find(mag, tol * std::max(1.0, mag));
    if (hit != FrequencyGrid::npos) {
        return omega < 0.0 ? samples_[hit].conjugate() : samples_[hit];
    }
    const auto& f = grid_.values();
    if (mag < f.front() || mag > f.back()) {
        std::ostringstream msg;
        msg << "matrix function: frequency " << omega
            << " outside the grid range [" << f.front() << ", " << f.back()
            << "]";
        throw NumericError(msg.str());
    }
    std::size_t hi = grid_.nearest(mag);
    if (f[hi] < mag) ++hi;
    if (hi == 0) ++hi;
    const std::size_t lo = hi - 1;
    const double t = (mag - f[lo]) / (f[hi] - f[lo]);
    if (diag) {
        std::ostringstream msg;
        msg << "off-grid frequency " << omega
            << " evaluated by linear interpolation between " << f[lo] << " and "
            << f[hi];
        diag->warn(msg.str());
    }
    Eigen::MatrixXcd v = (1.0 - t) * samples_[lo] + t * samples_[hi];
    return omega < 0.0 ? v.conjugate() : v;
}

double max_abs(const MatrixFunction& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        m = std::max(m, max_abs_entry(f.sample(i)));
    }
    return m;
}

} // namespace qlti
