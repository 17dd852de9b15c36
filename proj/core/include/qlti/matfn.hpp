#pragma once

#include "qlti/errors.hpp"
#include "qlti/grid.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qlti {

// A frequency-sampled complex matrix-valued function F[omega]. Storage holds
// samples at the (non-negative) grid frequencies only; evaluation at -omega
// returns the element-wise conjugate of the sample at +omega, so the reality
// symmetry F[-omega] = F[omega]* holds by construction. If 0 is on the grid,
// the omega=0 sample must be real: imaginary parts below tolerance are
// discarded, larger ones are an error. Quantities that live in a complex
// basis (ladder-picture matrices) opt out of the omega=0 reality check via
// ZeroReality::Allow.
enum class ZeroReality { Enforce, Allow };

class MatrixFunction {
public:
    MatrixFunction() = default;
    MatrixFunction(FrequencyGrid grid, std::vector<Eigen::MatrixXcd> samples,
                   ZeroReality zero = ZeroReality::Enforce);

    static MatrixFunction constant(FrequencyGrid grid,
                                   const Eigen::MatrixXcd& value,
                                   ZeroReality zero = ZeroReality::Enforce);

    const FrequencyGrid& grid() const { return grid_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    std::size_t size() const { return samples_.size(); }

    const Eigen::MatrixXcd& sample(std::size_t i) const { return samples_[i]; }
    const std::vector<Eigen::MatrixXcd>& samples() const { return samples_; }

    // Signed-frequency evaluation: |omega| must lie on the grid within tol.
    Eigen::MatrixXcd eval(double omega, double tol = 1e-9) const;

    // Signed-frequency evaluation with linear interpolation between grid
    // points; off-grid use is reported through diag. |omega| outside the grid
    // range is an error.
    Eigen::MatrixXcd eval_interp(double omega, Diagnostics* diag = nullptr,
                                 double tol = 1e-9) const;

private:
    FrequencyGrid grid_;
    Eigen::Index rows_ = 0, cols_ = 0;
    std::vector<Eigen::MatrixXcd> samples_;
};

// Largest |entry| over all samples; 0 for an empty function.
double max_abs(const MatrixFunction& f);

} // namespace qlti
