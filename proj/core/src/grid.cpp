#include "qlti/grid.hpp"

#include "qlti/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlti {

FrequencyGrid::FrequencyGrid(std::vector<double> frequencies)
    : freqs_(std::move(frequencies)) {
    for (double w : freqs_) {
        if (!std::isfinite(w)) {
            throw SchemaError("frequency grid contains a non-finite value");
        }
        if (w < 0.0) {
            throw SchemaError("frequency grid entries must be non-negative");
        }
    }
    if (!std::is_sorted(freqs_.begin(), freqs_.end(),
                        [](double a, double b) { return a <= b; })) {
        throw SchemaError("frequency grid must be strictly increasing");
    }
}

FrequencyGrid FrequencyGrid::linspace(double start, double stop,
                                      std::size_t count) {
    if (count == 0) throw SchemaError("frequency grid needs at least one point");
    std::vector<double> f(count);
    if (count == 1) {
        f[0] = start;
    } else {
        const double step = (stop - start) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) {
            f[i] = start + step * static_cast<double>(i);
        }
        f.back() = stop;
    }
    return FrequencyGrid(std::move(f));
}

FrequencyGrid FrequencyGrid::logspace(double start, double stop,
                                      std::size_t count) {
    if (start <= 0.0 || stop <= 0.0) {
        throw SchemaError("log-spaced grid requires positive endpoints");
    }
    if (count == 0) throw SchemaError("frequency grid needs at least one point");
    std::vector<double> f(count);
    if (count == 1) {
        f[0] = start;
    } else {
        const double la = std::log(start);
        const double lb = std::log(stop);
        const double step = (lb - la) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) {
            f[i] = std::exp(la + step * static_cast<double>(i));
        }
        f.back() = stop;
    }
    return FrequencyGrid(std::move(f));
}

FrequencyGrid FrequencyGrid::make(double start, double stop, std::size_t count,
                                  GridSpacing spacing) {
    return spacing == GridSpacing::Log ? logspace(start, stop, count)
                                       : linspace(start, stop, count);
}

std::size_t FrequencyGrid::nearest(double omega) const {
    if (freqs_.empty()) throw SchemaError("nearest() on an empty grid");
    auto it = std::lower_bound(freqs_.begin(), freqs_.end(), omega);
    if (it == freqs_.begin()) return 0;
    if (it == freqs_.end()) return freqs_.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - freqs_.begin());
    return (omega - freqs_[hi - 1] <= freqs_[hi] - omega) ? hi - 1 : hi;
}

std::size_t FrequencyGrid::find(double omega, double tol) const {
    if (freqs_.empty()) return npos;
    const std::size_t i = nearest(omega);
    return std::abs(freqs_[i] - omega) <= tol ? i : npos;
}

} // namespace qlti
