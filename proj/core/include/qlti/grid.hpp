#pragma once

#include <cstddef>
#include <vector>

namespace qlti {

enum class GridSpacing { Linear, Log };

// Frequency grid for sampled transfer matrices and spectra. Frequencies are
// non-negative and strictly increasing; negative-frequency data is always
// recovered from positive frequencies by conjugation symmetry and never
// stored.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> frequencies);

    static FrequencyGrid linspace(double start, double stop, std::size_t count);
    static FrequencyGrid logspace(double start, double stop, std::size_t count);
    static FrequencyGrid make(double start, double stop, std::size_t count,
                              GridSpacing spacing);

    std::size_t size() const { return freqs_.size(); }
    bool empty() const { return freqs_.empty(); }
    double operator[](std::size_t i) const { return freqs_[i]; }
    const std::vector<double>& values() const { return freqs_; }

    // Index of the grid point closest to omega.
    std::size_t nearest(double omega) const;

    // Index of omega if it lies on the grid within tol, else npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(double omega, double tol) const;

    bool operator==(const FrequencyGrid& other) const = default;

private:
    std::vector<double> freqs_;
};

} // namespace qlti
