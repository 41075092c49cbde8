#pragma once

#include <stdexcept>
#include <vector>

namespace pef {

struct GridShape {
    int width = 0;   // cells per row
    int height = 0;  // cells per column

    int cells() const { return width * height; }
    bool operator==(const GridShape&) const = default;
};

inline void check_shape(const GridShape& s) {
    if (s.width < 1 || s.height < 1)
        throw std::invalid_argument("grid dimensions must be >= 1");
}

/// Scalar 1D position per cell, indexed row-major (row * width + col).
/// Integer-valued orders are permutations of {0..N-1}; adding a context
/// bias yields fractional positions.
struct PatchOrder {
    GridShape shape;
    std::vector<double> positions;
};

struct OrderReport {
    bool is_permutation = false;
    double max_step = 0.0;  // largest Chebyshev step between consecutive ranks
    double locality = 0.0;  // NaN when not a permutation
};

/// Row-major raster order.
PatchOrder zigzag_order(GridShape shape);

/// Generalized Hilbert curve for arbitrary w x h rectangles. Consecutive
/// cells in the visit order are at Chebyshev distance 1 (4-adjacent except
/// for occasional diagonal steps introduced by odd-dimension splits).
PatchOrder gilbert_order(GridShape shape);

/// Classic Hilbert curve; requires a 2^n x 2^n grid.
PatchOrder hilbert_order(GridShape shape);

/// Cell indices sorted by position (ties broken by cell index).
std::vector<int> ranks_of(const PatchOrder& order);

OrderReport validate_order(const PatchOrder& order);

/// Mean Chebyshev step length between consecutively ranked cells -- the mean
/// companion of OrderReport::max_step. Lower is better; a curve whose every
/// step lands on a neighboring cell scores exactly 1. Requires an integer
/// permutation order.
double locality_score(const PatchOrder& order);

}  // namespace pef
