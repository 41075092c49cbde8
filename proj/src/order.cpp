#include "pef/order.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace pef {

PatchOrder zigzag_order(GridShape shape) {
    check_shape(shape);
    PatchOrder order{shape, std::vector<double>(shape.cells())};
    std::iota(order.positions.begin(), order.positions.end(), 0.0);
    return order;
}

namespace {

int sgn(int v) { return (v > 0) - (v < 0); }

// Emits cells of a rectangular region in generalized-Hilbert order.
// (x, y) is the current corner, (ax, ay) the major axis vector and
// (bx, by) the minor axis vector of the region.
class GilbertWalk {
public:
    GilbertWalk(GridShape shape, std::vector<double>& positions)
        : width_(shape.width), positions_(positions) {}

    void run(int w, int h) {
        if (w >= h)
            generate(0, 0, w, 0, 0, h);
        else
            generate(0, 0, 0, h, w, 0);
    }

private:
    void visit(int x, int y) { positions_[y * width_ + x] = rank_++; }

    void generate(int x, int y, int ax, int ay, int bx, int by) {
        const int w = std::abs(ax + ay);
        const int h = std::abs(bx + by);
        const int dax = sgn(ax), day = sgn(ay);
        const int dbx = sgn(bx), dby = sgn(by);

        if (h == 1) {
            for (int i = 0; i < w; ++i) {
                visit(x, y);
                x += dax;
                y += day;
            }
            return;
        }
        if (w == 1) {
            for (int i = 0; i < h; ++i) {
                visit(x, y);
                x += dbx;
                y += dby;
            }
            return;
        }

        int ax2 = ax / 2, ay2 = ay / 2;
        int bx2 = bx / 2, by2 = by / 2;
        const int w2 = std::abs(ax2 + ay2);
        const int h2 = std::abs(bx2 + by2);

        if (2 * w > 3 * h) {
            if ((w2 % 2) && (w > 2)) {
                // odd long axis: shift the split toward continuity
                ax2 += dax;
                ay2 += day;
            }
            generate(x, y, ax2, ay2, bx, by);
            generate(x + ax2, y + ay2, ax - ax2, ay - ay2, bx, by);
        } else {
            if ((h2 % 2) && (h > 2)) {
                bx2 += dbx;
                by2 += dby;
            }
            generate(x, y, bx2, by2, ax2, ay2);
            generate(x + bx2, y + by2, ax, ay, bx - bx2, by - by2);
            generate(x + (ax - dax) + (bx2 - dbx), y + (ay - day) + (by2 - dby),
                     -bx2, -by2, -(ax - ax2), -(ay - ay2));
        }
    }

    int width_;
    int rank_ = 0;
    std::vector<double>& positions_;
};

}  // namespace

PatchOrder gilbert_order(GridShape shape) {
    check_shape(shape);
    PatchOrder order{shape, std::vector<double>(shape.cells())};
    GilbertWalk walk(shape, order.positions);
    walk.run(shape.width, shape.height);
    return order;
}

namespace {

void hilbert_rotate(int n, int& x, int& y, int rx, int ry) {
    if (ry == 0) {
        if (rx == 1) {
            x = n - 1 - x;
            y = n - 1 - y;
        }
        std::swap(x, y);
    }
}

// Rank of (x, y) on the classic Hilbert curve over an n x n grid, n = 2^k.
long hilbert_rank(int n, int x, int y) {
    long d = 0;
    for (int s = n / 2; s > 0; s /= 2) {
        const int rx = (x & s) > 0 ? 1 : 0;
        const int ry = (y & s) > 0 ? 1 : 0;
        d += static_cast<long>(s) * s * ((3 * rx) ^ ry);
        hilbert_rotate(n, x, y, rx, ry);
    }
    return d;
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

PatchOrder hilbert_order(GridShape shape) {
    check_shape(shape);
    if (shape.width != shape.height || !is_pow2(shape.width))
        throw std::invalid_argument(
            "hilbert_order requires a 2^n x 2^n grid; use gilbert_order for "
            "arbitrary rectangles");
    PatchOrder order{shape, std::vector<double>(shape.cells())};
    for (int y = 0; y < shape.height; ++y)
        for (int x = 0; x < shape.width; ++x)
            order.positions[y * shape.width + x] =
                static_cast<double>(hilbert_rank(shape.width, x, y));
    return order;
}

std::vector<int> ranks_of(const PatchOrder& order) {
    std::vector<int> cells(order.positions.size());
    std::iota(cells.begin(), cells.end(), 0);
    std::stable_sort(cells.begin(), cells.end(), [&](int a, int b) {
        return order.positions[a] < order.positions[b];
    });
    return cells;
}

OrderReport validate_order(const PatchOrder& order) {
    check_shape(order.shape);
    const int n = order.shape.cells();
    if (static_cast<int>(order.positions.size()) != n)
        throw std::invalid_argument("position count does not match grid size");

    OrderReport report;

    std::vector<double> sorted = order.positions;
    std::sort(sorted.begin(), sorted.end());
    report.is_permutation = true;
    for (int i = 0; i < n; ++i) {
        if (sorted[i] != static_cast<double>(i)) {
            report.is_permutation = false;
            break;
        }
    }

    const int w = order.shape.width;
    const std::vector<int> visit = ranks_of(order);
    double max_step = 0.0;
    for (int i = 1; i < n; ++i) {
        const int a = visit[i - 1], b = visit[i];
        const int dr = std::abs(a / w - b / w);
        const int dc = std::abs(a % w - b % w);
        max_step = std::max(max_step, static_cast<double>(std::max(dr, dc)));
    }
    report.max_step = max_step;

    report.locality = report.is_permutation
                          ? locality_score(order)
                          : std::numeric_limits<double>::quiet_NaN();
    return report;
}

double locality_score(const PatchOrder& order) {
    check_shape(order.shape);
    const int w = order.shape.width;
    const int n = order.shape.cells();
    if (static_cast<int>(order.positions.size()) != n)
        throw std::invalid_argument("position count does not match grid size");

    std::vector<double> sorted = order.positions;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
        if (sorted[i] != static_cast<double>(i))
            throw std::invalid_argument(
                "locality_score requires an integer permutation order");

    const std::vector<int> visit = ranks_of(order);
    double total = 0.0;
    for (int i = 1; i < n; ++i) {
        const int a = visit[i - 1], b = visit[i];
        const int dr = std::abs(a / w - b / w);
        const int dc = std::abs(a % w - b % w);
        total += std::max(dr, dc);
    }
    if (n < 2) return 0.0;  // 1x1 grid: no steps
    return total / static_cast<double>(n - 1);
}

}  // namespace pef
