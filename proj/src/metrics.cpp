#include "pef/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace pef {

std::vector<double> average_ranks(std::span<const double> xs) {
    const size_t n = xs.size();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return xs[a] < xs[b]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("spearman requires equal-length sequences");
    const size_t n = xs.size();
    if (n < 2) return std::nullopt;

    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

int ring_level(int drow, int dcol) {
    return static_cast<int>(std::lround(
        std::sqrt(static_cast<double>(drow * drow + dcol * dcol))));
}

namespace {

// ring index and similarity for every non-center cell, in cell order
struct CenterView {
    std::vector<int> rings;
    std::vector<double> sims;
    std::vector<double> angles;  // atan2(dcol, drow), in (-pi, pi]
};

CenterView center_view(const SimilarityField& field, int row, int col) {
    const int w = field.shape.width;
    const int h = field.shape.height;
    CenterView v;
    v.rings.reserve(static_cast<size_t>(w) * h - 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (r == row && c == col) continue;
            v.rings.push_back(ring_level(r - row, c - col));
            v.sims.push_back(field.at(row * w + col, r * w + c));
            v.angles.push_back(std::atan2(static_cast<double>(c - col),
                                          static_cast<double>(r - row)));
        }
    }
    return v;
}

// mean similarity per ring over a subset of cells, rings ascending
void ring_means(const std::vector<int>& rings, const std::vector<double>& sims,
                const std::vector<size_t>& subset, std::vector<double>& levels,
                std::vector<double>& means) {
    std::map<int, std::pair<double, int>> acc;
    for (size_t i : subset) {
        auto& slot = acc[rings[i]];
        slot.first += sims[i];
        slot.second += 1;
    }
    levels.clear();
    means.clear();
    for (const auto& [lvl, slot] : acc) {
        levels.push_back(static_cast<double>(lvl));
        means.push_back(slot.first / slot.second);
    }
}

double center_monotonicity(const CenterView& v) {
    std::vector<size_t> all(v.rings.size());
    std::iota(all.begin(), all.end(), size_t{0});
    std::vector<double> levels, means;
    ring_means(v.rings, v.sims, all, levels, means);
    const double rho = spearman(levels, means).value_or(0.0);
    return 1.0 - rho;
}

}  // namespace

RadialProfile radial_profile(const SimilarityField& field, int row, int col) {
    check_shape(field.shape);
    if (row < 0 || row >= field.shape.height || col < 0 || col >= field.shape.width)
        throw std::invalid_argument("center outside grid");

    const CenterView v = center_view(field, row, col);
    std::map<int, std::vector<double>> groups;
    for (size_t i = 0; i < v.rings.size(); ++i)
        groups[v.rings[i]].push_back(v.sims[i]);

    RadialProfile p;
    p.center_row = row;
    p.center_col = col;
    for (const auto& [lvl, vals] : groups) {
        double mean = 0.0;
        for (double s : vals) mean += s;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double s : vals) var += (s - mean) * (s - mean);
        var /= static_cast<double>(vals.size());
        p.levels.push_back(lvl);
        p.mu.push_back(mean);
        p.sigma.push_back(std::sqrt(var));
        p.counts.push_back(static_cast<int>(vals.size()));
    }
    return p;
}

std::vector<double> per_center_monotonicity(const SimilarityField& field) {
    check_shape(field.shape);
    const int w = field.shape.width;
    const int h = field.shape.height;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(w) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.push_back(center_monotonicity(center_view(field, r, c)));
    return out;
}

double undirected_monotonicity(const SimilarityField& field) {
    const std::vector<double> per = per_center_monotonicity(field);
    double total = 0.0;
    for (double v : per) total += v;
    return total / static_cast<double>(per.size());
}

double directed_monotonicity(const SimilarityField& field, int n_buckets) {
    check_shape(field.shape);
    if (n_buckets < 1)
        throw std::invalid_argument("n_buckets must be >= 1");
    const int w = field.shape.width;
    const int h = field.shape.height;
    const double delta = 2.0 * std::acos(-1.0) / n_buckets;

    double total = 0.0;
    std::vector<std::vector<size_t>> buckets(n_buckets);
    std::vector<double> levels, means;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const CenterView v = center_view(field, r, c);
            for (auto& b : buckets) b.clear();
            for (size_t i = 0; i < v.angles.size(); ++i) {
                int k = static_cast<int>(std::floor(v.angles[i] / delta)) % n_buckets;
                if (k < 0) k += n_buckets;
                buckets[k].push_back(i);
            }
            double rho_sum = 0.0;
            int rho_count = 0;
            for (const auto& b : buckets) {
                if (b.size() < 2) continue;
                ring_means(v.rings, v.sims, b, levels, means);
                if (levels.size() < 2) continue;  // single ring, nothing to rank
                rho_sum += spearman(levels, means).value_or(0.0);
                ++rho_count;
            }
            const double rho_bar = rho_count > 0 ? rho_sum / rho_count : 0.0;
            total += 1.0 - rho_bar;
        }
    }
    return total / static_cast<double>(w * h);
}

double undirected_asymmetry(const SimilarityField& field,
                            std::vector<std::string>* warnings) {
    check_shape(field.shape);
    const int w = field.shape.width;
    const int h = field.shape.height;
    constexpr double kMuSkip = 1e-12;

    double total = 0.0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const RadialProfile p = radial_profile(field, r, c);
            double cv_sum = 0.0;
            int cv_count = 0;
            for (size_t i = 0; i < p.levels.size(); ++i) {
                if (std::abs(p.mu[i]) < kMuSkip) continue;
                cv_sum += p.sigma[i] / p.mu[i];
                ++cv_count;
            }
            if (cv_count == 0) {
                if (warnings)
                    warnings->push_back("center (" + std::to_string(r) + "," +
                                        std::to_string(c) +
                                        "): all rings skipped, contributes 0");
                continue;
            }
            total += cv_sum / cv_count;
        }
    }
    return total / static_cast<double>(w * h);
}

std::vector<std::pair<int, double>> md_sweep(const SimilarityField& field,
                                             std::span<const int> bucket_counts) {
    std::vector<std::pair<int, double>> out;
    out.reserve(bucket_counts.size());
    for (int n : bucket_counts)
        out.emplace_back(n, directed_monotonicity(field, n));
    return out;
}

PesiReport pesi_report(const SimilarityField& field, int n_buckets) {
    PesiReport report;
    report.n_buckets = n_buckets;
    report.per_center_rho = per_center_monotonicity(field);
    double total = 0.0;
    for (double v : report.per_center_rho) total += v;
    report.m_u = total / static_cast<double>(report.per_center_rho.size());
    report.m_d = directed_monotonicity(field, n_buckets);
    report.a_su = undirected_asymmetry(field, &report.warnings);
    return report;
}

}  // namespace pef
