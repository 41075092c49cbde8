#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pef/embedding.hpp"

namespace pef {

/// Average (fractional) ranks of xs; tied values share the mean of their
/// rank range. Ranks are 1-based.
std::vector<double> average_ranks(std::span<const double> xs);

/// Spearman rank correlation with average-rank tie handling (Pearson on
/// ranks). Returns nullopt when a sequence is shorter than 2 or has zero
/// rank variance.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

/// Integer radial ring for an offset from a center cell: the Euclidean
/// distance rounded to the nearest integer.
int ring_level(int drow, int dcol);

/// Per-ring similarity statistics around one center. The center cell itself
/// is excluded; sum(counts) == N - 1.
struct RadialProfile {
    int center_row = 0;
    int center_col = 0;
    std::vector<int> levels;    // ascending ring indices
    std::vector<double> mu;     // mean similarity per ring
    std::vector<double> sigma;  // population std dev per ring
    std::vector<int> counts;
};

RadialProfile radial_profile(const SimilarityField& field, int row, int col);

/// Per-center contributions 1 - rho, where rho is the Spearman correlation
/// of ring index vs ring-mean similarity. Undefined rho counts as 0.
std::vector<double> per_center_monotonicity(const SimilarityField& field);

/// Mean of per_center_monotonicity over the grid. In [0, 2]; ideal 2.
double undirected_monotonicity(const SimilarityField& field);

/// Angular-bucket variant: cells are bucketed by atan2 direction from the
/// center, rings aggregated within each bucket, and bucket correlations
/// averaged. Buckets with fewer than two rings are skipped. With a single
/// bucket this reduces exactly to undirected_monotonicity.
double directed_monotonicity(const SimilarityField& field, int n_buckets);

/// Grid mean of the per-center average coefficient of variation sigma/mu
/// over rings; rings with |mu| < 1e-12 are skipped. Sign carries through.
double undirected_asymmetry(const SimilarityField& field,
                            std::vector<std::string>* warnings = nullptr);

std::vector<std::pair<int, double>> md_sweep(const SimilarityField& field,
                                             std::span<const int> bucket_counts);

struct PesiReport {
    double m_u = 0.0;
    double m_d = 0.0;
    double a_su = 0.0;
    int n_buckets = 0;
    std::vector<double> per_center_rho;  // h*w values of 1 - rho
    std::vector<std::string> warnings;
};

PesiReport pesi_report(const SimilarityField& field, int n_buckets);

}  // namespace pef
