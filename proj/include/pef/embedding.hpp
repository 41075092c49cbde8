#pragma once

#include <vector>

#include "pef/order.hpp"

namespace pef {

/// Sin/cos frequencies omega_k = base^(-2k / d_model), k = 0 .. d_model/2 - 1.
struct FrequencySet {
    int d_model = 0;
    double base = 0.0;
    std::vector<double> omega;
};

FrequencySet make_frequencies(int d_model, double base = 10000.0);

/// Per-cell offset, every value strictly inside (-1, 1).
struct ContextBias {
    GridShape shape;
    std::vector<double> values;
};

void check_bias(const ContextBias& bias);

/// Pointwise sum of a static order and a context bias. Output positions may
/// be fractional and may swap the ranks of adjacent cells.
PatchOrder apply_bias(const PatchOrder& static_order, const ContextBias& bias);

/// Multiplies all positions by a constant.
PatchOrder scale_positions(const PatchOrder& order, double scale);

/// cells x d_model embedding matrix; per cell the layout is
/// [sin(x*w_0) .. sin(x*w_{d/2-1}) | cos(x*w_0) .. cos(x*w_{d/2-1})].
struct EmbeddingField {
    GridShape shape;
    int d_model = 0;
    std::vector<double> data;

    const double* row(int cell) const { return data.data() + static_cast<size_t>(cell) * d_model; }
};

EmbeddingField embed(const PatchOrder& order, const FrequencySet& freqs);

/// N x N cosine similarity matrix over cell embeddings. Symmetric, unit
/// diagonal, entries clamped to [-1, 1].
struct SimilarityField {
    GridShape shape;
    std::vector<double> values;

    double at(int a, int b) const {
        return values[static_cast<size_t>(a) * shape.cells() + b];
    }
};

SimilarityField cosine_field(const EmbeddingField& emb);

}  // namespace pef
