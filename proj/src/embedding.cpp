#include "pef/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pef {

FrequencySet make_frequencies(int d_model, double base) {
    if (d_model < 2 || d_model % 2 != 0)
        throw std::invalid_argument("d_model must be a positive even integer");
    if (!(base > 1.0))
        throw std::invalid_argument("base must be > 1");
    FrequencySet f{d_model, base, {}};
    const int half = d_model / 2;
    f.omega.resize(half);
    for (int k = 0; k < half; ++k)
        f.omega[k] = std::pow(base, -2.0 * k / d_model);
    return f;
}

void check_bias(const ContextBias& bias) {
    check_shape(bias.shape);
    if (static_cast<int>(bias.values.size()) != bias.shape.cells())
        throw std::invalid_argument("bias length does not match grid size");
    for (double v : bias.values)
        if (!(std::abs(v) < 1.0))
            throw std::invalid_argument("bias values must lie strictly in (-1, 1)");
}

PatchOrder apply_bias(const PatchOrder& static_order, const ContextBias& bias) {
    check_bias(bias);
    if (!(static_order.shape == bias.shape))
        throw std::invalid_argument("order and bias shapes differ");
    PatchOrder out = static_order;
    for (size_t i = 0; i < out.positions.size(); ++i)
        out.positions[i] += bias.values[i];
    return out;
}

PatchOrder scale_positions(const PatchOrder& order, double scale) {
    PatchOrder out = order;
    for (double& p : out.positions) p *= scale;
    return out;
}

EmbeddingField embed(const PatchOrder& order, const FrequencySet& freqs) {
    check_shape(order.shape);
    const int n = order.shape.cells();
    if (static_cast<int>(order.positions.size()) != n)
        throw std::invalid_argument("position count does not match grid size");
    const int half = freqs.d_model / 2;

    EmbeddingField field{order.shape, freqs.d_model, {}};
    field.data.resize(static_cast<size_t>(n) * freqs.d_model);
    for (int c = 0; c < n; ++c) {
        const double x = order.positions[c];
        double* row = field.data.data() + static_cast<size_t>(c) * freqs.d_model;
        for (int k = 0; k < half; ++k) {
            const double angle = x * freqs.omega[k];
            row[k] = std::sin(angle);
            row[half + k] = std::cos(angle);
        }
    }
    return field;
}

SimilarityField cosine_field(const EmbeddingField& emb) {
    const int n = emb.shape.cells();
    const int d = emb.d_model;

    std::vector<double> norms(n);
    for (int c = 0; c < n; ++c) {
        const double* row = emb.row(c);
        double sq = 0.0;
        for (int k = 0; k < d; ++k) sq += row[k] * row[k];
        if (sq == 0.0)
            throw std::invalid_argument("zero-norm embedding at cell " + std::to_string(c));
        norms[c] = std::sqrt(sq);
    }

    SimilarityField field{emb.shape, std::vector<double>(static_cast<size_t>(n) * n)};
    for (int a = 0; a < n; ++a) {
        field.values[static_cast<size_t>(a) * n + a] = 1.0;
        const double* ra = emb.row(a);
        for (int b = a + 1; b < n; ++b) {
            const double* rb = emb.row(b);
            double dot = 0.0;
            for (int k = 0; k < d; ++k) dot += ra[k] * rb[k];
            const double sim = std::clamp(dot / (norms[a] * norms[b]), -1.0, 1.0);
            field.values[static_cast<size_t>(a) * n + b] = sim;
            field.values[static_cast<size_t>(b) * n + a] = sim;
        }
    }
    return field;
}

}  // namespace pef
