#include "pef/optimize.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pef/rng.hpp"

namespace pef {

void check_weights(const ObjectiveWeights& w) {
    if (w.w_mu < 0 || w.w_md < 0 || w.w_asu < 0)
        throw std::invalid_argument("objective weights must be >= 0");
    if (w.w_mu == 0 && w.w_md == 0 && w.w_asu == 0)
        throw std::invalid_argument("at least one objective weight must be positive");
    if (w.n_buckets < 1)
        throw std::invalid_argument("n_buckets must be >= 1");
}

double objective(const SimilarityField& field, const ObjectiveWeights& weights) {
    check_weights(weights);
    double j = 0.0;
    if (weights.w_mu > 0) j += weights.w_mu * undirected_monotonicity(field);
    if (weights.w_md > 0)
        j += weights.w_md * directed_monotonicity(field, weights.n_buckets);
    if (weights.w_asu > 0)
        j -= weights.w_asu * std::abs(undirected_asymmetry(field));
    return j;
}

namespace {

ContextBias squash(const std::vector<double>& u, GridShape shape) {
    ContextBias bias{shape, std::vector<double>(u.size())};
    for (size_t i = 0; i < u.size(); ++i) bias.values[i] = std::tanh(u[i]);
    return bias;
}

}  // namespace

OptResult optimize_bias(const PatchOrder& static_order, const FrequencySet& freqs,
                        const ObjectiveWeights& weights, const OptConfig& cfg) {
    check_shape(static_order.shape);
    check_weights(weights);
    if (cfg.iterations < 0)
        throw std::invalid_argument("iterations must be >= 0");
    if (!(cfg.proposal_scale > 0.0 && cfg.proposal_scale <= 1.0))
        throw std::invalid_argument("proposal_scale must be in (0, 1]");

    const int n = static_order.shape.cells();
    Rng rng(cfg.seed);

    const auto eval = [&](const std::vector<double>& u) {
        const ContextBias bias = squash(u, static_order.shape);
        check_bias(bias);
        return objective(cosine_field(embed(apply_bias(static_order, bias), freqs)),
                         weights);
    };

    std::vector<double> u(n, 0.0);
    std::vector<double> best_u = u;
    double j_current = eval(u);
    const double j_initial = j_current;
    double j_best = j_current;

    OptResult result;
    result.trace.reserve(cfg.iterations);

    for (int it = 0; it < cfg.iterations; ++it) {
        const int coord = cfg.schedule == Schedule::Coordinate
                              ? it % n
                              : static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
        std::vector<double> proposal = u;
        proposal[coord] += cfg.proposal_scale * rng.normal();
        const double j_prop = eval(proposal);

        bool accept = j_prop > j_current;
        if (!accept && cfg.schedule == Schedule::Anneal) {
            const double frac = cfg.iterations > 1
                                    ? static_cast<double>(it) / (cfg.iterations - 1)
                                    : 0.0;
            const double temp =
                cfg.temp_initial * std::pow(cfg.temp_final / cfg.temp_initial, frac);
            accept = rng.uniform01() < std::exp((j_prop - j_current) / temp);
        }
        if (accept) {
            u = std::move(proposal);
            j_current = j_prop;
            if (j_current > j_best) {
                j_best = j_current;
                best_u = u;
            }
        }
        result.trace.push_back({it, j_current, j_best});
    }

    result.bias = squash(best_u, static_order.shape);
    check_bias(result.bias);
    result.j_initial = j_initial;
    result.j_best = j_best;
    return result;
}

}  // namespace pef
