#pragma once

#include <cstdint>
#include <vector>

#include "pef/embedding.hpp"
#include "pef/metrics.hpp"

namespace pef {

struct ObjectiveWeights {
    double w_mu = 1.0;
    double w_md = 0.0;
    double w_asu = 0.0;
    int n_buckets = 60;
};

void check_weights(const ObjectiveWeights& w);

/// J = w_mu * M_U + w_md * M_D(n_buckets) - w_asu * |A_SU|. Terms with a
/// zero weight are not evaluated.
double objective(const SimilarityField& field, const ObjectiveWeights& weights);

enum class Schedule { Anneal, Coordinate };

struct OptConfig {
    int iterations = 1000;
    std::uint64_t seed = 0;
    double proposal_scale = 0.25;
    Schedule schedule = Schedule::Anneal;
    double temp_initial = 0.02;
    double temp_final = 1e-5;
};

struct TracePoint {
    int iteration;
    double j_current;
    double j_best;
};

struct OptResult {
    ContextBias bias;  // best-seen bias, every value strictly in (-1, 1)
    std::vector<TracePoint> trace;
    double j_initial = 0.0;
    double j_best = 0.0;
};

/// Derivative-free search over the context bias. Internally optimizes
/// unconstrained parameters and emits tanh of them, so the (-1, 1) bound
/// holds for every proposal. The zero bias is the initial incumbent, so
/// j_best >= j_initial and the best-J trace is non-decreasing.
OptResult optimize_bias(const PatchOrder& static_order, const FrequencySet& freqs,
                        const ObjectiveWeights& weights, const OptConfig& cfg);

}  // namespace pef
