#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "pef/metrics.hpp"
#include "pef/rng.hpp"

using namespace pef;

namespace {

// independent oracle: counting ranks (no sorting) + direct Pearson
std::vector<double> rank_counting(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        int less = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        ranks[i] = less + (equal + 1) / 2.0;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    const double ma = sa / n, mb = sb / n;
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double spearman_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(rank_counting(a), rank_counting(b));
}

SimilarityField synth_field(GridShape shape,
                            const std::function<double(int, int, int, int)>& f) {
    const int w = shape.width;
    const int n = shape.cells();
    SimilarityField field{shape, std::vector<double>(static_cast<size_t>(n) * n)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            field.values[static_cast<size_t>(a) * n + b] =
                a == b ? 1.0 : f(a / w, a % w, b / w, b % w);
    return field;
}

SimilarityField decreasing_field(GridShape shape) {
    return synth_field(shape, [](int r1, int c1, int r2, int c2) {
        const int d2 = (r1 - r2) * (r1 - r2) + (c1 - c2) * (c1 - c2);
        return 1.0 / (1.0 + d2);
    });
}

}  // namespace

TEST_CASE("spearman on ordered and reversed sequences") {
    const std::vector<double> a{1, 2, 3}, up{10, 20, 30}, down{3, 2, 1};
    CHECK(spearman(a, up).value() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spearman(a, down).value() == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("spearman with ties equals Pearson of average ranks") {
    const std::vector<double> xs{1, 2, 2, 4}, ys{1, 3, 3, 2};
    CHECK(spearman(xs, ys).value() ==
          doctest::Approx(spearman_oracle(xs, ys)).epsilon(1e-12));
}

TEST_CASE("spearman undefined cases") {
    CHECK_FALSE(spearman(std::vector<double>{1.0}, std::vector<double>{2.0}).has_value());
    CHECK_FALSE(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3})
                    .has_value());
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1}),
                    std::invalid_argument);
}

TEST_CASE("spearman matches the counting oracle on random vectors") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const size_t len = 2 + rng.below(49);
        std::vector<double> xs(len), ys(len);
        for (size_t i = 0; i < len; ++i) {
            // small integer range forces frequent ties
            xs[i] = static_cast<double>(rng.below(8));
            ys[i] = static_cast<double>(rng.below(8));
        }
        const auto got = spearman(xs, ys);
        const bool defined =
            rank_counting(xs) != std::vector<double>(len, rank_counting(xs)[0]) &&
            rank_counting(ys) != std::vector<double>(len, rank_counting(ys)[0]);
        if (!defined) {
            CHECK_FALSE(got.has_value());
            continue;
        }
        REQUIRE(got.has_value());
        CHECK(*got == doctest::Approx(spearman_oracle(xs, ys)).epsilon(1e-12));
    }
}

TEST_CASE("radial profile ring structure") {
    const SimilarityField field = decreasing_field({14, 14});
    const RadialProfile center = radial_profile(field, 7, 7);
    // ring 1 merges the 4-neighbors with the diagonal neighbors
    CHECK(center.levels[0] == 1);
    CHECK(center.counts[0] == 8);

    const RadialProfile corner = radial_profile(field, 0, 0);
    CHECK(corner.levels[0] == 1);
    CHECK(corner.counts[0] == 3);

    int total = 0;
    for (int c : corner.counts) total += c;
    CHECK(total == 14 * 14 - 1);

    const SimilarityField constant =
        synth_field({6, 6}, [](int, int, int, int) { return 0.5; });
    const RadialProfile flat = radial_profile(constant, 2, 2);
    for (double s : flat.sigma) CHECK(s == 0.0);

    CHECK_THROWS_AS(radial_profile(field, 14, 0), std::invalid_argument);
}

TEST_CASE("undirected monotonicity ideals") {
    CHECK(undirected_monotonicity(decreasing_field({8, 8})) ==
          doctest::Approx(2.0).epsilon(1e-12));

    const SimilarityField constant =
        synth_field({6, 6}, [](int, int, int, int) { return 0.25; });
    CHECK(undirected_monotonicity(constant) == 1.0);
}

TEST_CASE("directed monotonicity") {
    const SimilarityField field = decreasing_field({8, 8});
    CHECK(directed_monotonicity(field, 8) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(directed_monotonicity(field, 0), std::invalid_argument);

    // single bucket collapses to the undirected construction exactly
    const SimilarityField bumpy = synth_field({7, 5}, [](int r1, int c1, int r2, int c2) {
        const int d2 = (r1 - r2) * (r1 - r2) + (c1 - c2) * (c1 - c2);
        return std::cos(0.7 * d2) / (1.0 + 0.1 * d2);
    });
    CHECK(directed_monotonicity(bumpy, 1) == undirected_monotonicity(bumpy));
}

TEST_CASE("undirected asymmetry") {
    // ring-constant field: zero spread on every ring
    const SimilarityField symmetric =
        synth_field({9, 9}, [](int r1, int c1, int r2, int c2) {
            return 1.0 / (1.0 + ring_level(r1 - r2, c1 - c2));
        });
    CHECK(undirected_asymmetry(symmetric) == doctest::Approx(0.0).epsilon(1e-12));

    // predominantly negative means give a negative asymmetry
    Rng rng(3);
    std::vector<double> noise(81 * 81);
    for (double& v : noise) v = rng.uniform01();
    const SimilarityField negative =
        synth_field({9, 9}, [&](int r1, int c1, int r2, int c2) {
            const size_t i = static_cast<size_t>(r1 * 9 + c1) * 81 + (r2 * 9 + c2);
            const size_t j = static_cast<size_t>(r2 * 9 + c2) * 81 + (r1 * 9 + c1);
            return -0.5 + 0.1 * noise[std::min(i, j)];
        });
    CHECK(undirected_asymmetry(negative) < 0.0);
}

TEST_CASE("md_sweep") {
    const SimilarityField field = decreasing_field({6, 6});
    CHECK(md_sweep(field, std::vector<int>{}).empty());

    const auto single = md_sweep(field, std::vector<int>{1});
    REQUIRE(single.size() == 1);
    CHECK(single[0].first == 1);
    CHECK(single[0].second == undirected_monotonicity(field));

    const auto two = md_sweep(field, std::vector<int>{4, 60});
    REQUIRE(two.size() == 2);
    CHECK(two[0].first == 4);
    CHECK(two[1].first == 60);
}

TEST_CASE("metrics are invariant under a global rotation of embeddings") {
    const FrequencySet f = make_frequencies(16);
    PatchOrder order = gilbert_order({5, 5});
    const EmbeddingField emb = embed(order, f);

    // random orthogonal matrix via Gram-Schmidt
    Rng rng(99);
    const int d = 16;
    std::vector<std::vector<double>> q(d, std::vector<double>(d));
    for (auto& row : q)
        for (double& v : row) v = rng.normal();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            double dot = 0;
            for (int k = 0; k < d; ++k) dot += q[i][k] * q[j][k];
            for (int k = 0; k < d; ++k) q[i][k] -= dot * q[j][k];
        }
        double norm = 0;
        for (int k = 0; k < d; ++k) norm += q[i][k] * q[i][k];
        norm = std::sqrt(norm);
        for (int k = 0; k < d; ++k) q[i][k] /= norm;
    }

    EmbeddingField rotated = emb;
    for (int c = 0; c < emb.shape.cells(); ++c) {
        const double* src = emb.row(c);
        double* dst = rotated.data.data() + static_cast<size_t>(c) * d;
        for (int i = 0; i < d; ++i) {
            double acc = 0;
            for (int k = 0; k < d; ++k) acc += q[i][k] * src[k];
            dst[i] = acc;
        }
    }

    const SimilarityField s1 = cosine_field(emb);
    const SimilarityField s2 = cosine_field(rotated);
    CHECK(undirected_monotonicity(s1) ==
          doctest::Approx(undirected_monotonicity(s2)).epsilon(1e-9));
    CHECK(directed_monotonicity(s1, 8) ==
          doctest::Approx(directed_monotonicity(s2, 8)).epsilon(1e-9));
    CHECK(undirected_asymmetry(s1) ==
          doctest::Approx(undirected_asymmetry(s2)).epsilon(1e-9));
}

TEST_CASE("reports are deterministic") {
    const SimilarityField field =
        cosine_field(embed(gilbert_order({6, 6}), make_frequencies(32)));
    const PesiReport a = pesi_report(field, 12);
    const PesiReport b = pesi_report(field, 12);
    CHECK(a.m_u == b.m_u);
    CHECK(a.m_d == b.m_d);
    CHECK(a.a_su == b.a_su);
    CHECK(a.per_center_rho == b.per_center_rho);

    CHECK(a.m_u >= 0.0);
    CHECK(a.m_u <= 2.0);
    CHECK(a.m_d >= 0.0);
    CHECK(a.m_d <= 2.0);
    CHECK(std::isfinite(a.a_su));
}
