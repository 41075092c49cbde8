#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "pef/io.hpp"
#include "pef/three_cell.hpp"

using namespace pef;
namespace fs = std::filesystem;

namespace {

ThreeCellSample make(int xr, int yr, int xg, int yg, int xb, int yb) {
    return {{xr, yr}, {xg, yg}, {xb, yb}, 0};
}

DatasetSpec spec_for(Task task, int count, std::uint64_t seed) {
    DatasetSpec s;
    s.count = count;
    s.seed = seed;
    s.task = task;
    return s;
}

}  // namespace

TEST_CASE("orientation determinant") {
    CHECK(orientation_class(make(0, 0, 1, 0, 0, 1)) == 0);  // ccw
    CHECK(orientation_class(make(0, 0, 0, 1, 1, 0)) == 1);  // cw
    CHECK_THROWS_AS(orientation_class(make(0, 0, 1, 1, 2, 2)), std::invalid_argument);
}

TEST_CASE("area comparison uses doubled integer areas") {
    // R=(0,2) G=(2,2) B=(4,1): 2*A_RG = 8, 2*A_RB = 12
    CHECK(area_class(make(0, 2, 2, 2, 4, 1)) == 1);
    CHECK(area_class(make(0, 2, 4, 1, 2, 2)) == 0);
    CHECK(area_class(make(0, 0, 1, 0, 2, 0)) == 2);  // both areas zero
}

TEST_CASE("vector sum boundary is strict on both coordinates") {
    CHECK(vecsum_class(make(5, 6, 4, 4, 5, 4)) == 1);  // sum (14,14)
    CHECK(vecsum_class(make(5, 6, 4, 4, 4, 4)) == 0);  // x_s = 13
    CHECK(vecsum_class(make(0, 0, 1, 1, 2, 2)) == 0);
}

TEST_CASE("distance comparison with a 3-4-5 tie") {
    CHECK(distance_class(make(0, 0, 3, 4, 5, 0)) == 2);  // both squared 25
    CHECK(distance_class(make(0, 0, 3, 4, 1, 0)) == 0);
    CHECK(distance_class(make(0, 0, 1, 0, 3, 4)) == 1);
}

TEST_CASE("orientation labels are antisymmetric under g/b swap") {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        ThreeCellSample s = make(rng.below(14), rng.below(14), rng.below(14),
                                 rng.below(14), rng.below(14), rng.below(14));
        if (orientation_det(s) == 0) continue;
        ThreeCellSample swapped = s;
        std::swap(swapped.g, swapped.b);
        CHECK(orientation_class(s) != orientation_class(swapped));
    }
}

TEST_CASE("distance labels are invariant under the grid's dihedral symmetries") {
    const auto transforms = [](Cell c, int k) -> Cell {
        const int m = 13;
        switch (k) {
            case 0: return c;
            case 1: return {m - c.x, c.y};
            case 2: return {c.x, m - c.y};
            case 3: return {m - c.x, m - c.y};
            case 4: return {c.y, c.x};
            case 5: return {m - c.y, c.x};
            case 6: return {c.y, m - c.x};
            default: return {m - c.y, m - c.x};
        }
    };
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const ThreeCellSample s = make(rng.below(14), rng.below(14), rng.below(14),
                                       rng.below(14), rng.below(14), rng.below(14));
        const int base = distance_class(s);
        for (int k = 1; k < 8; ++k) {
            const ThreeCellSample t{transforms(s.r, k), transforms(s.g, k),
                                    transforms(s.b, k), 0};
            CHECK(distance_class(t) == base);
        }
    }
}

TEST_CASE("six-class conditions match the component tasks") {
    const ThreeCellSample s = make(0, 0, 3, 4, 5, 0);
    CHECK_FALSE(satisfies_six_class(s, 0));
    CHECK_FALSE(satisfies_six_class(s, 1));
    CHECK(satisfies_six_class(s, 2) == (orientation_det(s) > 0));
    CHECK(satisfies_six_class(s, 5) == (vecsum_class(s) == 1));
    CHECK_THROWS_AS(satisfies_six_class(s, 6), std::invalid_argument);
}

TEST_CASE("label_sample omits orientation for collinear cells") {
    const auto collinear = label_sample(make(0, 0, 1, 1, 2, 2));
    CHECK_FALSE(collinear.contains(Task::Orientation));
    CHECK(collinear.contains(Task::Distance));

    const auto full = label_sample(make(0, 0, 1, 0, 0, 1));
    CHECK(full.size() == 4);
}

TEST_CASE("sampling is deterministic and respects rejection guarantees") {
    const DatasetSpec spec = spec_for(Task::Orientation, 0, 1234);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const SampledItem a = sample_cells(spec, i);
        const SampledItem b = sample_cells(spec, i);
        CHECK(a.sample.r == b.sample.r);
        CHECK(a.sample.g == b.sample.g);
        CHECK(a.sample.b == b.sample.b);
        CHECK(a.class_index == b.class_index);
        CHECK(orientation_det(a.sample) != 0);
        CHECK(orientation_class(a.sample) == a.class_index);
    }
}

TEST_CASE("sampled classes are near-uniform") {
    const DatasetSpec spec = spec_for(Task::Distance, 0, 77);
    int counts[3] = {0, 0, 0};
    const int n = 6000;
    for (std::uint64_t i = 0; i < n; ++i)
        ++counts[sample_cells(spec, i).class_index];
    for (int c : counts)
        CHECK(std::abs(c / static_cast<double>(n) - 1.0 / 3) < 0.03);
}

TEST_CASE("render produces three pure 16x16 blocks") {
    const DatasetSpec spec = spec_for(Task::Distance, 0, 0);
    const ThreeCellSample s = make(0, 0, 7, 3, 13, 13);
    const auto img = render(s, spec);

    int nonblack = 0;
    for (size_t i = 0; i < img.size(); i += 3)
        if (img[i] || img[i + 1] || img[i + 2]) ++nonblack;
    CHECK(nonblack == 3 * 256);

    // p_r = (0,0): top-left block is pure red
    for (int py = 0; py < 16; ++py) {
        for (int px = 0; px < 16; ++px) {
            const size_t i = (static_cast<size_t>(py) * 224 + px) * 3;
            CHECK(img[i] == 255);
            CHECK(img[i + 1] == 0);
            CHECK(img[i + 2] == 0);
        }
    }
    // p_b = (13,13): bottom-right block is pure blue
    const size_t last = (static_cast<size_t>(223) * 224 + 223) * 3;
    CHECK(img[last + 2] == 255);
}

TEST_CASE("adjacent patches never share color channels") {
    const DatasetSpec spec = spec_for(Task::Area, 0, 21);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto img = render(sample_cells(spec, i).sample, spec);
        // per-patch dominant channel, or -1 for black
        auto patch_channel = [&](int gx, int gy) {
            const size_t base = (static_cast<size_t>(gy) * 16 * 224 + gx * 16) * 3;
            for (int ch = 0; ch < 3; ++ch)
                if (img[base + ch]) return ch;
            return -1;
        };
        for (int gy = 0; gy < 14; ++gy) {
            for (int gx = 0; gx < 14; ++gx) {
                const int c = patch_channel(gx, gy);
                if (c < 0) continue;
                if (gx + 1 < 14) CHECK(patch_channel(gx + 1, gy) != c);
                if (gy + 1 < 14) CHECK(patch_channel(gx, gy + 1) != c);
            }
        }
    }
}

TEST_CASE("gen_dataset writes a relabelable manifest") {
    const fs::path dir = fs::temp_directory_path() / "pef_three_cell_test";
    fs::remove_all(dir);
    const DatasetSpec spec = spec_for(Task::Area, 25, 99);
    const auto rows = gen_dataset(spec, dir);
    REQUIRE(rows.size() == 25);

    const auto reread = read_manifest(dir / "manifest.csv");
    REQUIRE(reread.size() == 25);
    for (const auto& row : reread) {
        CHECK(row.task == Task::Area);
        CHECK(label_for(Task::Area, row.sample).class_index == row.class_index);
    }
    for (int i = 0; i < 25; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "%08d.ppm", i);
        CHECK(fs::exists(dir / name));
    }

    // regeneration is byte-identical
    const std::string before = read_file(dir / "00000003.ppm");
    const std::string manifest_before = read_file(dir / "manifest.csv");
    gen_dataset(spec, dir);
    CHECK(read_file(dir / "00000003.ppm") == before);
    CHECK(read_file(dir / "manifest.csv") == manifest_before);
    fs::remove_all(dir);
}
