#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pef/rng.hpp"

namespace pef {

enum class Task { Distance, Orientation, Area, VectorSum, SixClass };

std::string task_name(Task t);
Task parse_task(const std::string& name);
int class_count(Task t);

/// Grid cell; x indexes columns, y indexes rows.
struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

/// Three pairwise-distinct cells on the benchmark grid.
struct ThreeCellSample {
    Cell r, g, b;
    std::uint64_t seed_tag = 0;
};

struct TaskLabel {
    Task task;
    int class_index;
};

// Class conventions:
//   Distance:    0 d_rg > d_rb, 1 d_rb > d_rg, 2 equal
//   Orientation: 0 counterclockwise (det > 0), 1 clockwise (det < 0)
//   Area:        0 A_RG > A_RB, 1 A_RB > A_RG, 2 equal
//   VectorSum:   0 sum inside grid, 1 sum outside (x_s > 13 and y_s > 13)
//   SixClass:    0 d_rg>d_rb, 1 d_rb>d_rg, 2 det>0, 3 A_RG>A_RB,
//                4 A_RB>A_RG, 5 sum outside
// All arithmetic is exact integer; squared distances and doubled areas.

long long orientation_det(const ThreeCellSample& s);

int distance_class(const ThreeCellSample& s);
int orientation_class(const ThreeCellSample& s);  // throws when collinear
int area_class(const ThreeCellSample& s);
int vecsum_class(const ThreeCellSample& s, int grid = 14);

/// Does the sample satisfy six-class condition k? Conditions overlap; the
/// generating mode decides the stored label.
bool satisfies_six_class(const ThreeCellSample& s, int k, int grid = 14);

TaskLabel label_for(Task task, const ThreeCellSample& s, int grid = 14);

/// Labels for the four geometric tasks; Orientation is omitted when the
/// cells are collinear.
std::map<Task, TaskLabel> label_sample(const ThreeCellSample& s, int grid = 14);

struct DatasetSpec {
    int grid = 14;        // cells per side
    int image_side = 224;
    int patch = 16;
    int count = 0;
    std::uint64_t seed = 0;
    Task task = Task::Distance;
};

void check_dataset_spec(const DatasetSpec& spec);

/// Draws one sample for index `index` from stream(seed, index): a target
/// class is picked uniformly, then triples are rejection-sampled until the
/// task label matches. Deterministic and order-independent across indices.
struct SampledItem {
    ThreeCellSample sample;
    int class_index;
};
SampledItem sample_cells(const DatasetSpec& spec, std::uint64_t index);

/// 8-bit RGB buffer, image_side x image_side, row-major; the three cells
/// render as pure-color patch x patch blocks on black.
std::vector<std::uint8_t> render(const ThreeCellSample& s, const DatasetSpec& spec);

struct ManifestRow {
    std::uint64_t index;
    ThreeCellSample sample;
    Task task;
    int class_index;
};

/// Writes count PPM images, manifest.csv, and spec.json into out_dir.
std::vector<ManifestRow> gen_dataset(const DatasetSpec& spec,
                                     const std::filesystem::path& out_dir);

std::vector<ManifestRow> read_manifest(const std::filesystem::path& csv_path);

}  // namespace pef
