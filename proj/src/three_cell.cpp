#include "pef/three_cell.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pef/io.hpp"

namespace pef {

std::string task_name(Task t) {
    switch (t) {
        case Task::Distance: return "distance";
        case Task::Orientation: return "orientation";
        case Task::Area: return "area";
        case Task::VectorSum: return "vecsum";
        case Task::SixClass: return "sixclass";
    }
    throw std::logic_error("unknown task");
}

Task parse_task(const std::string& name) {
    if (name == "distance") return Task::Distance;
    if (name == "orientation") return Task::Orientation;
    if (name == "area") return Task::Area;
    if (name == "vecsum") return Task::VectorSum;
    if (name == "sixclass") return Task::SixClass;
    throw std::invalid_argument("unknown task: " + name);
}

int class_count(Task t) {
    switch (t) {
        case Task::Distance: return 3;
        case Task::Orientation: return 2;
        case Task::Area: return 3;
        case Task::VectorSum: return 2;
        case Task::SixClass: return 6;
    }
    throw std::logic_error("unknown task");
}

namespace {

long long sq_dist(const Cell& a, const Cell& b) {
    const long long dx = a.x - b.x;
    const long long dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// doubled trapezium area under the segment from a to b, projected onto x
long long doubled_area(const Cell& a, const Cell& b) {
    long long v = static_cast<long long>(a.y + b.y) * (b.x - a.x);
    return v < 0 ? -v : v;
}

}  // namespace

long long orientation_det(const ThreeCellSample& s) {
    return static_cast<long long>(s.g.x - s.r.x) * (s.b.y - s.r.y) -
           static_cast<long long>(s.g.y - s.r.y) * (s.b.x - s.r.x);
}

int distance_class(const ThreeCellSample& s) {
    const long long drg = sq_dist(s.r, s.g);
    const long long drb = sq_dist(s.r, s.b);
    if (drg > drb) return 0;
    if (drb > drg) return 1;
    return 2;
}

int orientation_class(const ThreeCellSample& s) {
    const long long det = orientation_det(s);
    if (det == 0)
        throw std::invalid_argument("collinear cells have no orientation");
    return det > 0 ? 0 : 1;
}

int area_class(const ThreeCellSample& s) {
    const long long arg = doubled_area(s.r, s.g);
    const long long arb = doubled_area(s.r, s.b);
    if (arg > arb) return 0;
    if (arb > arg) return 1;
    return 2;
}

int vecsum_class(const ThreeCellSample& s, int grid) {
    const int bound = grid - 1;
    const int xs = s.r.x + s.g.x + s.b.x;
    const int ys = s.r.y + s.g.y + s.b.y;
    return (xs > bound && ys > bound) ? 1 : 0;
}

bool satisfies_six_class(const ThreeCellSample& s, int k, int grid) {
    switch (k) {
        case 0: return distance_class(s) == 0;
        case 1: return distance_class(s) == 1;
        case 2: return orientation_det(s) > 0;
        case 3: return area_class(s) == 0;
        case 4: return area_class(s) == 1;
        case 5: return vecsum_class(s, grid) == 1;
        default: throw std::invalid_argument("six-class index out of range");
    }
}

TaskLabel label_for(Task task, const ThreeCellSample& s, int grid) {
    switch (task) {
        case Task::Distance: return {task, distance_class(s)};
        case Task::Orientation: return {task, orientation_class(s)};
        case Task::Area: return {task, area_class(s)};
        case Task::VectorSum: return {task, vecsum_class(s, grid)};
        case Task::SixClass:
            throw std::invalid_argument(
                "sixclass labels are assigned by the generating mode");
    }
    throw std::logic_error("unknown task");
}

std::map<Task, TaskLabel> label_sample(const ThreeCellSample& s, int grid) {
    std::map<Task, TaskLabel> out;
    out.emplace(Task::Distance, label_for(Task::Distance, s, grid));
    if (orientation_det(s) != 0)
        out.emplace(Task::Orientation, label_for(Task::Orientation, s, grid));
    out.emplace(Task::Area, label_for(Task::Area, s, grid));
    out.emplace(Task::VectorSum, label_for(Task::VectorSum, s, grid));
    return out;
}

void check_dataset_spec(const DatasetSpec& spec) {
    if (spec.grid < 2) throw std::invalid_argument("grid must be >= 2");
    if (spec.patch < 1) throw std::invalid_argument("patch must be >= 1");
    if (spec.image_side != spec.grid * spec.patch)
        throw std::invalid_argument("image_side must equal grid * patch");
    if (spec.count < 0) throw std::invalid_argument("count must be >= 0");
}

SampledItem sample_cells(const DatasetSpec& spec, std::uint64_t index) {
    check_dataset_spec(spec);
    Rng rng = Rng::stream(spec.seed, index);
    const int cells = spec.grid * spec.grid;
    const int target = static_cast<int>(rng.below(class_count(spec.task)));
    constexpr int kMaxTries = 10000;

    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        const int cr = static_cast<int>(rng.below(cells));
        int cg, cb;
        do {
            cg = static_cast<int>(rng.below(cells));
        } while (cg == cr);
        do {
            cb = static_cast<int>(rng.below(cells));
        } while (cb == cr || cb == cg);

        ThreeCellSample s{{cr % spec.grid, cr / spec.grid},
                          {cg % spec.grid, cg / spec.grid},
                          {cb % spec.grid, cb / spec.grid},
                          index};

        if (spec.task == Task::SixClass) {
            if (satisfies_six_class(s, target, spec.grid))
                return {s, target};
            continue;
        }
        if (spec.task == Task::Orientation && orientation_det(s) == 0) continue;
        if (label_for(spec.task, s, spec.grid).class_index == target)
            return {s, target};
    }
    throw std::runtime_error("rejection sampling exceeded retry cap at index " +
                             std::to_string(index));
}

std::vector<std::uint8_t> render(const ThreeCellSample& s, const DatasetSpec& spec) {
    check_dataset_spec(spec);
    const int side = spec.image_side;
    std::vector<std::uint8_t> img(static_cast<size_t>(side) * side * 3, 0);
    const Cell cells[3] = {s.r, s.g, s.b};
    for (int ch = 0; ch < 3; ++ch) {
        const Cell& cell = cells[ch];
        for (int py = cell.y * spec.patch; py < (cell.y + 1) * spec.patch; ++py)
            for (int px = cell.x * spec.patch; px < (cell.x + 1) * spec.patch; ++px)
                img[(static_cast<size_t>(py) * side + px) * 3 + ch] = 255;
    }
    return img;
}

std::vector<ManifestRow> gen_dataset(const DatasetSpec& spec,
                                     const std::filesystem::path& out_dir) {
    check_dataset_spec(spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory: " + out_dir.string());

    std::vector<ManifestRow> rows;
    rows.reserve(spec.count);
    std::ostringstream manifest;
    manifest << "index,xr,yr,xg,yg,xb,yb,task,class\n";
    for (int i = 0; i < spec.count; ++i) {
        const SampledItem item = sample_cells(spec, static_cast<std::uint64_t>(i));
        const ThreeCellSample& s = item.sample;

        char name[32];
        std::snprintf(name, sizeof(name), "%08d.ppm", i);
        atomic_write_file(out_dir / name,
                          encode_ppm(spec.image_side, spec.image_side,
                                     render(s, spec)));

        manifest << i << ',' << s.r.x << ',' << s.r.y << ',' << s.g.x << ','
                 << s.g.y << ',' << s.b.x << ',' << s.b.y << ','
                 << task_name(spec.task) << ',' << item.class_index << '\n';
        rows.push_back({static_cast<std::uint64_t>(i), s, spec.task,
                        item.class_index});
    }
    atomic_write_file(out_dir / "manifest.csv", manifest.str());

    nlohmann::json j{{"grid", spec.grid},
                     {"image_side", spec.image_side},
                     {"patch", spec.patch},
                     {"count", spec.count},
                     {"seed", spec.seed},
                     {"task", task_name(spec.task)}};
    atomic_write_file(out_dir / "spec.json", j.dump(2) + "\n");
    return rows;
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& csv_path) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    if (!std::getline(in, line) || line != "index,xr,yr,xg,yg,xb,yb,task,class")
        throw IoError("bad manifest header in " + csv_path.string());
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string field;
        std::istringstream ss(line);
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 9) throw IoError("bad manifest row in " + csv_path.string());
        ManifestRow row;
        row.index = std::stoull(f[0]);
        row.sample = {{std::stoi(f[1]), std::stoi(f[2])},
                      {std::stoi(f[3]), std::stoi(f[4])},
                      {std::stoi(f[5]), std::stoi(f[6])},
                      row.index};
        row.task = parse_task(f[7]);
        row.class_index = std::stoi(f[8]);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pef
