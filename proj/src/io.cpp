#include "pef/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pef {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const fs::path& path, std::string_view content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp.string() + " -> " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

double parse_double(const std::string& s, const fs::path& path) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + s + "' in " + path.string());
    }
}

}  // namespace

void write_order_csv(const fs::path& path, const PatchOrder& order) {
    std::ostringstream out;
    out << "cell_index,row,col,position\n";
    const int w = order.shape.width;
    for (int i = 0; i < order.shape.cells(); ++i)
        out << i << ',' << i / w << ',' << i % w << ','
            << format_double(order.positions[i]) << '\n';
    atomic_write_file(path, out.str());
}

PatchOrder read_order_csv(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "cell_index,row,col,position")
        throw IoError("bad order.csv header in " + path.string());

    int max_row = -1, max_col = -1;
    std::vector<std::tuple<int, int, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 4) throw IoError("bad order.csv row in " + path.string());
        const int r = static_cast<int>(parse_double(f[1], path));
        const int c = static_cast<int>(parse_double(f[2], path));
        rows.emplace_back(r, c, parse_double(f[3], path));
        max_row = std::max(max_row, r);
        max_col = std::max(max_col, c);
    }
    if (rows.empty()) throw IoError("empty order.csv: " + path.string());

    const GridShape shape{max_col + 1, max_row + 1};
    if (static_cast<int>(rows.size()) != shape.cells())
        throw IoError("order.csv does not cover the full grid: " + path.string());
    PatchOrder order{shape, std::vector<double>(shape.cells())};
    for (const auto& [r, c, p] : rows) order.positions[r * shape.width + c] = p;
    return order;
}

void write_pe_csv(const fs::path& path, const EmbeddingField& field, double base,
                  double scale) {
    std::ostringstream out;
    out << "# d_model=" << field.d_model << " base=" << format_double(base)
        << " scale=" << format_double(scale) << " width=" << field.shape.width
        << " height=" << field.shape.height << '\n';
    out << "row,col";
    for (int k = 0; k < field.d_model; ++k) out << ",e" << k;
    out << '\n';
    const int w = field.shape.width;
    for (int i = 0; i < field.shape.cells(); ++i) {
        out << i / w << ',' << i % w;
        const double* row = field.row(i);
        for (int k = 0; k < field.d_model; ++k) out << ',' << format_double(row[k]);
        out << '\n';
    }
    atomic_write_file(path, out.str());
}

PeFile read_pe_csv(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw IoError("missing pe.csv metadata line in " + path.string());

    PeFile pe;
    int width = 0, height = 0, d_model = 0;
    {
        std::istringstream meta(line.substr(1));
        std::string tok;
        while (meta >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "d_model") d_model = std::stoi(val);
            else if (key == "base") pe.base = parse_double(val, path);
            else if (key == "scale") pe.scale = parse_double(val, path);
            else if (key == "width") width = std::stoi(val);
            else if (key == "height") height = std::stoi(val);
        }
    }
    if (d_model < 2 || width < 1 || height < 1)
        throw IoError("incomplete pe.csv metadata in " + path.string());
    if (!std::getline(in, line))
        throw IoError("missing pe.csv header in " + path.string());

    pe.field.shape = GridShape{width, height};
    pe.field.d_model = d_model;
    pe.field.data.assign(static_cast<size_t>(width) * height * d_model, 0.0);
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (static_cast<int>(f.size()) != d_model + 2)
            throw IoError("bad pe.csv row in " + path.string());
        const int r = std::stoi(f[0]);
        const int c = std::stoi(f[1]);
        double* row = pe.field.data.data() +
                      static_cast<size_t>(r * width + c) * d_model;
        for (int k = 0; k < d_model; ++k) row[k] = parse_double(f[k + 2], path);
        ++seen;
    }
    if (seen != width * height)
        throw IoError("pe.csv does not cover the full grid: " + path.string());
    return pe;
}

void write_bias_csv(const fs::path& path, const ContextBias& bias) {
    std::ostringstream out;
    out << "cell_index,bias\n";
    for (size_t i = 0; i < bias.values.size(); ++i)
        out << i << ',' << format_double(bias.values[i]) << '\n';
    atomic_write_file(path, out.str());
}

ContextBias read_bias_csv(const fs::path& path, GridShape shape) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "cell_index,bias")
        throw IoError("bad bias.csv header in " + path.string());
    ContextBias bias{shape, std::vector<double>(shape.cells(), 0.0)};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 2) throw IoError("bad bias.csv row in " + path.string());
        const int i = std::stoi(f[0]);
        if (i < 0 || i >= shape.cells())
            throw IoError("bias.csv cell index out of range in " + path.string());
        bias.values[i] = parse_double(f[1], path);
    }
    check_bias(bias);
    return bias;
}

std::string encode_ppm(int width, int height, const std::vector<std::uint8_t>& rgb) {
    if (static_cast<size_t>(width) * height * 3 != rgb.size())
        throw std::invalid_argument("rgb buffer size mismatch");
    std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
    return out;
}

std::string encode_pgm(int width, int height, const std::vector<std::uint8_t>& gray) {
    if (static_cast<size_t>(width) * height != gray.size())
        throw std::invalid_argument("gray buffer size mismatch");
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
    return out;
}

}  // namespace pef
