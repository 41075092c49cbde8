#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pef/embedding.hpp"
#include "pef/order.hpp"

namespace pef {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Round-trip-exact decimal rendering of a double (17 significant digits).
std::string format_double(double v);

/// Writes content to a temp file in the target directory, then renames.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// order.csv: header cell_index,row,col,position
void write_order_csv(const std::filesystem::path& path, const PatchOrder& order);
PatchOrder read_order_csv(const std::filesystem::path& path);

// pe.csv: one metadata comment line, then header row,col,e0..e{d-1}
struct PeFile {
    EmbeddingField field;
    double base = 0.0;
    double scale = 0.0;
};
void write_pe_csv(const std::filesystem::path& path, const EmbeddingField& field,
                  double base, double scale);
PeFile read_pe_csv(const std::filesystem::path& path);

// bias.csv: header cell_index,bias
void write_bias_csv(const std::filesystem::path& path, const ContextBias& bias);
ContextBias read_bias_csv(const std::filesystem::path& path, GridShape shape);

std::string encode_ppm(int width, int height, const std::vector<std::uint8_t>& rgb);
std::string encode_pgm(int width, int height, const std::vector<std::uint8_t>& gray);

}  // namespace pef
