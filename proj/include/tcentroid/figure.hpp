#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "tcentroid/centroid.hpp"

namespace tcentroid::figure {

// X ~ N(1, 4) and Y = X + 2, both conditioned on falling outside (-1, 4).
inline constexpr GaussianParams kParams{1.0, 2.0};
inline constexpr ExcludedInterval kHole{-1.0, 4.0};
inline constexpr double kShift = 2.0;

// Density grid x = -8, -7.99, ..., 12.
inline constexpr int kFirstIndex = -800;
inline constexpr int kLastIndex = 1200;
inline constexpr double kGridScale = 100.0;

struct Row {
    double x = 0.0;
    double fx_masked = 0.0;  // density of X times the support indicator
    double fy_masked = 0.0;
};

struct Data {
    std::vector<Row> rows;
    double base_centroid = 0.0;
    double shifted_centroid = 0.0;
};

Data figure1_data();

/// Header x,fX_masked,fY_masked, one row per grid point, then a footer row
/// "centroid,<E[X|S]>,<E[Y|S]>". 17 significant digits, LF line endings.
void write_figure1_csv(std::ostream& out, const Data& data);

/// Writes the CSV to `path`; throws Error if the file cannot be written.
void reproduce_figure1(const std::filesystem::path& path);

}  // namespace tcentroid::figure
