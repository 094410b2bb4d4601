#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace acrank {

// Row-aligned samples: y is n x d_Y, z is n x d_Z, x (when present) n x d_X.
struct Dataset {
    Eigen::MatrixXd y;
    Eigen::MatrixXd z;
    std::optional<Eigen::MatrixXd> x;

    [[nodiscard]] int n() const { return static_cast<int>(y.rows()); }
};

// Reads a headered CSV whose columns are named y1..y{d_y}, z1..z{d_z} and,
// when d_x > 0, x1..x{d_x}. Column order in the file is immaterial. Throws
// InputError naming the offending row/column for missing columns,
// non-numeric cells, non-finite values, or an empty file.
Dataset load_csv(const std::string& path, int d_y, int d_z, int d_x = 0);

// Reads a plain numeric CSV as a point set (one point per row). A first row
// that does not parse as numbers is treated as a header and skipped.
Eigen::MatrixXd load_points_csv(const std::string& path);

} // namespace acrank
