#include "acrank/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "acrank/errors.hpp"

namespace acrank {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() || !in.eof()) lines.push_back(line);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

} // namespace

Dataset load_csv(const std::string& path, int d_y, int d_z, int d_x) {
    if (d_y < 1 || d_z < 1 || d_x < 0) {
        throw InputError("load_csv: dimensions must satisfy d_y >= 1, d_z >= 1, d_x >= 0");
    }
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw InputError(path + ": empty file");
    }

    const std::vector<std::string> header = split_csv_line(lines[0]);
    auto column_of = [&](const std::string& name) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (trim(header[c]) == name) return static_cast<int>(c);
        }
        throw InputError(path + ": missing column '" + name + "'");
    };

    std::vector<int> y_cols, z_cols, x_cols;
    for (int j = 1; j <= d_y; ++j) y_cols.push_back(column_of("y" + std::to_string(j)));
    for (int j = 1; j <= d_z; ++j) z_cols.push_back(column_of("z" + std::to_string(j)));
    for (int j = 1; j <= d_x; ++j) x_cols.push_back(column_of("x" + std::to_string(j)));

    const int n = static_cast<int>(lines.size()) - 1;
    if (n < 1) {
        throw InputError(path + ": no data rows");
    }

    Dataset ds;
    ds.y.resize(n, d_y);
    ds.z.resize(n, d_z);
    if (d_x > 0) ds.x = Eigen::MatrixXd(n, d_x);

    for (int r = 0; r < n; ++r) {
        const std::vector<std::string> fields = split_csv_line(lines[static_cast<std::size_t>(r) + 1]);
        auto cell = [&](int c) -> double {
            if (c >= static_cast<int>(fields.size())) {
                throw InputError(path + ": row " + std::to_string(r + 2) + " has only " +
                                 std::to_string(fields.size()) + " cells, need column " +
                                 trim(header[static_cast<std::size_t>(c)]));
            }
            double v = 0.0;
            if (!parse_double(fields[static_cast<std::size_t>(c)], v)) {
                throw InputError(path + ": non-numeric cell at row " + std::to_string(r + 2) +
                                 ", column '" + trim(header[static_cast<std::size_t>(c)]) + "'");
            }
            if (!std::isfinite(v)) {
                throw InputError(path + ": non-finite value at row " + std::to_string(r + 2) +
                                 ", column '" + trim(header[static_cast<std::size_t>(c)]) + "'");
            }
            return v;
        };
        for (int j = 0; j < d_y; ++j) ds.y(r, j) = cell(y_cols[static_cast<std::size_t>(j)]);
        for (int j = 0; j < d_z; ++j) ds.z(r, j) = cell(z_cols[static_cast<std::size_t>(j)]);
        for (int j = 0; j < d_x; ++j) (*ds.x)(r, j) = cell(x_cols[static_cast<std::size_t>(j)]);
    }
    return ds;
}

Eigen::MatrixXd load_points_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw InputError(path + ": empty file");
    }

    std::size_t start = 0;
    {
        double v = 0.0;
        const std::vector<std::string> first = split_csv_line(lines[0]);
        bool numeric = true;
        for (const auto& f : first) {
            if (!parse_double(f, v)) {
                numeric = false;
                break;
            }
        }
        if (!numeric) start = 1;
    }
    const int n = static_cast<int>(lines.size() - start);
    if (n < 1) {
        throw InputError(path + ": no data rows");
    }
    const int d = static_cast<int>(split_csv_line(lines[start]).size());

    Eigen::MatrixXd points(n, d);
    for (int r = 0; r < n; ++r) {
        const std::vector<std::string> fields = split_csv_line(lines[start + static_cast<std::size_t>(r)]);
        if (static_cast<int>(fields.size()) != d) {
            throw InputError(path + ": row " + std::to_string(start + static_cast<std::size_t>(r) + 1) +
                             " has " + std::to_string(fields.size()) + " cells, expected " +
                             std::to_string(d));
        }
        for (int c = 0; c < d; ++c) {
            double v = 0.0;
            if (!parse_double(fields[static_cast<std::size_t>(c)], v) || !std::isfinite(v)) {
                throw InputError(path + ": bad cell at row " +
                                 std::to_string(start + static_cast<std::size_t>(r) + 1) + ", column " +
                                 std::to_string(c + 1));
            }
            points(r, c) = v;
        }
    }
    return points;
}

} // namespace acrank
