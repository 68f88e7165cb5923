#include "mlm/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mlm/error.hpp"

namespace mlm::io {

namespace {

std::vector<std::string> split(std::string_view line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(delim, start);
        std::string_view cell = line.substr(start, end == std::string_view::npos ? end : end - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '"')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '"')) cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size() && errno != ERANGE;
}

}  // namespace

LabeledMatrix parse_matrix(std::string_view text, bool has_header, bool has_row_labels,
                           std::string_view source) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) data_error(std::string(source) + ": empty file");

    const char delim = lines.front().find('\t') != std::string_view::npos ? '\t' : ',';
    LabeledMatrix out;
    std::size_t first = 0;
    std::size_t width = 0;
    if (has_header) {
        out.col_labels = split(lines.front(), delim);
        if (has_row_labels && !out.col_labels.empty()) out.col_labels.erase(out.col_labels.begin());
        width = out.col_labels.size();
        first = 1;
    }
    if (first == lines.size()) data_error(std::string(source) + ": no data rows");

    std::vector<std::vector<double>> rows;
    for (std::size_t l = first; l < lines.size(); ++l) {
        std::vector<std::string> cells = split(lines[l], delim);
        if (has_row_labels) {
            out.row_labels.push_back(cells.front());
            cells.erase(cells.begin());
        }
        if (l == first && !has_header) width = cells.size();
        if (cells.size() != width) {
            std::ostringstream msg;
            msg << source << ": line " << (l + 1) << " has " << cells.size() << " fields, expected "
                << width;
            data_error(msg.str());
        }
        std::vector<double> values(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(cells[c], values[c])) {
                std::ostringstream msg;
                msg << source << ": line " << (l + 1) << ", field " << (c + 1) << ": '" << cells[c]
                    << "' is not numeric";
                data_error(msg.str());
            }
        }
        rows.push_back(std::move(values));
    }
    if (width == 0) data_error(std::string(source) + ": no columns");
    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return out;
}

LabeledMatrix load_matrix(const std::filesystem::path& path, bool has_header, bool has_row_labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) data_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix(buffer.str(), has_header, has_row_labels, path.string());
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string matrix_to_csv(const Matrix& values, const std::vector<std::string>& col_labels,
                          const std::vector<std::string>& row_labels, std::string_view corner) {
    if (!col_labels.empty() && static_cast<Eigen::Index>(col_labels.size()) != values.cols()) {
        data_error("column label count does not match the matrix");
    }
    if (!row_labels.empty() && static_cast<Eigen::Index>(row_labels.size()) != values.rows()) {
        data_error("row label count does not match the matrix");
    }
    std::string out;
    if (!col_labels.empty()) {
        if (!row_labels.empty()) {
            out += corner;
            out += ',';
        }
        for (std::size_t c = 0; c < col_labels.size(); ++c) {
            if (c > 0) out += ',';
            out += col_labels[c];
        }
        out += '\n';
    }
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        if (!row_labels.empty()) {
            out += row_labels[static_cast<std::size_t>(r)];
            out += ',';
        }
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(values(r, c));
        }
        out += '\n';
    }
    return out;
}

void save_matrix(const std::filesystem::path& path, const Matrix& values,
                 const std::vector<std::string>& col_labels,
                 const std::vector<std::string>& row_labels, std::string_view corner) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) data_error("cannot write " + path.string());
    out << matrix_to_csv(values, col_labels, row_labels, corner);
    if (!out) data_error("failed writing " + path.string());
}

}  // namespace mlm::io
