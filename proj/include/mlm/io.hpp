#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlm/model.hpp"

namespace mlm::io {

struct LabeledMatrix {
    Matrix values;
    std::vector<std::string> col_labels;  // empty without a header
    std::vector<std::string> row_labels;  // empty without a label column
};

/// Reads comma- or tab-delimited text (the delimiter is taken from the first
/// line). Rows must be rectangular and every data cell numeric.
LabeledMatrix load_matrix(const std::filesystem::path& path, bool has_header,
                          bool has_row_labels = false);

/// Same as load_matrix on in-memory text; `source` names it in errors.
LabeledMatrix parse_matrix(std::string_view text, bool has_header, bool has_row_labels,
                           std::string_view source = "<text>");

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Writes a header line when col_labels is nonempty, and a leading label
/// column (headed by `corner`) when row_labels is nonempty.
void save_matrix(const std::filesystem::path& path, const Matrix& values,
                 const std::vector<std::string>& col_labels = {},
                 const std::vector<std::string>& row_labels = {},
                 std::string_view corner = "row");

std::string matrix_to_csv(const Matrix& values, const std::vector<std::string>& col_labels = {},
                          const std::vector<std::string>& row_labels = {},
                          std::string_view corner = "row");

}  // namespace mlm::io
