#pragma once

#include <qbound/states.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace qbound {

/// State documents are JSON objects:
///   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...], ...}
/// Matrix rows are row-major; numbers are written with 17 significant digits so
/// a write/read cycle reproduces every double bit for bit. Unknown fields are kept
/// in `extra` so witness and certificate documents can reuse the format.
struct StateDocument {
    BipartiteDensityMatrix state;
    nlohmann::json extra;  // every field other than dims and matrix
};

/// Formats a double with 17 significant digits (JSON compatible).
std::string format_exact(double x);

/// `"matrix": [...]` value, one row per line.
std::string matrix_to_json_text(const ComplexMatrix& m, int indent = 2);

/// Serializes dims, matrix, and any extra top-level fields (extra must be an object).
std::string state_to_text(const BipartiteDensityMatrix& rho, const nlohmann::json& extra = nlohmann::json::object());
/// Extra matrices are written after "matrix" with the same exact formatting.
std::string matrix_document_to_text(const ComplexMatrix& m, const BipartiteDims& dims,
                                    const nlohmann::json& extra = nlohmann::json::object(),
                                    const std::vector<std::pair<std::string, ComplexMatrix>>& extra_matrices = {});

/// Throws ParseError with line/field diagnostics, or the validation error of the state.
StateDocument parse_state_document(const std::string& text);
ComplexMatrix parse_matrix_field(const nlohmann::json& value, const char* field);

StateDocument read_state_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qbound
