#include <qbound/state_io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qbound {

std::string format_exact(double x) {
    if (!std::isfinite(x)) throw NonFiniteError("cannot serialize a non-finite number");
    return fmt::format("{:.17g}", x);
}

std::string matrix_to_json_text(const ComplexMatrix& m, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    std::string out = "[\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += pad + pad + "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += "[" + format_exact(m(i, j).real()) + ", " + format_exact(m(i, j).imag()) + "]";
        }
        out += i + 1 < m.rows() ? "],\n" : "]\n";
    }
    out += pad + "]";
    return out;
}

std::string matrix_document_to_text(const ComplexMatrix& m, const BipartiteDims& dims,
                                    const nlohmann::json& extra,
                                    const std::vector<std::pair<std::string, ComplexMatrix>>& extra_matrices) {
    if (!extra.is_object()) throw ParseError("extra fields must form a JSON object");
    std::string out = "{\n";
    out += fmt::format("  \"dims\": [{}, {}],\n", dims.dA(), dims.dB());
    for (const auto& [key, value] : extra.items()) {
        if (key == "dims" || key == "matrix") continue;
        out += "  " + nlohmann::json(key).dump() + ": " + value.dump() + ",\n";
    }
    out += "  \"matrix\": " + matrix_to_json_text(m);
    for (const auto& [key, value] : extra_matrices) {
        out += ",\n  " + nlohmann::json(key).dump() + ": " + matrix_to_json_text(value);
    }
    out += "\n}\n";
    return out;
}

std::string state_to_text(const BipartiteDensityMatrix& rho, const nlohmann::json& extra) {
    nlohmann::json fields = extra;
    if (rho.label() && !fields.contains("label")) fields["label"] = *rho.label();
    if (rho.provenance() && !fields.contains("seed")) {
        fields["seed"] = rho.provenance()->seed;
        fields["index"] = rho.provenance()->index;
    }
    return matrix_document_to_text(rho.matrix(), rho.dims(), fields);
}

ComplexMatrix parse_matrix_field(const nlohmann::json& value, const char* field) {
    if (!value.is_array() || value.empty()) {
        throw ParseError(fmt::format("field '{}': expected a non-empty array of rows", field));
    }
    const auto rows = static_cast<Eigen::Index>(value.size());
    const auto& first = value.front();
    if (!first.is_array()) throw ParseError(fmt::format("field '{}' row 0: expected an array", field));
    const auto cols = static_cast<Eigen::Index>(first.size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = value[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(fmt::format("field '{}' row {}: expected {} entries", field, i, cols));
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const auto& entry = row[static_cast<std::size_t>(j)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
                throw ParseError(
                    fmt::format("field '{}' row {} entry {}: expected [re, im] numbers", field, i, j));
            }
            m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

StateDocument parse_state_document(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into a line number.
        const std::size_t upto = std::min(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ParseError(fmt::format("line {}: {}", line, e.what()));
    }
    if (!doc.is_object()) throw ParseError("state document must be a JSON object");
    if (!doc.contains("dims")) throw ParseError("missing field 'dims'");
    if (!doc.contains("matrix")) throw ParseError("missing field 'matrix'");
    const auto& dims_field = doc["dims"];
    if (!dims_field.is_array() || dims_field.size() != 2 || !dims_field[0].is_number_integer() ||
        !dims_field[1].is_number_integer()) {
        throw ParseError("field 'dims': expected [dA, dB] integers");
    }
    const BipartiteDims dims(dims_field[0].get<int>(), dims_field[1].get<int>());
    const ComplexMatrix m = parse_matrix_field(doc["matrix"], "matrix");
    auto rho = BipartiteDensityMatrix::validate(m, dims);
    nlohmann::json extra = doc;
    extra.erase("dims");
    extra.erase("matrix");
    if (extra.contains("label") && extra["label"].is_string()) {
        rho = rho.with_label(extra["label"].get<std::string>());
    }
    if (extra.contains("seed") && extra.contains("index") && extra["seed"].is_number_unsigned() &&
        extra["index"].is_number_unsigned()) {
        rho = rho.with_provenance({extra["seed"].get<std::uint64_t>(), extra["index"].get<std::uint64_t>()});
    }
    return {std::move(rho), std::move(extra)};
}

StateDocument read_state_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_state_document(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace qbound
