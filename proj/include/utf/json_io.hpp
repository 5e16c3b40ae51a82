#pragma once

#include <string>

#include "json.hpp"
#include "utf/decomp.hpp"
#include "utf/matrix.hpp"
#include "utf/tracial.hpp"
#include "utf/verify.hpp"

namespace utf {

// Matrix file format: {"n": dim, "data": [[re, im], ...]} with n*n entries in
// row-major order.  All readers validate shape and finiteness and throw
// InvalidInput on malformed documents.

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json flag_to_json(const Flag& f);
Flag flag_from_json(const nlohmann::json& j);

// {"N": matrix, "Q": matrix, "flag": flag, "order": "modulus"|"real"}
nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& j);

// {"atoms": [{"re","im","num","den"}...], "fk_determinant": x}
nlohmann::json brown_to_json(const BrownMeasure& mu, double fk);

nlohmann::json report_to_json(const VerificationReport& r);

// FNV-1a-64 of the canonical JSON serialization, as 16 hex digits.
std::string matrix_hash(const Matrix& m);

// Files are written with two-space indentation and a trailing newline, so a
// fixed document always produces identical bytes.
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace utf
