#pragma once

#include "slr/matrix.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace slr {

enum class MatrixFormat { MatrixMarket, Csv };

/// Read or parse failure. The message names the file and, for parse errors,
/// the 1-based line where the problem was found.
class IoError : public std::runtime_error {
public:
    IoError(const std::filesystem::path& path, long line, const std::string& what);
    IoError(const std::filesystem::path& path, const std::string& what);

    long line() const { return line_; }  // 0 when no line applies

private:
    long line_ = 0;
};

/// .mtx / .mm -> MatrixMarket, .csv -> Csv. Anything else is rejected.
MatrixFormat formatFromExtension(const std::filesystem::path& path);

/// MatrixMarket accepts both the dense "array" and the sparse "coordinate"
/// layouts ("real"/"integer" fields, "general" symmetry). CSV is headerless
/// comma-separated rows. Non-finite values are rejected at parse time.
Matrix readMatrix(const std::filesystem::path& path, MatrixFormat format);

/// Writes MatrixMarket "array real general" or headerless CSV. Values are
/// serialized with 17 significant digits so a write/read round trip is exact.
void writeMatrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format);

}  // namespace slr
