#include "slr/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace slr {

namespace {

std::string describe(const std::filesystem::path& path, long line, const std::string& what) {
    std::string out = path.string();
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Formats one value with 17 significant digits (round-trip exact for double).
std::string formatValue(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parseValue(const std::string& token, const std::filesystem::path& path, long line) {
    double value = 0;
    std::size_t used = 0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw IoError(path, line, "expected a number, got '" + token + "'");
    }
    if (used != token.size())
        throw IoError(path, line, "trailing characters after number: '" + token + "'");
    if (!std::isfinite(value))
        throw IoError(path, line, "non-finite value '" + token + "'");
    return value;
}

long parseCount(const std::string& token, const std::filesystem::path& path, long line,
                const char* what) {
    long value = 0;
    std::size_t used = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        throw IoError(path, line, std::string("expected ") + what + ", got '" + token + "'");
    }
    if (used != token.size() || value <= 0)
        throw IoError(path, line, std::string(what) + " must be a positive integer");
    return value;
}

std::vector<std::string> splitWhitespace(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

struct LineReader {
    std::ifstream& in;
    const std::filesystem::path& path;
    long line = 0;

    // Next non-empty, non-comment line, or false at EOF.
    bool next(std::string& out, bool skipComments) {
        while (std::getline(in, out)) {
            ++line;
            if (!out.empty() && out.back() == '\r') out.pop_back();
            bool blank = out.find_first_not_of(" \t") == std::string::npos;
            if (blank) continue;
            if (skipComments && out[0] == '%') continue;
            return true;
        }
        return false;
    }
};

Matrix readMatrixMarket(std::ifstream& in, const std::filesystem::path& path) {
    std::string header;
    LineReader reader{in, path};
    if (!std::getline(in, header)) throw IoError(path, 1, "empty file");
    reader.line = 1;
    if (!header.empty() && header.back() == '\r') header.pop_back();

    auto tokens = splitWhitespace(lower(header));
    if (tokens.size() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix")
        throw IoError(path, 1, "expected header '%%MatrixMarket matrix <format> <field> <symmetry>'");
    const std::string& format = tokens[2];
    const std::string& field = tokens[3];
    const std::string& symmetry = tokens[4];
    if (format != "array" && format != "coordinate")
        throw IoError(path, 1, "unsupported format '" + format + "' (array or coordinate)");
    if (field != "real" && field != "integer" && field != "double")
        throw IoError(path, 1, "unsupported field '" + field + "' (real matrices only)");
    if (symmetry != "general")
        throw IoError(path, 1, "unsupported symmetry '" + symmetry + "' (general only)");

    std::string text;
    if (!reader.next(text, true)) throw IoError(path, reader.line, "missing size line");
    auto size = splitWhitespace(text);

    if (format == "array") {
        if (size.size() != 2) throw IoError(path, reader.line, "array size line must be 'rows cols'");
        long rows = parseCount(size[0], path, reader.line, "row count");
        long cols = parseCount(size[1], path, reader.line, "column count");
        Matrix m(rows, cols);
        long want = rows * cols;
        long got = 0;
        // Array values run down columns, possibly several per line.
        while (got < want && reader.next(text, true)) {
            for (const auto& token : splitWhitespace(text)) {
                if (got >= want)
                    throw IoError(path, reader.line, "more values than rows * cols");
                m(got % rows, got / rows) = parseValue(token, path, reader.line);
                ++got;
            }
        }
        if (got < want)
            throw IoError(path, reader.line,
                          "expected " + std::to_string(want) + " values, got " + std::to_string(got));
        if (reader.next(text, true))
            throw IoError(path, reader.line, "more values than rows * cols");
        return m;
    }

    if (size.size() != 3)
        throw IoError(path, reader.line, "coordinate size line must be 'rows cols nnz'");
    long rows = parseCount(size[0], path, reader.line, "row count");
    long cols = parseCount(size[1], path, reader.line, "column count");
    long nnz = parseCount(size[2], path, reader.line, "entry count");
    Matrix m = Matrix::Zero(rows, cols);
    std::set<std::pair<long, long>> seen;
    for (long e = 0; e < nnz; ++e) {
        if (!reader.next(text, true))
            throw IoError(path, reader.line, "expected " + std::to_string(nnz) + " entries, got " +
                                                 std::to_string(e));
        auto entry = splitWhitespace(text);
        if (entry.size() != 3)
            throw IoError(path, reader.line, "coordinate entry must be 'row col value'");
        long i = parseCount(entry[0], path, reader.line, "row index");
        long j = parseCount(entry[1], path, reader.line, "column index");
        if (i > rows || j > cols)
            throw IoError(path, reader.line, "index outside declared shape");
        if (!seen.emplace(i, j).second)
            throw IoError(path, reader.line, "duplicate entry (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + ")");
        m(i - 1, j - 1) = parseValue(entry[2], path, reader.line);
    }
    if (reader.next(text, true))
        throw IoError(path, reader.line, "more entries than the declared count");
    return m;
}

Matrix readCsv(std::ifstream& in, const std::filesystem::path& path) {
    std::vector<std::vector<double>> rows;
    std::string text;
    long line = 0;
    long width = -1;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream cells(text);
        while (std::getline(cells, cell, ',')) {
            auto begin = cell.find_first_not_of(" \t");
            auto end = cell.find_last_not_of(" \t");
            if (begin == std::string::npos)
                throw IoError(path, line, "empty cell");
            row.push_back(parseValue(cell.substr(begin, end - begin + 1), path, line));
        }
        if (text.back() == ',') throw IoError(path, line, "empty cell");
        if (width < 0)
            width = static_cast<long>(row.size());
        else if (static_cast<long>(row.size()) != width)
            throw IoError(path, line, "row has " + std::to_string(row.size()) +
                                          " cells, expected " + std::to_string(width));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path, line, "no data rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

}  // namespace

IoError::IoError(const std::filesystem::path& path, long line, const std::string& what)
    : std::runtime_error(describe(path, line, what)), line_(line) {}

IoError::IoError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(describe(path, 0, what)) {}

MatrixFormat formatFromExtension(const std::filesystem::path& path) {
    std::string ext = lower(path.extension().string());
    if (ext == ".mtx" || ext == ".mm") return MatrixFormat::MatrixMarket;
    if (ext == ".csv") return MatrixFormat::Csv;
    throw std::invalid_argument("unrecognized matrix file extension '" + ext +
                                "' (expected .mtx, .mm, or .csv)");
}

Matrix readMatrix(const std::filesystem::path& path, MatrixFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    return format == MatrixFormat::MatrixMarket ? readMatrixMarket(in, path)
                                                : readCsv(in, path);
}

void writeMatrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
    requireFinite(m, "writeMatrix");
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument("writeMatrix: matrix must be nonempty");
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    if (format == MatrixFormat::MatrixMarket) {
        out << "%%MatrixMarket matrix array real general\n";
        out << m.rows() << " " << m.cols() << "\n";
        for (Index j = 0; j < m.cols(); ++j)
            for (Index i = 0; i < m.rows(); ++i) out << formatValue(m(i, j)) << "\n";
    } else {
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                if (j) out << ",";
                out << formatValue(m(i, j));
            }
            out << "\n";
        }
    }
    if (!out.flush()) throw IoError(path, "write failed");
}

}  // namespace slr
