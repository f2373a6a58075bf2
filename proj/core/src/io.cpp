#include <dpp/data.hpp>
#include <dpp/errors.hpp>

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

namespace dpp {

namespace {

static_assert(std::endian::native == std::endian::little, "binary IO assumes a little-endian host");

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_number(std::string_view s, double& out)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Rows of numbers; a non-numeric first row is dropped as a header.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string name = path.string();

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0, width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        std::vector<double> row(fields.size());
        bool ok = true;
        std::size_t bad = 0;
        for (std::size_t c = 0; c < fields.size() && ok; ++c) {
            if (!parse_number(fields[c], row[c])) {
                ok = false;
                bad = c;
            }
        }
        if (!ok) {
            if (lineno == 1) continue;
            throw ParseError(name, lineno, bad + 1,
                             "not a number: '" + std::string(trim(fields[bad])) + "'");
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError(name, lineno, std::min(row.size(), width) + 1,
                             "expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("read failure on " + name);
    return rows;
}

void write_or_throw(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

template <class T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path)
{
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw TruncatedFile(path.string() + ": file ends inside the header");
    }
    return v;
}

void read_doubles(std::istream& in, double* dst, std::size_t count,
                  const std::filesystem::path& path, const char* what)
{
    const auto bytes = static_cast<std::streamsize>(count * sizeof(double));
    if (!in.read(reinterpret_cast<char*>(dst), bytes)) {
        throw TruncatedFile(path.string() + ": file ends inside " + what);
    }
}

} // namespace

Matrix load_matrix_csv(const std::filesystem::path& path)
{
    const auto rows = read_table(path);
    if (rows.empty()) throw ParseError(path.string(), 1, 1, "no data rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Vector load_vector_csv(const std::filesystem::path& path)
{
    const Matrix m = load_matrix_csv(path);
    if (m.cols() != 1) {
        throw DimensionMismatch(path.string() + ": expected one column, found " +
                                std::to_string(m.cols()));
    }
    return m.col(0);
}

Dataset load_csv(const std::filesystem::path& x_path, const std::filesystem::path& y_path)
{
    Matrix x = load_matrix_csv(x_path);
    Vector y = load_vector_csv(y_path);
    if (x.rows() != y.size()) {
        throw DimensionMismatch("X has " + std::to_string(x.rows()) + " rows but y has " +
                                std::to_string(y.size()));
    }
    return Dataset::create(std::move(x), std::move(y));
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::string line;
    for (Index i = 0; i < m.rows(); ++i) {
        line.clear();
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) line += ',';
            line += format_double(m(i, j));
        }
        line += '\n';
        out << line;
    }
    write_or_throw(out, path);
}

void save_vector_csv(const Vector& v, const std::filesystem::path& path)
{
    save_matrix_csv(Matrix(v), path);
}

void save_csv(const Dataset& d, const std::filesystem::path& x_path,
              const std::filesystem::path& y_path)
{
    save_matrix_csv(d.x(), x_path);
    save_vector_csv(d.y(), y_path);
}

void save_binary(const Dataset& d, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write("DPPS", 4);
    put<std::uint16_t>(out, 1);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(d.n_samples()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(d.n_features()));
    out.write(reinterpret_cast<const char*>(d.x().data()),
              static_cast<std::streamsize>(d.x().size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(d.y().data()),
              static_cast<std::streamsize>(d.y().size() * sizeof(double)));
    write_or_throw(out, path);
}

Dataset load_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    char magic[4] = {};
    if (!in.read(magic, 4)) throw TruncatedFile(path.string() + ": shorter than the magic bytes");
    if (std::memcmp(magic, "DPPS", 4) != 0) throw BadMagic(path.string() + ": not a DPPS file");
    const auto version = get<std::uint16_t>(in, path);
    if (version != 1) {
        throw IoError(path.string() + ": unsupported version " + std::to_string(version));
    }
    const auto n = get<std::uint64_t>(in, path);
    const auto p = get<std::uint64_t>(in, path);

    in.seekg(0, std::ios::end);
    const auto end = static_cast<std::uint64_t>(in.tellg());
    const std::uint64_t header = 4 + 2 + 8 + 8;
    const std::uint64_t need = (n * p + n) * sizeof(double);
    if (p != 0 && n > (end - header) / sizeof(double) / p) {
        throw TruncatedFile(path.string() + ": payload shorter than N x p");
    }
    if (end - header < need) throw TruncatedFile(path.string() + ": payload shorter than declared");
    in.seekg(static_cast<std::streamoff>(header));

    Matrix x(static_cast<Index>(n), static_cast<Index>(p));
    Vector y(static_cast<Index>(n));
    read_doubles(in, x.data(), static_cast<std::size_t>(n * p), path, "X");
    read_doubles(in, y.data(), static_cast<std::size_t>(n), path, "y");
    return Dataset::create(std::move(x), std::move(y));
}

} // namespace dpp
