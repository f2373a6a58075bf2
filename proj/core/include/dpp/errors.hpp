#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

class NonFiniteInput : public Error
{
public:
    using Error::Error;
};

/// The response is orthogonal to every feature (lambda_max would be 0).
class DegenerateResponse : public Error
{
public:
    using Error::Error;
};

/// The ray direction v1 vanished, so the orthogonal split is undefined.
class DegenerateV1 : public Error
{
public:
    using Error::Error;
};

class NoConvergence : public Error
{
public:
    using Error::Error;
};

class InvalidSpec : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

class BadMagic : public IoError
{
public:
    using IoError::IoError;
};

class TruncatedFile : public IoError
{
public:
    using IoError::IoError;
};

/// CSV parse failure. Row and column are 1-based and refer to the file.
class ParseError : public IoError
{
public:
    ParseError(const std::string& file, std::size_t row, std::size_t col,
               const std::string& what)
        : IoError(file + ":" + std::to_string(row) + ":" + std::to_string(col) +
                  ": " + what),
          row_(row), col_(col)
    {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

} // namespace dpp
