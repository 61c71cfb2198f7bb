#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polydrift {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class FileNotFoundError : public Error {
  public:
    explicit FileNotFoundError(const std::string& path)
        : Error("file not found: " + path), path_(path) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

/// A cell failed to parse as a finite number and row dropping was disabled.
class ParseError : public Error {
  public:
    ParseError(std::size_t row, std::string column, std::string cell)
        : Error("row " + std::to_string(row) + ", column '" + column +
                "': cannot parse cell '" + cell + "' as a number"),
          row_(row), column_(std::move(column)) {}
    std::size_t row() const { return row_; }  // 1-based data row, header excluded
    const std::string& column() const { return column_; }

  private:
    std::size_t row_;
    std::string column_;
};

class EmptyTableError : public Error {
  public:
    using Error::Error;
};

class InvalidFractionError : public Error {
  public:
    using Error::Error;
};

class ZeroVarianceError : public Error {
  public:
    using Error::Error;
};

class RankDeficientError : public Error {
  public:
    using Error::Error;
};

class InsufficientRowsError : public Error {
  public:
    using Error::Error;
};

class DegenerateTargetError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

class UnknownFeatureError : public Error {
  public:
    using Error::Error;
};

class NotEnoughFeaturesError : public Error {
  public:
    using Error::Error;
};

class TableTooSmallError : public Error {
  public:
    using Error::Error;
};

class MissingFeatureError : public Error {
  public:
    using Error::Error;
};

class EmptyProfileError : public Error {
  public:
    using Error::Error;
};

class VersionMismatchError : public Error {
  public:
    using Error::Error;
};

class CorruptProfileError : public Error {
  public:
    using Error::Error;
};

/// Simulation or sweep configuration violates its invariants.
class InvalidSpecError : public Error {
  public:
    using Error::Error;
};

}  // namespace polydrift
