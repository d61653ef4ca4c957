#pragma once

#include <stdexcept>
#include <string>

namespace ellipfuse {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix failed the symmetric-positive-definite requirements.
class InvalidMatrixError : public Error {
public:
    explicit InvalidMatrixError(const std::string& what) : Error(what) {}
};

/// An argument is outside its documented domain.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error(what) {}
};

/// Convex-combination fusion was requested for priors whose interiors do
/// not intersect (scale factor k collapsed). Callers decide the policy.
class DisjointSetsError : public Error {
public:
    explicit DisjointSetsError(const std::string& what) : Error(what) {}
};

/// Geometry degenerated (e.g. bearing from a sensor to its own position).
class DegenerateGeometryError : public Error {
public:
    explicit DegenerateGeometryError(const std::string& what) : Error(what) {}
};

/// Configuration file failed validation; `path` is a JSON-pointer-style
/// location of the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Filesystem / stream failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace ellipfuse
