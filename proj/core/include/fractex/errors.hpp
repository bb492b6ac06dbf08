#pragma once

#include <stdexcept>
#include <string>

namespace fractex {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated an operation contract or supplied an unusable
/// configuration (bad flag value, empty manifest, malformed config file).
/// The CLI maps these to exit code 2.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Input data could not be read or written (missing file, malformed PGM,
/// truncated payload). Mapped to exit code 1.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// The fractal estimator met a surface with no usable increments:
/// some mean absolute difference E(d) is exactly zero, so log E(d)
/// is undefined (constant or periodic-degenerate input).
class DegenerateSurfaceError : public Error {
public:
    explicit DegenerateSurfaceError(const std::string& what) : Error(what) {}
};

} // namespace fractex
