#pragma once

#include <stdexcept>
#include <string>

namespace mfsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input values (bad spec fields, out-of-range parameters).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed files; message carries the offending field or line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Agent placement outside the road's arclength range.
class PlacementError : public Error {
public:
    using Error::Error;
};

/// Pose too far from the reference path to project.
class ProjectionError : public Error {
public:
    using Error::Error;
};

/// Degenerate Frenet geometry (normal folding).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Unknown vehicle model id; message lists the valid ids.
class CatalogError : public Error {
public:
    using Error::Error;
};

/// Backend contract violation (e.g. trajectory shorter than the step).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Non-finite state produced by the dynamics integration.
class DynamicsError : public Error {
public:
    using Error::Error;
};

/// Incompatible run logs handed to the evaluation.
class ComparisonError : public Error {
public:
    using Error::Error;
};

/// Duplicate or inconsistent keys while assembling grid aggregates.
class AggregationError : public Error {
public:
    using Error::Error;
};

/// Statistics requested over an empty sample set.
class StatsError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mfsim
