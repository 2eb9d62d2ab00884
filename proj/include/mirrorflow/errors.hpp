#pragma once

#include <stdexcept>
#include <string>

namespace mirrorflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation requires a different grid geometry (e.g. spectral transform on a slab).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A reflection plane or grid embedding does not land on sample points.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Not enough grid planes (or bandwidth) for the requested stencil/derivative order.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Input data fails a hard precondition (slip or compatibility check).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// CFL limit exceeded at runtime.
class CflError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf detected during time stepping; carries the surviving horizon in the message.
class BlowUpError : public Error {
public:
    using Error::Error;
};

/// Malformed or truncated file, or an unserializable grid.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace mirrorflow
