#pragma once

#include <stdexcept>
#include <string>

namespace secam {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or truncated file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Well-formed input using a feature this library does not accept
/// (Fortran order, big-endian, unsupported dtype).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ManifestError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class EmptyMaskError : public Error {
public:
    using Error::Error;
};

}  // namespace secam
