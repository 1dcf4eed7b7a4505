#pragma once

#include <stdexcept>
#include <string>

namespace gw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text or binary (edge lists, signal files, bitstreams).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A data or domain invariant does not hold (disconnected graph, bad center...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Failure to open, read or write a file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gw
