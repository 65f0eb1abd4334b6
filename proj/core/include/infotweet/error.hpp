#pragma once

#include <stdexcept>
#include <string>

namespace infotweet {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file does not declare the columns it was asked for.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (bad number, wrong field count, bad header).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A raw label has no entry in the label map.
class LabelError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Data that a learner cannot use (single class, non-finite values,
// duplicate ids, empty vocabulary).
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace infotweet
