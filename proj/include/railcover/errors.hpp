#ifndef RAILCOVER_ERRORS_HPP
#define RAILCOVER_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace railcover {

// Base class for problems with an input document.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Document is not well-formed; the message carries the line/column locus.
class ParseError : public InputError {
 public:
  explicit ParseError(const std::string& what) : InputError(what) {}
};

// Document is well-formed but violates the input schema (missing field,
// wrong type, dangling station reference, unknown key).
class SchemaError : public InputError {
 public:
  explicit SchemaError(const std::string& what) : InputError(what) {}
};

// Model-infeasibility witness detected before solving: the listed stations
// have no rescuer within the distance/time caps.
class UncoverableError : public std::runtime_error {
 public:
  UncoverableError(const std::string& what, std::vector<int> station_ids)
      : std::runtime_error(what), stations(std::move(station_ids)) {}

  std::vector<int> stations;
};

}  // namespace railcover

#endif  // RAILCOVER_ERRORS_HPP
