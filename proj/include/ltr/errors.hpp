#ifndef LTR_ERRORS_HPP_
#define LTR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ltr {

// Bad user input: unknown flags, malformed config documents, invalid
// hyperparameters. Maps to exit code 1 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data or runtime failure: malformed data files, dimension mismatches,
// non-finite numerics. Maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ltr

#endif  // LTR_ERRORS_HPP_
