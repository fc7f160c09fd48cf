#pragma once

#include <stdexcept>
#include <string>

namespace alcir {

// Error taxonomy, mirrored by CLI exit codes:
//   ConfigError  -> 1 (bad flags, bad config keys, invalid hyperparameters)
//   DataError    -> 2 (ingestion, lookups, infeasible splits)
//   NumericError -> 3 (divergence, degenerate vectors)
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct DataError : Error {
  explicit DataError(const std::string& msg) : Error(msg) {}
};

struct DimensionError : DataError {
  explicit DimensionError(const std::string& msg) : DataError(msg) {}
};

struct SamplingError : DataError {
  explicit SamplingError(const std::string& msg) : DataError(msg) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

struct DegenerateVectorError : NumericError {
  explicit DegenerateVectorError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace alcir
