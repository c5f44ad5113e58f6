#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace topiclandscape {

/// Bad input data: malformed records, broken references, corrupt files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation or configuration.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-fatal diagnostics collected by operations that degrade gracefully.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

}  // namespace topiclandscape
