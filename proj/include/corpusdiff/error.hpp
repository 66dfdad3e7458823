#pragma once

#include <stdexcept>
#include <string>

namespace corpusdiff {

// All toolkit failures surface as Error; the CLI prints what() on one line.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace corpusdiff
