#pragma once

#include <stdexcept>
#include <string>

namespace ctm {

// Input that violates an operation's precondition (bad index, malformed
// file, incompatible parameters).
class RejectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CeilingExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A block lookup missed the complexity table.
class IncompleteTable : public std::runtime_error {
 public:
  IncompleteTable(std::string patch_key)
      : std::runtime_error("complexity table has no entry for patch " + patch_key), patch_(std::move(patch_key)) {}
  const std::string& patch() const { return patch_; }

 private:
  std::string patch_;
};

}  // namespace ctm
