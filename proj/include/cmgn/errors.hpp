#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmgn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// BLUT table is out of range or not monotone.
class InvalidBlut : public Error {
 public:
  using Error::Error;
};

// BLUT has no positive slope anywhere in Mid/High; injection must be skipped.
class FlatBlut : public Error {
 public:
  using Error::Error;
};

// Bank does not match what the injector needs (empty block, missing variant).
class InvalidBank : public Error {
 public:
  using Error::Error;
};

class CorruptBank : public Error {
 public:
  CorruptBank(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmgn
