#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `position` is a byte offset, or npos when the error is
// structural (missing key, wrong type) rather than lexical.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t position = npos)
      : Error(position == npos ? what
                               : what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct Violation {
  std::string where;
  std::string message;

  std::string str() const { return where + ": " + message; }
  bool operator==(const Violation&) const = default;
};

inline std::string join_violations(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += v.str();
  }
  return out;
}

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error("invalid input: " + join_violations(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// The policy space of an exhaustive enumeration is larger than allowed.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t required, std::uint64_t cap)
      : Error("policy space of " +
              (required == UINT64_MAX ? std::string("> 2^64") : std::to_string(required)) +
              " exceeds cap " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An internal cross-check failed; indicates a bug, never bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tailgame
