// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace contraflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Anything wrong with the detection stream. Maps to CLI exit code 3.
class StreamError : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public StreamError {
 public:
  MalformedRecord(std::size_t line, const std::string& why)
      : StreamError("malformed record at line " + std::to_string(line) + ": " + why), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonMonotonicFrame : public StreamError {
 public:
  NonMonotonicFrame(std::uint64_t frame, std::size_t line)
      : StreamError("frame index " + std::to_string(frame) + " at line " + std::to_string(line) +
                    " goes backwards"),
        frame_(frame) {}

  std::uint64_t frame() const { return frame_; }

 private:
  std::uint64_t frame_;
};

/// Maps to CLI exit code 2. `field()` is the dotted path of the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& why)
      : Error("config error at '" + field + "': " + why), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Maps to CLI exit code 4.
class SinkIoError : public Error {
 public:
  using Error::Error;
};

class DuplicateViolation : public Error {
 public:
  explicit DuplicateViolation(std::uint64_t track_id)
      : Error("violation already emitted for track " + std::to_string(track_id)), track_id_(track_id) {}

  std::uint64_t track_id() const { return track_id_; }

 private:
  std::uint64_t track_id_;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace contraflow
