#pragma once

#include <stdexcept>
#include <string>

namespace vifnet {

// Error taxonomy used across the library. The CLI maps these onto exit codes.
struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateTransmissionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorruptModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when training hits a non-finite loss; carries the last checkpoint
// that was still healthy so a run can be resumed or inspected.
struct DivergedTrainingError : std::runtime_error {
  DivergedTrainingError(const std::string& what, std::string last_good)
      : std::runtime_error(what), last_good_checkpoint(std::move(last_good)) {}
  std::string last_good_checkpoint;
};

}  // namespace vifnet
