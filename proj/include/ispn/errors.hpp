#pragma once

#include <stdexcept>
#include <string>

namespace ispn {

// Base for all library errors so callers can catch one type at the boundary.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- model / graph construction ---------------------------------------------

struct CycleError : Error {
  explicit CycleError(const std::string& msg) : Error(msg) {}
};

struct UnknownVariable : Error {
  explicit UnknownVariable(const std::string& msg) : Error(msg) {}
};

struct MechanismMismatch : Error {
  explicit MechanismMismatch(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// -- file formats ------------------------------------------------------------

struct ParseError : Error {
  ParseError(const std::string& where, int line, const std::string& msg)
      : Error(where + ":" + std::to_string(line) + ": " + msg), line_no(line) {}
  int line_no;
};

struct FormatError : Error {
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// -- exact inference ---------------------------------------------------------

struct TooLarge : Error {
  explicit TooLarge(const std::string& msg) : Error(msg) {}
};

struct InconsistentEvidence : Error {
  explicit InconsistentEvidence(const std::string& msg) : Error(msg) {}
};

struct ZeroSupport : Error {
  explicit ZeroSupport(const std::string& msg) : Error(msg) {}
};

// -- circuits / gate / training ----------------------------------------------

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

struct InvalidCircuit : Error {
  explicit InvalidCircuit(const std::string& msg) : Error(msg) {}
};

struct NonFiniteLoss : Error {
  explicit NonFiniteLoss(const std::string& msg) : Error(msg) {}
};

struct CheckpointError : Error {
  explicit CheckpointError(const std::string& msg) : Error(msg) {}
};

// -- cli / configuration ------------------------------------------------------

struct BadRegimeSpec : Error {
  explicit BadRegimeSpec(const std::string& msg) : Error(msg) {}
};

struct UnknownDataset : Error {
  explicit UnknownDataset(const std::string& msg) : Error(msg) {}
};

// Subtype of CheckpointError: recorded structure hash disagrees with the
// structure actually stored (or with a sibling checkpoint's).
struct HashMismatch : CheckpointError {
  explicit HashMismatch(const std::string& msg) : CheckpointError(msg) {}
};

struct UnknownRegime : Error {
  explicit UnknownRegime(const std::string& msg) : Error(msg) {}
};

}  // namespace ispn
