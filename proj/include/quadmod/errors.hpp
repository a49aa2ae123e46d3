#pragma once

#include <stdexcept>
#include <string>

namespace quadmod {

enum class Errc {
  DegenerateVertices,
  SelfIntersecting,
  NegativeOrientation,
  InvalidTarget,
  OutOfRange,
  Degenerate,
  NotAdmissible,
  NoBracket,
  ClosureFailure,
  NonIntegrable,
  MeshFailure,
  SingularSystem,
  ToleranceNotReached,
  UnknownCheck,
  UnknownFamily,
  InvalidConfig,
};

const char* to_string(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace quadmod
