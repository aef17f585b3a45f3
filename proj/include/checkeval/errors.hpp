#pragma once

#include <stdexcept>
#include <string>

namespace checkeval {

enum class errc {
  invalid_argument,
  not_found,
  conflict,
  parse,
  config,
  backend,
  replay_miss,
  empty_checklist,
  unparseable_verdicts,
  undefined_correlation,
  io,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace checkeval
