#pragma once

#include <stdexcept>
#include <string>

namespace fedq {

enum class errc {
	mismatch,     // incompatible chart / ring / context
	domain,       // index out of range, bad degree, malformed input
	unsupported,  // operation not available in this mode
	precondition, // a documented precondition failed (carries detail)
	parse,        // expression / scenario syntax error
	solver,       // linear solve or recursion did not close
	internal      // invariant broken; indicates a bug upstream
};

class Error : public std::runtime_error {
  public:
	Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
	errc code() const { return code_; }

  private:
	errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string &msg) { throw Error(code, msg); }

} // namespace fedq
