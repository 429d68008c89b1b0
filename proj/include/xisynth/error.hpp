#pragma once

#include <stdexcept>
#include <string>

namespace xisynth {

enum class ErrorCode {
    kUnsupported,      // unknown field, gate, gate set or kind/field pairing
    kFieldMismatch,    // gate or matrix entries not available in a field
    kDimension,        // shape mismatch
    kNotDivisible,     // exact division by a power of xi failed
    kBoundExceeded,    // modular working precision too small
    kInvalidArgument,  // malformed input (bad permutation, bad seed, ...)
    kParse,            // file could not be parsed
    kUnknownLabel,     // circuit label not in gate set
    kGateSetMismatch,  // circuit built for a different gate set
    kBudgetExhausted,  // search node or time cap reached
    kNoReduction,      // best-first sweep found no reducing generator
    kInvariant,        // internal consistency check failed
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace xisynth
