#pragma once

#include <string>
#include <string_view>

#include "metaforge/backend.hpp"
#include "metaforge/dsl.hpp"
#include "metaforge/usage.hpp"

namespace metaforge {

struct ExecOptions {
    std::string worker_model = "sim-worker";
    double default_temperature = 0.7;
    int max_tokens = 1024;
    // Base identity for this execution's calls; the interpreter fills in the
    // per-call counter.
    CallContext context;
};

struct ExecResult {
    std::string answer;
    UsageLedger usage;
};

// Last line of the form "ANSWER: <x>"; falls back to the whole trimmed text.
std::string extract_answer(std::string_view text);

// Runs a validated program against a backend. Pure function of
// (program, question) for a deterministic backend and fixed context. Backend
// failures surface as Error{execution_failed} carrying usage accrued so far.
ExecResult dsl_execute(const DslProgram& program, const std::string& question,
                       ModelBackend& backend, const ExecOptions& opts = {});

class ExecutionFailure : public Error {
  public:
    ExecutionFailure(const std::string& what, UsageLedger usage)
        : Error(Errc::execution_failed, what), usage_(std::move(usage)) {}

    const UsageLedger& usage() const { return usage_; }

  private:
    UsageLedger usage_;
};

}  // namespace metaforge
