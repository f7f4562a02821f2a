#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace metaforge {

// Agents are closed workflow documents instead of free-form code: a short
// pipeline of model-call steps that is cheap to validate and safe to run
// inside the search loop. Steps may only reference steps defined before
// them, so accepted programs are acyclic by construction.

enum class DslOp { gen, vote, judge, refine_loop, route, fanout };

const char* to_string(DslOp op);
std::optional<DslOp> dsl_op_from_string(const std::string& s);

// One model call. Prompt templates may use {question} and {step:<id>}.
struct GenParams {
    std::string prompt;
    std::optional<double> temperature;
    std::string role;  // optional persona put into the system message

    bool operator==(const GenParams&) const = default;
};

// Plurality vote over the extracted answers of the input steps' values.
// No model call; ties go to the earliest candidate.
struct VoteParams {
    std::vector<std::string> inputs;

    bool operator==(const VoteParams&) const = default;
};

// One model call that selects or synthesizes the best of the candidates.
// Prompt may use {question} and {candidates}; empty prompt uses a default.
struct JudgeParams {
    std::vector<std::string> inputs;
    std::string prompt;

    bool operator==(const JudgeParams&) const = default;
};

// Iterative self-revision, one model call per round. The first round drafts
// from `prompt` unless `input` names a prior step to start from.
struct RefineLoopParams {
    std::string input;
    std::string prompt;
    int rounds = 1;
    std::string revise_prompt;  // may use {question} and {draft}

    bool operator==(const RefineLoopParams&) const = default;
};

// Single call that picks the best-suited expert persona and answers as it.
struct RouteParams {
    std::vector<std::string> experts;
    std::string prompt;  // may use {question} and {experts}

    bool operator==(const RouteParams&) const = default;
};

// `samples` parallel completions of the same prompt; value is the sample list.
struct FanoutParams {
    std::string prompt;
    int samples = 2;
    std::optional<double> temperature;

    bool operator==(const FanoutParams&) const = default;
};

using DslParams =
    std::variant<GenParams, VoteParams, JudgeParams, RefineLoopParams, RouteParams, FanoutParams>;

struct DslStep {
    std::string id;
    DslOp op;
    DslParams params;

    bool operator==(const DslStep&) const = default;
};

struct DslProgram {
    std::vector<DslStep> steps;
    std::string output_step;

    bool operator==(const DslProgram&) const = default;
};

// Bounds on sampled programs; they cap the worst-case cost of one execution.
inline constexpr int kMaxRefineRounds = 5;
inline constexpr int kMaxFanoutSamples = 16;

struct ParseIssue {
    std::string location;  // e.g. "steps[2].params.samples"
    std::string code;      // stable machine-readable code
    std::string message;
};

// Error codes used in ParseIssue::code.
namespace parse_errc {
inline constexpr const char* malformed_document = "malformed_document";
inline constexpr const char* unknown_op = "unknown_op";
inline constexpr const char* duplicate_step_id = "duplicate_step_id";
inline constexpr const char* dangling_reference = "dangling_reference";
inline constexpr const char* cycle = "cycle";
inline constexpr const char* missing_output_step = "missing_output_step";
inline constexpr const char* invalid_params = "invalid_params";
}  // namespace parse_errc

struct ParseReport {
    bool ok = false;
    std::vector<ParseIssue> errors;

    // Rendering suitable for feeding back to the sampling model verbatim.
    std::string to_text() const;
};

struct ParseResult {
    std::optional<DslProgram> program;  // set iff report.ok
    ParseReport report;
};

// Accepts a raw JSON document, a ```json fenced block, or JSON embedded in
// surrounding prose (first '{' to last '}').
ParseResult dsl_parse(std::string_view text);

nlohmann::json program_to_json(const DslProgram& p);
std::string dsl_serialize(const DslProgram& p);

// Upper bound on model calls one execution of `p` may make.
std::int64_t call_budget(const DslProgram& p);

// Step ids referenced by a step: explicit inputs plus {step:<id>} placeholders.
std::vector<std::string> step_references(const DslStep& step);

// {step:<id>} placeholders appearing in a template string, in text order.
std::vector<std::string> placeholder_references(std::string_view tmpl);

}  // namespace metaforge
