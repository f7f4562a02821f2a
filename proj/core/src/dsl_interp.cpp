#include "metaforge/dsl_interp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "metaforge/errors.hpp"

namespace metaforge {

namespace {

std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

// Values flowing between steps. Most steps produce one text; FANOUT produces
// one per sample.
using StepValue = std::vector<std::string>;

std::string join_values(const StepValue& v) {
    if (v.size() == 1) return v[0];
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << "\n---\n";
        os << v[i];
    }
    return os.str();
}

class Interpreter {
  public:
    Interpreter(const DslProgram& program, const std::string& question, ModelBackend& backend,
                const ExecOptions& opts)
        : program_(program), question_(question), backend_(backend), opts_(opts) {}

    ExecResult run() {
        for (const auto& step : program_.steps) {
            values_[step.id] = eval_step(step);
        }
        ExecResult result;
        result.answer = extract_answer(join_values(values_.at(program_.output_step)));
        result.usage = std::move(usage_);
        return result;
    }

  private:
    std::string substitute(std::string_view tmpl) const {
        std::string out;
        out.reserve(tmpl.size());
        std::size_t pos = 0;
        while (pos < tmpl.size()) {
            auto open = tmpl.find('{', pos);
            if (open == std::string_view::npos) {
                out.append(tmpl.substr(pos));
                break;
            }
            out.append(tmpl.substr(pos, open - pos));
            auto close = tmpl.find('}', open);
            if (close == std::string_view::npos) {
                out.append(tmpl.substr(open));
                break;
            }
            std::string_view key = tmpl.substr(open + 1, close - open - 1);
            if (key == "question") {
                out.append(question_);
            } else if (key.rfind("step:", 0) == 0) {
                out.append(join_values(values_.at(std::string(key.substr(5)))));
            } else {
                // Unknown placeholder: leave as-is (may be a literal brace use).
                out.append(tmpl.substr(open, close - open + 1));
            }
            pos = close + 1;
        }
        return out;
    }

    std::string call_model(const std::string& prompt, const std::string& role,
                           std::optional<double> temperature) {
        ModelCall call;
        call.model_id = opts_.worker_model;
        std::string system = "You are a careful problem solver.";
        if (!role.empty()) system = "You are " + role + ". Stay in that role.";
        call.messages.push_back({"system", system});
        call.messages.push_back({"user", prompt});
        call.temperature = temperature.value_or(opts_.default_temperature);
        call.max_tokens = opts_.max_tokens;

        CallContext ctx = opts_.context;
        ctx.counter = next_counter_++;
        Completion c;
        try {
            c = backend_.complete(call, ctx);
        } catch (const Error& e) {
            throw ExecutionFailure(std::string("model call failed: ") + e.what(),
                                   std::move(usage_));
        }
        usage_.add({call.model_id, c.tokens_in, c.tokens_out});
        return c.text;
    }

    StepValue eval_step(const DslStep& step) {
        return std::visit([&](const auto& p) { return eval(p); }, step.params);
    }

    StepValue eval(const GenParams& p) {
        return {call_model(substitute(p.prompt), p.role, p.temperature)};
    }

    StepValue eval(const FanoutParams& p) {
        StepValue out;
        std::string prompt = substitute(p.prompt);
        for (int i = 0; i < p.samples; ++i) {
            out.push_back(call_model(prompt, "", p.temperature));
        }
        return out;
    }

    // Plurality over extracted answers; ties keep the earliest candidate.
    // The winner's full text is passed on so downstream steps see its
    // reasoning, not just the answer line.
    StepValue eval(const VoteParams& p) {
        std::vector<std::string> candidates = gather(p.inputs);
        std::map<std::string, int> counts;
        for (const auto& c : candidates) counts[extract_answer(c)]++;
        const std::string* best = nullptr;
        int best_count = 0;
        for (const auto& c : candidates) {
            int n = counts[extract_answer(c)];
            if (n > best_count) {
                best_count = n;
                best = &c;
            }
        }
        return {best ? *best : std::string{}};
    }

    StepValue eval(const JudgeParams& p) {
        std::string prompt = p.prompt.empty()
                                 ? "Question: {question}\n"
                                   "Candidate answers:\n{candidates}\n"
                                   "Select or synthesize the single best final answer. Finish "
                                   "with a final line of the form ANSWER: <your answer>."
                                 : p.prompt;
        prompt = substitute(prompt);
        std::string rendered = render_candidates(gather(p.inputs));
        replace_all(prompt, "{candidates}", rendered);
        return {call_model(prompt, "", std::nullopt)};
    }

    StepValue eval(const RefineLoopParams& p) {
        std::string draft;
        int rounds_left = p.rounds;
        if (!p.input.empty()) {
            draft = join_values(values_.at(p.input));
        } else {
            draft = call_model(substitute(p.prompt), "", std::nullopt);
            rounds_left -= 1;  // the draft consumes the first round
        }
        std::string revise_tmpl =
            p.revise_prompt.empty()
                ? "Question: {question}\n"
                  "Current answer:\n{draft}\n"
                  "Critique the answer above, fix any mistakes, and give an improved "
                  "answer. Finish with a final line of the form ANSWER: <your answer>."
                : p.revise_prompt;
        for (int i = 0; i < rounds_left; ++i) {
            std::string prompt = substitute(revise_tmpl);
            replace_all(prompt, "{draft}", draft);
            draft = call_model(prompt, "", std::nullopt);
        }
        return {draft};
    }

    StepValue eval(const RouteParams& p) {
        std::string roster;
        for (std::size_t i = 0; i < p.experts.size(); ++i) {
            if (i) roster += ", ";
            roster += p.experts[i];
        }
        std::string prompt = p.prompt.empty()
                                 ? "Available experts: {experts}.\n"
                                   "Question: {question}\n"
                                   "Pick the expert best suited to this question, then answer "
                                   "exactly as that expert would. Finish with a final line of "
                                   "the form ANSWER: <your answer>."
                                 : p.prompt;
        prompt = substitute(prompt);
        replace_all(prompt, "{experts}", roster);
        return {call_model(prompt, "", std::nullopt)};
    }

    std::vector<std::string> gather(const std::vector<std::string>& inputs) const {
        std::vector<std::string> out;
        for (const auto& id : inputs) {
            const StepValue& v = values_.at(id);
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    static std::string render_candidates(const std::vector<std::string>& candidates) {
        std::ostringstream os;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            os << "[Candidate " << (i + 1) << "]\n" << candidates[i] << "\n";
        }
        return os.str();
    }

    static void replace_all(std::string& s, std::string_view needle, std::string_view repl) {
        std::size_t pos = 0;
        while ((pos = s.find(needle, pos)) != std::string::npos) {
            s.replace(pos, needle.size(), repl);
            pos += repl.size();
        }
    }

    const DslProgram& program_;
    const std::string& question_;
    ModelBackend& backend_;
    const ExecOptions& opts_;
    std::map<std::string, StepValue> values_;
    UsageLedger usage_;
    std::uint64_t next_counter_ = 0;
};

}  // namespace

std::string extract_answer(std::string_view text) {
    std::string_view marker = "ANSWER:";
    std::size_t best = std::string_view::npos;
    std::size_t pos = 0;
    while ((pos = text.find(marker, pos)) != std::string_view::npos) {
        // Accept only at the start of a line (ignoring leading whitespace).
        std::size_t line_start = text.rfind('\n', pos);
        line_start = (line_start == std::string_view::npos) ? 0 : line_start + 1;
        std::string_view prefix = text.substr(line_start, pos - line_start);
        if (prefix.find_first_not_of(" \t") == std::string_view::npos) best = pos;
        pos += marker.size();
    }
    if (best == std::string_view::npos) return trim(text);
    std::size_t start = best + marker.size();
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    return trim(text.substr(start, end - start));
}

ExecResult dsl_execute(const DslProgram& program, const std::string& question,
                       ModelBackend& backend, const ExecOptions& opts) {
    return Interpreter(program, question, backend, opts).run();
}

}  // namespace metaforge
