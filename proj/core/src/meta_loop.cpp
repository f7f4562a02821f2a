#include "metaforge/meta_loop.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include "metaforge/builtins.hpp"
#include "metaforge/dsl_interp.hpp"
#include "metaforge/errors.hpp"
#include "metaforge/evaluate.hpp"
#include "metaforge/hashing.hpp"

namespace metaforge {

namespace {

constexpr const char* kGrammarBrief = R"(A program is a JSON document:
  {"steps": [{"id": "<unique id>", "op": "<OP>", "params": {...}}, ...], "output": "<id>"}
Steps run in order and may only reference earlier steps. Ops and params:
  GEN         {"prompt": str, "temperature"?: num, "role"?: str}   one model call
  FANOUT      {"prompt": str, "samples": int 2..16, "temperature"?: num}   parallel samples
  VOTE        {"inputs": [ids]}   plurality vote over the inputs' answers, no model call
  JUDGE       {"inputs": [ids], "prompt"?: str}   model call choosing the best candidate
  REFINE_LOOP {"prompt" or "input": ..., "rounds": int 1..5, "revise_prompt"?: str}
  ROUTE       {"experts": [>=2 role strings], "prompt"?: str}   answer as the fittest expert
Prompts may use {question} and {step:<id>}; JUDGE prompts may use {candidates};
REFINE_LOOP revise prompts may use {draft}; ROUTE prompts may use {experts}.
The answer is read from the output step's final line "ANSWER: <answer>".)";

std::string format_mean(double mean) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", mean);
    return buf;
}

std::string iso8601_now() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

std::string agent_id_for(int iteration) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%03d", iteration);
    return buf;
}

std::string first_line(const std::string& text, std::size_t max_len = 160) {
    auto end = text.find('\n');
    std::string line = text.substr(0, end == std::string::npos ? text.size() : end);
    if (line.size() > max_len) line = line.substr(0, max_len);
    return line;
}

MicroUsd meta_call_cost(const Completion& c, const SearchConfig& cfg,
                        const PricingTable& pricing) {
    return call_cost(UsageEntry{cfg.meta_model, c.tokens_in, c.tokens_out}, pricing);
}

}  // namespace

std::string build_meta_prompt(const CuratedContext& ctx, const SearchConfig&) {
    std::ostringstream os;
    os << "You design question-answering agents expressed as workflow programs.\n\n"
       << kGrammarBrief << "\n\n";
    if (ctx.records.empty()) {
        os << "No previously evaluated agents are available.\n";
    } else {
        os << "Previously evaluated agents (mean train score in [0,1]):\n";
        for (const auto& rec : ctx.records) {
            os << "\n### " << rec.name << " (score " << format_mean(rec.mean_score()) << ")\n";
            os << (rec.program ? dsl_serialize(*rec.program) : "(no valid program)") << "\n";
        }
    }
    os << "\nDesign one new agent that improves on these. Respond with exactly one "
          "program document in a ```json fenced block and nothing else.";
    return os.str();
}

SampleOutcome sample_agent(const CuratedContext& ctx, const SearchConfig& cfg,
                           ModelBackend& backend, const PricingTable& pricing,
                           const Example& probe, int iteration) {
    SampleOutcome out;
    out.log.iteration = iteration;

    const std::string base_prompt = build_meta_prompt(ctx, cfg);
    out.log.prompt_chars = static_cast<std::int64_t>(base_prompt.size());

    std::string feedback;
    std::string last_meta_text;
    MicroUsd sample_cost = 0;

    std::optional<DslProgram> accepted;
    int attempts = 0;

    for (int attempt = 0; attempt <= cfg.max_revisions; ++attempt) {
        attempts = attempt + 1;

        ModelCall call;
        call.model_id = cfg.meta_model;
        call.temperature = cfg.meta_temperature;
        call.max_tokens = cfg.meta_max_tokens;
        call.messages.push_back(
            {"system", "You are an architect of language-model agent workflows."});
        std::string user = base_prompt;
        if (!feedback.empty()) {
            user += "\n\nYour previous response could not be used:\n" + feedback +
                    "\nEmit a corrected program document.";
        }
        call.messages.push_back({"user", user});

        CallContext meta_ctx;
        meta_ctx.unit_id = "meta:t=" + std::to_string(iteration) + ":a=" + std::to_string(attempt);
        meta_ctx.seed = cfg.seed;

        Completion c = backend.complete(call, meta_ctx);
        sample_cost += meta_call_cost(c, cfg, pricing);
        last_meta_text = c.text;

        ParseResult parsed = dsl_parse(c.text);
        if (!parsed.report.ok) {
            feedback = parsed.report.to_text();
            continue;
        }

        // Debug step: run the candidate once before paying for a full
        // evaluation; execution failures go back to the model as feedback.
        ExecOptions exec;
        exec.worker_model = cfg.worker_model;
        exec.default_temperature = cfg.worker_temperature;
        exec.max_tokens = cfg.worker_max_tokens;
        exec.context.agent_hash = fnv1a64(dsl_serialize(*parsed.program));
        exec.context.unit_id =
            "probe:t=" + std::to_string(iteration) + ":a=" + std::to_string(attempt);
        exec.context.seed = cfg.seed;
        exec.context.expected = probe.gold.empty() ? std::string{} : probe.gold.front();
        exec.context.distractor = sim_distractor_for(probe);

        try {
            ExecResult probe_result = dsl_execute(*parsed.program, probe.question, backend, exec);
            sample_cost += ledger_cost(probe_result.usage, pricing);
        } catch (const ExecutionFailure& e) {
            sample_cost += ledger_cost(e.usage(), pricing);
            feedback = std::string("the program failed while running: ") + e.what();
            continue;
        }

        accepted = std::move(parsed.program);
        break;
    }

    out.record.id = agent_id_for(iteration);
    out.record.name = "designed_" + out.record.id;
    out.record.source = AgentSource::meta_sampled;
    out.record.iteration = iteration;
    out.record.design_cost = sample_cost;
    out.record.notes = first_line(last_meta_text);
    if (accepted) {
        out.record.program = std::move(accepted);
    } else {
        out.record.notes = "rejected after " + std::to_string(attempts) +
                           " attempts; last feedback: " + first_line(feedback);
    }

    out.log.revisions_used = attempts - 1;
    out.log.parse_ok = out.record.program.has_value();
    out.log.sample_cost = sample_cost;
    out.log.agent_id = out.record.id;
    return out;
}

RunResult run_search(const SearchConfig& cfg, const DatasetSplits& splits,
                     ModelBackend& backend, const PricingTable& pricing,
                     RunObserver* observer, std::optional<RunState> resume) {
    if (cfg.iterations < 0) {
        throw Error(Errc::bad_config, "iteration count must be >= 0");
    }
    if (splits.train.examples.empty()) {
        throw Error(Errc::dataset_not_found, "training split is empty");
    }

    RunResult result;
    result.manifest.run_id = cfg.run_id;
    result.manifest.dataset_id = splits.train.id;
    result.manifest.curation_mode = cfg.curation;
    result.manifest.iterations = cfg.iterations;
    result.manifest.seed = cfg.seed;
    result.manifest.worker_model_id = cfg.worker_model;
    result.manifest.meta_model_id = cfg.meta_model;
    result.manifest.pricing_table_ref = cfg.pricing_table_ref;
    result.manifest.started_at = iso8601_now();

    EvalOptions eval_opts;
    eval_opts.seed = cfg.seed;
    eval_opts.parallelism = cfg.parallelism;
    eval_opts.worker_model = cfg.worker_model;
    eval_opts.worker_temperature = cfg.worker_temperature;
    eval_opts.worker_max_tokens = cfg.worker_max_tokens;

    if (resume) {
        result.archive = std::move(resume->archive);
        result.logs = std::move(resume->logs);
        result.manifest.library_eval_cost = resume->library_eval_cost;
        result.manifest.library_eval_cached = resume->library_eval_cached;
    } else {
        // Score the initial library once; the archive assumes those scores
        // exist before the first iteration.
        std::vector<AgentRecord> library = builtin_library();
        std::vector<ScoreVector> scores;
        MicroUsd library_cost = 0;
        for (auto& rec : library) {
            EvalResult ev = evaluate_agent(rec, splits.train, backend, eval_opts);
            library_cost += ledger_cost(ev.usage, pricing);
            rec.design_cost = 0;
            scores.push_back(std::move(ev.scores));
        }
        result.archive = Archive::init(std::move(library), std::move(scores));
        result.manifest.library_eval_cost = library_cost;
        result.manifest.library_eval_cached = false;
    }

    if (observer) observer->on_initialized(result.archive, result.manifest.library_eval_cost);

    const Example& probe = splits.train.examples.front();
    int start_iteration = static_cast<int>(result.logs.size()) + 1;

    for (int t = start_iteration; t <= cfg.iterations; ++t) {
        CuratedContext ctx = curate(result.archive, cfg.curation, cfg.top_k);

        SampleOutcome sampled = sample_agent(ctx, cfg, backend, pricing, probe, t);

        if (sampled.record.valid()) {
            EvalResult ev = evaluate_agent(sampled.record, splits.train, backend, eval_opts);
            sampled.record.train_scores = std::move(ev.scores);
            sampled.log.eval_cost = ledger_cost(ev.usage, pricing);
        } else {
            // Rejected designs still enter the archive, with zero scores.
            ScoreVector zeros;
            zeros.dataset_id = splits.train.id;
            zeros.values.assign(splits.train.examples.size(), 0.0);
            sampled.record.train_scores = std::move(zeros);
            sampled.log.eval_cost = 0;
        }

        result.archive.append(sampled.record);
        result.logs.push_back(sampled.log);

        if (observer &&
            !observer->on_iteration(ctx, result.archive.entries().back(), sampled.log)) {
            break;
        }
    }

    result.manifest.finished_at = iso8601_now();
    return result;
}

}  // namespace metaforge
