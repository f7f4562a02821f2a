#include "metaforge/sim_backend.hpp"

#include <cmath>
#include <sstream>

#include "metaforge/builtins.hpp"
#include "metaforge/dsl.hpp"
#include "metaforge/errors.hpp"
#include "metaforge/hashing.hpp"

namespace metaforge {

namespace {

// Domain-separation salts for the hash streams.
constexpr std::uint64_t kSaltSkill = 0x736b696c6cULL;
constexpr std::uint64_t kSaltDifficulty = 0x64696666ULL;
constexpr std::uint64_t kSaltDraw = 0x64726177ULL;
constexpr std::uint64_t kSaltMeta = 0x6d657461ULL;

void validate(const ModelCall& call) {
    if (call.messages.empty()) {
        throw Error(Errc::invalid_call, "model call carries no messages");
    }
}

std::uint64_t meta_stream(const CallContext& ctx, std::uint64_t backend_seed,
                          std::uint64_t lane) {
    std::uint64_t h = hash_mix(backend_seed, ctx.seed);
    h = hash_mix(h, fnv1a64(ctx.unit_id));
    h = hash_mix(h, ctx.counter);
    h = hash_mix(h, kSaltMeta);
    return hash_mix(h, lane);
}

// Mutations applied by the simulated meta model. Each preserves validity.
enum class Mutation { fanout_samples, refine_rounds, swap_aggregator, perturb_prompt };

const char* mutation_name(Mutation m) {
    switch (m) {
        case Mutation::fanout_samples: return "fanout-samples";
        case Mutation::refine_rounds: return "refine-rounds";
        case Mutation::swap_aggregator: return "swap-aggregator";
        case Mutation::perturb_prompt: return "perturb-prompt";
    }
    return "perturb-prompt";
}

bool apply_mutation(DslProgram& prog, Mutation m, std::uint64_t h) {
    switch (m) {
        case Mutation::fanout_samples:
            for (auto& step : prog.steps) {
                if (auto* f = std::get_if<FanoutParams>(&step.params)) {
                    f->samples = 2 + static_cast<int>(h % (kMaxFanoutSamples - 1));
                    return true;
                }
            }
            return false;
        case Mutation::refine_rounds:
            for (auto& step : prog.steps) {
                if (auto* r = std::get_if<RefineLoopParams>(&step.params)) {
                    r->rounds = 1 + static_cast<int>(h % kMaxRefineRounds);
                    return true;
                }
            }
            return false;
        case Mutation::swap_aggregator:
            for (auto& step : prog.steps) {
                if (auto* v = std::get_if<VoteParams>(&step.params)) {
                    JudgeParams j;
                    j.inputs = v->inputs;
                    step.params = std::move(j);
                    return true;
                }
                if (auto* j = std::get_if<JudgeParams>(&step.params)) {
                    VoteParams v2;
                    v2.inputs = j->inputs;
                    step.params = std::move(v2);
                    return true;
                }
            }
            return false;
        case Mutation::perturb_prompt:
            for (auto& step : prog.steps) {
                std::string suffix =
                    " Double-check boundary cases before concluding (variant " +
                    std::to_string(1 + h % 97) + ").";
                if (auto* g = std::get_if<GenParams>(&step.params)) {
                    g->prompt += suffix;
                    return true;
                }
                if (auto* f = std::get_if<FanoutParams>(&step.params)) {
                    f->prompt += suffix;
                    return true;
                }
                if (auto* r = std::get_if<RefineLoopParams>(&step.params)) {
                    if (!r->prompt.empty()) {
                        r->prompt += suffix;
                        return true;
                    }
                }
            }
            return false;
    }
    return false;
}

}  // namespace

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sim_skill(std::uint64_t agent_hash, std::uint64_t seed) {
    double u = unit_interval(hash_mix(hash_mix(seed, kSaltSkill), agent_hash));
    return 3.0 * (u - 0.5);
}

double sim_difficulty(std::string_view question_id, std::uint64_t seed) {
    double u = unit_interval(hash_mix(hash_mix(seed, kSaltDifficulty), fnv1a64(question_id)));
    return 3.0 * (u - 0.5);
}

bool sim_correct_draw(double delta, std::uint64_t agent_hash, std::string_view question_id,
                      std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t h = hash_mix(hash_mix(seed, kSaltDraw), agent_hash);
    h = hash_mix(h, fnv1a64(question_id));
    h = hash_mix(h, counter);
    return unit_interval(h) < sigmoid(delta);
}

bool sim_answer_policy(std::uint64_t agent_hash, std::string_view question_id,
                       std::uint64_t seed) {
    double delta = sim_skill(agent_hash, seed) - sim_difficulty(question_id, seed);
    return sim_correct_draw(delta, agent_hash, question_id, seed, 0);
}

std::int64_t sim_token_count(std::string_view text) {
    return static_cast<std::int64_t>((text.size() + 3) / 4);
}

Completion SimBackend::complete(const ModelCall& call, const CallContext& ctx) {
    validate(call);
    if (call.model_id == opts_.meta_model) return meta_response(call, ctx);
    return worker_response(call, ctx);
}

Completion SimBackend::worker_response(const ModelCall& call, const CallContext& ctx) const {
    std::uint64_t seed = hash_mix(opts_.seed, ctx.seed);
    std::ostringstream text;

    if (ctx.expected.empty()) {
        text << "Considering the request as stated.\nANSWER: unknown";
    } else {
        double delta =
            sim_skill(ctx.agent_hash, seed) - sim_difficulty(ctx.unit_id, seed);
        bool correct = sim_correct_draw(delta, ctx.agent_hash, ctx.unit_id, seed, ctx.counter);

        std::uint64_t style = hash_mix(hash_mix(seed, ctx.agent_hash), ctx.counter);
        int filler_lines = 1 + static_cast<int>(style % 3);
        for (int i = 0; i < filler_lines; ++i) {
            text << "Working note " << (i + 1) << ": narrowing down the candidates.\n";
        }
        text << "ANSWER: " << (correct ? ctx.expected : ctx.distractor);
    }

    Completion c;
    c.text = text.str();
    for (const auto& m : call.messages) c.tokens_in += sim_token_count(m.content);
    c.tokens_out = sim_token_count(c.text);
    return c;
}

Completion SimBackend::meta_response(const ModelCall& call, const CallContext& ctx) const {
    std::ostringstream text;

    double malformed_u = unit_interval(meta_stream(ctx, opts_.seed, 0));
    if (malformed_u < opts_.malformed_rate) {
        // Deliberately truncated document: nothing brace-balanced to salvage.
        text << "Thought: a new architecture combining sampling and critique.\n"
             << "\"steps\": [ \"id\": \"s1\", \"op\": \"GEN\" ...";
    } else {
        auto library = builtin_library();
        std::size_t base_idx =
            static_cast<std::size_t>(meta_stream(ctx, opts_.seed, 1) % library.size());
        const AgentRecord& base = library[base_idx];
        DslProgram prog = *base.program;

        auto kind = static_cast<Mutation>(meta_stream(ctx, opts_.seed, 2) % 4);
        std::uint64_t magnitude = meta_stream(ctx, opts_.seed, 3);
        if (!apply_mutation(prog, kind, magnitude)) {
            kind = Mutation::perturb_prompt;
            apply_mutation(prog, kind, magnitude);
        }

        text << "Thought: start from " << base.name << " and adjust it ("
             << mutation_name(kind) << ").\n"
             << "```json\n"
             << dsl_serialize(prog) << "\n```";
    }

    Completion c;
    c.text = text.str();
    for (const auto& m : call.messages) c.tokens_in += sim_token_count(m.content);
    c.tokens_out = sim_token_count(c.text);
    return c;
}

void ScriptedBackend::push_response(std::string text) {
    std::lock_guard<std::mutex> lock(mu_);
    responses_.push_back(std::move(text));
}

Completion ScriptedBackend::complete(const ModelCall& call, const CallContext&) {
    validate(call);
    std::lock_guard<std::mutex> lock(mu_);
    if (responses_.empty()) {
        throw Error(Errc::transport_error, "scripted backend has no responses left");
    }
    Completion c;
    c.text = std::move(responses_.front());
    responses_.pop_front();
    for (const auto& m : call.messages) c.tokens_in += sim_token_count(m.content);
    c.tokens_out = sim_token_count(c.text);
    return c;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mu_);
    return responses_.size();
}

}  // namespace metaforge
