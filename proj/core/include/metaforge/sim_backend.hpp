#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>

#include "metaforge/backend.hpp"

namespace metaforge {

// Desk-scale stand-in for hosted models. Worker answers are drawn from a
// logistic skill/difficulty model; meta answers are seeded mutations of the
// builtin library. Everything is a pure function of (call, context), so the
// backend is stateless and safe for concurrent use.

double sigmoid(double x);

// Latent ability of an agent, uniform in [-1.5, 1.5].
double sim_skill(std::uint64_t agent_hash, std::uint64_t seed);

// Latent hardness of a question, uniform in [-1.5, 1.5].
double sim_difficulty(std::string_view question_id, std::uint64_t seed);

// One Bernoulli draw: true with probability sigmoid(delta). The counter
// distinguishes successive calls within the same unit of work.
bool sim_correct_draw(double delta, std::uint64_t agent_hash, std::string_view question_id,
                      std::uint64_t seed, std::uint64_t counter);

// Whether this agent answers this question correctly on its first draw.
bool sim_answer_policy(std::uint64_t agent_hash, std::string_view question_id,
                       std::uint64_t seed);

struct SimBackendOptions {
    std::string worker_model = "sim-worker";
    std::string meta_model = "sim-meta";
    std::uint64_t seed = 0;
    // Probability that a meta-model response carries no parseable program,
    // exercising the revise/debug path. 0 disables, 1 forces.
    double malformed_rate = 0.10;
};

class SimBackend : public ModelBackend {
  public:
    explicit SimBackend(SimBackendOptions opts = {}) : opts_(std::move(opts)) {}

    Completion complete(const ModelCall& call, const CallContext& ctx) override;

    const SimBackendOptions& options() const { return opts_; }

  private:
    Completion meta_response(const ModelCall& call, const CallContext& ctx) const;
    Completion worker_response(const ModelCall& call, const CallContext& ctx) const;

    SimBackendOptions opts_;
};

// Replays a fixed list of responses in order; for tests that need exact
// model behavior. Token counts follow the simulator's chars/4 rule.
class ScriptedBackend : public ModelBackend {
  public:
    void push_response(std::string text);

    Completion complete(const ModelCall& call, const CallContext& ctx) override;

    std::size_t remaining() const;

  private:
    mutable std::mutex mu_;
    std::deque<std::string> responses_;
};

// Simulator token rule: ceil(chars / 4).
std::int64_t sim_token_count(std::string_view text);

}  // namespace metaforge
