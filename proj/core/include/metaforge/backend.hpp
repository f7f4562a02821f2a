#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace metaforge {

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ModelCall {
    std::string model_id;
    std::vector<ChatMessage> messages;  // must be non-empty
    double temperature = 0.0;
    int max_tokens = 0;
};

struct Completion {
    std::string text;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
};

// Deterministic identity of the unit of work a call belongs to. The HTTP
// backend ignores it; the simulator derives all of its behavior from it, so
// replays with the same seed are bit-exact regardless of thread scheduling.
struct CallContext {
    std::uint64_t agent_hash = 0;  // identity of the calling agent (0 = none)
    std::string unit_id;           // question id, probe id, or sampling-slot id
    std::uint64_t seed = 0;        // run seed, already mixed with the repetition
    std::uint64_t counter = 0;     // index of this call within the unit
    std::string expected;          // answer a simulated model emits when "correct"
    std::string distractor;        // answer it emits otherwise
};

class ModelBackend {
  public:
    virtual ~ModelBackend() = default;

    // Returns the completion plus exact token usage as reported by the
    // backend. Implementations retry transient transport failures before
    // throwing Error{transport_error|rate_limited|context_too_long}.
    virtual Completion complete(const ModelCall& call, const CallContext& ctx) = 0;
};

std::int64_t total_chars(const ModelCall& call);

}  // namespace metaforge
