#pragma once

#include <cstdint>
#include <string>

#include "metaforge/archive.hpp"
#include "metaforge/backend.hpp"
#include "metaforge/dataset.hpp"
#include "metaforge/dsl_interp.hpp"
#include "metaforge/usage.hpp"

namespace metaforge {

struct EvalResult {
    std::string agent_id;
    std::string dataset_id;
    Split split = Split::train;
    ScoreVector scores;
    UsageLedger usage;
    double wallclock_s = 0.0;
    std::int64_t executions = 0;  // program runs issued (N examples x repetitions)
};

struct EvalOptions {
    std::uint64_t seed = 0;
    int parallelism = 1;
    std::string worker_model = "sim-worker";
    double worker_temperature = 0.7;
    int worker_max_tokens = 1024;
};

// Seed used for repetition j of an evaluation with base seed `base`. Plain
// offset so a repetition can be reproduced by an r=1 evaluation at base+j.
std::uint64_t repetition_seed(std::uint64_t base, int repetition);

// Wrong-but-plausible answer a simulated model gives for this example. Shares
// no scoring overlap with the gold answers.
std::string sim_distractor_for(const Example& example);

// Runs the agent on every example `repetitions` times; the per-example score
// is the mean over repetitions. Failed executions score zero for that
// repetition but keep their accrued usage. Invalid agents (no program) get an
// all-zero vector and zero usage.
EvalResult evaluate_agent(const AgentRecord& agent, const Dataset& dataset,
                          ModelBackend& backend, const EvalOptions& opts = {});

}  // namespace metaforge
