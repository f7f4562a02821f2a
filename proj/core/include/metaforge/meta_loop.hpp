#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metaforge/archive.hpp"
#include "metaforge/backend.hpp"
#include "metaforge/curation.hpp"
#include "metaforge/dataset.hpp"
#include "metaforge/usage.hpp"

namespace metaforge {

struct SearchConfig {
    std::string run_id;
    std::string dataset_id;
    int iterations = 30;
    int max_revisions = 3;
    CurationMode curation = CurationMode::evolutionary;
    std::size_t top_k = 7;
    std::uint64_t seed = 0;
    std::string worker_model = "sim-worker";
    std::string meta_model = "sim-meta";
    double worker_temperature = 0.7;
    double meta_temperature = 0.9;
    int worker_max_tokens = 1024;
    int meta_max_tokens = 4096;
    int parallelism = 1;
    std::string pricing_table_ref = "builtin:default";
};

struct IterationLog {
    int iteration = 0;
    std::int64_t prompt_chars = 0;
    int revisions_used = 0;
    bool parse_ok = false;
    MicroUsd sample_cost = 0;
    MicroUsd eval_cost = 0;
    std::string agent_id;
};

// The instruction block handed to the sampling model: for each context
// record its name, program document, and mean train score (3 decimals),
// plus the program grammar and the order to emit exactly one new document.
std::string build_meta_prompt(const CuratedContext& ctx, const SearchConfig& cfg);

struct SampleOutcome {
    AgentRecord record;  // program absent if all attempts failed
    IterationLog log;    // eval_cost not yet filled
};

// One sampling step with the revise/debug loop: on a parse failure the model
// is re-prompted with the parse report; a candidate that parses is executed
// on one probe question and execution failures are fed back the same way.
// Every attempt's tokens count toward sample_cost.
SampleOutcome sample_agent(const CuratedContext& ctx, const SearchConfig& cfg,
                           ModelBackend& backend, const PricingTable& pricing,
                           const Example& probe, int iteration);

class RunObserver {
  public:
    virtual ~RunObserver() = default;

    // Initial archive exists (library scored, possibly from a resume).
    virtual void on_initialized(const Archive& archive, MicroUsd library_eval_cost) {
        (void)archive;
        (void)library_eval_cost;
    }

    // An iteration was appended. Return false to stop the run early; the
    // archive so far is a valid prefix.
    virtual bool on_iteration(const CuratedContext& ctx, const AgentRecord& rec,
                              const IterationLog& log) {
        (void)ctx;
        (void)rec;
        (void)log;
        return true;
    }
};

// State to continue a run from a persisted archive prefix.
struct RunState {
    Archive archive;
    std::vector<IterationLog> logs;
    MicroUsd library_eval_cost = 0;
    bool library_eval_cached = false;
};

struct RunResult {
    Archive archive;
    std::vector<IterationLog> logs;
    RunManifest manifest;
};

// Algorithm: start from the scored library archive, then `iterations` times
// curate context, sample a candidate, evaluate it on the train split, and
// append it. Iterations are strictly sequential; a run killed between
// iterations resumes from its archive prefix and lands on the same bytes.
RunResult run_search(const SearchConfig& cfg, const DatasetSplits& splits,
                     ModelBackend& backend, const PricingTable& pricing,
                     RunObserver* observer = nullptr,
                     std::optional<RunState> resume = std::nullopt);

}  // namespace metaforge
