#include "metaforge/evaluate.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <thread>
#include <vector>

#include "metaforge/scoring.hpp"

namespace metaforge {

std::uint64_t repetition_seed(std::uint64_t base, int repetition) {
    return base + static_cast<std::uint64_t>(repetition);
}

std::string sim_distractor_for(const Example& example) {
    const std::string& g = example.gold.empty() ? std::string{} : example.gold.front();
    if (example.kind == DatasetKind::multiple_choice && g.size() >= 1 &&
        std::isalpha(static_cast<unsigned char>(g[0]))) {
        char next = g[0] == 'Z' ? 'A' : g[0] == 'z' ? 'a' : static_cast<char>(g[0] + 1);
        return std::string(1, next);
    }
    // Token-disjoint from typical golds, so F1 credit stays at zero.
    return "indeterminable";
}

namespace {

struct Slot {
    double score = 0.0;
    UsageLedger usage;
};

}  // namespace

EvalResult evaluate_agent(const AgentRecord& agent, const Dataset& dataset,
                          ModelBackend& backend, const EvalOptions& opts) {
    auto started = std::chrono::steady_clock::now();

    EvalResult result;
    result.agent_id = agent.id;
    result.dataset_id = dataset.id;
    result.split = dataset.split;
    result.scores.dataset_id = dataset.id;
    result.scores.values.assign(dataset.examples.size(), 0.0);

    if (!agent.valid()) {
        return result;  // zero vector, zero usage, zero executions
    }

    const int reps = std::max(1, dataset.repetitions);
    const std::size_t n = dataset.examples.size();
    const std::size_t total = n * static_cast<std::size_t>(reps);
    std::vector<Slot> slots(total);

    // Slot t = example (t / reps), repetition (t % reps). Each slot carries
    // its own context, so results do not depend on scheduling.
    auto run_slot = [&](std::size_t t) {
        const Example& ex = dataset.examples[t / static_cast<std::size_t>(reps)];
        const int rep = static_cast<int>(t % static_cast<std::size_t>(reps));

        ExecOptions exec;
        exec.worker_model = opts.worker_model;
        exec.default_temperature = opts.worker_temperature;
        exec.max_tokens = opts.worker_max_tokens;
        exec.context.agent_hash = agent.behavior_hash();
        exec.context.unit_id = ex.example_id;
        exec.context.seed = repetition_seed(opts.seed, rep);
        exec.context.expected = ex.gold.empty() ? std::string{} : ex.gold.front();
        exec.context.distractor = sim_distractor_for(ex);

        try {
            ExecResult r = dsl_execute(*agent.program, ex.question, backend, exec);
            slots[t].score = score_prediction(r.answer, ex);
            slots[t].usage = std::move(r.usage);
        } catch (const ExecutionFailure& e) {
            slots[t].score = 0.0;
            slots[t].usage = e.usage();  // cost was still paid
        }
    };

    const int workers = std::max(1, opts.parallelism);
    if (workers == 1) {
        for (std::size_t t = 0; t < total; ++t) run_slot(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t t = next.fetch_add(1);
                    if (t >= total) return;
                    run_slot(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Positional assembly keeps scores and ledger order deterministic.
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            sum += slots[i * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)].score;
        }
        result.scores.values[i] = sum / static_cast<double>(reps);
    }
    for (std::size_t t = 0; t < total; ++t) result.usage.merge(slots[t].usage);
    result.executions = static_cast<std::int64_t>(total);

    result.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace metaforge
