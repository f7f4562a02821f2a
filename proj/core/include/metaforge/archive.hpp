#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metaforge/dsl.hpp"
#include "metaforge/types.hpp"

namespace metaforge {

// One designed or builtin agent. `program` is absent only for sampled agents
// that never produced a valid document; they keep an all-zero score vector.
struct AgentRecord {
    std::string id;
    std::string name;
    std::optional<DslProgram> program;
    AgentSource source = AgentSource::meta_sampled;
    int iteration = 0;  // 0 iff source == initial_library
    std::optional<ScoreVector> train_scores;
    MicroUsd design_cost = 0;
    std::string notes;

    double mean_score() const;
    bool valid() const { return program.has_value(); }

    // Stable identity of the agent's behavior; equal programs hash equal.
    std::uint64_t behavior_hash() const;
};

// Append-only record of every agent discovered so far, seeded with the
// initial library. Entries keep insertion order; nothing is ever removed.
class Archive {
  public:
    Archive() = default;

    // library[i] is paired with scores[i]; all scores must agree on dataset
    // and length. An empty library is permitted.
    static Archive init(std::vector<AgentRecord> library, std::vector<ScoreVector> scores);

    void append(AgentRecord rec);

    // The k records with the highest mean training score, best first. Ties
    // prefer the higher iteration (newer designs), then the lower id.
    std::vector<AgentRecord> top_k(std::size_t k) const;

    const std::vector<AgentRecord>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t initial_count() const { return initial_count_; }
    const std::string& dataset_id() const { return dataset_id_; }
    std::size_t train_size() const { return train_size_; }

    // Rebuild from already-validated records (persistence path).
    static Archive restore(std::vector<AgentRecord> records, std::size_t initial_count);

  private:
    std::vector<AgentRecord> entries_;
    std::size_t initial_count_ = 0;
    std::string dataset_id_;
    std::size_t train_size_ = 0;
};

// Ordering used by Archive::top_k, exposed for oracle tests.
bool rank_before(const AgentRecord& a, const AgentRecord& b);

}  // namespace metaforge
