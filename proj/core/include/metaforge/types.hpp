#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace metaforge {

// Integer micro-dollars. All cost arithmetic stays exact until a final
// division for reporting.
using MicroUsd = std::int64_t;

enum class AgentSource { initial_library, meta_sampled };
enum class CurationMode { cumulative, parallel, evolutionary };
enum class Split { train, test };
enum class DatasetKind { exact_match, f1, multiple_choice };

const char* to_string(AgentSource s);
const char* to_string(CurationMode m);
const char* to_string(Split s);
const char* to_string(DatasetKind k);

AgentSource agent_source_from_string(const std::string& s);
CurationMode curation_mode_from_string(const std::string& s);
DatasetKind dataset_kind_from_string(const std::string& s);

// Per-training-example scores in [0,1] for one agent.
struct ScoreVector {
    std::vector<double> values;
    std::string dataset_id;

    double mean() const;
};

bool operator==(const ScoreVector& a, const ScoreVector& b);

struct RunManifest {
    std::string run_id;
    std::string dataset_id;
    CurationMode curation_mode = CurationMode::evolutionary;
    int iterations = 30;
    std::uint64_t seed = 0;
    std::string worker_model_id;
    std::string meta_model_id;
    std::string pricing_table_ref;
    std::string started_at;
    std::string finished_at;
    MicroUsd library_eval_cost = 0;
    bool library_eval_cached = false;
    nlohmann::json config;  // full merged configuration the run was started with

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

}  // namespace metaforge
