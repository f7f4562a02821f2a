#include "metaforge/types.hpp"

#include <numeric>

#include "metaforge/errors.hpp"

namespace metaforge {

const char* to_string(AgentSource s) {
    return s == AgentSource::initial_library ? "initial_library" : "meta_sampled";
}

const char* to_string(CurationMode m) {
    switch (m) {
        case CurationMode::cumulative: return "cumulative";
        case CurationMode::parallel: return "parallel";
        case CurationMode::evolutionary: return "evolutionary";
    }
    return "evolutionary";
}

const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

const char* to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::exact_match: return "exact_match";
        case DatasetKind::f1: return "f1";
        case DatasetKind::multiple_choice: return "multiple_choice";
    }
    return "exact_match";
}

AgentSource agent_source_from_string(const std::string& s) {
    if (s == "initial_library") return AgentSource::initial_library;
    if (s == "meta_sampled") return AgentSource::meta_sampled;
    throw Error(Errc::bad_config, "unknown agent source '" + s + "'");
}

CurationMode curation_mode_from_string(const std::string& s) {
    if (s == "cumulative") return CurationMode::cumulative;
    if (s == "parallel") return CurationMode::parallel;
    if (s == "evolutionary") return CurationMode::evolutionary;
    throw Error(Errc::bad_config, "unknown curation mode '" + s + "'");
}

DatasetKind dataset_kind_from_string(const std::string& s) {
    if (s == "exact_match") return DatasetKind::exact_match;
    if (s == "f1") return DatasetKind::f1;
    if (s == "multiple_choice") return DatasetKind::multiple_choice;
    throw Error(Errc::bad_config, "unknown dataset kind '" + s + "'");
}

double ScoreVector::mean() const {
    if (values.empty()) return 0.0;
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    return sum / static_cast<double>(values.size());
}

bool operator==(const ScoreVector& a, const ScoreVector& b) {
    return a.dataset_id == b.dataset_id && a.values == b.values;
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"run_id", run_id},
                          {"dataset_id", dataset_id},
                          {"curation_mode", to_string(curation_mode)},
                          {"iterations", iterations},
                          {"seed", seed},
                          {"worker_model_id", worker_model_id},
                          {"meta_model_id", meta_model_id},
                          {"pricing_table_ref", pricing_table_ref},
                          {"timestamps", {{"started", started_at}, {"finished", finished_at}}},
                          {"library_eval_cost_microusd", library_eval_cost},
                          {"library_eval_cached", library_eval_cached},
                          {"config", config}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.curation_mode = curation_mode_from_string(j.at("curation_mode").get<std::string>());
    m.iterations = j.at("iterations").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.worker_model_id = j.at("worker_model_id").get<std::string>();
    m.meta_model_id = j.at("meta_model_id").get<std::string>();
    m.pricing_table_ref = j.value("pricing_table_ref", std::string{});
    if (j.contains("timestamps")) {
        m.started_at = j["timestamps"].value("started", std::string{});
        m.finished_at = j["timestamps"].value("finished", std::string{});
    }
    m.library_eval_cost = j.value("library_eval_cost_microusd", MicroUsd{0});
    m.library_eval_cached = j.value("library_eval_cached", false);
    if (j.contains("config")) m.config = j["config"];
    return m;
}

}  // namespace metaforge
