#include "metaforge/archive.hpp"

#include <algorithm>

#include "metaforge/errors.hpp"
#include "metaforge/hashing.hpp"

namespace metaforge {

double AgentRecord::mean_score() const {
    return train_scores ? train_scores->mean() : 0.0;
}

std::uint64_t AgentRecord::behavior_hash() const {
    if (!program) return fnv1a64(id);
    return fnv1a64(dsl_serialize(*program));
}

bool rank_before(const AgentRecord& a, const AgentRecord& b) {
    double ma = a.mean_score();
    double mb = b.mean_score();
    if (ma != mb) return ma > mb;
    if (a.iteration != b.iteration) return a.iteration > b.iteration;
    return a.id < b.id;
}

Archive Archive::init(std::vector<AgentRecord> library, std::vector<ScoreVector> scores) {
    if (library.size() != scores.size()) {
        throw Error(Errc::invalid_archive_init,
                    "library holds " + std::to_string(library.size()) + " agents but " +
                        std::to_string(scores.size()) + " score vectors were given");
    }
    Archive a;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == 0) {
            a.dataset_id_ = scores[i].dataset_id;
            a.train_size_ = scores[i].values.size();
        } else if (scores[i].dataset_id != a.dataset_id_ ||
                   scores[i].values.size() != a.train_size_) {
            throw Error(Errc::invalid_archive_init,
                        "score vectors disagree on dataset or length at index " +
                            std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < library.size(); ++i) {
        AgentRecord rec = std::move(library[i]);
        rec.source = AgentSource::initial_library;
        rec.iteration = 0;
        rec.train_scores = std::move(scores[i]);
        a.entries_.push_back(std::move(rec));
    }
    a.initial_count_ = a.entries_.size();
    return a;
}

void Archive::append(AgentRecord rec) {
    if (!rec.train_scores) {
        throw Error(Errc::missing_scores, "agent '" + rec.id + "' has no training scores");
    }
    if (entries_.empty()) {
        dataset_id_ = rec.train_scores->dataset_id;
        train_size_ = rec.train_scores->values.size();
    } else if (rec.train_scores->dataset_id != dataset_id_ ||
               rec.train_scores->values.size() != train_size_) {
        throw Error(Errc::dataset_mismatch,
                    "agent '" + rec.id + "' was scored on " + rec.train_scores->dataset_id +
                        " with " + std::to_string(rec.train_scores->values.size()) +
                        " values; archive expects " + dataset_id_ + " with " +
                        std::to_string(train_size_));
    }
    entries_.push_back(std::move(rec));
}

std::vector<AgentRecord> Archive::top_k(std::size_t k) const {
    std::vector<AgentRecord> sorted = entries_;
    std::stable_sort(sorted.begin(), sorted.end(), rank_before);
    if (sorted.size() > k) sorted.resize(k);
    return sorted;
}

Archive Archive::restore(std::vector<AgentRecord> records, std::size_t initial_count) {
    Archive a;
    for (auto& rec : records) a.append(std::move(rec));
    a.initial_count_ = initial_count;
    return a;
}

}  // namespace metaforge
