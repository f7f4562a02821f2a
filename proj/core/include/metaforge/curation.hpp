#pragma once

#include <vector>

#include "metaforge/archive.hpp"

namespace metaforge {

// The archive subset shown to the sampling model at one iteration.
struct CuratedContext {
    std::vector<AgentRecord> records;
    CurationMode mode = CurationMode::cumulative;
};

// Every entry, insertion order.
CuratedContext curate_cumulative(const Archive& archive);

// Exactly the initial library, regardless of archive growth.
CuratedContext curate_parallel(const Archive& archive);

// The top-k entries by mean training score (parents), best first.
CuratedContext curate_evolutionary(const Archive& archive, std::size_t k = 7);

CuratedContext curate(const Archive& archive, CurationMode mode, std::size_t k = 7);

}  // namespace metaforge
