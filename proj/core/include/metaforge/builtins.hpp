#pragma once

#include <vector>

#include "metaforge/archive.hpp"

namespace metaforge {

// The seven hand-designed agents that seed every archive:
// chain_of_thought, majority_voting, refinement_from_feedback, llm_debate,
// quality_diversity, routing, stepping_back. Programs are validated at
// construction; ids equal names; design cost is zero.
std::vector<AgentRecord> builtin_library();

// Expert roster used by the routing builtin.
const std::vector<std::string>& builtin_expert_roster();

}  // namespace metaforge
