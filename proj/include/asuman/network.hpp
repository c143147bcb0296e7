#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asuman/core.hpp"
#include "asuman/topology.hpp"

namespace asuman {

struct NetworkSpec {
    Topology topology;
    Rates rates;
    RateProfile profile;
    PolicyKind policy;
};

// Collects every violated precondition as a human-readable string; empty
// means the spec is simulable.  Never throws.
std::vector<std::string> validate_spec(const NetworkSpec& spec);

// FNV-1a over the canonical parameter encoding; used to refuse merging
// statistics from runs of different scenarios.
std::uint64_t config_digest(const NetworkSpec& spec);

} // namespace asuman
