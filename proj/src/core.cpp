#include "asuman/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace asuman {

double RateProfile::sum() const {
    return std::accumulate(per_node.begin(), per_node.end(), 0.0);
}

PolicyKind PolicyKind::uniform() {
    return PolicyKind{PolicyType::UniformGossip, 0.0, 1.0, HeadPolicy::FullAsuman};
}

PolicyKind PolicyKind::asuman(double c) {
    return PolicyKind{PolicyType::Asuman, c, 1.0, HeadPolicy::FullAsuman};
}

PolicyKind PolicyKind::asuman_frozen(double c) {
    return PolicyKind{PolicyType::AsumanFrozen, c, 1.0, HeadPolicy::FullAsuman};
}

PolicyKind PolicyKind::hierarchical(double p, HeadPolicy hp, double c) {
    return PolicyKind{PolicyType::Hierarchical, c, p, hp};
}

const char* policy_name(const PolicyKind& policy) {
    switch (policy.type) {
        case PolicyType::UniformGossip: return "uniform";
        case PolicyType::Asuman: return "asuman";
        case PolicyType::AsumanFrozen: return "asuman_frozen";
        case PolicyType::Hierarchical:
            switch (policy.head_policy) {
                case HeadPolicy::Disconnected: return "hier_disconnected";
                case HeadPolicy::Ring: return "hier_ring";
                case HeadPolicy::FullAsuman: return "hier_full";
            }
    }
    return "unknown";
}

std::vector<std::int64_t> AgeVector::ages() const {
    std::vector<std::int64_t> out(node_versions.size());
    for (std::size_t i = 0; i < node_versions.size(); ++i)
        out[i] = source_version - node_versions[i];
    return out;
}

MinAgeSet min_age_set(std::span<const std::int64_t> ages, std::span<const std::int32_t> subset) {
    if (subset.empty())
        throw std::invalid_argument("min_age_set: empty subset");
    std::int64_t best = 0;
    bool first = true;
    for (std::int32_t i : subset) {
        if (i < 0 || static_cast<std::size_t>(i) >= ages.size())
            throw std::invalid_argument("min_age_set: node index out of range");
        if (first || ages[i] < best) {
            best = ages[i];
            first = false;
        }
    }
    MinAgeSet out;
    out.min_age = best;
    for (std::int32_t i : subset)
        if (ages[i] == best)
            out.indices.push_back(i);
    std::sort(out.indices.begin(), out.indices.end());  // subset order is not required to be ascending
    return out;
}

MinAgeSet min_age_set(const AgeVector& av, std::span<const std::int32_t> subset) {
    return min_age_set(av.ages(), subset);
}

} // namespace asuman
