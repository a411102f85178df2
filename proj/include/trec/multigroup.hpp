#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "trec/classify.hpp"

namespace trec {

/// User-designated target variables per rough group, in the order given.
struct TvarSpec {
    std::vector<std::pair<Group, std::vector<std::string>>> entries;

    const std::vector<std::string>* targets_for(Group g) const;
};

struct TargetAssignment {
    struct Membership {
        std::string target;
        Group group = Group::Upward;
        std::vector<std::string> members;  // includes the target itself
    };
    std::vector<Membership> memberships;
    /// (variable, target, divergence) for every candidate pair considered.
    std::vector<std::tuple<std::string, std::string, double>> divergences;
    /// Rough groups with members but absent from the tvar spec.
    std::vector<std::string> unclassified_groups;

    const Membership* membership_of_target(const std::string& target) const;
};

/// Assigns every variable of each rough group to the nearest of that group's
/// target trends; ties go to the earliest-listed target. Groups absent from
/// the spec pass through unclassified.
TargetAssignment classify_to_targets(const std::vector<TrendFit>& fits,
                                     const DiscriminantResult& rough,
                                     const TvarSpec& tvar);

}  // namespace trec
