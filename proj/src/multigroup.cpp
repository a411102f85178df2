#include "trec/multigroup.hpp"

#include <algorithm>
#include <limits>

#include "trec/errors.hpp"

namespace trec {

const std::vector<std::string>* TvarSpec::targets_for(Group g) const {
    for (const auto& [group, names] : entries) {
        if (group == g) return &names;
    }
    return nullptr;
}

const TargetAssignment::Membership*
TargetAssignment::membership_of_target(const std::string& target) const {
    for (const Membership& m : memberships) {
        if (m.target == target) return &m;
    }
    return nullptr;
}

namespace {

const TrendFit* find_fit(const std::vector<TrendFit>& fits, const std::string& name) {
    for (const TrendFit& f : fits) {
        if (f.variable == name) return &f;
    }
    return nullptr;
}

}  // namespace

TargetAssignment classify_to_targets(const std::vector<TrendFit>& fits,
                                     const DiscriminantResult& rough,
                                     const TvarSpec& tvar) {
    // Validate targets before assigning anything.
    for (std::size_t i = 0; i < tvar.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < tvar.entries.size(); ++j) {
            if (tvar.entries[i].first == tvar.entries[j].first) {
                throw DataError("group " + std::string(to_string(tvar.entries[i].first)) +
                                " listed twice in targets");
            }
        }
    }
    for (const auto& [group, targets] : tvar.entries) {
        for (const std::string& t : targets) {
            if (find_fit(fits, t) == nullptr) {
                throw DataError("unknown target variable '" + t + "'");
            }
            const auto g = rough.group_of(t);
            if (!g.has_value() || *g != group) {
                throw DataError("target '" + t + "' is not in group " +
                                to_string(group));
            }
        }
        std::vector<std::string> sorted = targets;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw DataError("duplicate target in group " + std::string(to_string(group)));
        }
    }

    TargetAssignment out;
    for (const auto& [group, targets] : tvar.entries) {
        const std::vector<std::string> members = rough.members(group);
        if (!members.empty() && targets.empty()) {
            throw DataError("group " + std::string(to_string(group)) +
                            " has members but no targets");
        }
        for (const std::string& t : targets) {
            out.memberships.push_back({t, group, {}});
        }

        const std::size_t first_row = out.memberships.size() - targets.size();
        for (const std::string& v : members) {
            const TrendFit* fit = find_fit(fits, v);
            // Argmin over the group's targets, first-listed target winning
            // ties; a target variable always belongs to itself.
            std::size_t chosen = 0;
            double best = std::numeric_limits<double>::infinity();
            std::size_t self_index = targets.size();
            for (std::size_t ti = 0; ti < targets.size(); ++ti) {
                const TrendFit* target_fit = find_fit(fits, targets[ti]);
                const double l = divergence(fit->fitted, target_fit->fitted);
                out.divergences.emplace_back(v, targets[ti], l);
                if (targets[ti] == v) self_index = ti;
                if (l < best) {
                    best = l;
                    chosen = ti;
                }
            }
            if (self_index < targets.size()) chosen = self_index;
            out.memberships[first_row + chosen].members.push_back(v);
        }
    }

    // Rough groups with members that the spec never mentioned pass through.
    const Group all[] = {Group::Upward, Group::Flat, Group::Downward};
    for (Group g : all) {
        if (tvar.targets_for(g) == nullptr && !rough.members(g).empty()) {
            out.unclassified_groups.emplace_back(to_string(g));
        }
    }
    return out;
}

}  // namespace trec
