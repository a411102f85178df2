#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trec/trend.hpp"

namespace trec {

enum class Group { Upward, Flat, Downward };

const char* to_string(Group g);
std::optional<Group> parse_group(std::string_view label);  // case-insensitive

/// Pair of reference trends: t1 increasing, t2 decreasing.
struct TargetPair {
    std::vector<double> t1;
    std::vector<double> t2;
    std::string source;  // "default" or "user(A,B)"
};

/// Opposite straight lines spanning [-1, 1] over the window.
TargetPair default_targets(std::size_t n_steps);

/// Reference trends taken from two fitted variables.
TargetPair user_targets(const std::string& first, const std::string& second,
                        const std::vector<TrendFit>& fits);

/// Sum over time steps of squared differences.
double divergence(std::span<const double> trend, std::span<const double> reference);

/// Per-variable discriminant scores d = L(t:T2) - L(t:T1), plus the
/// divergences to T1, to the flat zero trend, and to T2.
struct ScoreSet {
    std::vector<std::string> names;
    std::vector<double> d;
    std::vector<double> to_t1;
    std::vector<double> to_flat;
    std::vector<double> to_t2;
};

ScoreSet discriminant_scores(const std::vector<TrendFit>& fits, const TargetPair& targets);

/// Binary merge tree. Leaves are numbered 0..m-1 in score order; merge k
/// creates node m+k at the recorded height.
struct Dendrogram {
    struct Merge {
        int left = 0;
        int right = 0;
        double height = 0.0;
    };
    std::vector<std::string> leaf_names;
    std::vector<Merge> merges;
};

/// Nested-parenthesis text form: leaf names, merge heights after ':'.
std::string to_newick(const Dendrogram& d);

struct DiscriminantResult {
    std::vector<std::string> names;
    std::vector<double> scores;  // parallel to names
    std::vector<Group> groups;   // parallel to names
    std::string method;          // "discriminant-only" | "clustering"
    std::optional<Dendrogram> dendrogram;
    std::vector<std::string> not_applicable;  // requested labels with no members

    std::vector<std::string> members(Group g) const;
    std::optional<Group> group_of(const std::string& name) const;
};

/// Sign rule for two groups; nearest of {T1, zero trend, T2} for three.
DiscriminantResult classify_by_sign(const ScoreSet& scores, int n_groups);

/// Agglomerative clustering of the scalar scores with centroid linkage,
/// cut into k clusters labeled by mean score.
DiscriminantResult centroid_cluster(const ScoreSet& scores, int k);

}  // namespace trec
