#include "trec/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "trec/errors.hpp"

namespace trec {

const char* to_string(Group g) {
    switch (g) {
        case Group::Upward: return "Upward";
        case Group::Flat: return "Flat";
        case Group::Downward: return "Downward";
    }
    return "?";
}

std::optional<Group> parse_group(std::string_view label) {
    std::string low(label);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (low == "upward") return Group::Upward;
    if (low == "flat") return Group::Flat;
    if (low == "downward") return Group::Downward;
    return std::nullopt;
}

TargetPair default_targets(std::size_t n_steps) {
    if (n_steps < 2) throw NumericError("default_targets: need at least 2 time steps");
    TargetPair t;
    t.source = "default";
    t.t1.resize(n_steps);
    t.t2.resize(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double v = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_steps - 1);
        t.t1[i] = v;
        t.t2[i] = -v;
    }
    return t;
}

namespace {

const TrendFit* find_fit(const std::vector<TrendFit>& fits, const std::string& name) {
    for (const TrendFit& f : fits) {
        if (f.variable == name) return &f;
    }
    return nullptr;
}

std::string available_names(const std::vector<TrendFit>& fits) {
    std::string out;
    for (const TrendFit& f : fits) {
        if (!out.empty()) out += ", ";
        out += f.variable;
    }
    return out;
}

}  // namespace

TargetPair user_targets(const std::string& first, const std::string& second,
                        const std::vector<TrendFit>& fits) {
    if (first == second) {
        throw DataError("pvar requires two distinct variables, got '" + first + "' twice");
    }
    const TrendFit* a = find_fit(fits, first);
    const TrendFit* b = find_fit(fits, second);
    if (a == nullptr || b == nullptr) {
        throw DataError("unknown variable '" + (a == nullptr ? first : second) +
                        "'; available: " + available_names(fits));
    }
    TargetPair t;
    t.t1 = a->fitted;
    t.t2 = b->fitted;
    t.source = "user(" + first + "," + second + ")";
    return t;
}

double divergence(std::span<const double> trend, std::span<const double> reference) {
    if (trend.size() != reference.size()) {
        throw DataError("divergence: length mismatch (" + std::to_string(trend.size()) +
                        " vs " + std::to_string(reference.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < trend.size(); ++i) {
        const double diff = reference[i] - trend[i];
        acc += diff * diff;
    }
    return acc;
}

ScoreSet discriminant_scores(const std::vector<TrendFit>& fits, const TargetPair& targets) {
    ScoreSet s;
    for (const TrendFit& f : fits) {
        if (f.fitted.size() != targets.t1.size()) {
            throw DataError("discriminant_scores: trend length mismatch for '" + f.variable + "'");
        }
        double l1 = 0.0, l2 = 0.0, l0 = 0.0;
        for (std::size_t i = 0; i < f.fitted.size(); ++i) {
            const double d1 = targets.t1[i] - f.fitted[i];
            const double d2 = targets.t2[i] - f.fitted[i];
            l1 += d1 * d1;
            l2 += d2 * d2;
            l0 += f.fitted[i] * f.fitted[i];
        }
        s.names.push_back(f.variable);
        s.to_t1.push_back(l1);
        s.to_flat.push_back(l0);
        s.to_t2.push_back(l2);
        s.d.push_back(l2 - l1);
    }
    return s;
}

std::string to_newick(const Dendrogram& d) {
    const int m = static_cast<int>(d.leaf_names.size());
    if (m == 0) return "";
    if (d.merges.empty()) return d.leaf_names.front();

    // Node id of the root is m + last merge index.
    std::string out;
    auto render = [&](auto&& self, int node) -> std::string {
        if (node < m) return d.leaf_names[static_cast<std::size_t>(node)];
        const Dendrogram::Merge& mg = d.merges[static_cast<std::size_t>(node - m)];
        char height[64];
        std::snprintf(height, sizeof(height), "%.9g", mg.height);
        return "(" + self(self, mg.left) + "," + self(self, mg.right) + "):" + height;
    };
    return render(render, m + static_cast<int>(d.merges.size()) - 1);
}

std::vector<std::string> DiscriminantResult::members(Group g) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (groups[i] == g) out.push_back(names[i]);
    }
    return out;
}

std::optional<Group> DiscriminantResult::group_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return groups[i];
    }
    return std::nullopt;
}

namespace {

void fill_not_applicable(DiscriminantResult& result, int n_groups) {
    const Group requested2[] = {Group::Upward, Group::Downward};
    const Group requested3[] = {Group::Upward, Group::Flat, Group::Downward};
    const auto requested = (n_groups == 2) ? std::span<const Group>(requested2)
                                           : std::span<const Group>(requested3);
    for (Group g : requested) {
        if (result.members(g).empty()) result.not_applicable.emplace_back(to_string(g));
    }
}

}  // namespace

DiscriminantResult classify_by_sign(const ScoreSet& scores, int n_groups) {
    if (scores.names.empty()) throw DataError("classify_by_sign: no scores");
    if (n_groups != 2 && n_groups != 3) {
        throw DataError("classify_by_sign: groups must be 2 or 3");
    }

    DiscriminantResult result;
    result.names = scores.names;
    result.scores = scores.d;
    result.method = "discriminant-only";

    for (std::size_t i = 0; i < scores.names.size(); ++i) {
        if (n_groups == 2) {
            result.groups.push_back(scores.d[i] > 0.0 ? Group::Upward : Group::Downward);
        } else {
            // Nearest of the three references; ties fall through toward
            // Downward, mirroring the two-group "otherwise" branch.
            Group g = Group::Upward;
            double best = scores.to_t1[i];
            if (scores.to_flat[i] <= best) {
                g = Group::Flat;
                best = scores.to_flat[i];
            }
            if (scores.to_t2[i] <= best) g = Group::Downward;
            result.groups.push_back(g);
        }
    }
    fill_not_applicable(result, n_groups);
    return result;
}

DiscriminantResult centroid_cluster(const ScoreSet& scores, int k) {
    const std::size_t m = scores.names.size();
    if (k != 2 && k != 3) throw DataError("centroid_cluster: k must be 2 or 3");
    if (m < static_cast<std::size_t>(k)) {
        throw DataError("centroid_cluster: clustering into " + std::to_string(k) +
                        " groups requires at least " + std::to_string(k) +
                        " variables, got " + std::to_string(m));
    }

    struct Node {
        double sum = 0.0;
        int count = 0;
        int min_leaf = 0;
        std::vector<int> leaves;
    };
    std::vector<Node> nodes;
    nodes.reserve(2 * m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        nodes.push_back({scores.d[i], 1, static_cast<int>(i), {static_cast<int>(i)}});
    }

    // Active node ids, kept ordered by smallest contained leaf index so the
    // scan below resolves distance ties toward the smallest variable index.
    std::vector<int> active(m);
    for (std::size_t i = 0; i < m; ++i) active[i] = static_cast<int>(i);

    Dendrogram dendrogram;
    dendrogram.leaf_names = scores.names;

    std::vector<int> cut_label(m, 0);  // leaf -> cluster position at the k-cut
    std::vector<double> cut_mean;
    std::vector<int> cut_node;
    bool cut_taken = false;

    auto take_cut = [&]() {
        cut_mean.clear();
        cut_node.clear();
        for (std::size_t c = 0; c < active.size(); ++c) {
            const Node& nd = nodes[static_cast<std::size_t>(active[c])];
            for (int leaf : nd.leaves) cut_label[static_cast<std::size_t>(leaf)] = static_cast<int>(c);
            cut_mean.push_back(nd.sum / nd.count);
            cut_node.push_back(active[c]);
        }
        cut_taken = true;
    };

    if (active.size() == static_cast<std::size_t>(k)) take_cut();

    while (active.size() > 1) {
        std::size_t best_i = 0, best_j = 1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < active.size(); ++i) {
            const Node& a = nodes[static_cast<std::size_t>(active[i])];
            const double mean_a = a.sum / a.count;
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const Node& b = nodes[static_cast<std::size_t>(active[j])];
                const double dist = std::abs(mean_a - b.sum / b.count);
                if (dist < best_dist) {
                    best_dist = dist;
                    best_i = i;
                    best_j = j;
                }
            }
        }

        const int left = active[best_i];
        const int right = active[best_j];
        Node merged;
        merged.sum = nodes[left].sum + nodes[right].sum;
        merged.count = nodes[left].count + nodes[right].count;
        merged.min_leaf = std::min(nodes[left].min_leaf, nodes[right].min_leaf);
        merged.leaves = nodes[left].leaves;
        merged.leaves.insert(merged.leaves.end(), nodes[right].leaves.begin(),
                             nodes[right].leaves.end());
        dendrogram.merges.push_back({left, right, best_dist});
        const int merged_id = static_cast<int>(nodes.size());
        nodes.push_back(std::move(merged));

        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));
        const auto pos = std::lower_bound(active.begin(), active.end(), merged_id,
                                          [&](int id, int value) {
                                              return nodes[id].min_leaf < nodes[value].min_leaf;
                                          });
        active.insert(pos, merged_id);

        if (!cut_taken && active.size() == static_cast<std::size_t>(k)) take_cut();
    }

    // Clusters ordered by mean score; equal means rank the higher node id
    // later, i.e. toward Upward.
    std::vector<std::size_t> order(cut_mean.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cut_mean[a] != cut_mean[b]) return cut_mean[a] < cut_mean[b];
        return cut_node[a] < cut_node[b];
    });
    std::vector<Group> cluster_group(cut_mean.size());
    if (k == 2) {
        cluster_group[order[0]] = Group::Downward;
        cluster_group[order[1]] = Group::Upward;
    } else {
        cluster_group[order[0]] = Group::Downward;
        cluster_group[order[1]] = Group::Flat;
        cluster_group[order[2]] = Group::Upward;
    }

    DiscriminantResult result;
    result.names = scores.names;
    result.scores = scores.d;
    result.method = "clustering";
    result.dendrogram = std::move(dendrogram);
    for (std::size_t i = 0; i < m; ++i) {
        result.groups.push_back(cluster_group[static_cast<std::size_t>(cut_label[i])]);
    }
    return result;
}

}  // namespace trec
