#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trec/classify.hpp"
#include "trec/dataset.hpp"
#include "trec/multigroup.hpp"
#include "trec/trend.hpp"

namespace trec {

/// Settings echo of the last rough-classification step.
struct Trec2Settings {
    int groups = 2;
    bool clustering = true;
    std::optional<std::pair<std::string, std::string>> pvar;
};

/// Everything carried between the three pipeline steps. Serialized as a
/// versioned JSON document; later steps refuse a state missing the results
/// of earlier ones.
struct PipelineState {
    CleanDataset clean;
    std::vector<TrendFit> fits;
    std::optional<Trec2Settings> trec2;
    std::optional<DiscriminantResult> discriminant;
    std::optional<TvarSpec> tvar;
    std::optional<TargetAssignment> assignment;
    std::vector<std::pair<std::string, int>> icons;  // target -> icon id
};

std::string save_state(const PipelineState& state);
PipelineState load_state(const std::string& document);

}  // namespace trec
