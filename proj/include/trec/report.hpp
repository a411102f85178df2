#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trec/classify.hpp"
#include "trec/dataset.hpp"
#include "trec/multigroup.hpp"
#include "trec/trend.hpp"

namespace trec {

enum class FigureKind {
    RawData,
    StdData,
    TrendOverlay,
    TrendPanel,
    GroupPanel,
    Dendrogram,
    IconTable,
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;  // empty -> palette by index
};

struct Band {
    std::vector<double> x;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct Panel {
    std::string title;
    std::vector<Series> series;
    std::optional<Band> band;
};

struct IconTableRow {
    std::string group;
    std::string target;
    std::vector<std::string> members;
    std::vector<Series> trends;
    int icon = 0;
};

struct FigureSpec {
    FigureKind kind = FigureKind::RawData;
    std::string title;
    std::vector<Panel> panels;
    std::optional<Dendrogram> dendrogram;  // Dendrogram kind only
    std::vector<IconTableRow> rows;        // IconTable kind only
};

/// Panelled figures paginate past this count; grid is 4 x 4, filled row-major.
inline constexpr std::size_t kMaxPanelsPerPage = 16;

/// Renders the figure as one SVG document per page. Output bytes depend only
/// on the spec.
std::vector<std::string> render_figure(const FigureSpec& spec);

// Spec builders for the pipeline figures.
FigureSpec series_panels_figure(FigureKind kind, const std::string& title,
                                const std::vector<double>& time,
                                const std::vector<Column>& variables);
FigureSpec trend_panels_figure(const CleanDataset& data, const std::vector<TrendFit>& fits);
FigureSpec trend_overlay_figure(const CleanDataset& data, const std::vector<TrendFit>& fits);
FigureSpec group_panels_figure(const CleanDataset& data, const std::vector<TrendFit>& fits,
                               const DiscriminantResult& rough);
FigureSpec dendrogram_figure(const Dendrogram& d);

struct SummaryTable {
    struct Row {
        std::string target;
        std::vector<std::string> members;
        int icon = 0;
        std::string group;

        bool operator==(const Row&) const = default;
    };
    std::vector<Row> rows;

    bool operator==(const SummaryTable&) const = default;
};

/// One row per target, ordered Downward, Upward, Flat, then by target list
/// order within each group.
SummaryTable summary_table(const TargetAssignment& assignment,
                           const std::vector<std::pair<std::string, int>>& icons);

std::string to_csv(const SummaryTable& table);
SummaryTable summary_from_csv(const std::string& text);

FigureSpec icon_table_figure(const SummaryTable& table, const CleanDataset& data,
                             const std::vector<TrendFit>& fits);

}  // namespace trec
