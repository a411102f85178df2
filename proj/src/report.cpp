#include "trec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "trec/errors.hpp"
#include "trec/icons.hpp"

namespace trec {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                          "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

constexpr const char* kDataColor = "#d62728";   // standardized data
constexpr const char* kTrendColor = "#000000";  // estimated trend
constexpr const char* kBandColor = "#808080";   // 95% band, 40% opacity

std::string fnum(double v) {
    if (v == 0.0) v = 0.0;  // squash -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    if (std::strcmp(buf, "-0.00") == 0) return "0.00";
    return buf;
}

std::string gnum(double v, const char* fmt = "%.4g") {
    if (v == 0.0) v = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Rect {
    double x, y, w, h;
};

struct AxisMap {
    Rect plot;
    double xlo, xhi, ylo, yhi;

    double px(double x) const {
        if (xhi == xlo) return plot.x + plot.w / 2.0;
        return plot.x + (x - xlo) / (xhi - xlo) * plot.w;
    }
    double py(double y) const {
        if (yhi == ylo) return plot.y + plot.h / 2.0;
        return plot.y + plot.h - (y - ylo) / (yhi - ylo) * plot.h;
    }
};

class SvgDoc {
public:
    SvgDoc(double width, double height) : width_(width), height_(height) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0) {
        body_ += "<line x1=\"" + fnum(x1) + "\" y1=\"" + fnum(y1) + "\" x2=\"" + fnum(x2) +
                 "\" y2=\"" + fnum(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 fnum(stroke_width) + "\"/>\n";
    }

    void rect(const Rect& r, const std::string& stroke, const std::string& fill = "none") {
        body_ += "<rect x=\"" + fnum(r.x) + "\" y=\"" + fnum(r.y) + "\" width=\"" + fnum(r.w) +
                 "\" height=\"" + fnum(r.h) + "\" stroke=\"" + stroke + "\" fill=\"" + fill +
                 "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double stroke_width = 1.0) {
        body_ += "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i > 0) body_ += " ";
            body_ += fnum(pts[i].first) + "," + fnum(pts[i].second);
        }
        body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 fnum(stroke_width) + "\"/>\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill,
                 double opacity) {
        body_ += "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i > 0) body_ += " ";
            body_ += fnum(pts[i].first) + "," + fnum(pts[i].second);
        }
        body_ += "\" fill=\"" + fill + "\" fill-opacity=\"" + fnum(opacity) + "\" stroke=\"none\"/>\n";
    }

    void text(double x, double y, const std::string& s, const std::string& anchor = "start",
              int size = 12, const std::string& fill = "#000000", bool bold = false) {
        body_ += "<text x=\"" + fnum(x) + "\" y=\"" + fnum(y) + "\" font-size=\"" +
                 std::to_string(size) + "\" font-family=\"sans-serif\" text-anchor=\"" + anchor +
                 "\" fill=\"" + fill + "\"" + (bold ? " font-weight=\"bold\"" : "") + ">" +
                 escape_text(s) + "</text>\n";
    }

    std::string finish() const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fnum(width_) +
               "\" height=\"" + fnum(height_) + "\" viewBox=\"0 0 " + fnum(width_) + " " +
               fnum(height_) + "\">\n";
        out += "<rect x=\"0\" y=\"0\" width=\"" + fnum(width_) + "\" height=\"" + fnum(height_) +
               "\" fill=\"#ffffff\"/>\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

private:
    double width_, height_;
    std::string body_;
};

struct DataRange {
    double lo = 0.0, hi = 0.0;
    bool any = false;

    void include(double v) {
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad(double frac) {
        const double span = hi - lo;
        const double p = span > 0.0 ? frac * span : 1.0;
        lo -= p;
        hi += p;
    }
};

std::string series_color(const Series& s, std::size_t index) {
    if (!s.color.empty()) return s.color;
    return kPalette[index % kPaletteSize];
}

void draw_panel(SvgDoc& doc, const Panel& panel, const Rect& cell) {
    const Rect plot{cell.x + 46.0, cell.y + 24.0, cell.w - 58.0, cell.h - 62.0};

    DataRange xr, yr;
    for (const Series& s : panel.series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    if (panel.band.has_value()) {
        for (double v : panel.band->lower) yr.include(v);
        for (double v : panel.band->upper) yr.include(v);
    }
    yr.pad(0.06);

    const AxisMap ax{plot, xr.lo, xr.hi, yr.lo, yr.hi};

    doc.text(cell.x + cell.w / 2.0, cell.y + 15.0, panel.title, "middle", 12, "#000000", true);
    doc.rect(plot, "#333333");

    if (panel.band.has_value()) {
        const Band& b = *panel.band;
        std::vector<std::pair<double, double>> pts;
        pts.reserve(2 * b.x.size());
        for (std::size_t i = 0; i < b.x.size(); ++i) {
            pts.emplace_back(ax.px(b.x[i]), ax.py(b.upper[i]));
        }
        for (std::size_t i = b.x.size(); i-- > 0;) {
            pts.emplace_back(ax.px(b.x[i]), ax.py(b.lower[i]));
        }
        doc.polygon(pts, kBandColor, 0.4);
    }

    for (std::size_t si = 0; si < panel.series.size(); ++si) {
        const Series& s = panel.series[si];
        std::vector<std::pair<double, double>> pts;
        pts.reserve(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            pts.emplace_back(ax.px(s.x[i]), ax.py(s.y[i]));
        }
        doc.polyline(pts, series_color(s, si), 1.2);
    }

    // Corner ticks only; the panels are small.
    doc.text(plot.x, plot.y + plot.h + 14.0, gnum(xr.lo, "%.6g"), "start", 10);
    doc.text(plot.x + plot.w, plot.y + plot.h + 14.0, gnum(xr.hi, "%.6g"), "end", 10);
    doc.text(plot.x - 4.0, plot.y + plot.h, gnum(yr.lo), "end", 10);
    doc.text(plot.x - 4.0, plot.y + 10.0, gnum(yr.hi), "end", 10);
}

std::vector<std::string> render_panel_pages(const FigureSpec& spec) {
    if (spec.panels.empty()) throw DataError("render_figure: empty series list");
    for (const Panel& p : spec.panels) {
        if (p.series.empty()) throw DataError("render_figure: empty series list");
    }

    constexpr double kCellW = 240.0;
    constexpr double kCellH = 220.0;
    constexpr double kMargin = 20.0;
    constexpr double kTitleBand = 26.0;

    std::vector<std::string> pages;
    const std::size_t total = spec.panels.size();
    for (std::size_t start = 0; start < total; start += kMaxPanelsPerPage) {
        const std::size_t count = std::min(kMaxPanelsPerPage, total - start);
        const std::size_t cols = std::min<std::size_t>(4, count);
        const std::size_t rows = (count + cols - 1) / cols;

        SvgDoc doc(2.0 * kMargin + static_cast<double>(cols) * kCellW,
                   kTitleBand + kMargin + static_cast<double>(rows) * kCellH);
        doc.text(kMargin, 18.0, spec.title, "start", 14, "#000000", true);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t r = i / cols;
            const std::size_t c = i % cols;
            const Rect cell{kMargin + static_cast<double>(c) * kCellW,
                            kTitleBand + static_cast<double>(r) * kCellH, kCellW, kCellH};
            draw_panel(doc, spec.panels[start + i], cell);
        }
        pages.push_back(doc.finish());
    }
    return pages;
}

std::string render_overlay_page(const FigureSpec& spec) {
    if (spec.panels.size() != 1 || spec.panels.front().series.empty()) {
        throw DataError("render_figure: empty series list");
    }
    const Panel& panel = spec.panels.front();

    SvgDoc doc(960.0, 560.0);
    const Rect plot{60.0, 50.0, 640.0, 440.0};

    DataRange xr, yr;
    for (const Series& s : panel.series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    yr.pad(0.06);
    const AxisMap ax{plot, xr.lo, xr.hi, yr.lo, yr.hi};

    doc.text(plot.x, 28.0, spec.title, "start", 15, "#000000", true);
    doc.rect(plot, "#333333");
    doc.text(plot.x, plot.y + plot.h + 18.0, gnum(xr.lo, "%.6g"), "start", 11);
    doc.text(plot.x + plot.w, plot.y + plot.h + 18.0, gnum(xr.hi, "%.6g"), "end", 11);
    doc.text(plot.x - 6.0, plot.y + plot.h, gnum(yr.lo), "end", 11);
    doc.text(plot.x - 6.0, plot.y + 12.0, gnum(yr.hi), "end", 11);

    for (std::size_t si = 0; si < panel.series.size(); ++si) {
        const Series& s = panel.series[si];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            pts.emplace_back(ax.px(s.x[i]), ax.py(s.y[i]));
        }
        doc.polyline(pts, series_color(s, si), 1.4);
        const double ly = 60.0 + 18.0 * static_cast<double>(si);
        doc.line(730.0, ly - 4.0, 756.0, ly - 4.0, series_color(s, si), 2.0);
        doc.text(762.0, ly, s.name, "start", 12);
    }
    return doc.finish();
}

std::string render_dendrogram_page(const FigureSpec& spec) {
    if (!spec.dendrogram.has_value() || spec.dendrogram->leaf_names.empty()) {
        throw DataError("render_figure: dendrogram figure without a dendrogram");
    }
    const Dendrogram& d = *spec.dendrogram;
    const int m = static_cast<int>(d.leaf_names.size());

    // Leaf order by traversal keeps links from crossing.
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(m));
    auto traverse = [&](auto&& self, int node) -> void {
        if (node < m) {
            order.push_back(node);
            return;
        }
        const auto& mg = d.merges[static_cast<std::size_t>(node - m)];
        self(self, mg.left);
        self(self, mg.right);
    };
    if (d.merges.empty()) {
        for (int i = 0; i < m; ++i) order.push_back(i);
    } else {
        traverse(traverse, m + static_cast<int>(d.merges.size()) - 1);
    }

    std::vector<double> slot(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        slot[static_cast<std::size_t>(order[i])] = static_cast<double>(i);
    }

    double max_h = 0.0;
    for (const auto& mg : d.merges) max_h = std::max(max_h, mg.height);
    if (max_h <= 0.0) max_h = 1.0;

    SvgDoc doc(960.0, 520.0);
    const Rect plot{60.0, 50.0, 840.0, 380.0};
    doc.text(plot.x, 28.0, spec.title, "start", 15, "#000000", true);

    auto leaf_px = [&](double s) {
        return plot.x + (s + 0.5) / static_cast<double>(m) * plot.w;
    };
    auto height_py = [&](double h) { return plot.y + plot.h - h / max_h * plot.h; };

    // x position and display height per node.
    std::vector<double> node_x(static_cast<std::size_t>(m) + d.merges.size(), 0.0);
    std::vector<double> node_h(static_cast<std::size_t>(m) + d.merges.size(), 0.0);
    for (int i = 0; i < m; ++i) node_x[static_cast<std::size_t>(i)] = leaf_px(slot[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k < d.merges.size(); ++k) {
        const auto& mg = d.merges[k];
        const double xl = node_x[static_cast<std::size_t>(mg.left)];
        const double xr = node_x[static_cast<std::size_t>(mg.right)];
        const double hl = node_h[static_cast<std::size_t>(mg.left)];
        const double hr = node_h[static_cast<std::size_t>(mg.right)];
        doc.line(xl, height_py(hl), xl, height_py(mg.height), "#333333", 1.2);
        doc.line(xr, height_py(hr), xr, height_py(mg.height), "#333333", 1.2);
        doc.line(xl, height_py(mg.height), xr, height_py(mg.height), "#333333", 1.2);
        node_x[static_cast<std::size_t>(m) + k] = (xl + xr) / 2.0;
        node_h[static_cast<std::size_t>(m) + k] = mg.height;
    }

    for (int i = 0; i < m; ++i) {
        doc.text(node_x[static_cast<std::size_t>(i)], plot.y + plot.h + 16.0,
                 d.leaf_names[static_cast<std::size_t>(i)], "middle", 11);
    }
    doc.text(plot.x - 8.0, plot.y + plot.h, "0", "end", 11);
    doc.text(plot.x - 8.0, plot.y + 12.0, gnum(max_h), "end", 11);
    return doc.finish();
}

void draw_mini_series(SvgDoc& doc, const std::vector<Series>& series, const Rect& box) {
    doc.rect(box, "#999999");
    DataRange xr, yr;
    for (const Series& s : series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    yr.pad(0.08);
    const AxisMap ax{{box.x + 3.0, box.y + 3.0, box.w - 6.0, box.h - 6.0},
                     xr.lo, xr.hi, yr.lo, yr.hi};
    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            pts.emplace_back(ax.px(s.x[i]), ax.py(s.y[i]));
        }
        doc.polyline(pts, series_color(s, si), 1.1);
    }
}

void draw_icon_glyph(SvgDoc& doc, int icon, const Rect& box) {
    doc.rect(box, "#999999");
    if (icon == kUnknownIcon) {
        doc.text(box.x + box.w / 2.0, box.y + box.h / 2.0 + 14.0, "?", "middle", 40, "#000000",
                 true);
        return;
    }
    const Rect inner{box.x + 6.0, box.y + 6.0, box.w - 12.0, box.h - 12.0};
    const AxisMap ax{inner, 0.0, 1.0, -1.1, 1.1};
    std::vector<std::pair<double, double>> pts;
    constexpr int kSamples = 33;
    for (int i = 0; i < kSamples; ++i) {
        const double s = static_cast<double>(i) / (kSamples - 1);
        pts.emplace_back(ax.px(s), ax.py(icon_shape(icon, s)));
    }
    doc.polyline(pts, "#000000", 2.0);
}

std::string render_icon_table_page(const FigureSpec& spec) {
    if (spec.rows.empty()) throw DataError("render_figure: icon table without rows");

    constexpr double kWidth = 960.0;
    constexpr double kRowH = 100.0;
    constexpr double kSectionH = 26.0;
    constexpr double kHeaderH = 58.0;

    std::size_t sections = 0;
    std::string last_group;
    for (const IconTableRow& r : spec.rows) {
        if (r.group != last_group) {
            ++sections;
            last_group = r.group;
        }
    }
    const double height = kHeaderH + static_cast<double>(sections) * kSectionH +
                          static_cast<double>(spec.rows.size()) * kRowH + 20.0;

    SvgDoc doc(kWidth, height);
    doc.text(20.0, 24.0, spec.title, "start", 15, "#000000", true);
    doc.text(20.0, 48.0, "tvar", "start", 13, "#000000", true);
    doc.text(140.0, 48.0, "members", "start", 13, "#000000", true);
    doc.text(420.0, 48.0, "trend", "start", 13, "#000000", true);
    doc.text(740.0, 48.0, "icon", "start", 13, "#000000", true);
    doc.line(20.0, 54.0, kWidth - 20.0, 54.0, "#333333", 1.0);

    double y = kHeaderH;
    last_group.clear();
    for (const IconTableRow& r : spec.rows) {
        if (r.group != last_group) {
            doc.text(20.0, y + 18.0, r.group, "start", 13, "#333333", true);
            y += kSectionH;
            last_group = r.group;
        }
        doc.text(20.0, y + kRowH / 2.0 + 4.0, r.target, "start", 13);
        std::string members;
        for (std::size_t i = 0; i < r.members.size(); ++i) {
            if (i > 0) members += ", ";
            members += r.members[i];
        }
        doc.text(140.0, y + kRowH / 2.0 + 4.0, members, "start", 12);
        draw_mini_series(doc, r.trends, {420.0, y + 8.0, 280.0, kRowH - 16.0});
        draw_icon_glyph(doc, r.icon, {740.0, y + 8.0, kRowH - 16.0, kRowH - 16.0});
        doc.text(740.0 + kRowH - 16.0 + 12.0, y + kRowH / 2.0 + 4.0,
                 "icon " + std::to_string(r.icon), "start", 12);
        doc.line(20.0, y + kRowH, kWidth - 20.0, y + kRowH, "#dddddd", 1.0);
        y += kRowH;
    }
    return doc.finish();
}

}  // namespace

std::vector<std::string> render_figure(const FigureSpec& spec) {
    switch (spec.kind) {
        case FigureKind::RawData:
        case FigureKind::StdData:
        case FigureKind::TrendPanel:
        case FigureKind::GroupPanel:
            return render_panel_pages(spec);
        case FigureKind::TrendOverlay:
            return {render_overlay_page(spec)};
        case FigureKind::Dendrogram:
            return {render_dendrogram_page(spec)};
        case FigureKind::IconTable:
            return {render_icon_table_page(spec)};
    }
    throw DataError("render_figure: unknown figure kind");
}

FigureSpec series_panels_figure(FigureKind kind, const std::string& title,
                                const std::vector<double>& time,
                                const std::vector<Column>& variables) {
    FigureSpec spec;
    spec.kind = kind;
    spec.title = title;
    for (const Column& var : variables) {
        Panel panel;
        panel.title = var.name;
        Series s;
        s.name = var.name;
        s.color = kDataColor;
        for (std::size_t i = 0; i < var.values.size(); ++i) {
            if (is_missing(var.values[i])) continue;
            s.x.push_back(time[i]);
            s.y.push_back(var.values[i]);
        }
        panel.series.push_back(std::move(s));
        spec.panels.push_back(std::move(panel));
    }
    return spec;
}

FigureSpec trend_panels_figure(const CleanDataset& data, const std::vector<TrendFit>& fits) {
    FigureSpec spec;
    spec.kind = FigureKind::TrendPanel;
    spec.title = "Standardized data with estimated trend and 95% band";
    for (const TrendFit& fit : fits) {
        Panel panel;
        panel.title = fit.variable;

        Band band;
        band.x = data.time_labels;
        band.lower = fit.band_lower;
        band.upper = fit.band_upper;
        panel.band = std::move(band);

        for (const Column& var : data.variables) {
            if (var.name != fit.variable) continue;
            Series s;
            s.name = var.name;
            s.color = kDataColor;
            s.x = data.time_labels;
            s.y = var.values;
            panel.series.push_back(std::move(s));
            break;
        }
        Series t;
        t.name = fit.variable + " trend";
        t.color = kTrendColor;
        t.x = data.time_labels;
        t.y = fit.fitted;
        panel.series.push_back(std::move(t));
        spec.panels.push_back(std::move(panel));
    }
    return spec;
}

FigureSpec trend_overlay_figure(const CleanDataset& data, const std::vector<TrendFit>& fits) {
    FigureSpec spec;
    spec.kind = FigureKind::TrendOverlay;
    spec.title = "All estimated trends";
    Panel panel;
    panel.title = spec.title;
    for (const TrendFit& fit : fits) {
        Series s;
        s.name = fit.variable;
        s.x = data.time_labels;
        s.y = fit.fitted;
        panel.series.push_back(std::move(s));
    }
    spec.panels.push_back(std::move(panel));
    return spec;
}

FigureSpec group_panels_figure(const CleanDataset& data, const std::vector<TrendFit>& fits,
                               const DiscriminantResult& rough) {
    FigureSpec spec;
    spec.kind = FigureKind::GroupPanel;
    spec.title = "Trend groups (" + rough.method + ")";
    const Group order[] = {Group::Upward, Group::Flat, Group::Downward};
    for (Group g : order) {
        const auto members = rough.members(g);
        if (members.empty()) continue;
        Panel panel;
        panel.title = to_string(g);
        for (const std::string& name : members) {
            for (const TrendFit& fit : fits) {
                if (fit.variable != name) continue;
                Series s;
                s.name = name;
                s.x = data.time_labels;
                s.y = fit.fitted;
                panel.series.push_back(std::move(s));
                break;
            }
        }
        spec.panels.push_back(std::move(panel));
    }
    return spec;
}

FigureSpec dendrogram_figure(const Dendrogram& d) {
    FigureSpec spec;
    spec.kind = FigureKind::Dendrogram;
    spec.title = "Centroid-linkage dendrogram of discriminant scores";
    spec.dendrogram = d;
    return spec;
}

SummaryTable summary_table(const TargetAssignment& assignment,
                           const std::vector<std::pair<std::string, int>>& icons) {
    SummaryTable table;
    const Group order[] = {Group::Downward, Group::Upward, Group::Flat};
    for (Group g : order) {
        for (const auto& m : assignment.memberships) {
            if (m.group != g) continue;
            int icon = -1;
            for (const auto& [target, id] : icons) {
                if (target == m.target) {
                    icon = id;
                    break;
                }
            }
            if (icon < 0) {
                throw DataError("no icon assigned for target '" + m.target + "'");
            }
            table.rows.push_back({m.target, m.members, icon, to_string(g)});
        }
    }
    return table;
}

std::string to_csv(const SummaryTable& table) {
    std::string out = "tvar,group,icon,members\n";
    for (const auto& row : table.rows) {
        out += row.target + "," + row.group + "," + std::to_string(row.icon) + ",";
        for (std::size_t i = 0; i < row.members.size(); ++i) {
            if (i > 0) out += ";";
            out += row.members[i];
        }
        out += "\n";
    }
    return out;
}

SummaryTable summary_from_csv(const std::string& text) {
    SummaryTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "tvar,group,icon,members") {
        throw DataError("summary table: unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SummaryTable::Row row;
        std::istringstream cells(line);
        std::string icon_text, members_text;
        if (!std::getline(cells, row.target, ',') || !std::getline(cells, row.group, ',') ||
            !std::getline(cells, icon_text, ',') || !std::getline(cells, members_text)) {
            throw DataError("summary table: malformed row '" + line + "'");
        }
        row.icon = std::stoi(icon_text);
        std::istringstream members(members_text);
        std::string member;
        while (std::getline(members, member, ';')) row.members.push_back(member);
        table.rows.push_back(std::move(row));
    }
    return table;
}

FigureSpec icon_table_figure(const SummaryTable& table, const CleanDataset& data,
                             const std::vector<TrendFit>& fits) {
    FigureSpec spec;
    spec.kind = FigureKind::IconTable;
    spec.title = "Common trend groups and assigned icons";
    for (const auto& row : table.rows) {
        IconTableRow r;
        r.group = row.group;
        r.target = row.target;
        r.members = row.members;
        r.icon = row.icon;
        for (const std::string& name : row.members) {
            for (const TrendFit& fit : fits) {
                if (fit.variable != name) continue;
                Series s;
                s.name = name;
                s.x = data.time_labels;
                s.y = fit.fitted;
                r.trends.push_back(std::move(s));
                break;
            }
        }
        spec.rows.push_back(std::move(r));
    }
    return spec;
}

}  // namespace trec
