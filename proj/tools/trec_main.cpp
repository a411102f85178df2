#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trec/classify.hpp"
#include "trec/dataset.hpp"
#include "trec/errors.hpp"
#include "trec/icons.hpp"
#include "trec/multigroup.hpp"
#include "trec/pipeline.hpp"
#include "trec/report.hpp"
#include "trec/trend.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw trec::DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw trec::DataError("cannot write " + path.string());
    out << content;
}

void write_pages(const fs::path& dir, const std::string& stem,
                 const std::vector<std::string>& pages) {
    for (std::size_t i = 0; i < pages.size(); ++i) {
        write_file(dir / (stem + "_" + std::to_string(i + 1) + ".svg"), pages[i]);
    }
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

fs::path model_file_path(const fs::path& model_dir, trec::Group g) {
    return model_dir / ("icon_model_" + lowered(trec::to_string(g)) + ".json");
}

std::pair<std::string, std::string> parse_pvar(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size() ||
        text.find(',', comma + 1) != std::string::npos) {
        throw trec::UsageError("--pvar expects two comma-separated variable names, "
                               "e.g. --pvar V2,V7");
    }
    return {text.substr(0, comma), text.substr(comma + 1)};
}

trec::TvarSpec parse_targets(const std::vector<std::string>& args) {
    const char* grammar = "expected GROUP=NAME[,NAME...] with GROUP one of "
                          "Upward, Downward, Flat (case-insensitive)";
    trec::TvarSpec tvar;
    for (const std::string& arg : args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
            throw trec::UsageError("malformed --targets value '" + arg + "'; " + grammar);
        }
        const auto group = trec::parse_group(arg.substr(0, eq));
        if (!group.has_value()) {
            throw trec::UsageError("unknown group '" + arg.substr(0, eq) + "'; " + grammar);
        }
        std::vector<std::string> names;
        std::istringstream rest(arg.substr(eq + 1));
        std::string name;
        while (std::getline(rest, name, ',')) {
            if (name.empty()) {
                throw trec::UsageError("empty target name in '" + arg + "'; " + grammar);
            }
            names.push_back(name);
        }
        bool merged = false;
        for (auto& [g, list] : tvar.entries) {
            if (g == *group) {
                list.insert(list.end(), names.begin(), names.end());
                merged = true;
                break;
            }
        }
        if (!merged) tvar.entries.emplace_back(*group, std::move(names));
    }
    return tvar;
}

std::vector<trec::LabeledFeature> load_labeled_features(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw trec::DataError("empty feature file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "one,d1,d2,g0,g1,g2,g3,icon") {
        throw trec::DataError("feature file header must be one,d1,d2,g0,g1,g2,g3,icon");
    }
    std::vector<trec::LabeledFeature> data;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream cells(line);
        trec::LabeledFeature f;
        std::string cell;
        for (int k = 0; k < 7; ++k) {
            if (!std::getline(cells, cell, ',')) {
                throw trec::DataError("feature file row " + std::to_string(row) + " is short");
            }
            f.x.x[static_cast<std::size_t>(k)] = std::stod(cell);
        }
        if (!std::getline(cells, cell)) {
            throw trec::DataError("feature file row " + std::to_string(row) + " is short");
        }
        f.icon = std::stoi(cell);
        data.push_back(f);
    }
    return data;
}

int run_trec1(const std::string& input, const std::string& out_dir) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw trec::DataError("cannot open " + input);

    trec::TimeSeriesDataset filtered_raw;
    const trec::CleanDataset clean =
        trec::ingest(trec::parse_dataset(in), &filtered_raw);

    std::cout << "Variable names:\n";
    for (const auto& [original, canonical] : clean.name_map) {
        std::cout << "  " << canonical << " <- " << original << "\n";
    }
    for (const std::string& w : clean.warnings) std::cout << "Warning: " << w << "\n";
    if (!clean.removed.empty()) {
        std::cout << "The following variable(s) is/are removed:\n";
        for (const std::string& name : clean.removed) {
            std::cout << "  " << name << " (" << clean.original_name(name) << ")\n";
        }
    }

    const std::vector<trec::TrendFit> fits = trec::fit_all(clean);

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    trec::PipelineState state;
    state.clean = clean;
    state.fits = fits;
    write_file(dir / "state.json", trec::save_state(state));

    write_pages(dir, "fig_rawdata",
                trec::render_figure(trec::series_panels_figure(
                    trec::FigureKind::RawData, "Raw data", filtered_raw.time_labels,
                    filtered_raw.variables)));
    write_pages(dir, "fig_stddata",
                trec::render_figure(trec::series_panels_figure(
                    trec::FigureKind::StdData, "Standardized data", clean.time_labels,
                    clean.variables)));
    write_pages(dir, "fig_ctrend",
                trec::render_figure(trec::trend_panels_figure(clean, fits)));
    write_file(dir / "fig_trend.svg",
               trec::render_figure(trec::trend_overlay_figure(clean, fits)).front());

    std::cout << "Estimated trends for " << fits.size() << " variable(s); state written to "
              << (dir / "state.json").string() << "\n";
    return 0;
}

int run_trec2(const std::string& state_path, std::string out_dir, int groups,
              bool no_clustering, const std::string& pvar_text) {
    trec::PipelineState state = trec::load_state(read_file(state_path));
    if (state.fits.empty()) {
        throw trec::DataError("state contains no trend fits; run trec1 first");
    }

    trec::Trec2Settings settings;
    settings.groups = groups;
    settings.clustering = !no_clustering;

    trec::TargetPair targets;
    if (!pvar_text.empty()) {
        const auto [a, b] = parse_pvar(pvar_text);
        settings.pvar = std::make_pair(a, b);
        targets = trec::user_targets(a, b, state.fits);
    } else {
        targets = trec::default_targets(state.clean.steps());
    }

    const trec::ScoreSet scores = trec::discriminant_scores(state.fits, targets);
    const trec::DiscriminantResult result = settings.clustering
                                                ? trec::centroid_cluster(scores, groups)
                                                : trec::classify_by_sign(scores, groups);

    if (out_dir.empty()) out_dir = fs::path(state_path).parent_path().string();
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);

    state.trec2 = settings;
    state.discriminant = result;
    state.tvar.reset();  // later-step results are stale now
    state.assignment.reset();
    state.icons.clear();
    write_file(dir / "state.json", trec::save_state(state));

    write_file(dir / "fig_groups.svg",
               trec::render_figure(
                   trec::group_panels_figure(state.clean, state.fits, result)).front());
    if (result.dendrogram.has_value()) {
        write_file(dir / "fig_dendrogram.svg",
                   trec::render_figure(trec::dendrogram_figure(*result.dendrogram)).front());
    }

    const trec::Group order[] = {trec::Group::Upward, trec::Group::Flat, trec::Group::Downward};
    for (trec::Group g : order) {
        const auto members = result.members(g);
        if (members.empty()) continue;
        std::cout << trec::to_string(g) << ":";
        for (const std::string& name : members) std::cout << " " << name;
        std::cout << "\n";
    }
    if (!result.not_applicable.empty()) {
        std::cout << "The following group(s) is/are not applicable:\n";
        for (const std::string& label : result.not_applicable) {
            std::cout << "  " << label << "\n";
        }
    }
    return 0;
}

int run_trec3(const std::string& state_path, std::string out_dir,
              const std::vector<std::string>& target_args, std::string model_dir) {
    trec::PipelineState state = trec::load_state(read_file(state_path));
    if (!state.discriminant.has_value()) {
        throw trec::DataError("state contains no rough classification; run trec2 first");
    }
    const trec::TvarSpec tvar = parse_targets(target_args);
    if (tvar.entries.empty()) {
        throw trec::UsageError("at least one --targets GROUP=NAME[,NAME...] is required");
    }

    const trec::TargetAssignment assignment =
        trec::classify_to_targets(state.fits, *state.discriminant, tvar);

    if (model_dir.empty()) {
        if (const char* env = std::getenv("TREC_MODEL_DIR")) model_dir = env;
    }
    if (model_dir.empty()) model_dir = "data/models";

    std::vector<std::pair<std::string, int>> icons;
    for (const auto& [group, target_names] : tvar.entries) {
        const fs::path path = model_file_path(model_dir, group);
        if (!fs::exists(path)) {
            throw trec::DataError(std::string("missing model file for group ") +
                                  trec::to_string(group) + ": " + path.string());
        }
        const trec::IconModel model = trec::load_model(read_file(path));
        for (const std::string& name : target_names) {
            for (const trec::TrendFit& fit : state.fits) {
                if (fit.variable != name) continue;
                icons.emplace_back(name, trec::assign_icon(group, fit, model));
                break;
            }
        }
    }

    const trec::SummaryTable table = trec::summary_table(assignment, icons);

    if (out_dir.empty()) out_dir = fs::path(state_path).parent_path().string();
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);

    write_file(dir / "summary.csv", trec::to_csv(table));
    write_file(dir / "fig_icons.svg",
               trec::render_figure(
                   trec::icon_table_figure(table, state.clean, state.fits)).front());

    state.tvar = tvar;
    state.assignment = assignment;
    state.icons = icons;
    write_file(dir / "state.json", trec::save_state(state));

    std::cout << "tvar  group  icon  members\n";
    for (const auto& row : table.rows) {
        std::cout << row.target << "  " << row.group << "  " << row.icon << "  ";
        for (std::size_t i = 0; i < row.members.size(); ++i) {
            if (i > 0) std::cout << ",";
            std::cout << row.members[i];
        }
        std::cout << "\n";
    }
    if (!assignment.unclassified_groups.empty()) {
        std::cout << "Warning: group(s) left unclassified:";
        for (const std::string& g : assignment.unclassified_groups) std::cout << " " << g;
        std::cout << "\n";
    }
    return 0;
}

int run_train_icons(const std::string& group_text, const std::string& out_path,
                    int n_per_icon, double noise_sd, std::uint64_t seed,
                    const std::string& data_path, double lambda) {
    const auto group = trec::parse_group(group_text);
    if (!group.has_value()) {
        throw trec::UsageError("unknown group '" + group_text +
                               "'; expected Upward, Downward, or Flat");
    }

    std::vector<trec::LabeledFeature> data;
    if (!data_path.empty()) {
        data = load_labeled_features(read_file(data_path));
    } else {
        trec::SynthOptions synth;
        synth.n_per_icon = n_per_icon;
        synth.noise_sd = noise_sd;
        synth.seed = seed;
        data = trec::synth_training_set(*group, synth);
    }

    trec::TrainOptions opts;
    opts.seed = seed;
    opts.lambda = lambda;
    trec::TrainReport report;
    const trec::IconModel model = trec::train_icon_model(*group, data, opts, &report);

    const fs::path out(out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file(out, trec::save_model(model));

    std::cout << "trained icon model for " << trec::to_string(*group) << ": "
              << data.size() << " samples, " << report.iterations
              << " iterations, gradient " << report.gradient_norm
              << (report.converged ? "" : " (not converged)") << "\n";
    std::cout << "model written to " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trec: trend estimation and classification for multivariate time series"};
    app.require_subcommand(1);

    // trec1
    auto* trec1 = app.add_subcommand("trec1", "estimate polynomial trends from a CSV dataset");
    std::string input;
    std::string out_dir1 = ".";
    trec1->add_option("input", input, "input CSV (header row; column 1 = time labels)")
        ->required();
    trec1->add_option("--out", out_dir1, "output directory");

    // trec2
    auto* trec2 = app.add_subcommand("trec2", "classify trends into rough groups");
    std::string state_path2;
    std::string out_dir2;
    int groups = 2;
    bool no_clustering = false;
    std::string pvar;
    trec2->add_option("--state", state_path2, "state file from trec1")->required();
    trec2->add_option("--out", out_dir2, "output directory (default: state directory)");
    trec2->add_option("--groups", groups, "number of rough groups")
        ->check(CLI::IsMember({2, 3}));
    trec2->add_flag("--no-clustering", no_clustering,
                    "use the discriminant rule directly instead of clustering");
    trec2->add_option("--pvar", pvar, "two fitted variables as reference trends, e.g. V2,V7");

    // trec3
    auto* trec3 = app.add_subcommand("trec3", "classify to target trends and assign icons");
    std::string state_path3;
    std::string out_dir3;
    std::vector<std::string> target_args;
    std::string model_dir;
    trec3->add_option("--state", state_path3, "state file from trec2")->required();
    trec3->add_option("--out", out_dir3, "output directory (default: state directory)");
    trec3->add_option("--targets", target_args,
                      "targets per group, e.g. --targets Downward=V1,V6,V9")
        ->take_all();
    trec3->add_option("--model-dir", model_dir,
                      "directory of icon model files (fallback: $TREC_MODEL_DIR, then data/models)");

    // train-icons
    auto* train = app.add_subcommand("train-icons", "train an icon discriminator");
    std::string group_text;
    std::string model_out;
    std::string data_path;
    int n_per_icon = 100;
    double noise_sd = 0.15;
    std::uint64_t seed = 1;
    double lambda = 1e-4;
    train->add_option("--group", group_text, "Upward, Downward, or Flat")->required();
    train->add_option("--out", model_out, "output model file")->required();
    train->add_option("--n-per-icon", n_per_icon, "synthetic examples per icon");
    train->add_option("--noise-sd", noise_sd, "noise level of the synthetic series");
    train->add_option("--seed", seed, "generator seed");
    train->add_option("--lambda", lambda, "ridge strength of the trainer");
    train->add_option("--data", data_path,
                      "labeled feature CSV (one,d1,d2,g0,g1,g2,g3,icon) instead of synthesis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (trec1->parsed()) return run_trec1(input, out_dir1);
        if (trec2->parsed()) return run_trec2(state_path2, out_dir2, groups, no_clustering, pvar);
        if (trec3->parsed()) return run_trec3(state_path3, out_dir3, target_args, model_dir);
        if (train->parsed()) {
            return run_train_icons(group_text, model_out, n_per_icon, noise_sd, seed,
                                   data_path, lambda);
        }
    } catch (const trec::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const trec::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const trec::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
