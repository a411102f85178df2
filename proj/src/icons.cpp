#include "trec/icons.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "trec/errors.hpp"

namespace trec {

double icon_shape(int icon, double s) {
    switch (icon) {
        case 1: return 0.0;                                          // flat
        case 2: return 2.0 * (1.0 - s) * (1.0 - s) - 1.0;            // decrease, flattening out
        case 3: return 2.0 * s * s - 1.0;                            // increase, accelerating
        case 4: return 2.0 * s - 1.0;                                // steady increase
        case 5: return 1.0 - 2.0 * (1.0 - s) * (1.0 - s);            // increase, flattening out
        case 6: return 1.0 - 2.0 * (2.0 * s - 1.0) * (2.0 * s - 1.0);  // bump
        case 7: return 1.0 - 2.0 * s;                                // steady decrease
        case 8: return 1.0 - 2.0 * s * s;                            // decrease, accelerating
        case 9: return 2.0 * (2.0 * s - 1.0) * (2.0 * s - 1.0) - 1.0;  // dip
        default:
            throw DataError("icon_shape: icon " + std::to_string(icon) +
                            " has no canonical shape");
    }
}

std::string icon_label(int icon) {
    switch (icon) {
        case 1: return "flat";
        case 2: return "decrease-flattening";
        case 3: return "increase-accelerating";
        case 4: return "increase";
        case 5: return "increase-flattening";
        case 6: return "bump";
        case 7: return "decrease";
        case 8: return "decrease-accelerating";
        case 9: return "dip";
        case 10: return "?";
        default: throw DataError("icon_label: unknown icon " + std::to_string(icon));
    }
}

const std::array<int, 4>& eligible_icons(Group g) {
    static const std::array<int, 4> upward = {3, 4, 5, 10};
    static const std::array<int, 4> downward = {2, 7, 8, 10};
    static const std::array<int, 4> flat = {1, 6, 9, 10};
    switch (g) {
        case Group::Upward: return upward;
        case Group::Downward: return downward;
        case Group::Flat: return flat;
    }
    return flat;
}

FeatureVector build_features(const TrendFit& fit) {
    FeatureVector f;
    f.x[0] = 1.0;
    f.x[1] = fit.degree == 1 ? 1.0 : 0.0;
    f.x[2] = fit.degree == 2 ? 1.0 : 0.0;
    for (int l = 0; l < 4; ++l) f.x[3 + l] = fit.gamma[static_cast<std::size_t>(l)];
    return f;
}

namespace {

// Linear scores (x't_1, x't_2, x't_3, 0) -> stabilized softmax.
std::array<double, 4> softmax_scores(const std::array<std::array<double, 7>, 3>& theta,
                                     const std::array<double, 7>& x) {
    std::array<double, 4> u{};
    for (int j = 0; j < 3; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 7; ++k) dot += theta[j][k] * x[k];
        u[j] = dot;
    }
    u[3] = 0.0;
    const double shift = *std::max_element(u.begin(), u.end());
    double total = 0.0;
    for (double& v : u) {
        v = std::exp(v - shift);
        total += v;
    }
    for (double& v : u) v /= total;
    return u;
}

struct Encoded {
    std::array<double, 7> x;
    int cat;  // 0..3 position within category_icons
};

std::vector<Encoded> encode(const std::vector<LabeledFeature>& data,
                            const std::array<int, 4>& category_icons) {
    std::vector<Encoded> enc;
    enc.reserve(data.size());
    for (const LabeledFeature& d : data) {
        const auto it = std::find(category_icons.begin(), category_icons.end(), d.icon);
        if (it == category_icons.end()) {
            throw DataError("icon " + std::to_string(d.icon) +
                            " is not eligible for this group");
        }
        enc.push_back({d.x.x, static_cast<int>(it - category_icons.begin())});
    }
    return enc;
}

std::array<std::array<double, 7>, 3> unflatten(std::span<const double> theta) {
    if (theta.size() != 21) throw NumericError("theta must have 21 entries");
    std::array<std::array<double, 7>, 3> t{};
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 7; ++k) t[j][k] = theta[static_cast<std::size_t>(7 * j + k)];
    }
    return t;
}

double loglik_encoded(const std::vector<Encoded>& data,
                      const std::array<std::array<double, 7>, 3>& theta) {
    double ll = 0.0;
    for (const Encoded& d : data) {
        const auto p = softmax_scores(theta, d.x);
        ll += std::log(p[static_cast<std::size_t>(d.cat)]);
    }
    return ll;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::array<double, 4> cell_probabilities(const IconModel& model, const FeatureVector& x) {
    return softmax_scores(model.theta, x.x);
}

double multinomial_loglik(const std::vector<LabeledFeature>& data,
                          const std::array<int, 4>& category_icons,
                          std::span<const double> theta) {
    return loglik_encoded(encode(data, category_icons), unflatten(theta));
}

std::vector<double> multinomial_loglik_gradient(const std::vector<LabeledFeature>& data,
                                                const std::array<int, 4>& category_icons,
                                                std::span<const double> theta) {
    const auto enc = encode(data, category_icons);
    const auto t = unflatten(theta);
    std::vector<double> grad(21, 0.0);
    for (const Encoded& d : enc) {
        const auto p = softmax_scores(t, d.x);
        for (int j = 0; j < 3; ++j) {
            const double w = (d.cat == j ? 1.0 : 0.0) - p[static_cast<std::size_t>(j)];
            for (int k = 0; k < 7; ++k) grad[static_cast<std::size_t>(7 * j + k)] += w * d.x[k];
        }
    }
    return grad;
}

IconModel train_icon_model(Group group, const std::vector<LabeledFeature>& data,
                           const TrainOptions& opts, TrainReport* report) {
    IconModel model;
    model.group = group;
    model.category_icons = eligible_icons(group);
    model.meta.samples = static_cast<int>(data.size());
    model.meta.seed = opts.seed;
    model.meta.lambda = opts.lambda;

    const std::vector<Encoded> enc = encode(data, model.category_icons);
    std::array<int, 4> counts{};
    for (const Encoded& d : enc) ++counts[static_cast<std::size_t>(d.cat)];
    for (int j = 0; j < 4; ++j) {
        if (counts[static_cast<std::size_t>(j)] == 0) {
            throw DataError("category with zero examples: icon " +
                            std::to_string(model.category_icons[static_cast<std::size_t>(j)]));
        }
    }

    const double lambda = opts.lambda;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(21);

    auto objective = [&](const Eigen::VectorXd& th) {
        std::array<std::array<double, 7>, 3> t{};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 7; ++k) t[j][k] = th(7 * j + k);
        return loglik_encoded(enc, t) - 0.5 * lambda * th.squaredNorm();
    };

    TrainReport rep;
    rep.objective_trace.push_back(objective(theta));

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        std::array<std::array<double, 7>, 3> t{};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 7; ++k) t[j][k] = theta(7 * j + k);

        Eigen::VectorXd grad = Eigen::VectorXd::Zero(21);
        Eigen::MatrixXd curvature = Eigen::MatrixXd::Zero(21, 21);  // -Hessian
        for (const Encoded& d : enc) {
            const auto p = softmax_scores(t, d.x);
            for (int j = 0; j < 3; ++j) {
                const double w = (d.cat == j ? 1.0 : 0.0) - p[static_cast<std::size_t>(j)];
                for (int k = 0; k < 7; ++k) grad(7 * j + k) += w * d.x[k];
            }
            for (int j = 0; j < 3; ++j) {
                for (int l = 0; l < 3; ++l) {
                    const double pj = p[static_cast<std::size_t>(j)];
                    const double pl = p[static_cast<std::size_t>(l)];
                    const double w = pj * ((j == l ? 1.0 : 0.0) - pl);
                    if (w == 0.0) continue;
                    for (int a = 0; a < 7; ++a) {
                        for (int b = 0; b < 7; ++b) {
                            curvature(7 * j + a, 7 * l + b) += w * d.x[a] * d.x[b];
                        }
                    }
                }
            }
        }
        grad -= lambda * theta;
        curvature += lambda * Eigen::MatrixXd::Identity(21, 21);

        rep.gradient_norm = grad.lpNorm<Eigen::Infinity>();
        if (rep.gradient_norm <= opts.gradient_tol) {
            rep.converged = true;
            break;
        }

        const Eigen::VectorXd step = curvature.ldlt().solve(grad);
        const double current = rep.objective_trace.back();
        double scale = 1.0;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            const Eigen::VectorXd candidate = theta + scale * step;
            const double value = objective(candidate);
            if (value >= current) {
                theta = candidate;
                rep.objective_trace.push_back(value);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        ++rep.iterations;
        if (!accepted) break;  // no ascent direction left
    }

    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 7; ++k) model.theta[j][k] = theta(7 * j + k);
    model.meta.converged = rep.converged;
    model.meta.iterations = rep.iterations;
    if (report != nullptr) *report = std::move(rep);
    return model;
}

int assign_icon(Group group, const TrendFit& fit, const IconModel& model) {
    if (model.group != group) {
        throw DataError(std::string("icon model for group ") + to_string(model.group) +
                        " applied to group " + to_string(group));
    }
    if (fit.degree == 1) {
        const double slope = fit.gamma[1];
        if (group == Group::Upward && slope > 0.0) return 4;
        if (group == Group::Downward && slope < 0.0) return 7;
        if (group == Group::Flat && std::abs(slope) <= 0.1) return 1;
    }
    const auto p = cell_probabilities(model, build_features(fit));
    std::size_t best = 0;
    for (std::size_t j = 1; j < 4; ++j) {
        if (p[j] > p[best]) best = j;  // ties keep the lower icon id
    }
    return model.category_icons[best];
}

namespace {

std::vector<double> sample_far_shape(std::mt19937_64& rng,
                                     const std::vector<std::vector<double>>& canonical,
                                     const std::vector<double>& grid) {
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    const std::size_t n = grid.size();
    for (int attempt = 0; attempt < 20000; ++attempt) {
        std::array<double, 4> c{coef(rng), coef(rng), coef(rng), coef(rng)};
        std::vector<double> shape(n);
        double amp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = grid[i];
            shape[i] = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
            amp = std::max(amp, std::abs(shape[i]));
        }
        if (amp < 0.25) continue;
        for (double& v : shape) v /= amp;

        bool far = true;
        for (const auto& ref : canonical) {
            double msd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double diff = shape[i] - ref[i];
                msd += diff * diff;
            }
            msd /= static_cast<double>(n);
            if (msd < 0.55) {
                far = false;
                break;
            }
        }
        if (far) return shape;
    }
    throw NumericError("sample_far_shape: rejection sampling failed");
}

}  // namespace

std::vector<LabeledFeature> synth_training_set(Group group, const SynthOptions& opts) {
    if (opts.n_steps < 5) throw NumericError("synth_training_set: need at least 5 steps");
    if (opts.n_per_icon < 1) throw NumericError("synth_training_set: n_per_icon must be >= 1");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::size_t n = opts.n_steps;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }

    const auto& icons = eligible_icons(group);
    std::vector<std::vector<double>> canonical;
    for (int icon : icons) {
        if (icon == kUnknownIcon) continue;
        std::vector<double> shape(n);
        for (std::size_t i = 0; i < n; ++i) shape[i] = icon_shape(icon, grid[i]);
        canonical.push_back(std::move(shape));
    }

    std::vector<LabeledFeature> out;
    out.reserve(static_cast<std::size_t>(opts.n_per_icon) * icons.size());
    std::vector<double> y(n);
    for (int icon : icons) {
        for (int r = 0; r < opts.n_per_icon; ++r) {
            std::vector<double> base;
            if (icon == kUnknownIcon) {
                base = sample_far_shape(rng, canonical, grid);
            } else {
                base.resize(n);
                for (std::size_t i = 0; i < n; ++i) base[i] = icon_shape(icon, grid[i]);
            }
            for (std::size_t i = 0; i < n; ++i) y[i] = base[i] + opts.noise_sd * gauss(rng);
            const TrendFit fit = select_degree(y);
            out.push_back({build_features(fit), icon});
        }
    }
    return out;
}

std::string save_model(const IconModel& model) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"schema\": \"trec-icon-model/1\",\n";
    out << "  \"group\": \"" << to_string(model.group) << "\",\n";
    out << "  \"category_icons\": [" << model.category_icons[0] << ", "
        << model.category_icons[1] << ", " << model.category_icons[2] << ", "
        << model.category_icons[3] << "],\n";
    out << "  \"theta\": [\n";
    for (int j = 0; j < 3; ++j) {
        out << "    [";
        for (int k = 0; k < 7; ++k) {
            if (k > 0) out << ", ";
            out << format_double(model.theta[j][k]);
        }
        out << (j < 2 ? "],\n" : "]\n");
    }
    out << "  ],\n";
    out << "  \"training\": {\n";
    out << "    \"samples\": " << model.meta.samples << ",\n";
    out << "    \"converged\": " << (model.meta.converged ? "true" : "false") << ",\n";
    out << "    \"iterations\": " << model.meta.iterations << ",\n";
    out << "    \"seed\": " << model.meta.seed << ",\n";
    out << "    \"lambda\": " << format_double(model.meta.lambda) << "\n";
    out << "  }\n";
    out << "}\n";
    return out.str();
}

IconModel load_model(const std::string& document) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(document);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model document is not valid JSON: ") + e.what());
    }
    try {
        const std::string schema = j.at("schema").get<std::string>();
        if (schema != "trec-icon-model/1") {
            throw DataError("unsupported model schema '" + schema + "'");
        }
        IconModel model;
        const auto group = parse_group(j.at("group").get<std::string>());
        if (!group.has_value()) {
            throw DataError("unknown group '" + j.at("group").get<std::string>() + "'");
        }
        model.group = *group;
        const auto icons = j.at("category_icons").get<std::vector<int>>();
        if (icons.size() != 4) throw DataError("category_icons must have 4 entries");
        std::copy(icons.begin(), icons.end(), model.category_icons.begin());
        if (model.category_icons != eligible_icons(model.group)) {
            throw DataError("category_icons do not match the group's eligible icons");
        }
        const auto theta = j.at("theta");
        if (!theta.is_array() || theta.size() != 3) throw DataError("theta must be 3 x 7");
        for (int row = 0; row < 3; ++row) {
            const auto values = theta.at(static_cast<std::size_t>(row)).get<std::vector<double>>();
            if (values.size() != 7) throw DataError("theta must be 3 x 7");
            for (int k = 0; k < 7; ++k) {
                if (!std::isfinite(values[static_cast<std::size_t>(k)])) {
                    throw DataError("theta contains a non-finite entry");
                }
                model.theta[row][k] = values[static_cast<std::size_t>(k)];
            }
        }
        const auto training = j.at("training");
        model.meta.samples = training.at("samples").get<int>();
        model.meta.converged = training.at("converged").get<bool>();
        model.meta.iterations = training.at("iterations").get<int>();
        model.meta.seed = training.at("seed").get<std::uint64_t>();
        model.meta.lambda = training.at("lambda").get<double>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

}  // namespace trec
