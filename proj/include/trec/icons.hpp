#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trec/classify.hpp"
#include "trec/trend.hpp"

namespace trec {

inline constexpr int kUnknownIcon = 10;  // "?": none of the shapes fits

/// Canonical shape of icons 1..9 on s in [0, 1], standardized amplitude.
/// Icon 10 has no shape and is rejected.
double icon_shape(int icon, double s);

/// Short descriptive token for an icon.
std::string icon_label(int icon);

/// The four icon ids a rough group may receive, ascending, "?" last.
const std::array<int, 4>& eligible_icons(Group g);

/// Discriminator input: (1, d1, d2, g0, g1, g2, g3) where d1/d2 indicate a
/// degree-1/degree-2 fit and g* are the [0,1]-time coefficients.
struct FeatureVector {
    std::array<double, 7> x{};
};

FeatureVector build_features(const TrendFit& fit);

struct IconModel {
    Group group = Group::Upward;
    std::array<std::array<double, 7>, 3> theta{};  // the 4th category is the reference
    std::array<int, 4> category_icons{};
    struct Meta {
        int samples = 0;
        bool converged = false;
        int iterations = 0;
        std::uint64_t seed = 0;
        double lambda = 0.0;
    } meta;
};

/// Softmax with reference category: p_j = exp(x't_j) / (1 + sum exp(x't_l)),
/// evaluated with max-shift stabilization.
std::array<double, 4> cell_probabilities(const IconModel& model, const FeatureVector& x);

struct LabeledFeature {
    FeatureVector x;
    int icon = 0;
};

struct TrainOptions {
    double lambda = 1e-4;  // ridge strength; keeps the maximizer finite under separation
    double gradient_tol = 1e-6;
    int max_iterations = 200;
    std::uint64_t seed = 0;  // recorded in metadata; training itself is deterministic
};

struct TrainReport {
    std::vector<double> objective_trace;  // penalized objective per accepted step
    double gradient_norm = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Maximum-likelihood fit of the multinomial logistic discriminator by
/// Newton steps with backtracking.
IconModel train_icon_model(Group group, const std::vector<LabeledFeature>& data,
                           const TrainOptions& opts = {}, TrainReport* report = nullptr);

/// Unpenalized multinomial log-likelihood; theta is the 21-entry flattening
/// of the three parameter vectors.
double multinomial_loglik(const std::vector<LabeledFeature>& data,
                          const std::array<int, 4>& category_icons,
                          std::span<const double> theta);

std::vector<double> multinomial_loglik_gradient(const std::vector<LabeledFeature>& data,
                                                const std::array<int, 4>& category_icons,
                                                std::span<const double> theta);

/// Slope-based override rules for degree-1 fits, the discriminator otherwise.
/// Probability ties go to the lower icon id.
int assign_icon(Group group, const TrendFit& fit, const IconModel& model);

struct SynthOptions {
    int n_per_icon = 100;
    double noise_sd = 0.15;
    std::uint64_t seed = 0;
    std::size_t n_steps = 40;
};

/// Labeled training features: canonical shapes plus Gaussian noise for icons
/// 1..9, rejection-sampled far-away shapes for icon 10.
std::vector<LabeledFeature> synth_training_set(Group group, const SynthOptions& opts);

std::string save_model(const IconModel& model);
IconModel load_model(const std::string& document);

}  // namespace trec
