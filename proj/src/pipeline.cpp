#include "trec/pipeline.hpp"

#include <json.hpp>

#include "trec/errors.hpp"

namespace trec {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "trec-state/1";

Json fit_to_json(const TrendFit& f) {
    Json j;
    j["variable"] = f.variable;
    j["degree"] = f.degree;
    j["beta"] = f.beta;
    j["gamma"] = f.gamma;
    j["sigma2"] = f.sigma2;
    j["sigma2_clamped"] = f.sigma2_clamped;
    j["loglik"] = f.loglik;
    j["aic"] = f.aic;
    j["fitted"] = f.fitted;
    j["band_lower"] = f.band_lower;
    j["band_upper"] = f.band_upper;
    return j;
}

TrendFit fit_from_json(const Json& j) {
    TrendFit f;
    f.variable = j.at("variable").get<std::string>();
    f.degree = j.at("degree").get<int>();
    f.beta = j.at("beta").get<std::vector<double>>();
    const auto gamma = j.at("gamma").get<std::vector<double>>();
    if (gamma.size() != 4) throw DataError("state: gamma must have 4 entries");
    std::copy(gamma.begin(), gamma.end(), f.gamma.begin());
    f.sigma2 = j.at("sigma2").get<double>();
    f.sigma2_clamped = j.at("sigma2_clamped").get<bool>();
    f.loglik = j.at("loglik").get<double>();
    f.aic = j.at("aic").get<double>();
    f.fitted = j.at("fitted").get<std::vector<double>>();
    f.band_lower = j.at("band_lower").get<std::vector<double>>();
    f.band_upper = j.at("band_upper").get<std::vector<double>>();
    return f;
}

Group group_from_label(const std::string& label) {
    const auto g = parse_group(label);
    if (!g.has_value()) throw DataError("state: unknown group label '" + label + "'");
    return *g;
}

}  // namespace

std::string save_state(const PipelineState& state) {
    Json j;
    j["schema"] = kSchema;
    j["time_labels"] = state.clean.time_labels;

    Json name_map = Json::array();
    for (const auto& [original, canonical] : state.clean.name_map) {
        name_map.push_back({{"original", original}, {"canonical", canonical}});
    }
    j["name_map"] = std::move(name_map);
    j["removed"] = state.clean.removed;
    j["warnings"] = state.clean.warnings;

    Json standardized = Json::array();
    for (const Column& var : state.clean.variables) {
        standardized.push_back({{"name", var.name}, {"values", var.values}});
    }
    j["standardized"] = std::move(standardized);

    Json fits = Json::array();
    for (const TrendFit& f : state.fits) fits.push_back(fit_to_json(f));
    j["fits"] = std::move(fits);

    // Indicator and coefficient matrices, one row per fitted variable.
    Json dim = Json::array();
    Json coef = Json::array();
    for (const TrendFit& f : state.fits) {
        dim.push_back({f.degree == 1 ? 1 : 0, f.degree == 2 ? 1 : 0});
        coef.push_back(f.gamma);
    }
    j["dim"] = std::move(dim);
    j["coef"] = std::move(coef);

    if (state.trec2.has_value()) {
        Json t2;
        t2["groups"] = state.trec2->groups;
        t2["clustering"] = state.trec2->clustering;
        if (state.trec2->pvar.has_value()) {
            t2["pvar"] = {state.trec2->pvar->first, state.trec2->pvar->second};
        } else {
            t2["pvar"] = nullptr;
        }
        j["trec2"] = std::move(t2);
    }

    if (state.discriminant.has_value()) {
        const DiscriminantResult& r = *state.discriminant;
        Json d;
        d["method"] = r.method;
        d["names"] = r.names;
        d["scores"] = r.scores;
        Json groups = Json::array();
        for (Group g : r.groups) groups.push_back(to_string(g));
        d["groups"] = std::move(groups);
        d["not_applicable"] = r.not_applicable;
        if (r.dendrogram.has_value()) {
            Json dd;
            dd["leaf_names"] = r.dendrogram->leaf_names;
            Json merges = Json::array();
            for (const auto& m : r.dendrogram->merges) {
                merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
            }
            dd["merges"] = std::move(merges);
            d["dendrogram"] = std::move(dd);
        } else {
            d["dendrogram"] = nullptr;
        }
        j["discriminant"] = std::move(d);
    }

    if (state.tvar.has_value()) {
        Json tv = Json::array();
        for (const auto& [group, targets] : state.tvar->entries) {
            tv.push_back({{"group", to_string(group)}, {"targets", targets}});
        }
        j["tvar"] = std::move(tv);
    }

    if (state.assignment.has_value()) {
        const TargetAssignment& a = *state.assignment;
        Json asg;
        Json memberships = Json::array();
        for (const auto& m : a.memberships) {
            memberships.push_back({{"target", m.target},
                                   {"group", to_string(m.group)},
                                   {"members", m.members}});
        }
        asg["memberships"] = std::move(memberships);
        Json divergences = Json::array();
        for (const auto& [variable, target, value] : a.divergences) {
            divergences.push_back({{"variable", variable}, {"target", target}, {"value", value}});
        }
        asg["divergences"] = std::move(divergences);
        asg["unclassified_groups"] = a.unclassified_groups;
        j["assignment"] = std::move(asg);
    }

    if (!state.icons.empty()) {
        Json icons = Json::array();
        for (const auto& [target, icon] : state.icons) {
            icons.push_back({{"target", target}, {"icon", icon}});
        }
        j["icons"] = std::move(icons);
    }

    return j.dump(1) + "\n";
}

PipelineState load_state(const std::string& document) {
    Json j;
    try {
        j = Json::parse(document);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("state document is not valid JSON: ") + e.what());
    }
    try {
        const std::string schema = j.at("schema").get<std::string>();
        if (schema != kSchema) {
            throw DataError("unsupported state schema '" + schema + "'");
        }

        PipelineState state;
        state.clean.time_labels = j.at("time_labels").get<std::vector<double>>();
        for (const Json& entry : j.at("name_map")) {
            state.clean.name_map.emplace_back(entry.at("original").get<std::string>(),
                                              entry.at("canonical").get<std::string>());
        }
        state.clean.removed = j.at("removed").get<std::vector<std::string>>();
        state.clean.warnings = j.at("warnings").get<std::vector<std::string>>();
        for (const Json& entry : j.at("standardized")) {
            state.clean.variables.push_back(
                {entry.at("name").get<std::string>(),
                 entry.at("values").get<std::vector<double>>()});
        }
        for (const Json& entry : j.at("fits")) state.fits.push_back(fit_from_json(entry));

        if (j.contains("trec2")) {
            Trec2Settings t2;
            t2.groups = j["trec2"].at("groups").get<int>();
            t2.clustering = j["trec2"].at("clustering").get<bool>();
            if (!j["trec2"].at("pvar").is_null()) {
                const auto pvar = j["trec2"].at("pvar").get<std::vector<std::string>>();
                if (pvar.size() != 2) throw DataError("state: pvar must have 2 entries");
                t2.pvar = std::make_pair(pvar[0], pvar[1]);
            }
            state.trec2 = std::move(t2);
        }

        if (j.contains("discriminant")) {
            const Json& d = j["discriminant"];
            DiscriminantResult r;
            r.method = d.at("method").get<std::string>();
            r.names = d.at("names").get<std::vector<std::string>>();
            r.scores = d.at("scores").get<std::vector<double>>();
            for (const Json& g : d.at("groups")) {
                r.groups.push_back(group_from_label(g.get<std::string>()));
            }
            r.not_applicable = d.at("not_applicable").get<std::vector<std::string>>();
            if (!d.at("dendrogram").is_null()) {
                Dendrogram dd;
                dd.leaf_names = d["dendrogram"].at("leaf_names").get<std::vector<std::string>>();
                for (const Json& m : d["dendrogram"].at("merges")) {
                    dd.merges.push_back({m.at("left").get<int>(), m.at("right").get<int>(),
                                         m.at("height").get<double>()});
                }
                r.dendrogram = std::move(dd);
            }
            state.discriminant = std::move(r);
        }

        if (j.contains("tvar")) {
            TvarSpec tv;
            for (const Json& entry : j["tvar"]) {
                tv.entries.emplace_back(group_from_label(entry.at("group").get<std::string>()),
                                        entry.at("targets").get<std::vector<std::string>>());
            }
            state.tvar = std::move(tv);
        }

        if (j.contains("assignment")) {
            const Json& asg = j["assignment"];
            TargetAssignment a;
            for (const Json& m : asg.at("memberships")) {
                a.memberships.push_back({m.at("target").get<std::string>(),
                                         group_from_label(m.at("group").get<std::string>()),
                                         m.at("members").get<std::vector<std::string>>()});
            }
            for (const Json& d : asg.at("divergences")) {
                a.divergences.emplace_back(d.at("variable").get<std::string>(),
                                           d.at("target").get<std::string>(),
                                           d.at("value").get<double>());
            }
            a.unclassified_groups = asg.at("unclassified_groups").get<std::vector<std::string>>();
            state.assignment = std::move(a);
        }

        if (j.contains("icons")) {
            for (const Json& entry : j["icons"]) {
                state.icons.emplace_back(entry.at("target").get<std::string>(),
                                         entry.at("icon").get<int>());
            }
        }
        return state;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed state document: ") + e.what());
    }
}

}  // namespace trec
