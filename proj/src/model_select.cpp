#include "pseudopoisson/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pseudopoisson/errors.hpp"

namespace pseudopoisson {

namespace {

struct CardSpec {
    const char* name;
    bool mirrored;
    Submodel submodel;
};

constexpr CardSpec kCards[] = {
    {"FM", false, Submodel::Full},           {"MFM", true, Submodel::Full},
    {"SM-I", false, Submodel::EqualRates},   {"MSM-I", true, Submodel::EqualRates},
    {"SM-II", false, Submodel::ZeroIntercept}, {"MSM-II", true, Submodel::ZeroIntercept},
};

ModelCard fit_card(std::string name, bool mirrored, Submodel submodel, const Sample& data) {
    ModelCard card;
    card.name = std::move(name);
    card.mirrored = mirrored;
    card.submodel = submodel;
    card.nparams = parameter_count(submodel);
    if (submodel == Submodel::ZeroIntercept && !zero_intercept_feasible(data)) {
        card.reason = mirrored ? "x2 = 0 does not imply x1 = 0" : "x1 = 0 does not imply x2 = 0";
        return card;
    }
    try {
        card.fit = mle_fit(data, submodel);
        card.aic = aic(card.fit->loglik, card.nparams);
        card.feasible = true;
    } catch (const Error& e) {
        card.fit.reset();
        card.aic.reset();
        card.reason = e.what();
    }
    return card;
}

}  // namespace

const ModelCard& ComparisonReport::card(const std::string& name) const {
    for (const auto& c : cards) {
        if (c.name == name) return c;
    }
    if (independence.name == name) return independence;
    throw DomainError("model_select: no card named '" + name + "'");
}

Sample mirror(const Sample& s) {
    std::vector<CountPair> swapped;
    swapped.reserve(s.size());
    for (const auto& x : s) swapped.push_back({x.x2, x.x1});
    return Sample(std::move(swapped));
}

bool zero_intercept_feasible(const Sample& s) {
    return std::none_of(s.begin(), s.end(), [](const CountPair& x) { return x.x1 == 0 && x.x2 > 0; });
}

double aic(double loglik, int nparams) {
    if (!std::isfinite(loglik)) throw InfeasibleError("model_select: AIC needs a finite log-likelihood");
    return -2.0 * loglik + 2.0 * static_cast<double>(nparams);
}

ComparisonReport compare_models(const Sample& s) {
    const Sample mirrored = mirror(s);
    ComparisonReport report;
    for (const auto& spec : kCards) {
        report.cards.push_back(
            fit_card(spec.name, spec.mirrored, spec.submodel, spec.mirrored ? mirrored : s));
    }
    report.independence = fit_card("IND", false, Submodel::Independence, s);

    const ModelCard* best = nullptr;
    for (const auto& card : report.cards) {
        if (!card.feasible) continue;
        if (best == nullptr || *card.aic < *best->aic ||
            (*card.aic == *best->aic && card.nparams < best->nparams)) {
            best = &card;
        }
    }
    if (best == nullptr) throw InfeasibleError("model_select: no feasible model for this sample");
    report.best = best->name;
    return report;
}

}  // namespace pseudopoisson
