#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pseudopoisson/estimation.hpp"
#include "pseudopoisson/model.hpp"

namespace pseudopoisson {

/// One row of the model comparison table.
struct ModelCard {
    std::string name;  // FM, MFM, SM-I, MSM-I, SM-II, MSM-II (or IND for the diagnostic row)
    bool mirrored = false;
    Submodel submodel = Submodel::Full;
    int nparams = 3;
    std::optional<FitResult> fit;
    std::optional<double> aic;
    bool feasible = false;
    /// Why the card is infeasible; empty when feasible.
    std::string reason;
};

struct ComparisonReport {
    /// The six Pseudo-Poisson cards in table order.
    std::vector<ModelCard> cards;
    /// Independence fit; shown for reference, never selected as best.
    ModelCard independence;
    std::string best;

    const ModelCard& card(const std::string& name) const;
};

/// Swap x1 and x2 in every pair.
Sample mirror(const Sample& s);

/// True iff every pair with x1 = 0 also has x2 = 0.
bool zero_intercept_feasible(const Sample& s);

/// -2 loglik + 2 nparams. Throws InfeasibleError for a non-finite loglik.
double aic(double loglik, int nparams);

/// Fits FM, SM-I, SM-II on s and their mirrored counterparts on mirror(s) by
/// maximum likelihood. Cards whose fit is undefined are kept with no AIC.
/// Ties go to the card with fewer parameters, then to table order.
///
/// Throws InfeasibleError when no card is feasible.
ComparisonReport compare_models(const Sample& s);

}  // namespace pseudopoisson
