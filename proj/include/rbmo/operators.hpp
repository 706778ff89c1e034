#pragma once

#include <optional>
#include <vector>

#include "rbmo/dominating.hpp"
#include "rbmo/space.hpp"

namespace rbmo {

struct MaximalProfile {
    std::vector<double> values;
    std::optional<double> R;
};

/// 5B-normalised maximal function: sup over balls B containing x of
/// (1/mu(5B)) int_B |f|. On a finite space the supremum over real radii equals
/// the max over per-center breakpoints of (closed-ball integral at rho) /
/// (closed-ball mass at 5 rho): for radii in a breakpoint gap the member set is
/// frozen while mu(5B) only grows, so each gap's supremum is its right limit
/// at the lower breakpoint, and that value is attained by actual open balls
/// with radii just above the breakpoint.
MaximalProfile maximal_function(const Space& space, const std::vector<double>& f,
                                std::optional<double> R = std::nullopt);

struct WeakTypeEntry {
    double t = 0.0;
    double level_mass = 0.0;  // mu({Mf > t})
    double bound = 0.0;       // ||f||_1 / t
};

struct WeakTypeReport {
    bool pass = false;
    double norm1 = 0.0;
    double worst_ratio = 0.0;  // max level_mass / bound
    double witness_t = 0.0;
    std::vector<WeakTypeEntry> table;
};

/// mu({Mf > t}) <= ||f||_1 / t with the proof's constant 1, for each t in the
/// grid.
WeakTypeReport weak_type_check(const Space& space, const std::vector<double>& f,
                               const std::vector<double>& t_grid);

struct DifferentiationReport {
    bool pass = false;
    std::vector<double> radii;  // per-point qualifying radius
    double beta = 0.0;
};

/// Differentiation along (5,beta)-doubling balls: on an atomic space the net
/// terminates at singletons; checks that the terminal singleton average equals
/// f(x) exactly and reports the qualifying radius (below nn(x)/5, where the
/// 5-dilation is still the singleton).
DifferentiationReport differentiation_check(const Space& space, const std::vector<double>& f,
                                            double beta);

}  // namespace rbmo
