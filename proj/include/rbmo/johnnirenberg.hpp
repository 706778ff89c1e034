#pragma once

#include <optional>
#include <vector>

#include "rbmo/rbmo.hpp"

namespace rbmo {

/// Weighted count of members of B0 whose residual against the family constant
/// of canonicalize(B0) exceeds t.
double tail_distribution(const RBMOProblem& problem, const AdmissibleFamily& family,
                         const Ball& b0, double t);

struct JNStoppingRecord {
    Ball stopping;       // B_i: (alpha,beta)-doubling, disjoint, inside sqrt(rho) B0
    Ball cover;          // 5 B_i
    double f_stopping = 0.0;
    double f_cover = 0.0;
    double value_gap = 0.0;   // |f_Bi - f_B0|
    bool upper_gap_ok = false;  // value_gap <= 3L/2 (reported slack, not a gate)
    bool drift_ok = false;      // |f_Bi - f_5Bi| <= L/2 (reported slack, not a gate)
    bool avg_bound_ok = false;  // mean of |f - f_B0| over B_i exceeds L/2
};

/// One stopping-ball decomposition step of a parent ball.
struct JNDecomposition {
    bool ok = false;
    std::optional<PointId> witness;  // point above threshold with no stopping ball
    Ball parent;
    double f_parent = 0.0;
    std::vector<JNStoppingRecord> records;
    double cover_mass = 0.0;   // sum mu(rho 5B_i)
    double half_target = 0.0;  // mu(rho parent) / 2
    bool mass_ok = false;
    bool containment_ok = false;  // n = 2 certificate
    bool disjoint_ok = false;
    bool inside_ok = false;
};

/// Stopping-ball selection for one parent: for every x with residual > 2L the
/// maximal (alpha,beta)-doubling B(x, alpha^-i r_parent) inside sqrt(rho)
/// parent with |f_Bx' - f_parent| > L, made disjoint by vitali_select.
/// Requires params.alpha == 5 * problem.rho.
JNDecomposition jn_decompose(const RBMOProblem& problem, const AdmissibleFamily& family,
                             const Ball& parent, const DoublingParams& params, double L);

struct JNLevelSummary {
    int parents = 0;
    int balls = 0;
    double mass = 0.0;  // sum mu(rho B^i) over the level
    bool halving_ok = false;
    bool depth_bound_ok = false;  // mass <= 2^-n mu(rho B0)
};

struct JNRecursion {
    bool ok = false;
    std::vector<JNLevelSummary> levels;
    std::vector<JNDecomposition> failures;  // first failing node, if any
    bool depth_cap_hit = false;
};

JNRecursion jn_recursion(const RBMOProblem& problem, const AdmissibleFamily& family,
                         const Ball& b0, const DoublingParams& params, double L,
                         int max_depth = 60);

struct LSearchResult {
    double L = 0.0;
    double ratio = 0.0;  // L / A, the empirical proof constant
    bool cap_hit = false;
    bool constant_function = false;  // A == 0
};

/// Smallest L in {A, 2A, 4A, ...} for which the full recursion succeeds with
/// all mass, containment and tail checks; grid capped at 2^20 A.
LSearchResult L_search(const RBMOProblem& problem, const AdmissibleFamily& family, const Ball& b0,
                       const DoublingParams& params);

struct JNTailEntry {
    double t = 0.0;
    double tail = 0.0;
    double envelope = 0.0;  // 2 mu(rho B0) 2^(-t/2L)
};

struct JNReport {
    Ball b0;
    double rho = 0.0;
    double A = 0.0;
    double L = 0.0;
    double L_over_A = 0.0;
    bool search_cap_hit = false;
    std::vector<JNLevelSummary> levels;
    std::vector<JNTailEntry> tail;
    bool tail_bounds_ok = false;  // tail(2nL) <= 2^-n mu(rho B0), all reachable n
    double c_fit = 0.0;
    bool c_fit_infinite = false;
    bool c_fit_ok = false;  // c_fit >= ln2 / (2 L / A)
    bool pass = false;
};

JNReport verify_jn(const RBMOProblem& problem, const AdmissibleFamily& family, const Ball& b0,
                   const DoublingParams& params, const std::vector<double>& t_grid);

struct LpOscReport {
    double p = 1.0;
    double value = 0.0;
    double bound = 0.0;  // C_p A by layer cake over the verified tail envelope
    bool pass = false;
};

LpOscReport lp_oscillation(const RBMOProblem& problem, const AdmissibleFamily& family,
                           const Ball& b0, double p, double L);

}  // namespace rbmo
