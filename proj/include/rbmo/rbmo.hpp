#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rbmo/covering.hpp"
#include "rbmo/dominating.hpp"
#include "rbmo/space.hpp"

namespace rbmo {

struct InclusionPair {
    int small = 0;  // canonical index of B
    int big = 0;    // canonical index of B1
    double K = 1.0;
};

/// The RBMO optimisation problem over the canonical family: one constant f_B
/// per canonical ball, oscillation constraints (4.1) at parameter rho, and
/// regularity constraints (4.2) over all inclusion pairs. Keeps a pointer to
/// the space; the caller owns it.
struct RBMOProblem {
    const Space* space = nullptr;
    DominatingFunction lambda;
    std::vector<double> f;
    double rho = 2.0;
    CanonicalFamily family;
    /// Balls the optimisation ranges over: the canonical family, plus extra
    /// per-gap radii when refined.
    std::vector<Ball> opt_balls;
    std::vector<InclusionPair> pairs;
    std::vector<double> mu_rho;  // mu(rho B) per optimisation ball

    struct BallData {
        std::vector<double> values;   // distinct member f-values, ascending
        std::vector<double> weights;  // merged weights per distinct value
        std::vector<double> pref_w;   // prefix sums of weights
        std::vector<double> pref_s;   // prefix sums of w * v
        double total_w = 0.0;
        double total_s = 0.0;
        double gmin = 0.0;  // min_c sum w |v - c|
    };
    std::vector<BallData> ball_data;

    int ball_count() const { return static_cast<int>(opt_balls.size()); }
    /// sum_{y in B} w_y |f(y) - c| by direct summation over the stored data.
    double oscillation(int ball, double c) const;
};

RBMOProblem build_problem(const Space& space, const DominatingFunction& lambda,
                          const std::vector<double>& f, double rho);

/// Canonical family plus `subdivisions` extra radii per breakpoint gap. The
/// canonical family pins one representative per member set; the refinement
/// probes how much finer radius sampling moves the norm (it can only increase
/// it: the refined constraint set contains the canonical one).
RBMOProblem build_problem_refined(const Space& space, const DominatingFunction& lambda,
                                  const std::vector<double>& f, double rho, int subdivisions);

struct RefinementReport {
    double A_base = 0.0;
    double A_refined = 0.0;
    double relative_change = 0.0;  // (A_refined - A_base) / (1 + A_base)
    int extra_balls = 0;
};

RefinementReport compare_refinement(const Space& space, const DominatingFunction& lambda,
                                    const std::vector<double>& f, double rho, int subdivisions);

struct AdmissibleFamily {
    double A = 0.0;
    std::vector<double> f_B;  // per canonical ball
};

struct SolveInfo {
    double bracket = 0.0;  // initial upper end of the bisection bracket
    int iterations = 0;
    bool feasible_at_zero = false;
};

/// Minimises A by bisection with an exact feasibility oracle: the oscillation
/// constraint confines each f_B to an interval (piecewise-linear inversion),
/// the regularity constraints are symmetric difference bands, and Bellman-Ford
/// propagation decides the resulting difference-constraint system exactly.
/// The returned f_B is the pointwise clamp of 0 into the propagated intervals,
/// the unique minimum-norm admissible family at the returned A.
AdmissibleFamily solve_rbmo(const RBMOProblem& problem, SolveInfo* info = nullptr);

struct SlackReport {
    double min_slack = 0.0;
    std::string worst;  // description of the tightest constraint
    bool pass = false;  // min_slack >= -1e-9 (1 + A)
};

SlackReport admissibility_slack(const RBMOProblem& problem, const AdmissibleFamily& family);

/// One-ball relaxation: A >= min_c osc_B(c) / mu(rho B) for every ball.
double one_ball_lower_bound(const RBMOProblem& problem);

/// Classical BMO norm: max over canonical balls of the mean oscillation around
/// the ball average.
double bmo_norm(const Space& space, const std::vector<double>& f);

struct CompareRhoReport {
    double A_rho = 0.0;
    double A_sigma = 0.0;
    double C = 0.0;  // assembled from the covering count and the kernel log bound
    bool monotone_ok = false;  // A_rho <= A_sigma exactly
    bool ratio_ok = false;     // A_sigma <= C A_rho (+ solver slack)
    double realised_ratio = 0.0;
    bool pass = false;
};

CompareRhoReport compare_rho(const Space& space, const DominatingFunction& lambda,
                             const std::vector<double>& f, double rho, double sigma,
                             const DoublingDiagnostics& diag);

struct CompareBmoReport {
    double A = 0.0;
    double bmo = 0.0;
    double c1 = 0.0;  // bmo <= c1 A
    double c2 = 0.0;  // A <= c2 bmo
    bool sandwich_ok = false;
    // Eq. (4.4) on all inclusion pairs, with G = 1 + log2(mu(B1)/mu(B)):
    // |<f>_B - <f>_B1| <= C_a bmo G and G <= C_b K(B,B1)
    double C_a = 0.0;
    double C_b = 0.0;
    bool pairs_ok = false;
    double worst_pair_ratio = 0.0;
    bool pass = false;
};

/// Requires a measure-doubling space (C_mu_sup <= doubling_threshold); uses
/// lambda = ball measure.
CompareBmoReport compare_bmo(const Space& space, const std::vector<double>& f, double rho,
                             double doubling_threshold = 32.0);

struct Section5Report {
    // (a) ancestors: |f_B - f_B'| and the kernel against C_lambda c(beta,gamma)
    bool ancestors_ok = false;
    double worst_ancestor_excess = 0.0;
    double kernel_cap = 0.0;  // 1 + C_lambda c(beta,gamma)
    // (b) comparable neighbours at (C1, C2)
    bool neighbours_ok = false;
    int neighbour_pairs = 0;
    int neighbour_skipped = 0;
    // (c) |<f>_B - f_B| <= beta A on (alpha,beta)-doubling canonical balls
    bool averages_ok = false;
    double worst_average_gap = 0.0;
    bool pass = false;
};

/// The three section-5 lemmas with the proofs' assembled constants. The family
/// must solve the problem at rho = params.alpha.
Section5Report check_section5(const RBMOProblem& problem, const AdmissibleFamily& family,
                              const DoublingParams& params, double C1 = 1.0, double C2 = 3.0);

/// Writes the literal LP (variables A, f_B, and auxiliary t_{B,y}; constraints
/// in <= form) as sparse triplets "row col value", one per line; column
/// `n_vars` holds the right-hand side. Lines starting with '#' document the
/// variable layout.
void export_lp_triplets(const RBMOProblem& problem, std::ostream& os);

}  // namespace rbmo
