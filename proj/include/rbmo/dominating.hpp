#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rbmo/covering.hpp"
#include "rbmo/space.hpp"

namespace rbmo {

/// Smallest integer k with den * 2^k >= num (num, den > 0). Exact: powers of
/// two are applied with ldexp.
int ceil_log2_ratio(double num, double den);

enum class LambdaKind { PowerLaw, BallMeasure, Envelope };

/// The dominating function lambda(x, r) of the upper-doubling axioms, in one of
/// three representations. PowerLaw fits carry a per-center scale floor below
/// which atomic measures cannot be dominated by C r^d; reports surface it.
class DominatingFunction {
public:
    static DominatingFunction power_law(double C, double d);
    static DominatingFunction ball_measure(const Space& space);
    static DominatingFunction envelope(const Space& space, double C_lambda);

    LambdaKind kind() const { return kind_; }
    double C_lambda() const { return C_lambda_; }
    double power_C() const { return C_; }
    double power_d() const { return d_; }
    /// Scale below which domination is not guaranteed (0 except for fitted
    /// power laws).
    double scale_floor(PointId center) const;
    bool has_scale_floor() const { return !floor_.empty(); }

    double evaluate(const Space& space, PointId x, double r) const;

    std::string describe() const;

private:
    friend DominatingFunction fit_power_law(const Space& space, double d);
    LambdaKind kind_ = LambdaKind::PowerLaw;
    double C_ = 1.0, d_ = 1.0;
    double C_lambda_ = 2.0;
    std::vector<double> floor_;                  // per center, PowerLaw fits only
    std::vector<std::vector<double>> env_bp_;    // Envelope: per-center breakpoints
    std::vector<std::vector<double>> env_mass_;  // Envelope: closed masses
    std::vector<double> env_pow_;                // C_lambda^-m table
};

struct UpperDoublingReport {
    bool pass = false;
    bool monotone_ok = false;
    bool doubling_ok = false;
    bool domination_ok = false;
    bool offcenter_ok = false;
    std::string witness;  // first failing check, human readable
    std::vector<std::string> notes;
};

/// Checks the three axioms on the canonical grid plus the derived off-center
/// bound mu(B(y,r)) <= C_lambda * lambda(x,r) for d(x,y) <= r.
UpperDoublingReport verify_upper_doubling(const Space& space, const DominatingFunction& lambda);

/// Minimal C with mu closed-ball masses <= C rho^d at every positive
/// breakpoint; domination holds for r at or above each center's first positive
/// breakpoint (the scale floor).
DominatingFunction fit_power_law(const Space& space, double d);

DominatingFunction minimal_envelope(const Space& space, double C_lambda);

/// Regularity kernel K(B, B1) = 1 + sum over members(2 B1) \ members(B) of
/// w_y / lambda(c_B, d(y, c_B)). Requires members(B) subset of members(B1) and
/// r_B <= r_B1.
double kernel(const Space& space, const DominatingFunction& lambda, const Ball& b, const Ball& b1);

struct KernelBoundCheck {
    double lhs = 0.0;  // K(B,B1) - 1
    double rhs = 0.0;  // C_lambda * log2(4 r_B1 / r_B)
    bool pass = false;
};

KernelBoundCheck kernel_log_bound_check(const Space& space, const DominatingFunction& lambda,
                                        const Ball& b, const Ball& b1);

struct DoublingParams {
    double alpha = 10.0;
    double beta = 100.0;
};

/// alpha = 5 rho, beta = 2 max(C_lambda^log2 alpha, alpha^n_exponent).
DoublingParams default_params(const DoublingDiagnostics& diag, double C_lambda, double rho);

inline bool is_doubling(const Space& space, const Ball& b, const DoublingParams& p) {
    return space.measure(dilate(b, p.alpha)) <= p.beta * space.measure(b);
}

struct AncestorResult {
    Ball ancestor;
    int j = 0;
    /// mu(alpha^{i+1} B) / mu(alpha^i B) for i < j; all exceed beta.
    std::vector<double> non_doubling_ratios;
};

/// Least j >= 0 with alpha^j B (alpha, beta)-doubling. Requires
/// beta > C_lambda^log2(alpha).
AncestorResult doubling_ancestor(const Space& space, const DominatingFunction& lambda,
                                 const Ball& b, const DoublingParams& params);

struct SmallDoublingBall {
    Ball ball;
    int j = 0;
};

/// Largest (alpha,beta)-doubling ball B(x, alpha^-j r), j in 0..j_max,
/// satisfying `accept`; absent if none.
std::optional<SmallDoublingBall> small_doubling_ball(
    const Space& space, PointId x, double r, const DoublingParams& params, int j_max,
    const std::function<bool(const Ball&)>& accept = {});

struct BadPointsResult {
    std::vector<PointId> bad;
    double mu_bad = 0.0;
    double bound = 0.0;  // N^2 mu(3B) (alpha^n / beta)^k
    bool pass = false;
};

/// k-bad points of B0: no alpha^j B(x, alpha^-k r), j = 0..k, is doubling.
/// Requires beta > alpha^n_exponent.
BadPointsResult bad_points(const Space& space, const Ball& b0, const DoublingParams& params, int k,
                           const DoublingDiagnostics& diag);

}  // namespace rbmo
