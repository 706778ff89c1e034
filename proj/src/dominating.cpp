#include "rbmo/dominating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rbmo {

namespace {
constexpr double kRelTol = 1e-12;
constexpr int kPowTable = 128;
}  // namespace

int ceil_log2_ratio(double num, double den) {
    if (!(num > 0.0) || !(den > 0.0)) throw std::invalid_argument("ceil_log2_ratio: need positives");
    int k = static_cast<int>(std::ceil(std::log2(num / den)));
    while (std::ldexp(den, k) < num) ++k;
    while (k > -1074 && std::ldexp(den, k - 1) >= num) --k;
    return k;
}

DominatingFunction DominatingFunction::power_law(double C, double d) {
    if (!(C > 0.0) || !(d > 0.0)) throw std::invalid_argument("power_law: need C > 0, d > 0");
    DominatingFunction f;
    f.kind_ = LambdaKind::PowerLaw;
    f.C_ = C;
    f.d_ = d;
    f.C_lambda_ = std::exp2(d);
    return f;
}

DominatingFunction DominatingFunction::ball_measure(const Space& space) {
    DominatingFunction f;
    f.kind_ = LambdaKind::BallMeasure;
    f.C_lambda_ = doubling_diagnostics(space).C_mu_sup;
    return f;
}

DominatingFunction DominatingFunction::envelope(const Space& space, double C_lambda) {
    if (!(C_lambda > 1.0)) throw std::invalid_argument("envelope: need C_lambda > 1");
    DominatingFunction f;
    f.kind_ = LambdaKind::Envelope;
    f.C_lambda_ = C_lambda;
    const int n = space.size();
    f.env_bp_.resize(n);
    f.env_mass_.resize(n);
    for (PointId c = 0; c < n; ++c) {
        f.env_bp_[c] = space.breakpoints(c);
        for (std::size_t k = 0; k < f.env_bp_[c].size(); ++k)
            f.env_mass_[c].push_back(space.closed_mass(c, static_cast<int>(k)));
    }
    f.env_pow_.resize(kPowTable);
    f.env_pow_[0] = 1.0;
    for (int m = 1; m < kPowTable; ++m) f.env_pow_[m] = f.env_pow_[m - 1] / C_lambda;
    return f;
}

double DominatingFunction::scale_floor(PointId center) const {
    if (floor_.empty()) return 0.0;
    return floor_[center];
}

double DominatingFunction::evaluate(const Space& space, PointId x, double r) const {
    space.check_point(x);
    if (!(r > 0.0)) throw std::invalid_argument("lambda: radius must be > 0");
    switch (kind_) {
        case LambdaKind::PowerLaw:
            return C_ * std::pow(r, d_);
        case LambdaKind::BallMeasure:
            return space.measure(Ball{x, r});
        case LambdaKind::Envelope: {
            double best = 0.0;
            const auto& bp = env_bp_[x];
            const auto& mass = env_mass_[x];
            for (std::size_t k = 0; k < bp.size(); ++k) {
                double term;
                if (bp[k] <= r) {
                    term = mass[k];
                } else {
                    const int m = ceil_log2_ratio(bp[k], r);
                    term = m < kPowTable ? mass[k] * env_pow_[m]
                                         : mass[k] * std::pow(C_lambda_, -double(m));
                }
                best = std::max(best, term);
            }
            return best;
        }
    }
    return 0.0;
}

std::string DominatingFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case LambdaKind::PowerLaw:
            os << "power(C=" << C_ << ", d=" << d_ << ")";
            break;
        case LambdaKind::BallMeasure:
            os << "ballmeasure(C_lambda=" << C_lambda_ << ")";
            break;
        case LambdaKind::Envelope:
            os << "envelope(C_lambda=" << C_lambda_ << ")";
            break;
    }
    return os.str();
}

UpperDoublingReport verify_upper_doubling(const Space& space, const DominatingFunction& lambda) {
    UpperDoublingReport rep;
    rep.monotone_ok = rep.doubling_ok = rep.domination_ok = rep.offcenter_ok = true;
    const CanonicalFamily family(space);
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        if (rep.witness.empty()) rep.witness = what;
    };

    for (PointId c = 0; c < space.size(); ++c) {
        double prev = 0.0;
        for (int k = 0; k < family.count(c); ++k) {
            const Ball& b = family.ball(family.index(c, k));
            const double lam = lambda.evaluate(space, c, b.radius);
            if (lam < prev * (1.0 - kRelTol))
                fail(rep.monotone_ok, "monotonicity at " + space.name(c));
            prev = lam;
            const double lam2 = lambda.evaluate(space, c, 2.0 * b.radius);
            if (lam2 > lambda.C_lambda() * lam * (1.0 + kRelTol))
                fail(rep.doubling_ok, "lambda doubling at " + space.name(c));
            if (b.radius >= lambda.scale_floor(c)) {
                if (space.measure(b) > lam * (1.0 + kRelTol))
                    fail(rep.domination_ok, "domination at " + space.name(c) + " r=" +
                                                std::to_string(b.radius));
            }
            for (PointId y = 0; y < space.size(); ++y) {
                if (space.dist(c, y) > b.radius) continue;
                if (space.measure(Ball{y, b.radius}) >
                    lambda.C_lambda() * lam * (1.0 + kRelTol))
                    fail(rep.offcenter_ok,
                         "off-center bound at (" + space.name(c) + "," + space.name(y) + ")");
            }
        }
    }
    if (lambda.has_scale_floor())
        rep.notes.push_back(
            "power-law fit: domination certified only at and above each center's first positive "
            "breakpoint (atomic measures are not upper doubling down to scale 0)");
    rep.pass = rep.monotone_ok && rep.doubling_ok && rep.domination_ok && rep.offcenter_ok;
    return rep;
}

DominatingFunction fit_power_law(const Space& space, double d) {
    if (!(d > 0.0)) throw std::invalid_argument("fit_power_law: d must be > 0");
    double C = 0.0;
    std::vector<double> floor(space.size(), 0.0);
    for (PointId c = 0; c < space.size(); ++c) {
        const auto& bp = space.breakpoints(c);
        bool seen = false;
        for (std::size_t k = 0; k < bp.size(); ++k) {
            if (bp[k] <= 0.0) continue;
            if (!seen) {
                floor[c] = bp[k];
                seen = true;
            }
            C = std::max(C, space.closed_mass(c, static_cast<int>(k)) / std::pow(bp[k], d));
        }
        if (!seen) {
            // isolated universe (single point): one constraint at the default
            // canonical radius
            floor[c] = 2.0;
            C = std::max(C, space.weight(c) / std::pow(2.0, d));
        }
    }
    DominatingFunction f = DominatingFunction::power_law(C, d);
    f.floor_ = std::move(floor);
    return f;
}

DominatingFunction minimal_envelope(const Space& space, double C_lambda) {
    return DominatingFunction::envelope(space, C_lambda);
}

double kernel(const Space& space, const DominatingFunction& lambda, const Ball& b, const Ball& b1) {
    if (!(b.radius <= b1.radius)) throw std::invalid_argument("kernel: need r_B <= r_B1");
    const PointMask inner = space.member_mask(b);
    const PointMask outer = space.member_mask(b1);
    if (!inner.subset_of(outer)) throw std::invalid_argument("kernel: need B subset of B1");
    double sum = 0.0;
    const Ball twice = dilate(b1, 2.0);
    for (PointId y : space.members(twice)) {
        if (inner.test(y)) continue;
        sum += space.weight(y) / lambda.evaluate(space, b.center, space.dist(y, b.center));
    }
    return 1.0 + sum;
}

KernelBoundCheck kernel_log_bound_check(const Space& space, const DominatingFunction& lambda,
                                        const Ball& b, const Ball& b1) {
    KernelBoundCheck out;
    out.lhs = kernel(space, lambda, b, b1) - 1.0;
    out.rhs = lambda.C_lambda() * std::log2(4.0 * b1.radius / b.radius);
    out.pass = out.lhs <= out.rhs;
    return out;
}

DoublingParams default_params(const DoublingDiagnostics& diag, double C_lambda, double rho) {
    DoublingParams p;
    p.alpha = 5.0 * rho;
    p.beta = 2.0 * std::max(std::pow(C_lambda, std::log2(p.alpha)),
                            std::pow(p.alpha, diag.n_exponent));
    return p;
}

AncestorResult doubling_ancestor(const Space& space, const DominatingFunction& lambda,
                                 const Ball& b, const DoublingParams& params) {
    const double gamma = std::pow(lambda.C_lambda(), std::log2(params.alpha));
    if (!(params.beta > gamma))
        throw std::invalid_argument(
            "doubling_ancestor: hypothesis beta > C_lambda^log2(alpha) violated");
    AncestorResult out;
    Ball cur = b;
    for (int j = 0; j <= 500; ++j) {
        const double mu = space.measure(cur);
        const double mu_a = space.measure(dilate(cur, params.alpha));
        if (mu_a <= params.beta * mu) {
            out.ancestor = cur;
            out.j = j;
            return out;
        }
        out.non_doubling_ratios.push_back(mu_a / mu);
        cur = dilate(cur, params.alpha);
    }
    throw std::logic_error("doubling_ancestor: no doubling power found (unreachable)");
}

std::optional<SmallDoublingBall> small_doubling_ball(
    const Space& space, PointId x, double r, const DoublingParams& params, int j_max,
    const std::function<bool(const Ball&)>& accept) {
    if (!(r > 0.0)) throw std::invalid_argument("small_doubling_ball: r must be > 0");
    double rad = r;
    for (int j = 0; j <= j_max; ++j) {
        const Ball b{x, rad};
        if (rad > 0.0 && is_doubling(space, b, params) && (!accept || accept(b)))
            return SmallDoublingBall{b, j};
        rad /= params.alpha;
        if (!(rad > 0.0)) break;
    }
    return std::nullopt;
}

BadPointsResult bad_points(const Space& space, const Ball& b0, const DoublingParams& params, int k,
                           const DoublingDiagnostics& diag) {
    const double alpha_n = std::pow(params.alpha, diag.n_exponent);
    if (!(params.beta > alpha_n))
        throw std::invalid_argument("bad_points: hypothesis beta > alpha^n violated");
    if (k < 0) throw std::invalid_argument("bad_points: k must be >= 0");
    BadPointsResult out;
    for (PointId x : space.members(b0)) {
        bool bad = true;
        double rad = b0.radius * std::pow(params.alpha, -double(k));
        for (int j = 0; j <= k && bad; ++j) {
            if (rad > 0.0 && is_doubling(space, Ball{x, rad}, params)) bad = false;
            rad *= params.alpha;
        }
        if (bad) {
            out.bad.push_back(x);
            out.mu_bad += space.weight(x);
        }
    }
    // N 2^n = N^2 exactly, since n = log2 N
    out.bound = double(diag.N_bound) * double(diag.N_bound) * space.measure(dilate(b0, 3.0)) *
                std::pow(alpha_n / params.beta, double(k));
    out.pass = out.mu_bad <= out.bound;
    return out;
}

}  // namespace rbmo
