#include "rbmo/rbmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace rbmo {

namespace {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;
};

// g(c) = sum w |v - c| for the ball's data; convex piecewise linear with kinks
// at the distinct values. Returns {c : g(c) <= R}, exact at R = gmin.
Interval oscillation_interval(const RBMOProblem::BallData& d, double R) {
    Interval out;
    const int m = static_cast<int>(d.values.size());
    const double W = d.total_w;
    const double S = d.total_s;
    auto g_at = [&](int t) {
        // c = values[t]; left part uses prefix sums through t
        const double wl = d.pref_w[t];
        const double sl = d.pref_s[t];
        return d.values[t] * (2.0 * wl - W) + S - 2.0 * sl;
    };
    int first = -1, last = -1;
    for (int t = 0; t < m; ++t) {
        if (g_at(t) <= R) {
            if (first < 0) first = t;
            last = t;
        }
    }
    if (first < 0) return out;  // R < gmin
    out.empty = false;
    // Endpoints are clamped into their kink segments so the interval is
    // monotone in R at the floating-point level; solve_rbmo's exact
    // rho-monotonicity rests on this.
    if (first == 0) {
        out.lo = std::min(d.values[0], d.values[0] - (R - g_at(0)) / W);
    } else {
        // crossing on [values[first-1], values[first]], slope 2 pref_w[first-1] - W < 0
        const double slope = 2.0 * d.pref_w[first - 1] - W;
        out.lo = std::clamp(d.values[first] + (R - g_at(first)) / slope, d.values[first - 1],
                            d.values[first]);
    }
    if (last == m - 1) {
        out.hi = std::max(d.values[m - 1], d.values[m - 1] + (R - g_at(m - 1)) / W);
    } else {
        const double slope = 2.0 * d.pref_w[last] - W;
        out.hi =
            std::clamp(d.values[last] + (R - g_at(last)) / slope, d.values[last], d.values[last + 1]);
    }
    return out;
}

// Decides the difference-constraint system {f_B in [lo,hi]} +
// {|f_i - f_j| <= A K_ij}. Band cycles have nonnegative weight, so the only
// possible negative cycles pass through the box node and show up as interval
// crossings; Bellman-Ford converges in at most V passes even in floating
// point (adding nonnegative rounded weights is monotone).
bool propagate(const RBMOProblem& problem, double A, std::vector<double>& lo,
               std::vector<double>& hi) {
    const int nb = problem.ball_count();
    lo.resize(nb);
    hi.resize(nb);
    for (int b = 0; b < nb; ++b) {
        const Interval iv = oscillation_interval(problem.ball_data[b], A * problem.mu_rho[b]);
        if (iv.empty) return false;
        lo[b] = iv.lo;
        hi[b] = iv.hi;
        if (lo[b] > hi[b]) return false;
    }
    for (int pass = 0; pass <= nb + 1; ++pass) {
        bool changed = false;
        for (const InclusionPair& p : problem.pairs) {
            const double w = A * p.K;
            const int i = p.small, j = p.big;
            if (hi[j] + w < hi[i]) hi[i] = hi[j] + w, changed = true;
            if (hi[i] + w < hi[j]) hi[j] = hi[i] + w, changed = true;
            if (lo[j] - w > lo[i]) lo[i] = lo[j] - w, changed = true;
            if (lo[i] - w > lo[j]) lo[j] = lo[i] - w, changed = true;
            if (lo[i] > hi[i] || lo[j] > hi[j]) return false;
        }
        if (!changed) break;
    }
    for (int b = 0; b < nb; ++b)
        if (lo[b] > hi[b]) return false;
    return true;
}

}  // namespace

double RBMOProblem::oscillation(int ball, double c) const {
    const BallData& d = ball_data[ball];
    double acc = 0.0;
    for (std::size_t t = 0; t < d.values.size(); ++t)
        acc += d.weights[t] * std::abs(d.values[t] - c);
    return acc;
}

RBMOProblem build_problem(const Space& space, const DominatingFunction& lambda,
                          const std::vector<double>& f, double rho) {
    if (!(rho > 1.0)) throw std::invalid_argument("build_problem: rho must be > 1");
    space.check_function(f);
    RBMOProblem p{&space, lambda, f, rho, CanonicalFamily(space), {}, {}, {}};
    const int nb = p.family.size();

    p.mu_rho.reserve(nb);
    p.ball_data.reserve(nb);
    std::vector<PointMask> masks;
    masks.reserve(nb);
    for (int b = 0; b < nb; ++b) {
        const Ball& ball = p.family.ball(b);
        p.mu_rho.push_back(space.measure(dilate(ball, rho)));
        masks.push_back(space.member_mask(ball));

        RBMOProblem::BallData d;
        std::vector<std::pair<double, double>> vw;
        for (PointId y : space.members(ball)) vw.emplace_back(f[y], space.weight(y));
        std::sort(vw.begin(), vw.end());
        for (const auto& [v, w] : vw) {
            if (!d.values.empty() && d.values.back() == v) {
                d.weights.back() += w;
            } else {
                d.values.push_back(v);
                d.weights.push_back(w);
            }
        }
        double aw = 0.0, as = 0.0;
        for (std::size_t t = 0; t < d.values.size(); ++t) {
            aw += d.weights[t];
            as += d.weights[t] * d.values[t];
            d.pref_w.push_back(aw);
            d.pref_s.push_back(as);
        }
        d.total_w = aw;
        d.total_s = as;
        d.gmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < d.values.size(); ++t) {
            const double g = d.values[t] * (2.0 * d.pref_w[t] - aw) + as - 2.0 * d.pref_s[t];
            d.gmin = std::min(d.gmin, g);
        }
        p.ball_data.push_back(std::move(d));
    }

    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            if (i == j) continue;
            const Ball& bi = p.family.ball(i);
            const Ball& bj = p.family.ball(j);
            if (!(bi.radius <= bj.radius)) continue;
            if (!masks[i].subset_of(masks[j])) continue;
            p.pairs.push_back(InclusionPair{i, j, kernel(space, lambda, bi, bj)});
        }
    return p;
}

AdmissibleFamily solve_rbmo(const RBMOProblem& problem, SolveInfo* info) {
    const int nb = problem.ball_count();
    AdmissibleFamily fam;
    fam.f_B.assign(nb, 0.0);
    SolveInfo si;

    const auto [mn_it, mx_it] = std::minmax_element(problem.f.begin(), problem.f.end());
    const double U = *mx_it - *mn_it;
    si.bracket = U;

    std::vector<double> lo, hi;
    auto finish = [&](double A) {
        if (!propagate(problem, A, lo, hi))
            throw std::logic_error("solve_rbmo: final propagation infeasible");
        fam.A = A;
        for (int b = 0; b < nb; ++b) fam.f_B[b] = std::clamp(0.0, lo[b], hi[b]);
        if (info) *info = si;
        return fam;
    };

    if (propagate(problem, 0.0, lo, hi)) {
        si.feasible_at_zero = true;
        return finish(0.0);
    }
    if (U <= 0.0 || !propagate(problem, U, lo, hi))
        throw std::logic_error("solve_rbmo: bracket end must be feasible");

    double a_lo = 0.0, a_hi = U;
    for (int it = 0; it < 200; ++it) {
        if (a_hi - a_lo <= 1e-13 * U) break;
        const double mid = 0.5 * (a_lo + a_hi);
        si.iterations = it + 1;
        if (propagate(problem, mid, lo, hi))
            a_hi = mid;
        else
            a_lo = mid;
    }
    return finish(a_hi);
}

SlackReport admissibility_slack(const RBMOProblem& problem, const AdmissibleFamily& family) {
    SlackReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    const Space& space = *problem.space;
    for (int b = 0; b < problem.ball_count(); ++b) {
        const double slack = family.A * problem.mu_rho[b] - problem.oscillation(b, family.f_B[b]);
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.worst = "oscillation at ball " + std::to_string(b) + " (center " +
                        space.name(problem.family.center_of(b)) + ")";
        }
    }
    for (const InclusionPair& p : problem.pairs) {
        const double slack = family.A * p.K - std::abs(family.f_B[p.small] - family.f_B[p.big]);
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.worst = "regularity pair (" + std::to_string(p.small) + "," +
                        std::to_string(p.big) + ")";
        }
    }
    rep.pass = rep.min_slack >= -1e-9 * (1.0 + family.A);
    return rep;
}

double one_ball_lower_bound(const RBMOProblem& problem) {
    double best = 0.0;
    for (int b = 0; b < problem.ball_count(); ++b)
        best = std::max(best, problem.ball_data[b].gmin / problem.mu_rho[b]);
    return best;
}

double bmo_norm(const Space& space, const std::vector<double>& f) {
    space.check_function(f);
    const CanonicalFamily family(space);
    double best = 0.0;
    for (const Ball& b : family.balls()) {
        const double avg = space.average(b, f);
        double osc = 0.0;
        for (PointId y : space.members(b)) osc += space.weight(y) * std::abs(f[y] - avg);
        best = std::max(best, osc / space.measure(b));
    }
    return best;
}

CompareRhoReport compare_rho(const Space& space, const DominatingFunction& lambda,
                             const std::vector<double>& f, double rho, double sigma,
                             const DoublingDiagnostics& diag) {
    if (!(rho > sigma) || !(sigma > 1.0))
        throw std::invalid_argument("compare_rho: need rho > sigma > 1");
    CompareRhoReport rep;
    const RBMOProblem prob_rho = build_problem(space, lambda, f, rho);
    const RBMOProblem prob_sigma = build_problem(space, lambda, f, sigma);
    rep.A_rho = solve_rbmo(prob_rho).A;
    rep.A_sigma = solve_rbmo(prob_sigma).A;
    rep.monotone_ok = rep.A_rho <= rep.A_sigma;

    // Lemma constant: cover B0 by <= N delta^-n balls of radius 2^-ceil(log2(1/delta)) r,
    // each contributing its oscillation plus a kernel-log-bounded drift
    const double delta = (sigma - 1.0) / rho;
    const int kk = ceil_log2_ratio(1.0, delta);
    const double count = double(diag.N_bound) * std::pow(delta, -diag.n_exponent);
    const double Cl = lambda.C_lambda();
    rep.C = count * (3.0 + Cl * (std::log2(4.0 * sigma * std::ldexp(1.0, kk)) +
                                 std::log2(4.0 * sigma)));
    rep.realised_ratio = rep.A_rho > 0.0 ? rep.A_sigma / rep.A_rho : 1.0;
    rep.ratio_ok = rep.A_sigma <= rep.C * rep.A_rho + 1e-9 * (1.0 + rep.A_rho);
    rep.pass = rep.monotone_ok && rep.ratio_ok;
    return rep;
}

CompareBmoReport compare_bmo(const Space& space, const std::vector<double>& f, double rho,
                             double doubling_threshold) {
    const DoublingDiagnostics diag = doubling_diagnostics(space);
    if (diag.C_mu_sup > doubling_threshold) {
        std::ostringstream os;
        os << "compare_bmo: non-doubling space rejected (C_mu_sup = " << diag.C_mu_sup << " > "
           << doubling_threshold << ")";
        throw ConfigError(os.str());
    }
    CompareBmoReport rep;
    const DominatingFunction lambda = DominatingFunction::ball_measure(space);
    const RBMOProblem problem = build_problem(space, lambda, f, rho);
    rep.A = solve_rbmo(problem).A;
    rep.bmo = bmo_norm(space, f);

    const double C = diag.C_mu_sup;
    const double l2C = std::log2(C);
    // averages are admissible constants: oscillation coefficient 1 and the
    // chain's regularity coefficient; c1 is the rho-inflation of the converse
    double c1 = 0.0;
    for (int b = 0; b < problem.ball_count(); ++b)
        c1 = std::max(c1, problem.mu_rho[b] / space.measure(problem.family.ball(b)));
    c1 *= 2.0;
    rep.c1 = c1;
    rep.c2 = std::max({1.0, 3.0 * C + 2.0 * C * C * C, 2.0 + C + 2.0 * C * C});
    const double tol = 1e-9 * (1.0 + rep.A);
    rep.sandwich_ok = rep.bmo <= rep.c1 * rep.A + tol && rep.A <= rep.c2 * rep.bmo + tol;

    rep.C_a = std::max(3.0 * C + 4.0 * C * l2C + 2.0 * C * C * C,
                       2.0 * C * (1.0 + l2C) + 2.0 + C + 2.0 * C * C);
    rep.C_b = 3.0 + 2.0 * l2C;
    rep.pairs_ok = true;
    for (const InclusionPair& p : problem.pairs) {
        const Ball& bs = problem.family.ball(p.small);
        const Ball& bb = problem.family.ball(p.big);
        const double lhs = std::abs(space.average(bs, f) - space.average(bb, f));
        const double G = 1.0 + std::log2(space.measure(bb) / space.measure(bs));
        if (lhs > rep.C_a * rep.bmo * G + 1e-12) rep.pairs_ok = false;
        if (G > rep.C_b * p.K + 1e-12) rep.pairs_ok = false;
        if (rep.bmo > 0.0 && G > 0.0)
            rep.worst_pair_ratio = std::max(rep.worst_pair_ratio, lhs / (rep.bmo * G));
    }
    rep.pass = rep.sandwich_ok && rep.pairs_ok;
    return rep;
}

Section5Report check_section5(const RBMOProblem& problem, const AdmissibleFamily& family,
                              const DoublingParams& params, double C1, double C2) {
    if (problem.rho != params.alpha)
        throw std::invalid_argument("check_section5: family must solve the problem at rho = alpha");
    Section5Report rep;
    const Space& space = *problem.space;
    const double A = family.A;
    const double tol = 1e-9 * (1.0 + A);
    const double Cl = problem.lambda.C_lambda();
    const double gamma = std::pow(Cl, std::log2(params.alpha));
    rep.kernel_cap = 1.0 + Cl * (1.0 + gamma * params.beta / (params.beta - gamma));

    // (a) doubling ancestors
    rep.ancestors_ok = true;
    for (int b = 0; b < problem.ball_count(); ++b) {
        const Ball& ball = problem.family.ball(b);
        const AncestorResult anc = doubling_ancestor(space, problem.lambda, ball, params);
        const int cidx = problem.family.canonical_index(space, anc.ancestor);
        const double gap = std::abs(family.f_B[b] - family.f_B[cidx]);
        if (cidx != b) {
            const double Kc =
                kernel(space, problem.lambda, ball, problem.family.ball(cidx));
            const double Kf = kernel(space, problem.lambda, ball, anc.ancestor);
            if (gap > A * Kc + tol) rep.ancestors_ok = false;
            if (Kc > rep.kernel_cap || Kf > rep.kernel_cap) rep.ancestors_ok = false;
        }
        const double excess = gap - A * rep.kernel_cap;
        rep.worst_ancestor_excess = std::max(rep.worst_ancestor_excess, excess);
        if (gap > A * rep.kernel_cap + tol) rep.ancestors_ok = false;
    }

    // (b) comparable neighbours
    rep.neighbours_ok = true;
    for (int i = 0; i < problem.ball_count(); ++i)
        for (int j = 0; j < problem.ball_count(); ++j) {
            if (i == j) continue;
            const Ball& b1 = problem.family.ball(i);
            const Ball& b2 = problem.family.ball(j);
            const double d = space.dist(b1.center, b2.center);
            const double rmax = std::max(b1.radius, b2.radius);
            const double rmin = std::min(b1.radius, b2.radius);
            if (!(d <= C1 * rmax && C1 * rmax <= C2 * rmin)) continue;
            const double m = std::max(1.0, (d + b2.radius) / b1.radius);
            const Ball mb1 = dilate(b1, m);
            const Ball canonT = problem.family.canonicalize(space, mb1);
            const int t = problem.family.canonical_index(space, mb1);
            // K(B2, T) when the radii are ordered; with equal member sets the
            // reverse pair (T, B2) is the one the constraint system carries
            double cap2;
            if (canonT.radius >= b2.radius) {
                const double M_eff = (2.0 * canonT.radius + d) / b2.radius;
                cap2 = std::pow(Cl, double(ceil_log2_ratio(std::max(M_eff, 1.0), 1.0)));
            } else if (space.member_mask(canonT) == space.member_mask(b2)) {
                const double M_eff = (2.0 * b2.radius + d) / canonT.radius;
                cap2 = std::pow(Cl, double(ceil_log2_ratio(std::max(M_eff, 1.0), 1.0)));
            } else {
                ++rep.neighbour_skipped;
                continue;
            }
            ++rep.neighbour_pairs;
            const double m_eff = canonT.radius / b1.radius;
            const double cap1 =
                std::pow(Cl, double(ceil_log2_ratio(std::max(2.0 * m_eff, 1.0), 1.0)));
            const double lhs = std::abs(family.f_B[i] - family.f_B[j]);
            if (lhs > A * (2.0 + cap1 + cap2) + 2.0 * tol) rep.neighbours_ok = false;
            const double gap1 = std::abs(family.f_B[i] - family.f_B[t]);
            const double Kc1 = t == i ? 1.0 : kernel(space, problem.lambda, b1, canonT);
            if (gap1 > A * Kc1 + tol) rep.neighbours_ok = false;
        }

    // (c) average vs constant on doubling balls
    rep.averages_ok = true;
    for (int b = 0; b < problem.ball_count(); ++b) {
        const Ball& ball = problem.family.ball(b);
        if (!is_doubling(space, ball, params)) continue;
        const double gap = std::abs(space.average(ball, problem.f) - family.f_B[b]);
        rep.worst_average_gap = std::max(rep.worst_average_gap, gap - params.beta * A);
        if (gap > params.beta * A + (1.0 + params.beta) * tol) rep.averages_ok = false;
    }

    rep.pass = rep.ancestors_ok && rep.neighbours_ok && rep.averages_ok;
    return rep;
}

void export_lp_triplets(const RBMOProblem& problem, std::ostream& os) {
    const Space& space = *problem.space;
    const int nb = problem.ball_count();
    // variable layout: 0 = A, 1..nb = f_B, then one t per (ball, member)
    int n_t = 0;
    std::vector<int> t_base(nb);
    std::vector<std::vector<PointId>> mem(nb);
    for (int b = 0; b < nb; ++b) {
        t_base[b] = 1 + nb + n_t;
        mem[b] = space.members(problem.family.ball(b));
        n_t += static_cast<int>(mem[b].size());
    }
    const int n_vars = 1 + nb + n_t;
    os << "# minimise x0 = A subject to M x <= rhs\n";
    os << "# vars: x0 = A; x(1.." << nb << ") = f_B per canonical ball; x(" << nb + 1 << ".."
       << n_vars - 1 << ") = t_{B,y} (one per ball member, ball-major)\n";
    os << "# triplets: row col value; col " << n_vars << " is the rhs\n";
    int row = 0;
    auto put = [&](int r, int c, double v) { os << r << " " << c << " " << v << "\n"; };
    for (int b = 0; b < nb; ++b) {
        for (std::size_t y = 0; y < mem[b].size(); ++y) {
            const int t = t_base[b] + static_cast<int>(y);
            const double fy = problem.f[mem[b][y]];
            // t >= f(y) - f_B  and  t >= f_B - f(y)
            put(row, t, -1.0);
            put(row, 1 + b, -1.0);
            put(row, n_vars, -fy);
            ++row;
            put(row, t, -1.0);
            put(row, 1 + b, 1.0);
            put(row, n_vars, fy);
            ++row;
        }
        // sum_y w_y t_{b,y} <= A mu(rho B)
        for (std::size_t y = 0; y < mem[b].size(); ++y)
            put(row, t_base[b] + static_cast<int>(y), space.weight(mem[b][y]));
        put(row, 0, -problem.mu_rho[b]);
        put(row, n_vars, 0.0);
        ++row;
    }
    for (const InclusionPair& p : problem.pairs) {
        put(row, 1 + p.small, 1.0);
        put(row, 1 + p.big, -1.0);
        put(row, 0, -p.K);
        put(row, n_vars, 0.0);
        ++row;
        put(row, 1 + p.small, -1.0);
        put(row, 1 + p.big, 1.0);
        put(row, 0, -p.K);
        put(row, n_vars, 0.0);
        ++row;
    }
    os << "# rows: " << row << "\n";
}

}  // namespace rbmo
