#include "rbmo/johnnirenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbmo {

namespace {

void require_alpha(const RBMOProblem& problem, const DoublingParams& params) {
    if (params.alpha != 5.0 * problem.rho)
        throw std::invalid_argument("john-nirenberg: params.alpha must equal 5*rho");
}

}  // namespace

double tail_distribution(const RBMOProblem& problem, const AdmissibleFamily& family,
                         const Ball& b0, double t) {
    const Space& space = *problem.space;
    const double f0 = family.f_B[problem.family.canonical_index(space, b0)];
    double mass = 0.0;
    for (PointId x : space.members(b0))
        if (std::abs(problem.f[x] - f0) > t) mass += space.weight(x);
    return mass;
}

JNDecomposition jn_decompose(const RBMOProblem& problem, const AdmissibleFamily& family,
                             const Ball& parent, const DoublingParams& params, double L) {
    require_alpha(problem, params);
    if (!(L >= 0.0)) throw std::invalid_argument("jn_decompose: L must be >= 0");
    const Space& space = *problem.space;
    JNDecomposition dec;
    dec.parent = parent;
    dec.f_parent = family.f_B[problem.family.canonical_index(space, parent)];
    dec.half_target = 0.5 * space.measure(Ball{parent.center, problem.rho * parent.radius});

    const PointMask envelope =
        space.member_mask(Ball{parent.center, std::sqrt(problem.rho) * parent.radius});
    auto inside_envelope = [&](const Ball& b) {
        return space.member_mask(b).subset_of(envelope);
    };

    // per point above threshold: the maximal (smallest i) qualifying
    // alpha^-i dilation, via the stopping-ball search
    const auto accept = [&](const Ball& b) {
        return inside_envelope(b) &&
               std::abs(family.f_B[problem.family.canonical_index(space, b)] - dec.f_parent) > L;
    };
    std::vector<Ball> chosen;
    for (PointId x : space.members(parent)) {
        if (!(std::abs(problem.f[x] - dec.f_parent) > 2.0 * L)) continue;
        const auto found = small_doubling_ball(space, x, parent.radius, params, 400, accept);
        if (!found) {
            dec.witness = x;
            dec.ok = false;
            return dec;
        }
        chosen.push_back(found->ball);
    }

    if (chosen.empty()) {
        dec.ok = dec.mass_ok = dec.containment_ok = dec.disjoint_ok = dec.inside_ok = true;
        return dec;
    }

    const std::vector<Ball> kept = vitali_select(space, chosen);
    dec.disjoint_ok = true;
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            if (space.dist(kept[i].center, kept[j].center) < kept[i].radius + kept[j].radius)
                dec.disjoint_ok = false;
    dec.inside_ok = true;

    for (const Ball& b : kept) {
        if (!inside_envelope(b)) dec.inside_ok = false;
        JNStoppingRecord rec;
        rec.stopping = b;
        rec.cover = dilate(b, 5.0);
        rec.f_stopping = family.f_B[problem.family.canonical_index(space, b)];
        rec.f_cover = family.f_B[problem.family.canonical_index(space, rec.cover)];
        rec.value_gap = std::abs(rec.f_stopping - dec.f_parent);
        rec.upper_gap_ok = rec.value_gap <= 1.5 * L;
        rec.drift_ok = std::abs(rec.f_stopping - rec.f_cover) <= 0.5 * L;
        double osc = 0.0;
        for (PointId y : space.members(b))
            osc += space.weight(y) * std::abs(problem.f[y] - dec.f_parent);
        rec.avg_bound_ok = osc / space.measure(b) > 0.5 * L;
        dec.cover_mass += space.measure(Ball{b.center, problem.rho * (5.0 * b.radius)});
        dec.records.push_back(rec);
    }
    dec.mass_ok = dec.cover_mass <= dec.half_target;

    dec.containment_ok = true;
    for (PointId x : space.members(parent)) {
        if (!(std::abs(problem.f[x] - dec.f_parent) > 2.0 * L)) continue;
        bool covered = false;
        for (const JNStoppingRecord& rec : dec.records) {
            if (space.dist(rec.cover.center, x) >= rec.cover.radius) continue;
            if (std::abs(problem.f[x] - rec.f_cover) > 0.0) {
                covered = true;
                break;
            }
        }
        if (!covered) dec.containment_ok = false;
    }

    bool avg_ok = true;
    for (const JNStoppingRecord& rec : dec.records) avg_ok = avg_ok && rec.avg_bound_ok;
    dec.ok = dec.mass_ok && dec.containment_ok && dec.disjoint_ok && dec.inside_ok && avg_ok &&
             !dec.witness;
    return dec;
}

JNRecursion jn_recursion(const RBMOProblem& problem, const AdmissibleFamily& family,
                         const Ball& b0, const DoublingParams& params, double L, int max_depth) {
    require_alpha(problem, params);
    const Space& space = *problem.space;
    JNRecursion rec;
    rec.ok = true;
    const double mass0 = space.measure(Ball{b0.center, problem.rho * b0.radius});

    std::vector<Ball> current{b0};
    double prev_mass = mass0;
    for (int depth = 1; depth <= max_depth && !current.empty(); ++depth) {
        JNLevelSummary lvl;
        lvl.parents = static_cast<int>(current.size());
        std::vector<Ball> next;
        for (const Ball& parent : current) {
            JNDecomposition dec = jn_decompose(problem, family, parent, params, L);
            if (!dec.ok) {
                rec.ok = false;
                rec.failures.push_back(std::move(dec));
                rec.levels.push_back(lvl);
                return rec;
            }
            lvl.mass += dec.cover_mass;
            for (const JNStoppingRecord& r : dec.records) next.push_back(r.cover);
        }
        lvl.balls = static_cast<int>(next.size());
        lvl.halving_ok = lvl.mass <= 0.5 * prev_mass;
        lvl.depth_bound_ok = lvl.mass <= std::ldexp(mass0, -depth);
        if (!lvl.halving_ok || !lvl.depth_bound_ok) rec.ok = false;
        rec.levels.push_back(lvl);
        if (!rec.ok) return rec;
        prev_mass = lvl.mass;
        current = std::move(next);
    }
    if (!current.empty()) {
        rec.depth_cap_hit = true;
        rec.ok = false;
    }
    return rec;
}

namespace {

bool tail_bounds_hold(const RBMOProblem& problem, const AdmissibleFamily& family, const Ball& b0,
                      double L, int depth) {
    const Space& space = *problem.space;
    const double mass0 = space.measure(Ball{b0.center, problem.rho * b0.radius});
    for (int n = 1; n <= std::max(depth, 1) + 5 && n <= 70; ++n) {
        const double tail = tail_distribution(problem, family, b0, 2.0 * double(n) * L);
        if (tail > std::ldexp(mass0, -n)) return false;
        if (tail == 0.0) break;  // monotone: stays zero
    }
    return true;
}

}  // namespace

LSearchResult L_search(const RBMOProblem& problem, const AdmissibleFamily& family, const Ball& b0,
                       const DoublingParams& params) {
    require_alpha(problem, params);
    LSearchResult out;
    if (family.A == 0.0) {
        out.constant_function = true;
        out.L = 0.0;
        out.ratio = 0.0;
        return out;
    }
    double L = family.A;
    for (int k = 0; k <= 20; ++k, L *= 2.0) {
        const JNRecursion rec = jn_recursion(problem, family, b0, params, L);
        if (rec.ok && tail_bounds_hold(problem, family, b0, L,
                                       static_cast<int>(rec.levels.size()))) {
            out.L = L;
            out.ratio = L / family.A;
            return out;
        }
    }
    out.cap_hit = true;
    out.L = family.A * std::ldexp(1.0, 20);
    out.ratio = std::ldexp(1.0, 20);
    return out;
}

JNReport verify_jn(const RBMOProblem& problem, const AdmissibleFamily& family, const Ball& b0,
                   const DoublingParams& params, const std::vector<double>& t_grid) {
    require_alpha(problem, params);
    const Space& space = *problem.space;
    JNReport rep;
    rep.b0 = b0;
    rep.rho = problem.rho;
    rep.A = family.A;

    const LSearchResult search = L_search(problem, family, b0, params);
    rep.L = search.L;
    rep.L_over_A = search.ratio;
    rep.search_cap_hit = search.cap_hit;

    const double mass0 = space.measure(Ball{b0.center, problem.rho * b0.radius});
    const JNRecursion rec = jn_recursion(problem, family, b0, params, rep.L);
    rep.levels = rec.levels;

    rep.tail_bounds_ok = true;
    if (rep.L > 0.0) {
        for (int n = 1; n <= static_cast<int>(rec.levels.size()) + 5 && n <= 70; ++n) {
            const double tail = tail_distribution(problem, family, b0, 2.0 * double(n) * rep.L);
            if (tail > std::ldexp(mass0, -n)) rep.tail_bounds_ok = false;
            if (tail == 0.0) break;
        }
    } else {
        // constant function: every residual is zero
        rep.tail_bounds_ok = tail_distribution(problem, family, b0, 0.0) == 0.0;
    }

    rep.c_fit_infinite = true;
    rep.c_fit = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        const double tail = tail_distribution(problem, family, b0, t);
        JNTailEntry e;
        e.t = t;
        e.tail = tail;
        e.envelope = rep.L > 0.0 ? 2.0 * mass0 * std::exp2(-t / (2.0 * rep.L)) : 0.0;
        rep.tail.push_back(e);
        if (t > 0.0 && tail > 0.0) {
            rep.c_fit_infinite = false;
            const double c = rep.A / t * std::log(2.0 * mass0 / tail);
            rep.c_fit = std::min(rep.c_fit, c);
        }
    }
    if (rep.c_fit_infinite)
        rep.c_fit_ok = true;
    else
        rep.c_fit_ok = rep.c_fit >= std::log(2.0) / (2.0 * rep.L / rep.A);

    rep.pass = rec.ok && rep.tail_bounds_ok && rep.c_fit_ok && !rep.search_cap_hit;
    return rep;
}

LpOscReport lp_oscillation(const RBMOProblem& problem, const AdmissibleFamily& family,
                           const Ball& b0, double p, double L) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_oscillation: p must be >= 1");
    const Space& space = *problem.space;
    LpOscReport rep;
    rep.p = p;
    const double f0 = family.f_B[problem.family.canonical_index(space, b0)];
    const double mass_rho = space.measure(Ball{b0.center, problem.rho * b0.radius});
    double acc = 0.0;
    for (PointId y : space.members(b0))
        acc += space.weight(y) * std::pow(std::abs(problem.f[y] - f0), p);
    rep.value = std::pow(acc / mass_rho, 1.0 / p);
    if (family.A == 0.0) {
        rep.bound = 0.0;
    } else {
        const double cp =
            2.0 * std::pow(std::tgamma(p + 1.0) *
                               std::pow(2.0 * L / (family.A * std::log(2.0)), p),
                           1.0 / p);
        rep.bound = cp * family.A;
    }
    rep.pass = rep.value <= rep.bound;
    return rep;
}

}  // namespace rbmo
