#include "rbmo/covering.hpp"

#include <algorithm>
#include <cmath>

namespace rbmo {

std::vector<PointId> separated_net(const Space& space, const std::vector<PointId>& candidates,
                                   double r) {
    if (candidates.empty()) throw std::invalid_argument("separated_net: empty candidate set");
    if (!(r > 0.0)) throw std::invalid_argument("separated_net: r must be > 0");
    std::vector<PointId> cands = candidates;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::vector<PointId> net;
    for (PointId p : cands) {
        space.check_point(p);
        bool ok = true;
        for (PointId q : net)
            if (space.dist(p, q) < r) {
                ok = false;
                break;
            }
        if (ok) net.push_back(p);
    }
    return net;
}

std::vector<Ball> vitali_select(const Space& space, const std::vector<Ball>& balls) {
    if (balls.empty()) throw std::invalid_argument("vitali_select: empty ball family");
    std::vector<Ball> order = balls;
    std::stable_sort(order.begin(), order.end(), [](const Ball& a, const Ball& b) {
        if (a.radius != b.radius) return a.radius > b.radius;
        return a.center < b.center;
    });
    std::vector<Ball> kept;
    for (const Ball& b : order) {
        space.check_point(b.center);
        bool disjoint = true;
        for (const Ball& k : kept)
            if (space.dist(b.center, k.center) < b.radius + k.radius) {
                disjoint = false;
                break;
            }
        if (disjoint) kept.push_back(b);
    }
    return kept;
}

namespace {

// Max subset of `pts` with pairwise distance >= threshold (or > with strict).
// Exhaustive for <= 12 points, greedy bracket otherwise.
PackingCount max_separated(const Space& space, const std::vector<PointId>& pts, double threshold,
                           bool strict) {
    auto apart = [&](PointId a, PointId b) {
        const double d = space.dist(a, b);
        return strict ? d > threshold : d >= threshold;
    };
    const int m = static_cast<int>(pts.size());
    PackingCount out;
    if (m <= 12) {
        std::vector<unsigned> compat(m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j && apart(pts[i], pts[j])) compat[i] |= 1u << j;
        std::vector<char> ok(std::size_t{1} << m, 0);
        ok[0] = 1;
        int best = 0;
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            const unsigned low = mask & (~mask + 1u);
            const unsigned rest = mask ^ low;
            const int i = __builtin_ctz(low);
            ok[mask] = ok[rest] && (rest & ~compat[i]) == 0;
            if (ok[mask]) best = std::max(best, __builtin_popcount(mask));
        }
        out.lower = out.upper = best;
        out.exact = true;
        return out;
    }
    auto greedy = [&](double thr, bool str) {
        std::vector<PointId> sel;
        for (PointId p : pts) {
            bool ok = true;
            for (PointId q : sel) {
                const double d = space.dist(p, q);
                if (str ? !(d > thr) : !(d >= thr)) {
                    ok = false;
                    break;
                }
            }
            if (ok) sel.push_back(p);
        }
        return static_cast<int>(sel.size());
    };
    // greedy selection is itself a packing; a maximal (threshold/2)-net gives
    // an upper bound since two packing centres cannot share a net point
    out.lower = greedy(threshold, strict);
    out.upper = greedy(threshold / 2.0, false);
    out.exact = (out.lower == out.upper);
    if (out.exact) out.upper = out.lower;
    return out;
}

}  // namespace

PackingCount packing_bound(const Space& space, const Ball& ball, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("packing_bound: delta must lie in (0,1)");
    return max_separated(space, space.members(ball), 2.0 * delta * ball.radius, false);
}

DoublingDiagnostics doubling_diagnostics(const Space& space) {
    DoublingDiagnostics diag;
    const int n = space.size();

    // N_bound at right-limit radii: member set {d <= rho}, separation > rho/2.
    // This dominates the quarter-packing of every formal ball sharing the set,
    // which is what the iteration bound N^k needs.
    int nb = 1;
    for (PointId c = 0; c < n; ++c) {
        const auto& bp = space.breakpoints(c);
        const auto& order = space.by_distance(c);
        std::vector<PointId> pts;
        std::size_t pos = 0;
        for (std::size_t k = 0; k < bp.size(); ++k) {
            while (pos < order.size() && space.dist(c, order[pos]) <= bp[k]) pts.push_back(order[pos++]);
            if (bp[k] == 0.0) {
                nb = std::max(nb, 1);
                continue;
            }
            nb = std::max(nb, max_separated(space, pts, bp[k] / 2.0, true).upper);
        }
    }
    diag.N_bound = nb;
    diag.n_exponent = std::log2(static_cast<double>(nb));

    const CanonicalFamily family(space);
    for (double delta : {0.5, 0.25, 0.125}) {
        PackingCount agg;
        for (const Ball& b : family.balls()) {
            const PackingCount pc = packing_bound(space, b, delta);
            agg.lower = std::max(agg.lower, pc.lower);
            agg.upper = std::max(agg.upper, pc.upper);
        }
        agg.exact = (agg.lower == agg.upper);
        diag.per_delta_packing[delta] = agg;
    }

    diag.C_mu = 1.0;
    diag.C_mu_witness = family.balls().front();
    for (const Ball& b : family.balls()) {
        const double ratio = space.measure(dilate(b, 2.0)) / space.measure(b);
        if (ratio > diag.C_mu) {
            diag.C_mu = ratio;
            diag.C_mu_witness = b;
        }
    }

    // sup over real radii: on each gap (bp[k], bp[k+1]] the ratio is maximised
    // at the right end, where the 2r-ball is the open ball of radius 2*bp[k+1]
    diag.C_mu_sup = 1.0;
    diag.C_mu_sup_witness = family.balls().front();
    for (PointId c = 0; c < n; ++c) {
        const auto& bp = space.breakpoints(c);
        for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
            const double num = space.measure(Ball{c, 2.0 * bp[k + 1]});
            const double ratio = num / space.closed_mass(c, static_cast<int>(k));
            if (ratio > diag.C_mu_sup) {
                diag.C_mu_sup = ratio;
                diag.C_mu_sup_witness = Ball{c, bp[k + 1]};
            }
        }
    }
    return diag;
}

}  // namespace rbmo
