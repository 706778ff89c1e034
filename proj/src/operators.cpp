#include "rbmo/operators.hpp"

#include <algorithm>
#include <cmath>

namespace rbmo {

MaximalProfile maximal_function(const Space& space, const std::vector<double>& f,
                                std::optional<double> R) {
    space.check_function(f);
    if (R && !(*R > 0.0)) throw std::invalid_argument("maximal_function: R must be > 0");
    const int n = space.size();
    MaximalProfile prof;
    prof.R = R;
    prof.values.assign(n, 0.0);

    for (PointId c = 0; c < n; ++c) {
        const auto& bp = space.breakpoints(c);
        const auto& order = space.by_distance(c);
        const int K = static_cast<int>(bp.size());

        // closed-ball integral of |f| at each breakpoint
        std::vector<double> closed_int(K, 0.0);
        {
            double acc = 0.0;
            std::size_t pos = 0;
            for (int k = 0; k < K; ++k) {
                while (pos < order.size() && space.dist(c, order[pos]) <= bp[k]) {
                    acc += space.weight(order[pos]) * std::abs(f[order[pos]]);
                    ++pos;
                }
                closed_int[k] = acc;
            }
        }

        int k_top = K - 1;
        if (R) {
            // radii just above bp[k] must stay <= R
            while (k_top >= 0 && !(bp[k_top] < *R)) --k_top;
        }
        if (k_top < 0) continue;

        std::vector<double> ratio(k_top + 1);
        for (int k = 0; k <= k_top; ++k) {
            const int k5 = space.closed_index(c, 5.0 * bp[k]);
            ratio[k] = closed_int[k] / space.closed_mass(c, k5);
        }
        for (int k = k_top - 1; k >= 0; --k) ratio[k] = std::max(ratio[k], ratio[k + 1]);

        // point at distance index k is inside every right-limit ball of level >= k
        std::size_t pos = 0;
        for (int k = 0; k <= k_top; ++k) {
            while (pos < order.size() && space.dist(c, order[pos]) <= bp[k]) {
                prof.values[order[pos]] = std::max(prof.values[order[pos]], ratio[k]);
                ++pos;
            }
        }
    }
    return prof;
}

WeakTypeReport weak_type_check(const Space& space, const std::vector<double>& f,
                               const std::vector<double>& t_grid) {
    WeakTypeReport rep;
    const MaximalProfile prof = maximal_function(space, f);
    for (int i = 0; i < space.size(); ++i) rep.norm1 += space.weight(i) * std::abs(f[i]);
    rep.pass = true;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("weak_type_check: grid values must be > 0");
        WeakTypeEntry e;
        e.t = t;
        for (int i = 0; i < space.size(); ++i)
            if (prof.values[i] > t) e.level_mass += space.weight(i);
        e.bound = rep.norm1 / t;
        rep.table.push_back(e);
        if (e.level_mass > e.bound) rep.pass = false;
        const double ratio = e.bound > 0.0 ? e.level_mass / e.bound : 0.0;
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.witness_t = t;
        }
    }
    return rep;
}

DifferentiationReport differentiation_check(const Space& space, const std::vector<double>& f,
                                            double beta) {
    space.check_function(f);
    if (!(beta > 1.0)) throw std::invalid_argument("differentiation_check: beta must be > 1");
    DifferentiationReport rep;
    rep.beta = beta;
    rep.pass = true;
    for (PointId x = 0; x < space.size(); ++x) {
        const auto& bp = space.breakpoints(x);
        const double nn = bp.size() > 1 ? bp[1] : 2.0;
        const double r = nn / 10.0;  // 5r < nn: the 5-dilation is still {x}
        const Ball b{x, r};
        const auto mem = space.members(b);
        const bool singleton = mem.size() == 1 && mem[0] == x;
        const bool doubling = space.measure(dilate(b, 5.0)) <= beta * space.measure(b);
        const bool avg_hits = space.average(b, f) == f[x];
        if (!(singleton && doubling && avg_hits)) rep.pass = false;
        rep.radii.push_back(r);
    }
    return rep;
}

}  // namespace rbmo
