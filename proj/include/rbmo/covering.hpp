#pragma once

#include <map>
#include <vector>

#include "rbmo/space.hpp"

namespace rbmo {

/// Greedy maximal r-separated subset of `candidates`, taken in ascending point
/// id order. Every candidate lies within distance < r of a selected point.
std::vector<PointId> separated_net(const Space& space, const std::vector<PointId>& candidates,
                                   double r);

/// Basic covering theorem selection: greedy by descending radius (ties by
/// center id), keeping balls at center distance >= r_i + r_j from all kept
/// ones. Every input ball is contained in the 5-dilation of a kept ball of at
/// least its radius.
std::vector<Ball> vitali_select(const Space& space, const std::vector<Ball>& balls);

struct PackingCount {
    int lower = 0;
    int upper = 0;
    bool exact = false;
};

/// Max number of centres inside `ball` carrying pairwise-disjoint delta*r
/// balls (disjointness is d >= 2*delta*r). Exact by exhaustive search for
/// <= 12 members, otherwise a [greedy 2dr-separation, greedy dr-separation]
/// interval.
PackingCount packing_bound(const Space& space, const Ball& ball, double delta);

struct DoublingDiagnostics {
    /// Quarter-radius packing bound valid for every formal ball of the space
    /// (computed at right-limit radii, which dominate the canonical ones).
    int N_bound = 1;
    double n_exponent = 0.0;  // log2(N_bound)
    std::map<double, PackingCount> per_delta_packing;  // over canonical balls
    /// Canonical-ball scan of mu(2B)/mu(B), with witness.
    double C_mu = 1.0;
    Ball C_mu_witness;
    /// sup over all real radii of mu(B(x,2r))/mu(B(x,r)); this is the constant
    /// the proof chains and the ball-measure lambda use.
    double C_mu_sup = 1.0;
    Ball C_mu_sup_witness;
};

DoublingDiagnostics doubling_diagnostics(const Space& space);

}  // namespace rbmo
