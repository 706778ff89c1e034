#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbmo {

using PointId = int;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Open ball B(center, radius). Identity is the (center, radius) pair, not the
/// member set; membership is d(y, center) < radius with exact comparison on
/// stored reals.
struct Ball {
    PointId center = 0;
    double radius = 0.0;

    friend bool operator==(const Ball&, const Ball&) = default;
};

inline Ball dilate(const Ball& b, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("dilate: factor must be > 0");
    return Ball{b.center, b.radius * factor};
}

/// Fixed-size bitset over point ids, used for member-set algebra.
class PointMask {
public:
    PointMask() = default;
    explicit PointMask(int n) : n_(n), words_((n + 63) / 64, 0) {}

    void set(int i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    bool subset_of(const PointMask& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w]) return false;
        return true;
    }
    friend bool operator==(const PointMask&, const PointMask&) = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Finite metric measure space: named points, an exact symmetric distance
/// matrix and strictly positive atom weights. Immutable after construction.
class Space {
public:
    static Space from_matrix(std::vector<std::vector<double>> dist, std::vector<double> weights,
                             std::vector<std::string> names = {});
    static Space from_coords(const std::vector<std::vector<double>>& coords,
                             std::vector<double> weights, std::vector<std::string> names = {});

    int size() const { return static_cast<int>(weights_.size()); }
    double weight(PointId i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    double dist(PointId i, PointId j) const { return dist_[i][j]; }
    const std::string& name(PointId i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<PointId> index_of(const std::string& name) const;
    double total_mass() const { return total_mass_; }

    /// Sorted distinct distances from `center` to all points (always starts at 0).
    const std::vector<double>& breakpoints(PointId center) const { return breakpoints_[center]; }
    /// Point ids ordered by distance from `center` (ties by id).
    const std::vector<PointId>& by_distance(PointId center) const { return by_distance_[center]; }
    /// Closed-ball mass mu({d(center,.) <= breakpoints(center)[k]}).
    double closed_mass(PointId center, int k) const { return closed_mass_[center][k]; }
    /// Largest breakpoint index with breakpoint < r (r > 0 implies index >= 0).
    int gap_index(PointId center, double r) const;
    /// Largest breakpoint index with breakpoint <= r, or -1.
    int closed_index(PointId center, double r) const;

    std::vector<PointId> members(const Ball& b) const;
    PointMask member_mask(const Ball& b) const;
    double measure(const Ball& b) const;
    double integrate(const Ball& b, const std::vector<double>& f) const;
    double average(const Ball& b, const std::vector<double>& f) const;

    Space restrict(const std::vector<PointId>& subset) const;

    void check_point(PointId i) const {
        if (i < 0 || i >= size()) throw std::invalid_argument("unknown point id");
    }
    void check_function(const std::vector<double>& f) const;

private:
    Space() = default;
    void finalize();

    std::vector<std::string> names_;
    std::vector<double> weights_;
    std::vector<std::vector<double>> dist_;
    double total_mass_ = 0.0;
    std::vector<std::vector<double>> breakpoints_;
    std::vector<std::vector<PointId>> by_distance_;
    std::vector<std::vector<double>> closed_mass_;
};

/// One ball per (center, realisable member set): radii at breakpoint midpoints,
/// plus 2*rho_max for the full point set around each center.
class CanonicalFamily {
public:
    explicit CanonicalFamily(const Space& space);

    int size() const { return static_cast<int>(balls_.size()); }
    const std::vector<Ball>& balls() const { return balls_; }
    const Ball& ball(int idx) const { return balls_[idx]; }
    /// Index of the canonical ball at `center` whose member set is the closed
    /// ball at breakpoint k.
    int index(PointId center, int k) const { return offsets_[center] + k; }
    int count(PointId center) const { return offsets_[center + 1] - offsets_[center]; }
    PointId center_of(int idx) const { return center_of_[idx]; }
    /// Breakpoint index (position in breakpoints(center)) of ball `idx`.
    int level_of(int idx) const;

    /// The unique canonical ball with the same center and member set.
    Ball canonicalize(const Space& space, const Ball& b) const;
    int canonical_index(const Space& space, const Ball& b) const;

private:
    std::vector<Ball> balls_;
    std::vector<int> offsets_;
    std::vector<PointId> center_of_;
};

CanonicalFamily canonical_balls(const Space& space);

// Generators. All deterministic for a given spec string / seed.
Space generate_uniform_grid(int n, int dim);
Space generate_cantor_dust(int level);
Space generate_segment_plus_cluster(int n, double gap);
Space generate_random_euclidean(int n, std::uint64_t seed);
/// Parses "uniform_grid(16,1)", "cantor_dust(3)", "segment_plus_cluster(8,100)",
/// "random_euclidean(24,7)".
Space generate_space(const std::string& spec);

/// Deterministic test/CLI function sources: "constant:c", "spike:i",
/// "sawtooth:m", "random:seed".
std::vector<double> make_function(const Space& space, const std::string& spec);

}  // namespace rbmo
