#include "rbmo/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace rbmo {

namespace {

std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "p" + std::to_string(i);
    return names;
}

// Uniform double in [0,1) from the top 53 bits; uniform_real_distribution is
// implementation-defined, this is not.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

void Space::finalize() {
    const int n = size();
    if (n == 0) throw ValidationError("space must contain at least one point");
    if (names_.empty()) names_ = default_names(n);
    if (static_cast<int>(names_.size()) != n) throw ValidationError("names/weights length mismatch");
    for (int i = 0; i < n; ++i)
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw ValidationError("nonpositive weight at " + names_[i]);
    if (static_cast<int>(dist_.size()) != n) throw ValidationError("distance matrix size mismatch");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(dist_[i].size()) != n)
            throw ValidationError("distance matrix is not square");
        if (dist_[i][i] != 0.0) throw ValidationError("nonzero diagonal at " + names_[i]);
        for (int j = 0; j < n; ++j) {
            const double d = dist_[i][j];
            if (!(d >= 0.0) || !std::isfinite(d))
                throw ValidationError("invalid distance (" + names_[i] + "," + names_[j] + ")");
            if (dist_[i][j] != dist_[j][i])
                throw ValidationError("asymmetric matrix (" + names_[i] + "," + names_[j] + ")");
            if (i != j && d == 0.0)
                throw ValidationError("zero distance between distinct points (" + names_[i] + "," +
                                      names_[j] + ")");
        }
    }
    // tolerance: computed Euclidean distances can miss the triangle inequality
    // by an ulp on collinear triples
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (dist_[i][k] > dist_[i][j] + dist_[j][k] + 1e-12 * std::max(1.0, dist_[i][k]))
                    throw ValidationError("triangle violation (" + names_[i] + "," + names_[j] +
                                          "," + names_[k] + ")");

    total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);

    breakpoints_.assign(n, {});
    by_distance_.assign(n, {});
    closed_mass_.assign(n, {});
    for (int c = 0; c < n; ++c) {
        auto& order = by_distance_[c];
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
            if (dist_[c][a] != dist_[c][b]) return dist_[c][a] < dist_[c][b];
            return a < b;
        });
        auto& bp = breakpoints_[c];
        auto& cm = closed_mass_[c];
        double acc = 0.0;
        for (PointId p : order) {
            acc += weights_[p];
            if (bp.empty() || dist_[c][p] != bp.back()) {
                bp.push_back(dist_[c][p]);
                cm.push_back(acc);
            } else {
                cm.back() = acc;
            }
        }
    }
}

Space Space::from_matrix(std::vector<std::vector<double>> dist, std::vector<double> weights,
                         std::vector<std::string> names) {
    Space s;
    s.dist_ = std::move(dist);
    s.weights_ = std::move(weights);
    s.names_ = std::move(names);
    s.finalize();
    return s;
}

Space Space::from_coords(const std::vector<std::vector<double>>& coords,
                         std::vector<double> weights, std::vector<std::string> names) {
    const int n = static_cast<int>(coords.size());
    if (n == 0) throw ValidationError("space must contain at least one point");
    const std::size_t dim = coords[0].size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        if (coords[i].size() != dim) throw ValidationError("ragged coordinate rows");
        for (int j = i + 1; j < n; ++j) {
            double s2 = 0.0;
            for (std::size_t a = 0; a < dim; ++a) {
                const double d = coords[i][a] - coords[j][a];
                s2 += d * d;
            }
            dist[i][j] = dist[j][i] = std::sqrt(s2);
        }
    }
    return from_matrix(std::move(dist), std::move(weights), std::move(names));
}

std::optional<PointId> Space::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

int Space::gap_index(PointId center, double r) const {
    check_point(center);
    if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
    const auto& bp = breakpoints_[center];
    auto it = std::lower_bound(bp.begin(), bp.end(), r);
    return static_cast<int>(it - bp.begin()) - 1;
}

int Space::closed_index(PointId center, double r) const {
    check_point(center);
    const auto& bp = breakpoints_[center];
    auto it = std::upper_bound(bp.begin(), bp.end(), r);
    return static_cast<int>(it - bp.begin()) - 1;
}

std::vector<PointId> Space::members(const Ball& b) const {
    check_point(b.center);
    if (!(b.radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
    std::vector<PointId> out;
    for (int i = 0; i < size(); ++i)
        if (dist_[b.center][i] < b.radius) out.push_back(i);
    return out;
}

PointMask Space::member_mask(const Ball& b) const {
    check_point(b.center);
    PointMask m(size());
    for (int i = 0; i < size(); ++i)
        if (dist_[b.center][i] < b.radius) m.set(i);
    return m;
}

double Space::measure(const Ball& b) const {
    const int k = gap_index(b.center, b.radius);
    return k >= 0 ? closed_mass_[b.center][k] : 0.0;
}

double Space::integrate(const Ball& b, const std::vector<double>& f) const {
    check_function(f);
    double acc = 0.0;
    for (int i = 0; i < size(); ++i)
        if (dist_[b.center][i] < b.radius) acc += weights_[i] * f[i];
    return acc;
}

double Space::average(const Ball& b, const std::vector<double>& f) const {
    // single-atom averages are the point value exactly; (w*f)/w may not be
    int only = -1, count = 0;
    for (int i = 0; i < size() && count < 2; ++i)
        if (dist_[b.center][i] < b.radius) {
            only = i;
            ++count;
        }
    if (count == 1) {
        check_function(f);
        return f[only];
    }
    return integrate(b, f) / measure(b);
}

Space Space::restrict(const std::vector<PointId>& subset) const {
    if (subset.empty()) throw std::invalid_argument("restrict: empty subset");
    std::vector<PointId> ids = subset;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (PointId p : ids) check_point(p);
    const int m = static_cast<int>(ids.size());
    std::vector<std::vector<double>> dist(m, std::vector<double>(m));
    std::vector<double> weights(m);
    std::vector<std::string> names(m);
    for (int a = 0; a < m; ++a) {
        weights[a] = weights_[ids[a]];
        names[a] = names_[ids[a]];
        for (int b = 0; b < m; ++b) dist[a][b] = dist_[ids[a]][ids[b]];
    }
    return from_matrix(std::move(dist), std::move(weights), std::move(names));
}

void Space::check_function(const std::vector<double>& f) const {
    if (static_cast<int>(f.size()) != size())
        throw std::invalid_argument("function length does not match point count");
    for (double v : f)
        if (!std::isfinite(v)) throw std::invalid_argument("function value not finite");
}

CanonicalFamily::CanonicalFamily(const Space& space) {
    const int n = space.size();
    offsets_.assign(n + 1, 0);
    for (int c = 0; c < n; ++c) {
        const auto& bp = space.breakpoints(c);
        const int k = static_cast<int>(bp.size());
        offsets_[c + 1] = offsets_[c] + k;
        for (int i = 0; i + 1 < k; ++i) {
            balls_.push_back(Ball{c, 0.5 * (bp[i] + bp[i + 1])});
            center_of_.push_back(c);
        }
        const double rho_max = bp.back();
        balls_.push_back(Ball{c, 2.0 * (rho_max > 0.0 ? rho_max : 1.0)});
        center_of_.push_back(c);
    }
}

int CanonicalFamily::level_of(int idx) const {
    const PointId c = center_of_[idx];
    return idx - offsets_[c];
}

int CanonicalFamily::canonical_index(const Space& space, const Ball& b) const {
    const int k = space.gap_index(b.center, b.radius);
    if (k < 0) throw std::invalid_argument("ball with empty member set");
    return index(b.center, k);
}

Ball CanonicalFamily::canonicalize(const Space& space, const Ball& b) const {
    return balls_[canonical_index(space, b)];
}

CanonicalFamily canonical_balls(const Space& space) { return CanonicalFamily(space); }

Space generate_uniform_grid(int n, int dim) {
    if (n < 1 || dim < 1 || dim > 3) throw ConfigError("uniform_grid: need n >= 1, dim in 1..3");
    std::vector<std::vector<double>> coords;
    if (dim == 1) {
        for (int i = 0; i < n; ++i) coords.push_back({double(i)});
    } else if (dim == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) coords.push_back({double(i), double(j)});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) coords.push_back({double(i), double(j), double(k)});
    }
    return Space::from_coords(coords, std::vector<double>(coords.size(), 1.0));
}

Space generate_cantor_dust(int level) {
    if (level < 0 || level > 12) throw ConfigError("cantor_dust: level in 0..12");
    // left endpoints of the level-k triadic construction
    std::vector<double> xs{0.0};
    double len = 1.0;
    for (int l = 0; l < level; ++l) {
        len /= 3.0;
        std::vector<double> next;
        next.reserve(xs.size() * 2);
        for (double x : xs) {
            next.push_back(x);
            next.push_back(x + 2.0 * len);
        }
        xs = std::move(next);
    }
    std::vector<std::vector<double>> coords;
    for (double x : xs) coords.push_back({x});
    const double w = 1.0 / static_cast<double>(xs.size());
    return Space::from_coords(coords, std::vector<double>(xs.size(), w));
}

Space generate_segment_plus_cluster(int n, double gap) {
    if (n < 2 || !(gap > 0.0)) throw ConfigError("segment_plus_cluster: need n >= 2, gap > 0");
    std::vector<std::vector<double>> coords;
    std::vector<double> weights;
    for (int i = 0; i < n; ++i) {
        coords.push_back({double(i)});
        weights.push_back(1.0);
    }
    coords.push_back({double(n - 1) + gap});
    weights.push_back(10.0 * gap);
    return Space::from_coords(coords, weights);
}

Space generate_random_euclidean(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("random_euclidean: need n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> coords;
    coords.reserve(n);
    for (int i = 0; i < n; ++i) coords.push_back({uniform01(rng), uniform01(rng)});
    return Space::from_coords(coords, std::vector<double>(n, 1.0));
}

namespace {

std::vector<double> parse_numeric_args(const std::string& spec, const std::string& name) {
    const auto open = spec.find('(');
    const auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConfigError("malformed generator spec: " + spec);
    std::vector<double> out;
    std::string inner = spec.substr(open + 1, close - open - 1);
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError(name + ": bad argument '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

Space generate_space(const std::string& spec) {
    const std::string name = spec.substr(0, spec.find('('));
    const auto args = parse_numeric_args(spec, name);
    auto want = [&](std::size_t k) {
        if (args.size() != k) throw ConfigError(name + ": expected " + std::to_string(k) + " args");
    };
    if (name == "uniform_grid") {
        want(2);
        return generate_uniform_grid(int(args[0]), int(args[1]));
    }
    if (name == "cantor_dust") {
        want(1);
        return generate_cantor_dust(int(args[0]));
    }
    if (name == "segment_plus_cluster") {
        want(2);
        return generate_segment_plus_cluster(int(args[0]), args[1]);
    }
    if (name == "random_euclidean") {
        want(2);
        return generate_random_euclidean(int(args[0]), std::uint64_t(args[1]));
    }
    throw ConfigError("unknown generator '" + name + "'");
}

std::vector<double> make_function(const Space& space, const std::string& spec) {
    const int n = space.size();
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    std::vector<double> f(n, 0.0);
    if (kind == "constant") {
        const double c = arg.empty() ? 1.0 : std::stod(arg);
        std::fill(f.begin(), f.end(), c);
    } else if (kind == "spike") {
        const int i = arg.empty() ? 0 : std::stoi(arg);
        if (i < 0 || i >= n) throw ConfigError("spike: point index out of range");
        f[i] = 1.0;
    } else if (kind == "sawtooth") {
        const int m = arg.empty() ? 4 : std::stoi(arg);
        if (m < 1) throw ConfigError("sawtooth: period must be >= 1");
        for (int i = 0; i < n; ++i) f[i] = double(i % m) / double(m);
    } else if (kind == "random") {
        std::mt19937_64 rng(arg.empty() ? 0 : std::stoull(arg));
        for (int i = 0; i < n; ++i) f[i] = uniform01(rng);
    } else if (kind == "log") {
        // log-distance profile from a base point: the classic unbounded BMO shape
        const int j = arg.empty() ? 0 : std::stoi(arg);
        if (j < 0 || j >= n) throw ConfigError("log: point index out of range");
        const auto& bp = space.breakpoints(j);
        const double nn = bp.size() > 1 ? bp[1] : 1.0;
        for (int i = 0; i < n; ++i) f[i] = std::log(space.dist(i, j) + nn);
    } else {
        throw ConfigError("unknown function spec '" + spec + "'");
    }
    return f;
}

}  // namespace rbmo
