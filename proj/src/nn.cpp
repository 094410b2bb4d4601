#include "acrank/nn.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>

#include "acrank/errors.hpp"

namespace acrank {

namespace {

constexpr int kBruteForceLimit = 4096;
constexpr int kLeafSize = 16;

// Both search paths accumulate squared distances coordinate by coordinate in
// the same order, so tie detection by exact equality agrees between them.
double sq_dist(const Eigen::MatrixXd& pts, int i, int j) {
    double s = 0.0;
    for (int k = 0; k < pts.cols(); ++k) {
        const double diff = pts(i, k) - pts(j, k);
        s += diff * diff;
    }
    return s;
}

int pick_from_ties(const std::vector<int>& ties, SeedSpec seed, int query) {
    if (ties.size() == 1) return ties.front();
    RngStream rng(seed.sub(static_cast<std::uint64_t>(query)));
    return ties[static_cast<std::size_t>(rng.bounded(ties.size()))];
}

class KdTree {
public:
    explicit KdTree(const Eigen::MatrixXd& pts) : pts_(pts), idx_(static_cast<std::size_t>(pts.rows())) {
        for (int i = 0; i < pts.rows(); ++i) idx_[static_cast<std::size_t>(i)] = i;
        nodes_.reserve(static_cast<std::size_t>(2 * pts.rows() / kLeafSize + 16));
        build(0, static_cast<int>(pts.rows()));
    }

    // Ascending indices of all j != query at the minimum distance.
    std::vector<int> tie_set(int query) const {
        best_ = std::numeric_limits<double>::infinity();
        ties_.clear();
        query_ = query;
        visit(0);
        std::vector<int> out = ties_;
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Node {
        int lo = 0, hi = 0;
        int left = -1, right = -1; // -1: leaf
        Eigen::VectorXd box_lo, box_hi;
    };

    int build(int lo, int hi) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        Node& node = nodes_.back();
        node.lo = lo;
        node.hi = hi;

        const int d = static_cast<int>(pts_.cols());
        node.box_lo = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
        node.box_hi = Eigen::VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
        for (int p = lo; p < hi; ++p) {
            for (int k = 0; k < d; ++k) {
                const double v = pts_(idx_[static_cast<std::size_t>(p)], k);
                node.box_lo[k] = std::min(node.box_lo[k], v);
                node.box_hi[k] = std::max(node.box_hi[k], v);
            }
        }

        if (hi - lo <= kLeafSize) return id;

        int split_dim = 0;
        double spread = -1.0;
        for (int k = 0; k < d; ++k) {
            const double s = node.box_hi[k] - node.box_lo[k];
            if (s > spread) {
                spread = s;
                split_dim = k;
            }
        }
        if (spread <= 0.0) return id; // all points identical: keep as leaf

        const int mid = lo + (hi - lo) / 2;
        std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                         [&](int a, int b) { return pts_(a, split_dim) < pts_(b, split_dim); });

        const int left = build(lo, mid);
        const int right = build(mid, hi);
        nodes_[static_cast<std::size_t>(id)].left = left;
        nodes_[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    double box_dist(const Node& node) const {
        double s = 0.0;
        for (int k = 0; k < pts_.cols(); ++k) {
            const double v = pts_(query_, k);
            double diff = 0.0;
            if (v < node.box_lo[k]) {
                diff = node.box_lo[k] - v;
            } else if (v > node.box_hi[k]) {
                diff = v - node.box_hi[k];
            }
            s += diff * diff;
        }
        return s;
    }

    void visit(int id) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (box_dist(node) > best_) return;

        if (node.left < 0) {
            for (int p = node.lo; p < node.hi; ++p) {
                const int j = idx_[static_cast<std::size_t>(p)];
                if (j == query_) continue;
                const double d2 = sq_dist(pts_, query_, j);
                if (d2 < best_) {
                    best_ = d2;
                    ties_.clear();
                    ties_.push_back(j);
                } else if (d2 == best_) {
                    ties_.push_back(j);
                }
            }
            return;
        }

        const double dl = box_dist(nodes_[static_cast<std::size_t>(node.left)]);
        const double dr = box_dist(nodes_[static_cast<std::size_t>(node.right)]);
        if (dl <= dr) {
            visit(node.left);
            visit(node.right);
        } else {
            visit(node.right);
            visit(node.left);
        }
    }

    const Eigen::MatrixXd& pts_;
    std::vector<int> idx_;
    std::vector<Node> nodes_;

    mutable double best_ = 0.0;
    mutable int query_ = 0;
    mutable std::vector<int> ties_;
};

NeighborMap brute_force_map(const Eigen::MatrixXd& pts, SeedSpec seed) {
    const int n = static_cast<int>(pts.rows());
    NeighborMap map;
    map.n = n;
    map.m.resize(static_cast<std::size_t>(n));

    std::vector<int> ties;
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        ties.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d2 = sq_dist(pts, i, j);
            if (d2 < best) {
                best = d2;
                ties.clear();
                ties.push_back(j);
            } else if (d2 == best) {
                ties.push_back(j);
            }
        }
        map.m[static_cast<std::size_t>(i)] = pick_from_ties(ties, seed, i);
    }
    return map;
}

// Exact-duplicate groups; key is the raw byte pattern of the row with -0.0
// normalized to +0.0 so that equal values hash equally.
std::unordered_map<std::string, std::vector<int>> duplicate_groups(const Eigen::MatrixXd& pts) {
    std::unordered_map<std::string, std::vector<int>> groups;
    const int d = static_cast<int>(pts.cols());
    std::string key(static_cast<std::size_t>(d) * sizeof(double), '\0');
    for (int i = 0; i < pts.rows(); ++i) {
        for (int k = 0; k < d; ++k) {
            double v = pts(i, k);
            if (v == 0.0) v = 0.0; // collapses -0.0
            std::memcpy(key.data() + static_cast<std::size_t>(k) * sizeof(double), &v, sizeof(double));
        }
        groups[key].push_back(i);
    }
    return groups;
}

NeighborMap kdtree_map(const Eigen::MatrixXd& pts, SeedSpec seed) {
    const int n = static_cast<int>(pts.rows());
    NeighborMap map;
    map.n = n;
    map.m.resize(static_cast<std::size_t>(n));

    // Points with an exact duplicate have distance-0 ties: the tie set is the
    // duplicate group minus the point itself, no tree query needed.
    std::vector<const std::vector<int>*> group_of(static_cast<std::size_t>(n), nullptr);
    const auto groups = duplicate_groups(pts);
    for (const auto& [key, members] : groups) {
        if (members.size() < 2) continue;
        for (int i : members) group_of[static_cast<std::size_t>(i)] = &members;
    }

    KdTree tree(pts);
    std::vector<int> ties;
    for (int i = 0; i < n; ++i) {
        if (const std::vector<int>* grp = group_of[static_cast<std::size_t>(i)]) {
            ties.clear();
            for (int j : *grp) {
                if (j != i) ties.push_back(j);
            }
            map.m[static_cast<std::size_t>(i)] = pick_from_ties(ties, seed, i);
        } else {
            map.m[static_cast<std::size_t>(i)] = pick_from_ties(tree.tie_set(i), seed, i);
        }
    }
    return map;
}

} // namespace

NeighborMap nearest_neighbors(const Eigen::MatrixXd& points, SeedSpec seed, NnMethod method) {
    const int n = static_cast<int>(points.rows());
    if (n < 2) {
        throw InputError("nearest_neighbors: need at least 2 points");
    }
    if (method == NnMethod::BruteForce || (method == NnMethod::Auto && n <= kBruteForceLimit)) {
        return brute_force_map(points, seed);
    }
    return kdtree_map(points, seed);
}

NeighborStats neighbor_stats(const NeighborMap& map) {
    const int n = map.n;
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    int mutual = 0;
    for (int i = 0; i < n; ++i) {
        const int mi = map.m[static_cast<std::size_t>(i)];
        ++indegree[static_cast<std::size_t>(mi)];
        if (map.m[static_cast<std::size_t>(mi)] == i) ++mutual;
    }
    NeighborStats stats;
    stats.mutual_fraction = static_cast<double>(mutual) / n;
    double pair_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto deg = static_cast<double>(indegree[static_cast<std::size_t>(i)]);
        pair_sum += deg * (deg - 1.0);
        stats.max_indegree = std::max(stats.max_indegree, indegree[static_cast<std::size_t>(i)]);
    }
    stats.indegree_pair_sum = pair_sum / n;
    return stats;
}

} // namespace acrank
