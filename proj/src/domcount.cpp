#include "acrank/domcount.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "acrank/errors.hpp"

namespace acrank {

namespace {

void check_dims(const PointSet& a, const PointSet& b) {
    if (a.cols() != b.cols()) {
        throw InputError("dominance count: dimension mismatch (a has " +
                         std::to_string(a.cols()) + " columns, b has " +
                         std::to_string(b.cols()) + ")");
    }
}

int ceil_log2(int n) {
    int j = 0;
    while ((1 << j) < n) ++j;
    return j;
}

// Indices of a's rows in stable ascending order of column `col`.
std::vector<int> sort_order(const PointSet& a, int col) {
    std::vector<int> order(static_cast<std::size_t>(a.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, col) < a(j, col); });
    return order;
}

// Number of entries in sorted[0..n) that are <= x.
int rank_leq(const double* sorted, int n, double x) {
    return static_cast<int>(std::upper_bound(sorted, sorted + n, x) - sorted);
}

// Shared step 1-2 of both fast algorithms: sort a by the first coordinate,
// find each query's prefix length k_i, and seed c_i with the comparison
// against the boundary point a_{k_i}.
struct FirstCoordPass {
    PointSet a_sorted;       // a's rows in ascending order of first coordinate
    std::vector<int> k;      // k[i] = #{i' : a_{i',1} <= b_{i,1}}
    DominanceCounts counts;  // c_i after step 2
};

FirstCoordPass first_coord_pass(const PointSet& a, const PointSet& b) {
    const int na = static_cast<int>(a.rows());
    const int nb = static_cast<int>(b.rows());
    const int d = static_cast<int>(a.cols());

    FirstCoordPass pass;
    const std::vector<int> order = sort_order(a, 0);
    pass.a_sorted.resize(na, d);
    for (int i = 0; i < na; ++i) {
        pass.a_sorted.row(i) = a.row(order[i]);
    }

    std::vector<double> first(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i) first[static_cast<std::size_t>(i)] = pass.a_sorted(i, 0);

    pass.k.resize(static_cast<std::size_t>(nb));
    pass.counts = DominanceCounts::Zero(nb);
    for (int i = 0; i < nb; ++i) {
        const int ki = rank_leq(first.data(), na, b(i, 0));
        pass.k[static_cast<std::size_t>(i)] = ki;
        if (ki > 0) {
            bool dom = true;
            for (int c = 1; c < d; ++c) {
                if (pass.a_sorted(ki - 1, c) > b(i, c)) {
                    dom = false;
                    break;
                }
            }
            if (dom) pass.counts[i] = 1;
        }
    }
    return pass;
}

// Recursive engine behind count_dominated_nd. Adds #{a_i <= b_j} into
// out[ids[j]]; `a` and `b` have d >= 2 columns.
void count_into(const PointSet& a, const PointSet& b, const std::vector<int>& ids,
                DominanceCounts& out) {
    const int na = static_cast<int>(a.rows());
    const int nb = static_cast<int>(b.rows());
    const int d = static_cast<int>(a.cols());
    if (na == 0 || nb == 0) return;

    if (d == 2) {
        const DominanceCounts res = count_dominated_2d(a, b);
        for (int j = 0; j < nb; ++j) out[ids[static_cast<std::size_t>(j)]] += res[j];
        return;
    }

    FirstCoordPass pass = first_coord_pass(a, b);
    for (int j = 0; j < nb; ++j) out[ids[static_cast<std::size_t>(j)]] += pass.counts[j];

    const int rounds = ceil_log2(na);
    std::vector<int> block_of(static_cast<std::size_t>(nb));
    for (int j = 1; j <= rounds; ++j) {
        const int w = 1 << (j - 1);
        const int n_blocks = (na + w - 1) / w;

        // Queries whose prefix boundary falls in an even block contribute the
        // preceding (odd) block as a full-width sub-problem of dimension d-1.
        std::vector<int> bucket_size(static_cast<std::size_t>(n_blocks), 0);
        for (int i = 0; i < nb; ++i) {
            const int ki = pass.k[static_cast<std::size_t>(i)];
            block_of[static_cast<std::size_t>(i)] = -1;
            if (ki <= 1) continue;
            const int ell = (ki + w - 1) / w;
            if (ell % 2 == 0) {
                const int q = ell - 2; // 0-based index of block ell-1
                block_of[static_cast<std::size_t>(i)] = q;
                ++bucket_size[static_cast<std::size_t>(q)];
            }
        }

        // Counting-sort the queries by block so a round costs O(n_a + n_b)
        // in grouping work regardless of how many blocks are hit.
        std::vector<int> offset(static_cast<std::size_t>(n_blocks) + 1, 0);
        for (int q = 0; q < n_blocks; ++q) {
            offset[static_cast<std::size_t>(q) + 1] =
                offset[static_cast<std::size_t>(q)] + bucket_size[static_cast<std::size_t>(q)];
        }
        std::vector<int> grouped(static_cast<std::size_t>(offset[static_cast<std::size_t>(n_blocks)]));
        std::vector<int> cursor(offset.begin(), offset.end() - 1);
        for (int i = 0; i < nb; ++i) {
            const int q = block_of[static_cast<std::size_t>(i)];
            if (q >= 0) grouped[static_cast<std::size_t>(cursor[static_cast<std::size_t>(q)]++)] = i;
        }

        for (int q = 0; q < n_blocks; ++q) {
            const int lo = offset[static_cast<std::size_t>(q)];
            const int hi = offset[static_cast<std::size_t>(q) + 1];
            if (lo == hi) continue;

            PointSet b_sub(hi - lo, d - 1);
            std::vector<int> ids_sub(static_cast<std::size_t>(hi - lo));
            for (int pos = lo; pos < hi; ++pos) {
                const int i = grouped[static_cast<std::size_t>(pos)];
                b_sub.row(pos - lo) = b.row(i).tail(d - 1);
                ids_sub[static_cast<std::size_t>(pos - lo)] = ids[static_cast<std::size_t>(i)];
            }
            // Block q covers sorted rows [q*w, (q+1)*w); it is never
            // truncated because some query has k_i strictly beyond it.
            const PointSet a_sub = pass.a_sorted.block(q * w, 1, w, d - 1);
            count_into(a_sub, b_sub, ids_sub, out);
        }
    }
}

} // namespace

DominanceCounts count_dominated_oracle(const PointSet& a, const PointSet& b) {
    check_dims(a, b);
    const int na = static_cast<int>(a.rows());
    const int nb = static_cast<int>(b.rows());
    const int d = static_cast<int>(a.cols());

    DominanceCounts counts = DominanceCounts::Zero(nb);
    for (int j = 0; j < nb; ++j) {
        int c = 0;
        for (int i = 0; i < na; ++i) {
            bool dom = true;
            for (int k = 0; k < d; ++k) {
                if (a(i, k) > b(j, k)) {
                    dom = false;
                    break;
                }
            }
            c += dom ? 1 : 0;
        }
        counts[j] = c;
    }
    return counts;
}

DominanceCounts count_dominated_1d(const PointSet& a, const PointSet& b) {
    check_dims(a, b);
    if (a.cols() != 1) {
        throw InputError("count_dominated_1d requires d = 1");
    }
    const int na = static_cast<int>(a.rows());
    const int nb = static_cast<int>(b.rows());

    std::vector<double> sorted(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i) sorted[static_cast<std::size_t>(i)] = a(i, 0);
    std::sort(sorted.begin(), sorted.end());

    DominanceCounts counts(nb);
    for (int j = 0; j < nb; ++j) {
        counts[j] = rank_leq(sorted.data(), na, b(j, 0));
    }
    return counts;
}

DominanceCounts count_dominated_2d(const PointSet& a, const PointSet& b) {
    check_dims(a, b);
    if (a.cols() != 2) {
        throw InputError("count_dominated_2d requires d = 2");
    }
    const int na = static_cast<int>(a.rows());
    const int nb = static_cast<int>(b.rows());
    if (na == 0 || nb == 0) return DominanceCounts::Zero(nb);

    FirstCoordPass pass = first_coord_pass(a, b);
    DominanceCounts counts = pass.counts;

    // Second coordinates in first-coordinate order; width-1 blocks are
    // trivially sorted, and each round merges adjacent block pairs, exactly
    // as a bottom-up merge sort.
    std::vector<double> cur(static_cast<std::size_t>(na));
    std::vector<double> next(static_cast<std::size_t>(na));
    for (int i = 0; i < na; ++i) cur[static_cast<std::size_t>(i)] = pass.a_sorted(i, 1);

    const int rounds = ceil_log2(na);
    for (int j = 1; j <= rounds; ++j) {
        const int w = 1 << (j - 1);

        for (int i = 0; i < nb; ++i) {
            const int ki = pass.k[static_cast<std::size_t>(i)];
            if (ki <= 1) continue;
            const int ell = (ki + w - 1) / w;
            if (ell % 2 != 0) continue;
            const int start = (ell - 2) * w; // block ell-1, full width w
            counts[i] += rank_leq(cur.data() + start, w, b(i, 1));
        }

        if (j == rounds) break;
        // Merge block pairs (2q, 2q+1) into width-2w blocks for next round.
        const int n_blocks = (na + w - 1) / w;
        for (int q = 0; q < n_blocks; q += 2) {
            const int lo = q * w;
            const int mid = std::min(lo + w, na);
            const int hi = std::min(lo + 2 * w, na);
            std::merge(cur.begin() + lo, cur.begin() + mid, cur.begin() + mid,
                       cur.begin() + hi, next.begin() + lo);
        }
        cur.swap(next);
    }
    return counts;
}

DominanceCounts count_dominated_nd(const PointSet& a, const PointSet& b) {
    check_dims(a, b);
    if (a.cols() < 3) {
        throw InputError("count_dominated_nd requires d >= 3");
    }
    const int nb = static_cast<int>(b.rows());
    DominanceCounts counts = DominanceCounts::Zero(nb);
    std::vector<int> ids(static_cast<std::size_t>(nb));
    std::iota(ids.begin(), ids.end(), 0);
    count_into(a, b, ids, counts);
    return counts;
}

DominanceCounts count_dominated(const PointSet& a, const PointSet& b, CountMode mode) {
    check_dims(a, b);
    if (mode == CountMode::Oracle) {
        return count_dominated_oracle(a, b);
    }
    switch (a.cols()) {
        case 1:
            return count_dominated_1d(a, b);
        case 2:
            return count_dominated_2d(a, b);
        default:
            return count_dominated_nd(a, b);
    }
}

DominanceCounts count_dominating(const PointSet& a, const PointSet& b, CountMode mode) {
    check_dims(a, b);
    return count_dominated(-a, -b, mode);
}

} // namespace acrank
