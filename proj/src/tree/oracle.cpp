#include "tree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trefoil::oracle {

Perm stable_argsort(const Vec& x) {
    std::vector<uint32_t> order(x.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return x[a] < x[b]; });
    Perm pi(x.size());
    for (uint32_t rank = 0; rank < order.size(); ++rank) pi[order[rank]] = rank;
    return pi;
}

Perm perm_by_bit(const Vec& bits) {
    size_t zeros = 0;
    for (int64_t b : bits) zeros += b == 0;
    Perm pi(bits.size());
    size_t z = 0, o = zeros;
    for (size_t i = 0; i < bits.size(); ++i) pi[i] = (uint32_t)(bits[i] == 0 ? z++ : o++);
    return pi;
}

Perm compose_perms(const Perm& alpha, const Perm& beta) {
    Perm pi(alpha.size());
    for (size_t i = 0; i < alpha.size(); ++i) pi[i] = beta[alpha[i]];
    return pi;
}

namespace {

std::vector<size_t> group_starts(const std::vector<uint8_t>& g) {
    std::vector<size_t> starts;
    for (size_t i = 0; i < g.size(); ++i)
        if (g[i]) starts.push_back(i);
    return starts;
}

template <class T, class Better>
std::pair<std::vector<T>, Vec> group_arg_best(const std::vector<uint8_t>& g,
                                              const std::vector<T>& x, const Vec& y,
                                              Better better) {
    std::vector<T> bx(x.size());
    Vec by(x.size());
    auto starts = group_starts(g);
    for (size_t s = 0; s < starts.size(); ++s) {
        size_t lo = starts[s];
        size_t hi = s + 1 < starts.size() ? starts[s + 1] : x.size();
        size_t arg = lo;
        for (size_t j = lo + 1; j < hi; ++j)
            if (!better(x[arg], x[j])) arg = j;  // ties move to the later index
        for (size_t j = lo; j < hi; ++j) {
            bx[j] = x[arg];
            by[j] = y[arg];
        }
    }
    return {bx, by};
}

}  // namespace

Vec group_sum(const std::vector<uint8_t>& g, const Vec& x) {
    Vec z(x.size());
    auto starts = group_starts(g);
    for (size_t s = 0; s < starts.size(); ++s) {
        size_t lo = starts[s];
        size_t hi = s + 1 < starts.size() ? starts[s + 1] : x.size();
        int64_t total = 0;
        for (size_t j = lo; j < hi; ++j) total += x[j];
        for (size_t j = lo; j < hi; ++j) z[j] = total;
    }
    return z;
}

Vec group_prefix_sum(const std::vector<uint8_t>& g, const Vec& x) {
    Vec z(x.size());
    auto starts = group_starts(g);
    for (size_t s = 0; s < starts.size(); ++s) {
        size_t lo = starts[s];
        size_t hi = s + 1 < starts.size() ? starts[s + 1] : x.size();
        int64_t run = 0;
        for (size_t j = lo; j < hi; ++j) z[j] = run += x[j];
    }
    return z;
}

Vec group_max(const std::vector<uint8_t>& g, const Vec& x) {
    return group_arg_best(g, x, x, [](int64_t a, int64_t b) { return a > b; }).first;
}

std::pair<Vec, Vec> group_max_pair(const std::vector<uint8_t>& g, const Vec& x, const Vec& y) {
    return group_arg_best(g, x, y, [](int64_t a, int64_t b) { return a > b; });
}

int64_t vect_max(const Vec& x, const Vec& y) {
    size_t arg = 0;
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] >= x[arg]) arg = i;
    return y[arg];
}

double Score::to_double() const {
    if (masked) return -1e300;
    return (double)(long double)num / (double)(long double)den;
}

std::vector<Score> modified_gini(const std::vector<uint8_t>& g, const Vec& labels, int v) {
    size_t n = labels.size();
    std::vector<Score> out(n, Score::sentinel());
    auto starts = group_starts(g);
    for (size_t s = 0; s < starts.size(); ++s) {
        size_t lo = starts[s];
        size_t hi = s + 1 < starts.size() ? starts[s + 1] : n;
        std::vector<i128> left((size_t)v, 0), total((size_t)v, 0);
        for (size_t j = lo; j < hi; ++j) ++total[(size_t)labels[j]];
        for (size_t j = lo; j < hi; ++j) {
            ++left[(size_t)labels[j]];
            i128 ps = (i128)(j - lo + 1);
            i128 ss = (i128)(hi - j - 1);
            if (ss == 0) continue;  // the caller masks the last position anyway
            i128 lsq = 0, rsq = 0;
            for (int l = 0; l < v; ++l) {
                lsq += left[(size_t)l] * left[(size_t)l];
                i128 right = total[(size_t)l] - left[(size_t)l];
                rsq += right * right;
            }
            out[j] = Score::of(lsq * ss + rsq * ps, ps * ss);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// reference trainer

TreeModel plain_train(const PlainDataset& ds, int h, TrainStats* stats) {
    const size_t n = ds.n();
    const size_t m = ds.m();
    require(h >= 1 && n >= 1 && m >= 1, ErrorKind::Invalid, "need h >= 1 and a non-empty dataset");

    TreeModel model;
    model.m = (int)m;
    model.v = ds.v;
    model.h = h;
    model.scale_digits = ds.scale_digits;
    model.internal_layers.resize((size_t)h);
    if (stats) *stats = TrainStats{};

    std::vector<Perm> pi(m);
    for (size_t i = 0; i < m; ++i) pi[i] = stable_argsort(ds.attrs[i]);
    Vec spnd(n, 0);

    for (int k = 0; k < h; ++k) {
        Vec spnd_sorted = apply_perm(pi[0], spnd);
        std::vector<uint8_t> g(n, 0);
        g[0] = 1;
        for (size_t j = 1; j < n; ++j) g[j] = spnd_sorted[j] != spnd_sorted[j - 1];

        std::vector<std::vector<Score>> best_score(m);
        std::vector<Vec> best_thr(m);
        for (size_t i = 0; i < m; ++i) {
            Vec ylab = apply_perm(pi[i], ds.labels);
            Vec attr = apply_perm(pi[i], ds.attrs[i]);
            std::vector<Score> score = modified_gini(g, ylab, ds.v);
            Vec thr2(n);
            for (size_t j = 0; j + 1 < n; ++j) thr2[j] = attr[j] + attr[j + 1];
            thr2[n - 1] = 2 * attr[n - 1];
            for (size_t j = 0; j < n; ++j) {
                bool group_end = j + 1 == n || g[j + 1];
                if (group_end || attr[j] == attr[j + 1]) score[j] = Score::sentinel();
            }
            // group-wise arg-best per attribute (ties to the last position)
            auto pr = group_arg_best(g, score, thr2,
                                     [](const Score& a, const Score& b) { return b < a; });
            best_score[i] = std::move(pr.first);
            best_thr[i] = std::move(pr.second);
        }

        // cross-attribute selection per position (ties to the last attribute)
        Vec spat(n), spth(n);
        for (size_t j = 0; j < n; ++j) {
            size_t arg = 0;
            for (size_t i = 1; i < m; ++i)
                if (!(best_score[i][j] < best_score[arg][j])) arg = i;
            spat[j] = (int64_t)arg;
            spth[j] = best_thr[arg][j];
        }

        // near-tie statistics per node across every unmasked candidate
        if (stats) {
            auto starts = group_starts(g);
            for (size_t s = 0; s < starts.size(); ++s) {
                size_t lo = starts[s];
                size_t hi = s + 1 < starts.size() ? starts[s + 1] : n;
                Score top = Score::sentinel();
                int top_count = 0;
                for (size_t i = 0; i < m; ++i) {
                    Vec ylab = apply_perm(pi[i], ds.labels);
                    Vec attr = apply_perm(pi[i], ds.attrs[i]);
                    auto sc = modified_gini(g, ylab, ds.v);
                    for (size_t j = lo; j < hi; ++j) {
                        bool group_end = j + 1 == n || g[j + 1];
                        if (group_end || attr[j] == attr[j + 1]) continue;
                        if (top < sc[j]) {
                            top = sc[j];
                            top_count = 1;
                        } else if (sc[j] == top) {
                            ++top_count;
                        }
                    }
                }
                if (top.masked) continue;
                if (top_count > 1) stats->top_tie = true;
                // runner-up gap
                double best2 = -1e300;
                for (size_t i = 0; i < m; ++i) {
                    Vec ylab = apply_perm(pi[i], ds.labels);
                    Vec attr = apply_perm(pi[i], ds.attrs[i]);
                    auto sc = modified_gini(g, ylab, ds.v);
                    for (size_t j = lo; j < hi; ++j) {
                        bool group_end = j + 1 == n || g[j + 1];
                        if (group_end || attr[j] == attr[j + 1]) continue;
                        if (sc[j] == top) continue;
                        best2 = std::max(best2, sc[j].to_double());
                    }
                }
                if (best2 > -1e299)
                    stats->min_gap = std::min(stats->min_gap, top.to_double() - best2);
            }
        }

        // formatted layer: one entry per group head, presented in nid order
        for (size_t j = 0; j < n; ++j)
            if (g[j])
                model.internal_layers[(size_t)k].push_back(TreeModel::Internal{
                    (uint64_t)spnd_sorted[j], (uint64_t)spat[j], (i128)spth[j]});
        std::sort(model.internal_layers[(size_t)k].begin(),
                  model.internal_layers[(size_t)k].end(),
                  [](const TreeModel::Internal& a, const TreeModel::Internal& b) {
                      return a.nid < b.nid;
                  });

        // back to input order, then advance the node assignment
        Vec spat_o = unapply_perm(pi[0], spat);
        Vec spth_o = unapply_perm(pi[0], spth);
        Vec b(n);
        for (size_t j = 0; j < n; ++j)
            b[j] = 2 * ds.attrs[(size_t)spat_o[j]][j] < spth_o[j] ? 1 : 0;
        for (size_t j = 0; j < n; ++j) spnd[j] = 2 * spnd[j] + 1 + b[j];
        for (size_t i = 0; i < m; ++i) {
            Vec bi = apply_perm(pi[i], b);
            pi[i] = compose_perms(pi[i], perm_by_bit(bi));
        }
    }

    // leaf layer: most common label per node, ties to the larger label
    Vec spnd_sorted = apply_perm(pi[0], spnd);
    Vec ylab = apply_perm(pi[0], ds.labels);
    std::vector<uint8_t> g(n, 0);
    g[0] = 1;
    for (size_t j = 1; j < n; ++j) g[j] = spnd_sorted[j] != spnd_sorted[j - 1];
    auto starts = group_starts(g);
    for (size_t s = 0; s < starts.size(); ++s) {
        size_t lo = starts[s];
        size_t hi = s + 1 < starts.size() ? starts[s + 1] : n;
        Vec counts((size_t)ds.v, 0);
        for (size_t j = lo; j < hi; ++j) ++counts[(size_t)ylab[j]];
        size_t arg = 0;
        for (size_t l = 1; l < counts.size(); ++l)
            if (counts[l] >= counts[arg]) arg = l;
        model.leaves.push_back(TreeModel::Leaf{(uint64_t)spnd_sorted[lo], (uint64_t)arg});
    }
    std::sort(model.leaves.begin(), model.leaves.end(),
              [](const TreeModel::Leaf& a, const TreeModel::Leaf& b) { return a.nid < b.nid; });
    return model;
}

double accuracy(const TreeModel& model, const PlainDataset& ds) {
    size_t hits = 0;
    for (size_t j = 0; j < ds.n(); ++j) {
        std::vector<i128> q2(ds.m());
        for (size_t i = 0; i < ds.m(); ++i) q2[i] = (i128)ds.attrs[i][j];
        if (model.predict_scaled(q2) == (uint64_t)ds.labels[j]) ++hits;
    }
    return ds.n() == 0 ? 0.0 : (double)hits / (double)ds.n();
}

}  // namespace trefoil::oracle
