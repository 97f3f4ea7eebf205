#pragma once

#include <cstdint>
#include <vector>

#include "tree/model.hpp"

namespace trefoil::oracle {

// Plaintext reference implementations used as test oracles and as the
// reference trainer for equivalence and accuracy comparisons. All arithmetic
// is exact (64/128-bit integers and integer fractions); no floating point
// enters any comparison.

using Vec = std::vector<int64_t>;
using Perm = std::vector<uint32_t>;

// stable ascending ranks: out[i] = final position of element i
Perm stable_argsort(const Vec& x);
Perm perm_by_bit(const Vec& bits);
// z[pi[i]] = x[i]
template <class T>
std::vector<T> apply_perm(const Perm& pi, const std::vector<T>& x) {
    std::vector<T> z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[pi[i]] = x[i];
    return z;
}
template <class T>
std::vector<T> unapply_perm(const Perm& pi, const std::vector<T>& x) {
    std::vector<T> z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[pi[i]];
    return z;
}
Perm compose_perms(const Perm& alpha, const Perm& beta);

Vec group_sum(const std::vector<uint8_t>& g, const Vec& x);
Vec group_prefix_sum(const std::vector<uint8_t>& g, const Vec& x);
Vec group_max(const std::vector<uint8_t>& g, const Vec& x);
// argmax ties resolve to the LAST maximal element of the group
std::pair<Vec, Vec> group_max_pair(const std::vector<uint8_t>& g, const Vec& x, const Vec& y);
// y at the last maximum of x
int64_t vect_max(const Vec& x, const Vec& y);

// Split score of Eq-1 form: sums of squared per-label counts over each side
// divided by the side sizes; exact fraction, or the sentinel that compares
// below every real score (masked positions).
struct Score {
    bool masked = true;
    i128 num = 0;
    i128 den = 1;

    static Score sentinel() { return Score{}; }
    static Score of(i128 num, i128 den) { return Score{false, num, den}; }

    friend bool operator<(const Score& a, const Score& b) {
        if (a.masked || b.masked) return b.masked ? false : a.masked;
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator==(const Score& a, const Score& b) {
        if (a.masked || b.masked) return a.masked == b.masked;
        return a.num * b.den == b.num * a.den;
    }
    double to_double() const;
};

// per-position scores for grouped, attribute-sorted labels (v classes);
// position j splits between j and j+1, the last position of each group is
// the caller's to mask
std::vector<Score> modified_gini(const std::vector<uint8_t>& g, const Vec& labels, int v);

struct PlainDataset {
    std::vector<Vec> attrs;  // m vectors of scaled integers (doubled)
    Vec labels;              // values in [0, v)
    int v = 0;
    int scale_digits = 0;

    size_t n() const { return labels.size(); }
    size_t m() const { return attrs.size(); }
};

struct TrainStats {
    bool top_tie = false;        // some node's best score is attained twice
    double min_gap = 1e300;      // smallest top-to-runner-up gap (real units)
    double min_leaf_margin = 1e300;  // not currently used for rejection
};

// Reference trainer with identical structure and tie rules to the secure
// pipeline; exact scores.
TreeModel plain_train(const PlainDataset& ds, int h, TrainStats* stats = nullptr);

double accuracy(const TreeModel& model, const PlainDataset& ds);

}  // namespace trefoil::oracle
