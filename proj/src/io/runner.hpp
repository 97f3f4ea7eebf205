#pragma once

#include <optional>
#include <string>

#include "io/dataset.hpp"
#include "net/transport.hpp"
#include "tree/train.hpp"

namespace trefoil {

struct RunConfig {
    std::string dataset_path;
    int label_col = -1;  // negative counts from the right
    int height = 4;
    int ring_k = 32;
    int ring_l = 128;
    int frac_bits = 0;  // 0 = 2*ceil(log2 n)
    int scale_digits = 4;
    uint64_t seed = 1;
    std::string mode = "inproc";  // inproc | tcp
    int party_id = 0;             // tcp mode
    std::array<std::string, 3> addresses{};
    std::string open_to = "0";  // party id | "all" | "none"
    double split_ratio = 2.0 / 3.0;

    void validate(size_t n) const;
    uint64_t digest(size_t n, size_t m, int v) const;
};

struct PartyReport {
    PhaseMeter setup;
    PhaseMeter online;
    uint64_t gen_perm_count = 0;
};

struct RunReport {
    size_t n_total = 0, n_train = 0, n_test = 0, m = 0;
    int v = 0, height = 0, ring_k = 0, ring_l = 0, frac_bits = 0, scale_digits = 0;
    uint64_t seed = 0;
    std::string mode;
    std::vector<PartyReport> parties;  // all three inproc; just this one in tcp mode
    int this_party = -1;               // tcp mode; -1 means all parties present
    double wall_ms = 0;
    bool has_eval = false;
    double train_accuracy = 0, test_accuracy = 0;
    double oracle_train_accuracy = 0, oracle_test_accuracy = 0;
    std::optional<TreeModel> model;  // withheld unless opening was requested

    uint64_t total_online_bits() const;
    uint64_t max_online_rounds() const;
    std::string to_text() const;
};

// Loads, splits, shares from party 0, trains, opens for evaluation, and
// reports. In tcp mode the process acts as cfg.party_id and only the opening
// party fills the evaluation fields.
RunReport run_train(const RunConfig& cfg);

// One benchmark row: a training run over a synthetic dataset.
RunReport run_synthetic(const RunConfig& cfg, size_t n, size_t m, int v);

}  // namespace trefoil
