#pragma once

#include <string>

#include "tree/oracle.hpp"

namespace trefoil {

// CSV ingestion: rectangular numeric table, one label column (negative
// indices count from the right). Attribute cells are quantized to
// `scale_digits` decimal digits and doubled so midpoint thresholds stay
// integral; labels must be integers and are remapped onto [0, v). A lone
// header line is auto-detected and skipped.
oracle::PlainDataset load_csv(const std::string& path, int label_col, int scale_digits,
                              int ring_k);

// Seeded shuffle split; `train_fraction` of the rows (rounded up) train.
struct SplitDataset {
    oracle::PlainDataset train;
    oracle::PlainDataset test;
};
SplitDataset split_dataset(const oracle::PlainDataset& ds, double train_fraction, uint64_t seed);

// synthetic benchmark dataset with signal-bearing labels
oracle::PlainDataset synthetic_dataset(size_t n, size_t m, int v, uint64_t seed);

}  // namespace trefoil
