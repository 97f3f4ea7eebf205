#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/ring.hpp"

namespace trefoil {

// Opened decision tree. Internal nodes store the split threshold as thr2 =
// twice the quantized-and-doubled attribute midpoint, so every stored
// threshold is an exact integer; a sample goes to the RIGHT child (nid
// 2j+2) exactly when 2*attr < thr2, matching the training-time comparison.
// In original attribute units the threshold is thr2 / (4 * 10^scale_digits).
struct TreeModel {
    struct Internal {
        uint64_t nid = 0;
        uint64_t attr = 0;
        i128 thr2 = 0;
    };
    struct Leaf {
        uint64_t nid = 0;
        uint64_t label = 0;
    };

    int m = 0;
    int v = 0;
    int h = 0;
    int scale_digits = 0;
    std::vector<std::vector<Internal>> internal_layers;  // layers 0..h-1
    std::vector<Leaf> leaves;                            // layer h

    // Tree walk on pre-scaled integer attributes (q2 = 2 * round(v * 10^d)).
    uint64_t predict_scaled(const std::vector<i128>& q2) const;
    // Quantizes raw attribute values with this model's scale first.
    uint64_t predict(const std::vector<double>& sample) const;

    std::string to_text() const;
    static TreeModel parse_text(const std::string& text);

    bool operator==(const TreeModel& other) const;
};

// original-units threshold as a decimal string (exact rational)
std::string threshold_to_string(i128 thr2, int scale_digits);

}  // namespace trefoil
