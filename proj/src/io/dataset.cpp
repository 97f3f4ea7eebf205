#include "io/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "core/prng.hpp"

namespace trefoil {

namespace {

bool parse_cell(const std::string& cell, double* out) {
    if (cell.empty()) return false;
    size_t pos = 0;
    try {
        *out = std::stod(cell, &pos);
    } catch (...) {
        return false;
    }
    while (pos < cell.size() && std::isspace((unsigned char)cell[pos])) ++pos;
    return pos == cell.size();
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ';') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    for (auto& s : cells) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return cells;
}

}  // namespace

oracle::PlainDataset load_csv(const std::string& path, int label_col, int scale_digits,
                              int ring_k) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Load, "cannot open dataset file " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    size_t line_no = 0;
    size_t width = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        auto cells = split_line(line);
        std::vector<double> row(cells.size());
        bool all_numeric = true;
        size_t bad_col = 0;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (!parse_cell(cells[c], &row[c])) {
                all_numeric = false;
                bad_col = c;
                break;
            }
        }
        if (!all_numeric) {
            // one non-numeric line at the top is a header
            if (first_content_line) {
                first_content_line = false;
                continue;
            }
            fail(ErrorKind::Load, "non-numeric cell at line " + std::to_string(line_no) +
                                      ", column " + std::to_string(bad_col + 1));
        }
        first_content_line = false;
        if (width == 0) width = row.size();
        require(row.size() == width, ErrorKind::Load,
                "ragged row at line " + std::to_string(line_no) + ": expected " +
                    std::to_string(width) + " cells, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorKind::Load, "dataset has no data rows");
    require(width >= 2, ErrorKind::Load, "dataset needs at least one attribute and a label");

    int lc = label_col < 0 ? (int)width + label_col : label_col;
    require(lc >= 0 && lc < (int)width, ErrorKind::Load, "label column out of range");

    size_t n = rows.size();
    size_t m = width - 1;
    oracle::PlainDataset ds;
    ds.scale_digits = scale_digits;
    ds.attrs.assign(m, oracle::Vec(n));
    ds.labels.resize(n);

    double scale = std::pow(10.0, scale_digits);
    int64_t limit = (int64_t)1 << (ring_k - 2);
    std::map<int64_t, int64_t> label_map;
    for (size_t r = 0; r < n; ++r) {
        size_t ai = 0;
        for (size_t c = 0; c < width; ++c) {
            if ((int)c == lc) {
                double lv = rows[r][c];
                require(std::fabs(lv - std::llround(lv)) < 1e-9, ErrorKind::Load,
                        "label is not an integer at row " + std::to_string(r + 1));
                label_map.emplace((int64_t)std::llround(lv), 0);
                continue;
            }
            int64_t q = (int64_t)std::llround(rows[r][c] * scale) * 2;
            require(std::llabs(q) < limit, ErrorKind::Load,
                    "attribute overflows the ring after scaling at row " +
                        std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                        " (reduce scale-digits or raise ring-k)");
            ds.attrs[ai++][r] = q;
        }
    }
    int64_t next_label = 0;
    for (auto& kv : label_map) kv.second = next_label++;
    for (size_t r = 0; r < n; ++r) {
        double lv = rows[r][(size_t)lc];
        ds.labels[r] = label_map[(int64_t)std::llround(lv)];
    }
    ds.v = (int)label_map.size();
    require(ds.v >= 2, ErrorKind::Load, "dataset needs at least two distinct labels");
    return ds;
}

SplitDataset split_dataset(const oracle::PlainDataset& ds, double train_fraction, uint64_t seed) {
    require(train_fraction > 0.0 && train_fraction < 1.0, ErrorKind::Invalid,
            "train fraction must be in (0, 1)");
    size_t n = ds.n();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Stream s(derive_seed(seed, 0x5911u));
    for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[(size_t)s.next_below(i)]);

    size_t ntrain = (size_t)std::ceil(train_fraction * (double)n);
    ntrain = std::min(std::max<size_t>(ntrain, 1), n - 1);
    SplitDataset out;
    for (auto* part : {&out.train, &out.test}) {
        part->v = ds.v;
        part->scale_digits = ds.scale_digits;
        part->attrs.assign(ds.m(), {});
    }
    for (size_t i = 0; i < n; ++i) {
        auto& part = i < ntrain ? out.train : out.test;
        for (size_t a = 0; a < ds.m(); ++a) part.attrs[a].push_back(ds.attrs[a][order[i]]);
        part.labels.push_back(ds.labels[order[i]]);
    }
    return out;
}

oracle::PlainDataset synthetic_dataset(size_t n, size_t m, int v, uint64_t seed) {
    oracle::PlainDataset ds;
    ds.v = v;
    ds.scale_digits = 0;
    ds.attrs.assign(m, oracle::Vec(n));
    ds.labels.resize(n);
    Stream s(derive_seed(seed, 0x5eedu));
    for (size_t a = 0; a < m; ++a)
        for (size_t i = 0; i < n; ++i) ds.attrs[a][i] = 2 * (int64_t)s.next_below(4 * n);
    for (size_t i = 0; i < n; ++i) {
        int64_t acc = 0;
        for (size_t a = 0; a < m; ++a) acc += ds.attrs[a][i] > (int64_t)(4 * n) ? 1 : 0;
        int64_t label = acc % v;
        if (s.next_below(5) == 0) label = (int64_t)s.next_below((uint64_t)v);
        ds.labels[i] = label;
    }
    return ds;
}

}  // namespace trefoil
