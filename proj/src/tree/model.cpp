#include "tree/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trefoil {

namespace {

const TreeModel::Leaf* leaf_at_or_below(const std::vector<TreeModel::Leaf>& leaves,
                                        uint64_t target) {
    const TreeModel::Leaf* best = nullptr;
    for (const auto& lf : leaves) {
        if (lf.nid <= target && (!best || lf.nid > best->nid)) best = &lf;
    }
    if (!best && !leaves.empty()) best = &leaves.front();
    return best;
}

}  // namespace

uint64_t TreeModel::predict_scaled(const std::vector<i128>& q2) const {
    require((int)q2.size() == m, ErrorKind::Invalid, "sample arity mismatch");
    uint64_t nid = 0;
    for (int k = 0; k < h; ++k) {
        const Internal* node = nullptr;
        for (const auto& e : internal_layers[(size_t)k])
            if (e.nid == nid) {
                node = &e;
                break;
            }
        if (!node) {
            // the path leads into a region that held no training samples:
            // fall through to the leaf with the largest nid not beyond the
            // leftmost descendant of the current position
            uint64_t target = nid;
            for (int d = k; d < h; ++d) target = 2 * target + 1;
            const Leaf* lf = leaf_at_or_below(leaves, target);
            require(lf != nullptr, ErrorKind::Invalid, "model has no leaves");
            return lf->label;
        }
        i128 lhs = 2 * q2[(size_t)node->attr];
        uint64_t b = lhs < node->thr2 ? 1 : 0;
        nid = 2 * nid + 1 + b;
    }
    for (const auto& lf : leaves)
        if (lf.nid == nid) return lf.label;
    const Leaf* lf = leaf_at_or_below(leaves, nid);
    require(lf != nullptr, ErrorKind::Invalid, "model has no leaves");
    return lf->label;
}

uint64_t TreeModel::predict(const std::vector<double>& sample) const {
    std::vector<i128> q2(sample.size());
    double scale = std::pow(10.0, scale_digits);
    for (size_t i = 0; i < sample.size(); ++i) q2[i] = 2 * (i128)llround(sample[i] * scale);
    return predict_scaled(q2);
}

std::string threshold_to_string(i128 thr2, int scale_digits) {
    // thr2 / (4 * 10^d) as an exact decimal: multiply by 25 to replace /4
    // with /100, then place the point at d+2 digits
    bool neg = thr2 < 0;
    u128 mag = (u128)(neg ? -thr2 : thr2) * 25;
    std::string digits = u128_to_string(mag);
    size_t point = (size_t)scale_digits + 2;
    if (digits.size() <= point) digits.insert(0, point + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - point) + "." +
                      digits.substr(digits.size() - point);
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return (neg ? "-" : "") + out;
}

std::string TreeModel::to_text() const {
    std::ostringstream os;
    os << "trefoil-model v1\n";
    os << "meta m=" << m << " v=" << v << " h=" << h << " scale_digits=" << scale_digits << "\n";
    for (int k = 0; k < h; ++k) {
        os << "layer " << k << " internal\n";
        for (const auto& e : internal_layers[(size_t)k])
            os << "node nid=" << e.nid << " attr=" << e.attr << " thr2=" << i128_to_string(e.thr2)
               << " thr=" << threshold_to_string(e.thr2, scale_digits) << "\n";
    }
    os << "layer " << h << " leaf\n";
    for (const auto& lf : leaves) os << "node nid=" << lf.nid << " label=" << lf.label << "\n";
    return os.str();
}

namespace {

i128 parse_i128(const std::string& s) {
    if (!s.empty() && s[0] == '-') return -(i128)u128_from_string(s.substr(1));
    return (i128)u128_from_string(s);
}

std::string field(const std::string& line, const std::string& key) {
    auto pos = line.find(key + "=");
    require(pos != std::string::npos, ErrorKind::Load, "missing field " + key);
    pos += key.size() + 1;
    auto end = line.find(' ', pos);
    return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

TreeModel TreeModel::parse_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    require(std::getline(is, line) && line == "trefoil-model v1", ErrorKind::Load,
            "bad model header");
    require(std::getline(is, line) && line.rfind("meta ", 0) == 0, ErrorKind::Load,
            "missing model meta");
    TreeModel mdl;
    mdl.m = (int)std::stol(field(line, "m"));
    mdl.v = (int)std::stol(field(line, "v"));
    mdl.h = (int)std::stol(field(line, "h"));
    mdl.scale_digits = (int)std::stol(field(line, "scale_digits"));
    mdl.internal_layers.resize((size_t)mdl.h);
    int cur_layer = -1;
    bool in_leaf = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("layer ", 0) == 0) {
            std::istringstream ls(line);
            std::string word, kind;
            int k;
            ls >> word >> k >> kind;
            cur_layer = k;
            in_leaf = kind == "leaf";
            require(in_leaf ? k == mdl.h : (k >= 0 && k < mdl.h), ErrorKind::Load,
                    "layer index out of range");
        } else if (line.rfind("node ", 0) == 0) {
            require(cur_layer >= 0, ErrorKind::Load, "node before layer");
            if (in_leaf) {
                Leaf lf;
                lf.nid = (uint64_t)std::stoull(field(line, "nid"));
                lf.label = (uint64_t)std::stoull(field(line, "label"));
                mdl.leaves.push_back(lf);
            } else {
                Internal e;
                e.nid = (uint64_t)std::stoull(field(line, "nid"));
                e.attr = (uint64_t)std::stoull(field(line, "attr"));
                e.thr2 = parse_i128(field(line, "thr2"));
                mdl.internal_layers[(size_t)cur_layer].push_back(e);
            }
        } else {
            fail(ErrorKind::Load, "unrecognized model line: " + line);
        }
    }
    return mdl;
}

bool TreeModel::operator==(const TreeModel& other) const {
    if (m != other.m || v != other.v || h != other.h || scale_digits != other.scale_digits)
        return false;
    if (leaves.size() != other.leaves.size()) return false;
    for (size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].nid != other.leaves[i].nid || leaves[i].label != other.leaves[i].label)
            return false;
    if (internal_layers.size() != other.internal_layers.size()) return false;
    for (size_t k = 0; k < internal_layers.size(); ++k) {
        if (internal_layers[k].size() != other.internal_layers[k].size()) return false;
        for (size_t i = 0; i < internal_layers[k].size(); ++i) {
            const auto &a = internal_layers[k][i], &b = other.internal_layers[k][i];
            if (a.nid != b.nid || a.attr != b.attr || a.thr2 != b.thr2) return false;
        }
    }
    return true;
}

}  // namespace trefoil
