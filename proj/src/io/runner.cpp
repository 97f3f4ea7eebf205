#include "io/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace trefoil {

namespace {

int ceil_log2(size_t n) {
    int b = 0;
    while (((size_t)1 << b) < n) ++b;
    return b;
}

int resolve_frac_bits(const RunConfig& cfg, size_t n) {
    return cfg.frac_bits > 0 ? cfg.frac_bits : 2 * std::max(1, ceil_log2(n));
}

}  // namespace

void RunConfig::validate(size_t n) const {
    require(ring_k >= 8 && ring_k <= 64, ErrorKind::Config, "ring-k must be in [8, 64]");
    require(ring_l > ring_k && ring_l <= 128, ErrorKind::Config,
            "ring-l must satisfy k < l <= 128");
    require(height >= 1, ErrorKind::Config, "height must be at least 1");
    require(height <= ring_k - 2, ErrorKind::Config, "height exceeds the nid range of ring-k");
    require(mode == "inproc" || mode == "tcp", ErrorKind::Config, "mode must be inproc or tcp");
    int f = resolve_frac_bits(*this, n);
    int logn = ceil_log2(n);
    require(f + 2 * logn + 2 <= ring_l, ErrorKind::Config,
            "frac-bits leaves no headroom on ring-l for this dataset size");
    require(2 * (f + 8) + 4 <= ring_l, ErrorKind::Config,
            "frac-bits too large for the division precision on ring-l");
    require((size_t)1 << (ring_k - 2) > n, ErrorKind::Config, "dataset too large for ring-k");
    require(open_to == "all" || open_to == "none" || open_to == "0" || open_to == "1" ||
                open_to == "2",
            ErrorKind::Config, "open-to must be a party id, all, or none");
}

uint64_t RunConfig::digest(size_t n, size_t m, int v) const {
    uint64_t d = 0x9d2c5680u;
    for (uint64_t x : {(uint64_t)n, (uint64_t)m, (uint64_t)v, (uint64_t)height,
                       (uint64_t)ring_k, (uint64_t)ring_l, (uint64_t)resolve_frac_bits(*this, n),
                       (uint64_t)scale_digits, seed})
        d = mix64(d ^ mix64(x));
    return d;
}

uint64_t RunReport::total_online_bits() const {
    uint64_t bits = 0;
    for (const auto& p : parties) bits += p.online.payload_bits;
    return bits;
}

uint64_t RunReport::max_online_rounds() const {
    uint64_t mx = 0;
    for (const auto& p : parties) mx = std::max(mx, p.online.rounds);
    return mx;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "trefoil-report v1\n";
    os << "mode: " << mode << "\n";
    os << "n_total: " << n_total << "\nn_train: " << n_train << "\nn_test: " << n_test << "\n";
    os << "m: " << m << "\nv: " << v << "\n";
    os << "height: " << height << "\nring_k: " << ring_k << "\nring_l: " << ring_l
       << "\nfrac_bits: " << frac_bits << "\nscale_digits: " << scale_digits << "\n";
    os << "seed: " << seed << "\n";
    for (size_t i = 0; i < parties.size(); ++i) {
        const auto& p = parties[i];
        int id = this_party >= 0 ? this_party : (int)i;
        os << "party " << id << " online_bytes_to:";
        for (int peer = 0; peer < 3; ++peer) os << " " << p.online.bytes_to[(size_t)peer];
        os << " online_bits: " << p.online.payload_bits << " online_rounds: " << p.online.rounds
           << " setup_bits: " << p.setup.payload_bits << " setup_rounds: " << p.setup.rounds
           << " gen_perms: " << p.gen_perm_count << "\n";
    }
    os << "total_online_bits: " << total_online_bits() << "\n";
    os << "max_online_rounds: " << max_online_rounds() << "\n";
    os << "wall_ms: " << wall_ms << "\n";
    if (has_eval) {
        os << "train_accuracy: " << train_accuracy << "\n";
        os << "test_accuracy: " << test_accuracy << "\n";
        os << "oracle_train_accuracy: " << oracle_train_accuracy << "\n";
        os << "oracle_test_accuracy: " << oracle_test_accuracy << "\n";
    }
    if (model) {
        os << "model:\n" << model->to_text();
    } else {
        os << "model: withheld\n";
    }
    return os.str();
}

namespace {

std::vector<u128> to_ring(const oracle::Vec& v, RingConfig cfg) {
    std::vector<u128> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = cfg.reduce((u128)(i128)v[i]);
    return out;
}

// the per-party protocol: share the training set from party 0, train, open
// to the evaluating party, and return that party's model text
Bytes training_program(PartyCtx& ctx, const oracle::PlainDataset& train, int height,
                       const TrainParams& params, int eval_party) {
    const RingConfig kcfg = params.small;
    ctx.set_phase(Phase::Setup);
    SecureDataset ds;
    ds.v = train.v;
    ds.scale_digits = train.scale_digits;
    for (size_t a = 0; a < train.m(); ++a) {
        std::vector<u128> vals;
        std::vector<u128>* ptr = nullptr;
        if (ctx.self() == 0) {
            vals = to_ring(train.attrs[a], kcfg);
            ptr = &vals;
        }
        ds.attrs.push_back(deal(ctx, 0, ptr, kcfg, train.n()));
    }
    {
        std::vector<u128> vals;
        std::vector<u128>* ptr = nullptr;
        if (ctx.self() == 0) {
            vals = to_ring(train.labels, kcfg);
            ptr = &vals;
        }
        ds.labels = deal(ctx, 0, ptr, kcfg, train.n());
    }
    ctx.set_phase(Phase::Online);
    SharedModel model = train_decision_tree(ctx, ds, height, params);
    auto opened = open_model(ctx, model, eval_party);
    if (!opened) return {};
    std::string text = opened->to_text();
    return Bytes(text.begin(), text.end());
}

RunReport run_training_session(const RunConfig& cfg, const oracle::PlainDataset& train,
                               const oracle::PlainDataset& test, size_t n_total) {
    cfg.validate(train.n());
    TrainParams params;
    params.small = RingConfig(cfg.ring_k);
    params.large = RingConfig(cfg.ring_l);
    params.frac_bits = resolve_frac_bits(cfg, train.n());

    int eval_party = 0;
    if (cfg.open_to == "1") eval_party = 1;
    if (cfg.open_to == "2") eval_party = 2;
    bool withhold = cfg.open_to == "none";

    SessionOptions opts;
    opts.seed = cfg.seed == 0 ? 0 : derive_seed(cfg.seed, 0xbeef);
    opts.mode = cfg.mode;
    opts.addresses = cfg.addresses;
    opts.config_digest = cfg.digest(train.n(), train.m(), train.v);

    RunReport report;
    report.n_total = n_total;
    report.n_train = train.n();
    report.n_test = test.n();
    report.m = train.m();
    report.v = train.v;
    report.height = cfg.height;
    report.ring_k = cfg.ring_k;
    report.ring_l = cfg.ring_l;
    report.frac_bits = params.frac_bits;
    report.scale_digits = cfg.scale_digits;
    report.seed = cfg.seed;
    report.mode = cfg.mode;

    auto program = [&](PartyCtx& ctx) {
        return training_program(ctx, train, cfg.height, params, eval_party);
    };

    auto t0 = std::chrono::steady_clock::now();
    Bytes opened_text;
    if (cfg.mode == "inproc") {
        std::array<PartyProgram, 3> programs{program, program, program};
        auto results = run_session(programs, opts);
        for (auto& r : results) {
            PartyReport pr;
            pr.setup = r.meter.setup();
            pr.online = r.meter.online();
            pr.gen_perm_count = r.gen_perm_count;
            report.parties.push_back(pr);
        }
        opened_text = std::move(results[(size_t)eval_party].output);
    } else {
        auto result = run_party(program, cfg.party_id, opts);
        PartyReport pr;
        pr.setup = result.meter.setup();
        pr.online = result.meter.online();
        pr.gen_perm_count = result.gen_perm_count;
        report.parties.push_back(pr);
        report.this_party = cfg.party_id;
        opened_text = std::move(result.output);
    }
    auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (!opened_text.empty()) {
        TreeModel model =
            TreeModel::parse_text(std::string(opened_text.begin(), opened_text.end()));
        report.has_eval = true;
        report.train_accuracy = oracle::accuracy(model, train);
        report.test_accuracy = test.n() ? oracle::accuracy(model, test) : 0.0;
        TreeModel reference = oracle::plain_train(train, cfg.height);
        report.oracle_train_accuracy = oracle::accuracy(reference, train);
        report.oracle_test_accuracy = test.n() ? oracle::accuracy(reference, test) : 0.0;
        if (!withhold) report.model = std::move(model);
    }
    return report;
}

}  // namespace

RunReport run_train(const RunConfig& cfg) {
    oracle::PlainDataset full =
        load_csv(cfg.dataset_path, cfg.label_col, cfg.scale_digits, cfg.ring_k);
    SplitDataset split = split_dataset(full, cfg.split_ratio, cfg.seed);
    return run_training_session(cfg, split.train, split.test, full.n());
}

RunReport run_synthetic(const RunConfig& cfg, size_t n, size_t m, int v) {
    oracle::PlainDataset ds = synthetic_dataset(n, m, v, cfg.seed);
    oracle::PlainDataset empty;
    empty.v = ds.v;
    empty.scale_digits = ds.scale_digits;
    empty.attrs.assign(ds.m(), {});
    return run_training_session(cfg, ds, empty, ds.n());
}

}  // namespace trefoil
