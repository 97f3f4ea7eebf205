#include "trefoil/trefoil.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "io/runner.hpp"

using namespace trefoil;

struct trefoil_config {
    RunConfig cfg;
};

struct trefoil_model {
    TreeModel model;
    std::string text;
};

struct trefoil_report {
    RunReport report;
    std::string text;
    std::unique_ptr<trefoil_model> model;
};

namespace {

thread_local std::string g_last_error = "no error";

trefoil_status status_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Config: return TREFOIL_ERR_CONFIG;
        case ErrorKind::Range: return TREFOIL_ERR_RANGE;
        case ErrorKind::Load: return TREFOIL_ERR_LOAD;
        case ErrorKind::Transport: return TREFOIL_ERR_TRANSPORT;
        case ErrorKind::Desync: return TREFOIL_ERR_DESYNC;
        case ErrorKind::Setup: return TREFOIL_ERR_SETUP;
        case ErrorKind::Integrity: return TREFOIL_ERR_INTEGRITY;
        case ErrorKind::Protocol: return TREFOIL_ERR_PROTOCOL;
        case ErrorKind::Invalid: return TREFOIL_ERR_INVALID;
    }
    return TREFOIL_ERR_INTERNAL;
}

template <class F>
trefoil_status guarded(F f) {
    try {
        f();
        return TREFOIL_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TREFOIL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return TREFOIL_ERR_INTERNAL;
    }
}

bool parse_synth(const std::string& path, size_t* n, size_t* m, int* v) {
    if (path.rfind("synth:", 0) != 0) return false;
    unsigned long long a = 0, b = 0, c = 0;
    if (sscanf(path.c_str() + 6, "%llu,%llu,%llu", &a, &b, &c) != 3 || a == 0 || b == 0 || c < 2)
        throw Error(ErrorKind::Invalid, "synthetic dataset spec must be synth:n,m,v");
    *n = (size_t)a;
    *m = (size_t)b;
    *v = (int)c;
    return true;
}

}  // namespace

extern "C" {

const char* trefoil_version(void) { return "trefoil 1.0.0"; }

const char* trefoil_last_error(void) { return g_last_error.c_str(); }

trefoil_config* trefoil_config_new(void) { return new trefoil_config(); }

void trefoil_config_free(trefoil_config* c) { delete c; }

trefoil_status trefoil_config_set_int(trefoil_config* c, const char* key, long long value) {
    if (!c || !key) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        std::string k = key;
        RunConfig& cfg = c->cfg;
        if (k == "label_col") cfg.label_col = (int)value;
        else if (k == "height") cfg.height = (int)value;
        else if (k == "ring_k") cfg.ring_k = (int)value;
        else if (k == "ring_l") cfg.ring_l = (int)value;
        else if (k == "frac_bits") cfg.frac_bits = (int)value;
        else if (k == "scale_digits") cfg.scale_digits = (int)value;
        else if (k == "seed") cfg.seed = (uint64_t)value;
        else if (k == "party_id") cfg.party_id = (int)value;
        else if (k == "split_permille") cfg.split_ratio = (double)value / 1000.0;
        else throw Error(ErrorKind::Invalid, "unknown integer option " + k);
    });
}

trefoil_status trefoil_config_set_str(trefoil_config* c, const char* key, const char* value) {
    if (!c || !key || !value) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        std::string k = key, val = value;
        RunConfig& cfg = c->cfg;
        if (k == "dataset") {
            cfg.dataset_path = val;
        } else if (k == "mode") {
            cfg.mode = val;
        } else if (k == "open_to") {
            cfg.open_to = val;
        } else if (k == "addresses") {
            size_t start = 0;
            for (int i = 0; i < 3; ++i) {
                size_t comma = val.find(',', start);
                std::string piece = comma == std::string::npos ? val.substr(start)
                                                               : val.substr(start, comma - start);
                require(!piece.empty(), ErrorKind::Config,
                        "addresses must list three host:port entries");
                cfg.addresses[(size_t)i] = piece;
                if (comma == std::string::npos && i < 2)
                    throw Error(ErrorKind::Config, "addresses must list three host:port entries");
                start = comma + 1;
            }
        } else {
            throw Error(ErrorKind::Invalid, "unknown string option " + k);
        }
    });
}

trefoil_status trefoil_train(const trefoil_config* c, trefoil_report** out) {
    if (!c || !out) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        auto rep = std::make_unique<trefoil_report>();
        size_t sn, sm;
        int sv;
        if (parse_synth(c->cfg.dataset_path, &sn, &sm, &sv)) {
            rep->report = run_synthetic(c->cfg, sn, sm, sv);
        } else {
            rep->report = run_train(c->cfg);
        }
        rep->text = rep->report.to_text();
        if (rep->report.model) {
            rep->model = std::make_unique<trefoil_model>();
            rep->model->model = *rep->report.model;
            rep->model->text = rep->model->model.to_text();
        }
        *out = rep.release();
    });
}

void trefoil_report_free(trefoil_report* r) { delete r; }

const char* trefoil_report_text(const trefoil_report* r) { return r ? r->text.c_str() : ""; }

trefoil_status trefoil_report_metric(const trefoil_report* r, const char* key, double* out) {
    if (!r || !key || !out) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        const RunReport& rep = r->report;
        std::string k = key;
        if (k == "n_train") *out = (double)rep.n_train;
        else if (k == "n_test") *out = (double)rep.n_test;
        else if (k == "m") *out = (double)rep.m;
        else if (k == "v") *out = (double)rep.v;
        else if (k == "height") *out = (double)rep.height;
        else if (k == "frac_bits") *out = (double)rep.frac_bits;
        else if (k == "wall_ms") *out = rep.wall_ms;
        else if (k == "total_online_bits") *out = (double)rep.total_online_bits();
        else if (k == "max_online_rounds") *out = (double)rep.max_online_rounds();
        else if (k == "has_eval") *out = rep.has_eval ? 1 : 0;
        else if (k == "party_count") *out = (double)rep.parties.size();
        else if (k == "train_accuracy") *out = rep.train_accuracy;
        else if (k == "test_accuracy") *out = rep.test_accuracy;
        else if (k == "oracle_train_accuracy") *out = rep.oracle_train_accuracy;
        else if (k == "oracle_test_accuracy") *out = rep.oracle_test_accuracy;
        else if (k == "total_setup_bits") {
            uint64_t bits = 0;
            for (const auto& p : rep.parties) bits += p.setup.payload_bits;
            *out = (double)bits;
        } else if (k == "gen_perm_count") {
            uint64_t cnt = 0;
            for (const auto& p : rep.parties) cnt = std::max(cnt, p.gen_perm_count);
            *out = (double)cnt;
        } else {
            throw Error(ErrorKind::Invalid, "unknown metric " + k);
        }
    });
}

trefoil_status trefoil_report_write(const trefoil_report* r, const char* path) {
    if (!r || !path) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        std::ofstream out(path);
        require(out.good(), ErrorKind::Load, std::string("cannot write report to ") + path);
        out << r->text;
    });
}

const trefoil_model* trefoil_report_model(const trefoil_report* r) {
    return r ? r->model.get() : nullptr;
}

trefoil_status trefoil_model_parse(const char* text, trefoil_model** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        auto m = std::make_unique<trefoil_model>();
        m->model = TreeModel::parse_text(text);
        m->text = m->model.to_text();
        *out = m.release();
    });
}

void trefoil_model_free(trefoil_model* m) { delete m; }

const char* trefoil_model_text(const trefoil_model* m) { return m ? m->text.c_str() : ""; }

trefoil_status trefoil_model_predict(const trefoil_model* m, const double* attrs, size_t count,
                                     long long* label_out) {
    if (!m || !attrs || !label_out) {
        g_last_error = "null argument";
        return TREFOIL_ERR_INVALID;
    }
    return guarded([&] {
        std::vector<double> sample(attrs, attrs + count);
        *label_out = (long long)m->model.predict(sample);
    });
}

}  // extern "C"
