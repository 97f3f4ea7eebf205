// trefoil command line: secure three-party decision-tree training over the
// shared-library C interface.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "trefoil/trefoil.h"

namespace {

struct ConfigDeleter {
    void operator()(trefoil_config* c) const { trefoil_config_free(c); }
};
struct ReportDeleter {
    void operator()(trefoil_report* r) const { trefoil_report_free(r); }
};
struct ModelDeleter {
    void operator()(trefoil_model* m) const { trefoil_model_free(m); }
};

int fail_with(trefoil_status st, const std::string& where) {
    std::fprintf(stderr, "error (%s): %s\n", where.c_str(), trefoil_last_error());
    return (int)st;
}

struct CommonOpts {
    std::string dataset;
    int label_col = -1;
    int height = 4;
    int ring_k = 32;
    int ring_l = 128;
    int frac_bits = 0;
    int scale_digits = 4;
    long long seed = 1;
    std::string mode = "inproc";
    int party_id = 0;
    std::string addresses;
    std::string open_to = "0";
    int split_permille = 667;

    void attach(CLI::App* cmd, bool need_dataset) {
        auto* d = cmd->add_option("--dataset", dataset, "CSV file, or synth:n,m,v");
        if (need_dataset) d->required();
        cmd->add_option("--label-col", label_col, "label column (negative from the right)");
        cmd->add_option("--height", height, "tree height");
        cmd->add_option("--ring-k", ring_k, "small ring width in bits");
        cmd->add_option("--ring-l", ring_l, "large ring width in bits");
        cmd->add_option("--frac-bits", frac_bits, "fixed-point fraction bits (0 = automatic)");
        cmd->add_option("--scale-digits", scale_digits, "decimal digits kept at ingestion");
        cmd->add_option("--seed", seed, "session seed (0 = fresh entropy)");
        cmd->add_option("--mode", mode, "inproc or tcp");
        cmd->add_option("--party-id", party_id, "this process's party (tcp mode)");
        cmd->add_option("--addresses", addresses, "three host:port entries, comma separated");
        cmd->add_option("--open-to", open_to, "open the model to: 0|1|2|all|none");
        cmd->add_option("--split-permille", split_permille,
                        "training share of the data in permille");
    }

    std::unique_ptr<trefoil_config, ConfigDeleter> build() const {
        std::unique_ptr<trefoil_config, ConfigDeleter> cfg(trefoil_config_new());
        trefoil_config_set_str(cfg.get(), "dataset", dataset.c_str());
        trefoil_config_set_int(cfg.get(), "label_col", label_col);
        trefoil_config_set_int(cfg.get(), "height", height);
        trefoil_config_set_int(cfg.get(), "ring_k", ring_k);
        trefoil_config_set_int(cfg.get(), "ring_l", ring_l);
        trefoil_config_set_int(cfg.get(), "frac_bits", frac_bits);
        trefoil_config_set_int(cfg.get(), "scale_digits", scale_digits);
        trefoil_config_set_int(cfg.get(), "seed", seed);
        trefoil_config_set_str(cfg.get(), "mode", mode.c_str());
        trefoil_config_set_int(cfg.get(), "party_id", party_id);
        if (!addresses.empty()) trefoil_config_set_str(cfg.get(), "addresses", addresses.c_str());
        trefoil_config_set_str(cfg.get(), "open_to", open_to.c_str());
        trefoil_config_set_int(cfg.get(), "split_permille", split_permille);
        return cfg;
    }
};

int cmd_train(const CommonOpts& opts, const std::string& report_path,
              const std::string& model_path) {
    auto cfg = opts.build();
    trefoil_report* raw = nullptr;
    if (auto st = trefoil_train(cfg.get(), &raw); st != TREFOIL_OK)
        return fail_with(st, "train");
    std::unique_ptr<trefoil_report, ReportDeleter> report(raw);
    std::fputs(trefoil_report_text(report.get()), stdout);
    if (!report_path.empty()) {
        if (auto st = trefoil_report_write(report.get(), report_path.c_str()); st != TREFOIL_OK)
            return fail_with(st, "report");
    }
    if (!model_path.empty()) {
        const trefoil_model* model = trefoil_report_model(report.get());
        if (!model) {
            std::fprintf(stderr, "error (model): no opened model in this report\n");
            return (int)TREFOIL_ERR_INVALID;
        }
        std::ofstream out(model_path);
        if (!out.good()) {
            std::fprintf(stderr, "error (model): cannot write %s\n", model_path.c_str());
            return (int)TREFOIL_ERR_LOAD;
        }
        out << trefoil_model_text(model);
    }
    return 0;
}

int cmd_benchmark(CommonOpts opts, const std::vector<int>& heights,
                  const std::vector<long long>& sizes, int synth_m, int synth_v,
                  const std::string& report_path) {
    std::ostringstream table;
    table << "trefoil-benchmark v1\n";
    table << "n height online_bits max_online_rounds setup_bits gen_perms wall_ms\n";
    for (long long n : sizes) {
        for (int h : heights) {
            opts.height = h;
            opts.dataset = "synth:" + std::to_string(n) + "," + std::to_string(synth_m) + "," +
                           std::to_string(synth_v);
            auto cfg = opts.build();
            trefoil_report* raw = nullptr;
            if (auto st = trefoil_train(cfg.get(), &raw); st != TREFOIL_OK)
                return fail_with(st, "benchmark");
            std::unique_ptr<trefoil_report, ReportDeleter> report(raw);
            double bits = 0, rounds = 0, setup = 0, perms = 0, wall = 0;
            trefoil_report_metric(report.get(), "total_online_bits", &bits);
            trefoil_report_metric(report.get(), "max_online_rounds", &rounds);
            trefoil_report_metric(report.get(), "total_setup_bits", &setup);
            trefoil_report_metric(report.get(), "gen_perm_count", &perms);
            trefoil_report_metric(report.get(), "wall_ms", &wall);
            table << n << " " << h << " " << (long long)bits << " " << (long long)rounds << " "
                  << (long long)setup << " " << (long long)perms << " " << wall << "\n";
        }
    }
    std::fputs(table.str().c_str(), stdout);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out.good()) {
            std::fprintf(stderr, "error (benchmark): cannot write %s\n", report_path.c_str());
            return (int)TREFOIL_ERR_LOAD;
        }
        out << table.str();
    }
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& sample_csv) {
    std::ifstream in(model_path);
    if (!in.good()) {
        std::fprintf(stderr, "error (predict): cannot open %s\n", model_path.c_str());
        return (int)TREFOIL_ERR_LOAD;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    trefoil_model* raw = nullptr;
    if (auto st = trefoil_model_parse(buf.str().c_str(), &raw); st != TREFOIL_OK)
        return fail_with(st, "predict");
    std::unique_ptr<trefoil_model, ModelDeleter> model(raw);

    std::vector<double> attrs;
    std::stringstream ss(sample_csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) attrs.push_back(std::stod(cell));
    long long label = 0;
    if (auto st = trefoil_model_predict(model.get(), attrs.data(), attrs.size(), &label);
        st != TREFOIL_OK)
        return fail_with(st, "predict");
    std::printf("label: %lld\n", label);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-party secure decision-tree training"};
    app.require_subcommand(1);

    CommonOpts train_opts;
    std::string report_path, model_path;
    auto* train = app.add_subcommand("train", "train a tree and report meters and accuracy");
    train_opts.attach(train, true);
    train->add_option("--report-path", report_path, "also write the report to a file");
    train->add_option("--model-path", model_path, "write the opened model to a file");

    CommonOpts bench_opts;
    std::vector<int> heights{1, 2, 3, 4, 5};
    std::vector<long long> sizes{256};
    int synth_m = 4, synth_v = 2;
    std::string bench_report;
    auto* bench = app.add_subcommand("benchmark", "sweep heights and sizes on synthetic data");
    bench_opts.attach(bench, false);
    bench->add_option("--heights", heights, "tree heights to sweep");
    bench->add_option("--sizes", sizes, "dataset sizes to sweep");
    bench->add_option("--synth-m", synth_m, "synthetic attribute count");
    bench->add_option("--synth-v", synth_v, "synthetic label count");
    bench->add_option("--report-path", bench_report, "also write the table to a file");

    std::string pr_model, pr_sample;
    auto* predict = app.add_subcommand("predict", "predict one sample with an opened model");
    predict->add_option("--model", pr_model, "model file")->required();
    predict->add_option("--sample", pr_sample, "comma-separated attribute values")->required();

    std::string version;
    app.set_version_flag("--version", std::string(trefoil_version()));

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) return cmd_train(train_opts, report_path, model_path);
    if (bench->parsed())
        return cmd_benchmark(bench_opts, heights, sizes, synth_m, synth_v, bench_report);
    if (predict->parsed()) return cmd_predict(pr_model, pr_sample);
    return 0;
}
