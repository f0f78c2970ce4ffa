// zsc: batch front-end for the zero-state classification pipelines.
//
//   zsc classify --preset radial3 --out out/
//   zsc norms    --config cfg.json
//   zsc verify   --preset radial3 --seed 7
//   zsc expand   --dim 4

#include <CLI11.hpp>

#include "zs/cli.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    int threads = -1;
    std::uint64_t seed = 0;
    bool has_seed = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--preset", o.preset_name,
                    "builtin preset (" + zs::cli::preset_list() + ")");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--threads", o.threads, "worker thread count (ZS_THREADS overrides)");
    cmd->add_option("--seed", o.seed, "sweep RNG seed")->each([&](const std::string&) {
        o.has_seed = true;
    });
}

zs::cli::RunConfig resolve(const CommonOpts& o) {
    zs::cli::RunConfig cfg;
    if (!o.config_path.empty())
        cfg = zs::cli::load_config(o.config_path);
    else if (!o.preset_name.empty())
        cfg = zs::cli::preset(o.preset_name);
    else
        cfg = zs::cli::preset("radial3");
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.threads >= 0) cfg.threads = o.threads;
    if (o.has_seed) cfg.seed = o.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-energy state construction and classification"};
    app.require_subcommand(1);

    CommonOpts oc, on, ov, oe;
    int expand_dim = 3;
    CLI::App* c_classify = app.add_subcommand("classify", "run the decompose/solve/classify pipeline");
    add_common(c_classify, oc);
    CLI::App* c_norms = app.add_subcommand("norms", "Lorentz quasinorm table");
    add_common(c_norms, on);
    CLI::App* c_verify = app.add_subcommand("verify", "inequality sweeps (kernel bound, expansion, tail operator)");
    add_common(c_verify, ov);
    CLI::App* c_expand = app.add_subcommand("expand", "multipole coefficient tables");
    add_common(c_expand, oe);
    c_expand->add_option("--dim", expand_dim, "spatial dimension");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_classify->parsed()) return zs::cli::run_classify(resolve(oc));
        if (c_norms->parsed()) return zs::cli::run_norms(resolve(on));
        if (c_verify->parsed()) return zs::cli::run_verify(resolve(ov));
        if (c_expand->parsed()) {
            zs::cli::RunConfig cfg = resolve(oe);
            if (c_expand->count("--dim")) cfg.dim = expand_dim;
            return zs::cli::run_expand(cfg);
        }
    } catch (const zs::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == zs::ErrorCode::config_parse ? zs::cli::exit_config_parse
                                                       : zs::cli::exit_generic;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return zs::cli::exit_generic;
    }
    return zs::cli::exit_generic;
}
