// Command-line front end: MSE sweeps, window responses, error-floor tables and
// channel dumps. Results go to --out (CSV) or stdout.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "otfs/channel.hpp"
#include "otfs/harness.hpp"
#include "otfs/random.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> frames;
    std::vector<std::string> windows;
    std::string side = "tx";
    std::optional<double> sl_db;
    std::vector<int> k_hat;
    std::vector<double> pilot_dbw;
    std::vector<double> snr_db;
    std::string sim_path;
    std::string out;
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Key-value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--frames", o.frames, "Frames per sweep point")->check(CLI::PositiveNumber);
    cmd->add_option("--window", o.windows, "Window kind(s): rect, sine, dc (optionally -tx/-rx)")
        ->delimiter(',');
    cmd->add_option("--side", o.side, "Side for windows given without suffix")
        ->check(CLI::IsMember({"tx", "rx"}));
    cmd->add_option("--sl-db", o.sl_db, "Dolph-Chebyshev sidelobe level in dB (negative)");
    cmd->add_option("--khat", o.k_hat, "Extra Doppler guard k_hat (list)")->delimiter(',');
    cmd->add_option("--pilot-dbw", o.pilot_dbw, "Pilot power in dBW (list)")->delimiter(',');
    cmd->add_option("--snr-db", o.snr_db, "SNR points in dB (list)")->delimiter(',');
    cmd->add_option("--sim-path", o.sim_path, "Simulation path")->check(CLI::IsMember({"dd", "tf"}));
    cmd->add_option("--out", o.out, "Output CSV path (default stdout)");
    cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
}

otfs::SimConfig resolve(const CommonOptions& o) {
    otfs::SimConfig cfg = o.config_path.empty() ? otfs::SimConfig{} : otfs::load_config_file(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.frames) cfg.frames = *o.frames;
    if (o.sl_db) {
        for (auto& w : cfg.windows) w.sl_db = *o.sl_db;
    }
    if (!o.windows.empty()) {
        cfg.windows.clear();
        const double sl = o.sl_db.value_or(-40.0);
        for (const auto& name : o.windows) {
            const bool suffixed = name.ends_with("-tx") || name.ends_with("-rx");
            cfg.windows.push_back(otfs::WindowSetup::parse(suffixed ? name : name + "-" + o.side, sl));
        }
    }
    if (!o.k_hat.empty()) cfg.k_hat_list = o.k_hat;
    if (!o.pilot_dbw.empty()) cfg.pilot_dbw_list = o.pilot_dbw;
    if (!o.snr_db.empty()) cfg.snr_db_list = o.snr_db;
    if (o.sim_path == "dd") cfg.sim_path = otfs::SimPath::DD;
    if (o.sim_path == "tf") cfg.sim_path = otfs::SimPath::TF;
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS windowing and delay-Doppler channel estimation simulator"};
    app.require_subcommand(1);

    CommonOptions sweep_opts;
    std::string frames_out;
    auto* sweep = app.add_subcommand("mse-sweep", "Monte Carlo channel-estimation MSE sweep");
    add_common(sweep, sweep_opts);
    sweep->add_option("--frames-out", frames_out, "Per-frame estimation report CSV");

    CommonOptions resp_opts;
    double resolution = 0.01;
    double shift = 0.0;
    auto* resp = app.add_subcommand("window-response", "Doppler response |G_N| of a window");
    add_common(resp, resp_opts);
    resp->add_option("--resolution", resolution, "Offset lattice step in bins")->check(CLI::PositiveNumber);
    resp->add_option("--shift", shift, "Fractional Doppler shift applied to the response");

    CommonOptions floor_opts;
    auto* floor = app.add_subcommand("floor-table", "Analytic error floor versus k_hat");
    add_common(floor, floor_opts);

    CommonOptions dump_opts;
    auto* dump = app.add_subcommand("dump-channel", "Draw and dump channel realizations");
    add_common(dump, dump_opts);
    std::uint64_t frame_index = 0;
    dump->add_option("--frame-index", frame_index, "Frame whose channel realization is dumped");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            const auto cfg = resolve(sweep_opts);
            const auto result = otfs::run_mse_sweep(cfg, sweep_opts.workers, !frames_out.empty());
            emit(sweep_opts.out, otfs::sweep_csv(result));
            if (!frames_out.empty()) emit(frames_out, otfs::frame_records_csv(result));
        } else if (*resp) {
            auto cfg = resolve(resp_opts);
            std::string kind = "rect";
            if (!resp_opts.windows.empty()) {
                kind = resp_opts.windows.front();
                if (kind.ends_with("-tx") || kind.ends_with("-rx")) kind.resize(kind.size() - 3);
            }
            emit(resp_opts.out, otfs::run_window_response_dump(kind, cfg.dims, resp_opts.sl_db.value_or(-40.0),
                                                               resolution, shift));
        } else if (*floor) {
            const auto cfg = resolve(floor_opts);
            emit(floor_opts.out, otfs::run_floor_table(cfg));
        } else if (*dump) {
            const auto cfg = resolve(dump_opts);
            otfs::Rng rng = otfs::resolve_seed(cfg.master_seed, frame_index);
            const std::string text = otfs::channel_csv(otfs::gen_channel(cfg.channel, cfg.dims, rng));
            emit(dump_opts.out, text);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
