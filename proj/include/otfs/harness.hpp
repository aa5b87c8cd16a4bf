#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/chanest.hpp"
#include "otfs/grid.hpp"
#include "otfs/window.hpp"

namespace otfs {

enum class WindowSide { Tx, Rx };
enum class SimPath { DD, TF };

/// A non-rectangular Doppler taper on one side, rectangular on the other.
struct WindowSetup {
    WindowKind kind = WindowKind::Rectangular;
    WindowSide side = WindowSide::Tx;
    double sl_db = -40.0;

    std::string label() const;
    std::pair<SeparableWindow, SeparableWindow> build(const GridDims& dims) const;

    static WindowSetup parse(const std::string& text, double default_sl_db);
};

SeparableWindow make_window(WindowKind kind, const GridDims& dims, double sl_db);

struct SimConfig {
    GridDims dims{20, 30, 5e3};
    double carrier_frequency_hz = 3e9;  // metadata only
    ChannelGenConfig channel;
    int k_p = -1;  // negative: centred at N/2
    int l_p = -1;  // negative: centred at M/2
    std::vector<int> k_hat_list{0, 1};
    std::vector<double> snr_db_list{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    std::vector<double> pilot_dbw_list{10, 30};
    std::vector<WindowSetup> windows{WindowSetup{}};
    int frames = 2000;
    std::uint64_t master_seed = 1;
    SimPath sim_path = SimPath::DD;
    int qam_order = 4;

    PilotConfig pilot(int k_hat, double pilot_dbw) const;
    void validate() const;
};

/// Parses flat "key = value" text; '#' starts a comment; lists are
/// comma-separated. Unknown keys and malformed values throw.
SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);

struct SweepRow {
    double snr_db;
    double pilot_dbw;
    std::string window_kind;
    int k_hat;
    double empirical_mse_mean;
    double empirical_mse_stderr;
    double analytic_floor;
    int frames;
};

struct FrameRecord {
    int frame_idx;
    double snr_db;
    std::string window_kind;
    int k_hat;
    double pilot_dbw;
    double empirical_mse;
    double analytic_floor;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<FrameRecord> frame_records;

    const SweepRow& find(const std::string& window, int k_hat, double pilot_dbw, double snr_db) const;
};

/**
 * Monte Carlo MSE sweep over every (window, k_hat, pilot power, SNR) cell.
 *
 * Frame f draws its channel, data and TF noise from resolve_seed(seed, f);
 * every cell sees the same frame f. Per-frame MSEs are summed in frame order,
 * so the result does not depend on the worker count.
 */
SweepResult run_mse_sweep(const SimConfig& cfg, unsigned workers = 1, bool keep_frames = false);

/// Header snr_db,pilot_dbw,window_kind,k_hat,empirical_mse_mean,empirical_mse_stderr,analytic_floor,frames.
std::string sweep_csv(const SweepResult& result);

/// Header frame_idx,snr_db,window_kind,k_hat,pilot_dbw,empirical_mse,analytic_floor.
std::string frame_records_csv(const SweepResult& result);

/// |G_N| of the window (other side rectangular) on a lattice; "ideal" gives the brick-wall reference.
std::string run_window_response_dump(const std::string& kind, const GridDims& dims, double sl_db,
                                     double resolution, double shift = 0.0);

/// Error-floor table over windows x k_hat (all admissible values) x pilot powers.
std::string run_floor_table(const SimConfig& cfg);

std::string format_number(double v);

}  // namespace otfs
