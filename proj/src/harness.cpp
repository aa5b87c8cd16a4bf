#include "otfs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "otfs/link.hpp"
#include "otfs/random.hpp"

namespace otfs {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

SeparableWindow make_window(WindowKind kind, const GridDims& dims, double sl_db) {
    switch (kind) {
        case WindowKind::Rectangular: return rectangular_window(dims);
        case WindowKind::Sine: return sine_window(dims);
        case WindowKind::DolphChebyshev: return dc_window(dims, sl_db);
        case WindowKind::Custom: break;
    }
    throw std::invalid_argument("custom windows cannot be built by name");
}

std::string WindowSetup::label() const {
    if (kind == WindowKind::Rectangular) return "rect";
    return to_string(kind) + (side == WindowSide::Tx ? "-tx" : "-rx");
}

std::pair<SeparableWindow, SeparableWindow> WindowSetup::build(const GridDims& dims) const {
    SeparableWindow shaped = make_window(kind, dims, sl_db);
    SeparableWindow rect = rectangular_window(dims);
    if (side == WindowSide::Tx) return {std::move(shaped), std::move(rect)};
    return {std::move(rect), std::move(shaped)};
}

WindowSetup WindowSetup::parse(const std::string& text, double default_sl_db) {
    WindowSetup w;
    w.sl_db = default_sl_db;
    std::string name = text;
    if (name.size() > 3 && (name.ends_with("-tx") || name.ends_with("-rx"))) {
        w.side = name.ends_with("-tx") ? WindowSide::Tx : WindowSide::Rx;
        name.resize(name.size() - 3);
    }
    w.kind = window_kind_from_string(name);
    return w;
}

PilotConfig SimConfig::pilot(int k_hat, double pilot_dbw) const {
    PilotConfig p = PilotConfig::centred(dims, channel.k_max, channel.l_max, k_hat, dbw_to_linear(pilot_dbw));
    if (k_p >= 0) p.k_p = k_p;
    if (l_p >= 0) p.l_p = l_p;
    return p;
}

void SimConfig::validate() const {
    dims.validate();
    channel.validate(dims);
    if (frames < 1) throw std::invalid_argument("frames must be at least 1");
    if (snr_db_list.empty()) throw std::invalid_argument("SNR list is empty");
    if (pilot_dbw_list.empty()) throw std::invalid_argument("pilot power list is empty");
    if (k_hat_list.empty()) throw std::invalid_argument("k_hat list is empty");
    if (windows.empty()) throw std::invalid_argument("window list is empty");
    for (int kh : k_hat_list) {
        for (double dbw : pilot_dbw_list) pilot(kh, dbw).validate(dims);
    }
    for (const auto& w : windows) w.build(dims);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number for '" + key + "': " + v);
    }
    if (used != v.size()) throw std::invalid_argument("bad number for '" + key + "': " + v);
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long i;
    try {
        i = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer for '" + key + "': " + v);
    }
    if (used != v.size()) throw std::invalid_argument("bad integer for '" + key + "': " + v);
    return i;
}

std::size_t to_size(const std::string& key, const std::string& v) {
    const long long i = to_int(key, v);
    if (i < 1) throw std::invalid_argument("'" + key + "' must be positive");
    return static_cast<std::size_t>(i);
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::vector<std::string> window_names;
    bool windows_given = false;
    double sl_db = -40.0;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "n_doppler") cfg.dims.n_doppler = to_size(key, val);
        else if (key == "m_delay") cfg.dims.m_delay = to_size(key, val);
        else if (key == "subcarrier_spacing_hz") cfg.dims.subcarrier_spacing_hz = to_double(key, val);
        else if (key == "carrier_frequency_hz") cfg.carrier_frequency_hz = to_double(key, val);
        else if (key == "num_paths") cfg.channel.num_paths = static_cast<int>(to_int(key, val));
        else if (key == "k_max") cfg.channel.k_max = static_cast<int>(to_int(key, val));
        else if (key == "l_max") cfg.channel.l_max = static_cast<int>(to_int(key, val));
        else if (key == "pdp_decay") cfg.channel.pdp_decay = to_double(key, val);
        else if (key == "k_p") cfg.k_p = static_cast<int>(to_int(key, val));
        else if (key == "l_p") cfg.l_p = static_cast<int>(to_int(key, val));
        else if (key == "k_hat") {
            cfg.k_hat_list.clear();
            for (const auto& s : split_list(val)) cfg.k_hat_list.push_back(static_cast<int>(to_int(key, s)));
        } else if (key == "snr_db") {
            cfg.snr_db_list.clear();
            for (const auto& s : split_list(val)) cfg.snr_db_list.push_back(to_double(key, s));
        } else if (key == "pilot_dbw") {
            cfg.pilot_dbw_list.clear();
            for (const auto& s : split_list(val)) cfg.pilot_dbw_list.push_back(to_double(key, s));
        } else if (key == "window") {
            window_names = split_list(val);
            windows_given = true;
        } else if (key == "sl_db") sl_db = to_double(key, val);
        else if (key == "frames") cfg.frames = static_cast<int>(to_int(key, val));
        else if (key == "seed") cfg.master_seed = static_cast<std::uint64_t>(to_int(key, val));
        else if (key == "sim_path") {
            if (val == "dd") cfg.sim_path = SimPath::DD;
            else if (val == "tf") cfg.sim_path = SimPath::TF;
            else throw std::invalid_argument("sim_path must be dd or tf");
        } else if (key == "qam_order") cfg.qam_order = static_cast<int>(to_int(key, val));
        else throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (windows_given) {
        cfg.windows.clear();
        for (const auto& name : window_names) cfg.windows.push_back(WindowSetup::parse(name, sl_db));
    } else {
        for (auto& w : cfg.windows) w.sl_db = sl_db;
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

const SweepRow& SweepResult::find(const std::string& window, int k_hat, double pilot_dbw,
                                  double snr_db) const {
    for (const auto& r : rows) {
        if (r.window_kind == window && r.k_hat == k_hat && r.pilot_dbw == pilot_dbw && r.snr_db == snr_db) {
            return r;
        }
    }
    throw std::out_of_range("no sweep row for " + window);
}

SweepResult run_mse_sweep(const SimConfig& cfg, unsigned workers, bool keep_frames) {
    cfg.validate();
    const GridDims& dims = cfg.dims;

    struct Cell {
        std::size_t window;
        int k_hat;
        double pilot_dbw;
        double snr_db;
        double floor;
    };
    std::vector<std::pair<SeparableWindow, SeparableWindow>> built;
    std::vector<double> sidelobe;
    for (const auto& w : cfg.windows) {
        built.push_back(w.build(dims));
        sidelobe.push_back(effective_sidelobe_level(built.back().first, built.back().second));
    }
    std::vector<Cell> cells;
    for (std::size_t wi = 0; wi < cfg.windows.size(); ++wi) {
        for (int kh : cfg.k_hat_list) {
            for (double dbw : cfg.pilot_dbw_list) {
                const double floor = mse_floor(cfg.pilot(kh, dbw), dims, sidelobe[wi]);
                for (double snr : cfg.snr_db_list) cells.push_back({wi, kh, dbw, snr, floor});
            }
        }
    }

    const auto frames = static_cast<std::size_t>(cfg.frames);
    std::vector<double> mse(frames * cells.size());

    auto run_frame = [&](std::size_t f) {
        Rng rng = resolve_seed(cfg.master_seed, f);
        const DDChannel ch = gen_channel(cfg.channel, dims, rng);
        const DDGrid data = qam_grid(dims, cfg.qam_order, rng);
        const Rng noise_state = rng;

        for (std::size_t wi = 0; wi < built.size(); ++wi) {
            const auto& [tx, rx] = built[wi];
            const EffectiveChannel heff = effective_channel(ch, tx, rx);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const Cell& cell = cells[c];
                if (cell.window != wi) continue;
                const PilotConfig pilot = cfg.pilot(cell.k_hat, cell.pilot_dbw);
                const DDGrid x = embed_pilot(data, pilot);
                FrameConfig fc{dims, tx, rx, std::pow(10.0, -cell.snr_db / 10.0)};
                Rng noise = noise_state;
                const RxFrame frame = cfg.sim_path == SimPath::DD ? simulate_frame_dd(x, heff, fc, noise)
                                                                  : simulate_frame_tf(x, ch, fc, noise);
                const EstimationReport report = estimate(frame.dd_received, pilot, fc.noise_variance);
                mse[f * cells.size() + c] = empirical_mse(heff, report, pilot);
            }
        }
    };

    const unsigned n_workers = std::max(1u, workers);
    if (n_workers == 1) {
        for (std::size_t f = 0; f < frames; ++f) run_frame(f);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (unsigned t = 0; t < n_workers; ++t) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t f = next++; f < frames; f = next++) run_frame(f);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    SweepResult result;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        double sum = 0.0;
        for (std::size_t f = 0; f < frames; ++f) sum += mse[f * cells.size() + c];
        const double mean = sum / static_cast<double>(frames);
        double sq = 0.0;
        for (std::size_t f = 0; f < frames; ++f) {
            const double d = mse[f * cells.size() + c] - mean;
            sq += d * d;
        }
        const double stderr_ =
            frames > 1 ? std::sqrt(sq / static_cast<double>(frames - 1) / static_cast<double>(frames)) : 0.0;
        const std::string label = cfg.windows[cell.window].label();
        result.rows.push_back({cell.snr_db, cell.pilot_dbw, label, cell.k_hat, mean, stderr_, cell.floor,
                               cfg.frames});
        if (keep_frames) {
            for (std::size_t f = 0; f < frames; ++f) {
                result.frame_records.push_back({static_cast<int>(f), cell.snr_db, label, cell.k_hat,
                                                cell.pilot_dbw, mse[f * cells.size() + c], cell.floor});
            }
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out =
        "snr_db,pilot_dbw,window_kind,k_hat,empirical_mse_mean,empirical_mse_stderr,analytic_floor,frames\n";
    for (const auto& r : result.rows) {
        out += format_number(r.snr_db) + ',' + format_number(r.pilot_dbw) + ',' + r.window_kind + ',' +
               std::to_string(r.k_hat) + ',' + format_number(r.empirical_mse_mean) + ',' +
               format_number(r.empirical_mse_stderr) + ',' + format_number(r.analytic_floor) + ',' +
               std::to_string(r.frames) + '\n';
    }
    return out;
}

std::string frame_records_csv(const SweepResult& result) {
    std::string out = "frame_idx,snr_db,window_kind,k_hat,pilot_dbw,empirical_mse,analytic_floor\n";
    for (const auto& r : result.frame_records) {
        out += std::to_string(r.frame_idx) + ',' + format_number(r.snr_db) + ',' + r.window_kind + ',' +
               std::to_string(r.k_hat) + ',' + format_number(r.pilot_dbw) + ',' +
               format_number(r.empirical_mse) + ',' + format_number(r.analytic_floor) + '\n';
    }
    return out;
}

std::string run_window_response_dump(const std::string& kind, const GridDims& dims, double sl_db,
                                     double resolution, double shift) {
    if (kind == "ideal") return response_csv(sample_ideal_response(dims.n_doppler, resolution, shift));
    const SeparableWindow shaped = make_window(window_kind_from_string(kind), dims, sl_db);
    return response_csv(sample_doppler_response(shaped, rectangular_window(dims), resolution, shift));
}

std::string run_floor_table(const SimConfig& cfg) {
    cfg.dims.validate();
    std::string out = "window_kind,sidelobe_level,k_hat,pilot_dbw,overhead_symbols,mse_floor,regime_boundary\n";
    for (const auto& w : cfg.windows) {
        const auto [tx, rx] = w.build(cfg.dims);
        const double sl = effective_sidelobe_level(tx, rx);
        for (double dbw : cfg.pilot_dbw_list) {
            const KhatTrend trend =
                khat_mse_trend(cfg.dims, cfg.channel.k_max, cfg.channel.l_max, dbw_to_linear(dbw), sl);
            for (const auto& row : trend.rows) {
                out += w.label() + ',' + format_number(sl) + ',' + std::to_string(row.k_hat) + ',' +
                       format_number(dbw) + ',' + std::to_string(row.overhead_symbols) + ',' +
                       format_number(row.floor) + ',' + format_number(trend.regime_boundary) + '\n';
            }
        }
    }
    return out;
}

}  // namespace otfs
