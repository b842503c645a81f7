#include "cli.hpp"

#include "asgem/atomic_data.hpp"
#include "asgem/efficiency_map.hpp"
#include "asgem/error.hpp"
#include "asgem/maxwell_bloch.hpp"
#include "asgem/stark.hpp"
#include "asgem/stark_maps.hpp"
#include "asgem/units.hpp"
#include "asgem/wigner.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace asgem::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::atomic<bool> g_cancel{false};

extern "C" void on_interrupt(int) { g_cancel.store(true); }

double to_hz(double rad_s) { return rad_s / kTwoPi; }

std::string timestamp_utc()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const fs::path& dir, const std::string& command, const std::vector<std::string>& args,
                    const json& config, const std::vector<std::string>& outputs)
{
    json m;
    m["command"] = command;
    m["arguments"] = args;
    m["config"] = config;
    m["version"] = ASGEM_VERSION;
    m["timestamp"] = timestamp_utc();
    m["outputs"] = outputs;
    fs::create_directories(dir);
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << m.dump(2) << '\n';
}

json line_json(const AtomicLine& line)
{
    json j;
    j["species"] = line.species;
    j["line"] = line.label;
    j["nuclear_spin"] = line.nuclear_spin.str();
    j["ground_J"] = line.ground_J.str();
    j["excited_J"] = line.excited_J.str();
    j["reduced_dipole_C_m"] = line.reduced_dipole;
    j["linewidth_rad_s"] = line.linewidth;
    j["line_center_rad_s"] = line.line_center;
    for (const auto& l : line.ground_hyperfine)
        j["ground_offsets_rad_s"][l.F.str()] = l.offset;
    for (const auto& l : line.excited_hyperfine)
        j["excited_offsets_rad_s"][l.F.str()] = l.offset;
    return j;
}

json config_json(const SimulationConfig& c)
{
    return json{{"xi", c.optical_depth},
                {"zeta", c.gradient_strength},
                {"linewidth_rad_s", c.linewidth},
                {"gamma_rad_s", c.dephasing},
                {"probe_detuning_rad_s", c.probe_detuning},
                {"control_detuning_rad_s", c.control_detuning},
                {"control_rabi_rad_s", c.control_rabi},
                {"control_mode", c.control_mode == ControlMode::gradient ? "gradient" : "constant"},
                {"reverse", c.reverse},
                {"probe_amp_rad_s", c.probe_amplitude},
                {"t0_tau", c.pulse_center},
                {"kappa_tau", c.pulse_width},
                {"t_rev_tau", c.reversal_time},
                {"t_max_tau", c.duration},
                {"nz", c.nz},
                {"nt", c.nt},
                {"grid_stride", c.grid_stride}};
}

// Simulation parameters shared by `simulate` and `map efficiency`. Values
// are kept as strings so that config-file and flag values go through the
// same parser; flags override the file.
struct SimParam {
    const char* key;
    const char* flag;
    const char* help;
};

constexpr SimParam kSimParams[] = {
    {"xi", "--xi", "optical depth"},
    {"zeta", "--zeta", "gradient strength"},
    {"t_rev", "--t-rev", "gradient reversal time [tau]"},
    {"t_max", "--t-max", "window end [tau]"},
    {"t0", "--t0", "probe pulse center [tau]"},
    {"kappa", "--kappa", "probe pulse width [tau]"},
    {"nz", "--nz", "spatial nodes"},
    {"nt", "--nt", "output time steps"},
    {"probe_amp", "--probe-amp", "probe amplitude (e.g. 5kHz; bare numbers are rad/s)"},
    {"gamma", "--gamma", "ground-state decoherence rate"},
    {"linewidth", "--linewidth", "excited-state decay rate (time unit)"},
    {"probe_detuning", "--probe-detuning", "probe detuning"},
    {"control_detuning", "--control-detuning", "control detuning"},
    {"control_rabi", "--control-rabi", "control Rabi frequency for --control-mode constant"},
    {"control_mode", "--control-mode", "gradient | constant"},
    {"reverse", "--reverse", "reverse the control at t_rev (true | false)"},
    {"grid_stride", "--grid-stride", "keep every k-th time row of the full grid"},
};

bool parse_bool(const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ParseError("expected true or false, got '" + v + "'");
}

int parse_int(const std::string& v)
{
    const double d = parse_number(v);
    if (d != static_cast<double>(static_cast<int>(d)))
        throw ParseError("expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

void apply_sim_param(SimulationConfig& c, const std::string& key, const std::string& v)
{
    if (key == "xi")
        c.optical_depth = parse_number(v);
    else if (key == "zeta")
        c.gradient_strength = parse_number(v);
    else if (key == "t_rev")
        c.reversal_time = parse_number(v);
    else if (key == "t_max")
        c.duration = parse_number(v);
    else if (key == "t0")
        c.pulse_center = parse_number(v);
    else if (key == "kappa")
        c.pulse_width = parse_number(v);
    else if (key == "nz")
        c.nz = parse_int(v);
    else if (key == "nt")
        c.nt = parse_int(v);
    else if (key == "probe_amp")
        c.probe_amplitude = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "gamma")
        c.dephasing = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "linewidth")
        c.linewidth = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "probe_detuning")
        c.probe_detuning = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "control_detuning")
        c.control_detuning = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "control_rabi")
        c.control_rabi = parse_quantity(v, Quantity::angular_frequency);
    else if (key == "control_mode") {
        if (v == "gradient")
            c.control_mode = ControlMode::gradient;
        else if (v == "constant")
            c.control_mode = ControlMode::constant;
        else
            throw ParseError("control_mode must be gradient or constant");
    } else if (key == "reverse")
        c.reverse = parse_bool(v);
    else if (key == "grid_stride")
        c.grid_stride = parse_int(v);
    else
        throw ParseError("unknown simulation key '" + key + "'");
}

struct SimFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_file;

    void attach(CLI::App* app, bool with_xi_zeta)
    {
        for (const auto& p : kSimParams) {
            if (!with_xi_zeta && (std::string(p.key) == "xi" || std::string(p.key) == "zeta"))
                continue;
            options[p.key] = app->add_option(p.flag, values[p.key], p.help);
        }
        app->add_option("--config", config_file, "key = value unit file; flags override it");
    }

    // defaults < config file < flags
    SimulationConfig resolve() const
    {
        SimulationConfig c;
        if (!config_file.empty()) {
            for (const auto& [key, entry] : parse_key_value_file(config_file)) {
                try {
                    apply_sim_param(c, key, entry.value);
                } catch (const ParseError& e) {
                    throw ParseError(config_file, e.message(), entry.line);
                }
            }
        }
        for (const auto& p : kSimParams) {
            const auto it = options.find(p.key);
            if (it != options.end() && it->second->count() > 0)
                apply_sim_param(c, p.key, values.at(p.key));
        }
        return c;
    }
};

std::vector<AtomicLine> resolve_lines(const std::vector<std::string>& ids, const std::vector<std::string>& files)
{
    std::vector<AtomicLine> lines;
    for (const auto& id : ids) {
        const auto colon = id.find(':');
        if (colon == std::string::npos)
            throw ParseError("line must be given as species:line, got '" + id + "'");
        lines.push_back(load_line(id.substr(0, colon), id.substr(colon + 1)));
    }
    for (const auto& f : files)
        lines.push_back(load_line_file(f));
    if (lines.empty())
        lines.push_back(load_line("rb87", "D1"));
    return lines;
}

// "a:b" or a single value "a" (min == max).
std::pair<double, double> parse_range(const std::string& text, Quantity kind)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        const double v = parse_quantity(text, kind);
        return {v, v};
    }
    return {parse_quantity(text.substr(0, colon), kind), parse_quantity(text.substr(colon + 1), kind)};
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text)
{
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos)
        throw ParseError("grid must look like NxM, got '" + text + "'");
    const int n = parse_int(text.substr(0, x)), m = parse_int(text.substr(x + 1));
    if (n < 1 || m < 1)
        throw ParseError("grid dimensions must be positive");
    return {static_cast<std::size_t>(n), static_cast<std::size_t>(m)};
}

// ---------------------------------------------------------------------------

int cmd_wigner(const std::string& kind, const std::vector<std::string>& raw, std::ostream& out)
{
    if (raw.size() != 6)
        throw ParseError("wigner " + kind + " needs six arguments");
    std::vector<HalfInt> a;
    for (const auto& s : raw)
        a.push_back(HalfInt::parse(s));
    double v = 0.0;
    if (kind == "3j")
        v = wigner_3j(a[0], a[1], a[2], a[3], a[4], a[5]);
    else if (kind == "6j")
        v = wigner_6j(a[0], a[1], a[2], a[3], a[4], a[5]);
    else
        throw ParseError("symbol kind must be 3j or 6j");
    if (v == 0.0)
        v = 0.0; // no "-0"
    out << fmt::format("{:.15g}", v) << '\n';
    return ok;
}

struct StarkArgs {
    std::string wavelength = "1064nm";
    std::string intensity = "5e13";
    int polarization = 0;
    std::vector<std::string> line_ids;
    std::vector<std::string> line_files;
    bool counter_rotating = false;
    std::string out;
};

int cmd_stark(const StarkArgs& a, const std::vector<std::string>& argv, std::ostream& out)
{
    StarkBeam beam{parse_quantity(a.wavelength, Quantity::length), parse_quantity(a.intensity, Quantity::intensity),
                   a.polarization};
    validate(beam);
    const auto lines = resolve_lines(a.line_ids, a.line_files);
    StarkOptions opts;
    opts.counter_rotating = a.counter_rotating;

    const auto shift = ground_state_shift(beam, lines, opts);
    const auto scatter = scattering_rate(beam, lines, opts);
    const auto bw = memory_bandwidth(shift);

    out << fmt::format("Stark beam: lambda = {:.6g} nm, I = {:.6g} W/m^2, q = {}\n", beam.wavelength * 1e9,
                       beam.intensity, beam.polarization);
    out << fmt::format("detuning from {} center: {:.6g} THz\n", lines.front().label, to_hz(shift.detuning) / 1e12);
    out << fmt::format("{:>4} {:>5} {:>20} {:>20}\n", "F", "m_F", "shift [MHz]", "Gamma_sc [Hz]");
    for (std::size_t k = 0; k < shift.shifts.size(); ++k) {
        const auto& s = shift.shifts[k];
        out << fmt::format("{:>4} {:>5} {:>20.10g} {:>20.10g}\n", s.state.F.str(), s.state.m_F.str(),
                           to_hz(s.shift) / 1e6, to_hz(scatter.rates[k].rate));
    }
    out << fmt::format("clock shift d20-d10 = {:.6g} MHz\n", to_hz(bw.clock_shift) / 1e6);
    out << fmt::format("spread d1 = {:.6g} MHz, d2 = {:.6g} MHz\n", to_hz(bw.spread_lower) / 1e6,
                       to_hz(bw.spread_upper) / 1e6);
    out << fmt::format("bandwidth = {:.6g} GHz\n", to_hz(bw.bandwidth) / 1e9);
    out << fmt::format("max scattering rate = {:.6g} MHz\n", to_hz(scatter.max_rate) / 1e6);

    if (!a.out.empty()) {
        const fs::path path(a.out);
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        std::ofstream csv(path, std::ios::trunc);
        if (!csv)
            throw Error("cannot write '" + a.out + "'");
        csv << "F,m_F,shift_rad_s,scattering_rad_s\n";
        for (std::size_t k = 0; k < shift.shifts.size(); ++k) {
            csv << shift.shifts[k].state.F.str() << ',' << shift.shifts[k].state.m_F.str() << ','
                << format_double(shift.shifts[k].shift) << ',' << format_double(scatter.rates[k].rate) << '\n';
        }
        csv << "# bandwidth_rad_s=" << format_double(bw.bandwidth)
            << " max_scattering_rad_s=" << format_double(scatter.max_rate) << '\n';
        json cfg{{"wavelength_m", beam.wavelength},
                 {"intensity_W_m2", beam.intensity},
                 {"polarization", beam.polarization},
                 {"counter_rotating", opts.counter_rotating},
                 {"lines", json::array()}};
        for (const auto& l : lines)
            cfg["lines"].push_back(line_json(l));
        write_manifest(path.has_parent_path() ? path.parent_path() : fs::path("."), "stark", argv, cfg,
                       {path.filename().string()});
    }
    return ok;
}

struct MapArgs {
    std::string kind;
    std::string lambda = "800nm:1300nm";
    std::string intensity = "1e12:1e15";
    std::string xi = "100:4000";
    std::string zeta = "100:2500";
    std::string grid;
    std::string out;
    unsigned workers = 1;
    bool resume = false;
    bool force = false;
    bool restart = false;
    std::size_t checkpoint_every = 16;
    int polarization = 0;
    std::vector<std::string> line_ids;
    std::vector<std::string> line_files;
    std::vector<std::string> levels;
    SimFlags sim;
};

const char* const kOwnedFiles[] = {"values.csv",      "contours.csv",  "failures.csv", "manifest.json",
                                   "checkpoint.csv", "checkpoint.csv.failures"};

int cmd_map(MapArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    const fs::path dir(a.out);
    const fs::path checkpoint = dir / "checkpoint.csv";
    const bool exists_nonempty = fs::exists(dir) && !fs::is_empty(dir);
    if (exists_nonempty) {
        const bool resumable = a.resume && fs::exists(checkpoint);
        if (!resumable && !a.force) {
            err << "output directory '" << a.out << "' is not empty and holds no resumable sweep; use --force\n";
            return output_conflict;
        }
        if (!resumable) {
            for (const char* f : kOwnedFiles)
                fs::remove(dir / f);
        }
    }
    fs::create_directories(dir);

    SweepOptions sweep;
    sweep.workers = std::max(1u, a.workers);
    sweep.checkpoint = checkpoint;
    sweep.checkpoint_every = a.checkpoint_every;
    sweep.resume = a.resume;
    sweep.restart = a.restart;
    sweep.cancel = &g_cancel;

    ContourResult result;
    json cfg;
    std::string unit_note;
    double display_scale = 1.0;
    std::optional<std::string> anchor_line;

    if (a.kind == "stark-bw" || a.kind == "stark-scatter") {
        StarkMapSpec spec;
        const auto [l0, l1] = parse_range(a.lambda, Quantity::length);
        const auto [i0, i1] = parse_range(a.intensity, Quantity::intensity);
        const auto [nx, ny] = a.grid.empty() ? std::pair<std::size_t, std::size_t>{26, 31} : parse_grid(a.grid);
        spec.wavelength = {"lambda_m", l0, l1, nx, Spacing::linear};
        spec.intensity = {"intensity_W_m2", i0, i1, ny, Spacing::log};
        spec.polarization = a.polarization;
        spec.lines = resolve_lines(a.line_ids, a.line_files);
        for (const auto& lv : a.levels)
            spec.levels.push_back(parse_quantity(lv, Quantity::angular_frequency));

        const bool bw = a.kind == "stark-bw";
        result = bw ? bandwidth_map(spec, sweep) : scattering_map(spec, sweep);
        display_scale = bw ? 1.0 / (kTwoPi * 1e9) : 1.0 / (kTwoPi * 1e6);
        unit_note = bw ? "GHz" : "MHz";

        cfg = {{"kind", a.kind},
               {"lambda_m", {l0, l1, nx}},
               {"intensity_W_m2", {i0, i1, ny}},
               {"intensity_spacing", "log"},
               {"polarization", a.polarization},
               {"levels_rad_s", spec.levels},
               {"lines", json::array()}};
        for (const auto& l : spec.lines)
            cfg["lines"].push_back(line_json(l));

        constexpr double anchor_lambda = 1064e-9, anchor_intensity = 5e13;
        if (std::min(l0, l1) <= anchor_lambda && anchor_lambda <= std::max(l0, l1) &&
            std::min(i0, i1) <= anchor_intensity && anchor_intensity <= std::max(i0, i1)) {
            const StarkBeam beam{anchor_lambda, anchor_intensity, a.polarization};
            if (bw) {
                const double v = memory_bandwidth(ground_state_shift(beam, spec.lines)).bandwidth;
                anchor_line = fmt::format("anchor (1064 nm, 5e13 W/m^2): bandwidth = {:.6g} GHz (reference reading "
                                          "1 GHz)",
                                          to_hz(v) / 1e9);
            } else {
                const double v = scattering_rate(beam, spec.lines).max_rate;
                anchor_line = fmt::format("anchor (1064 nm, 5e13 W/m^2): max scattering = {:.6g} MHz (reference "
                                          "reading 1 MHz)",
                                          to_hz(v) / 1e6);
            }
        }
    } else if (a.kind == "efficiency") {
        EfficiencyMapSpec spec;
        spec.base = a.sim.resolve();
        const auto [x0, x1] = parse_range(a.xi, Quantity::dimensionless);
        const auto [z0, z1] = parse_range(a.zeta, Quantity::dimensionless);
        const auto [nx, ny] = a.grid.empty() ? std::pair<std::size_t, std::size_t>{20, 20} : parse_grid(a.grid);
        spec.optical_depth = {"xi", x0, x1, nx, Spacing::linear};
        spec.gradient = {"zeta", z0, z1, ny, Spacing::linear};
        if (!a.levels.empty()) {
            spec.levels.clear();
            for (const auto& lv : a.levels)
                spec.levels.push_back(parse_number(lv));
        }
        result = efficiency_map(spec, sweep);
        cfg = {{"kind", a.kind},
               {"xi", {x0, x1, nx}},
               {"zeta", {z0, z1, ny}},
               {"levels", spec.levels},
               {"simulation", config_json(spec.base)}};

        if (std::min(x0, x1) <= 2500.0 && 2500.0 <= std::max(x0, x1) && std::min(z0, z1) <= 1250.0 &&
            1250.0 <= std::max(z0, z1)) {
            anchor_line = fmt::format("anchor (xi=2500, zeta=1250): R = {:.4f} (reference reading ~0.75)",
                                      efficiency_at(spec.base, 2500.0, 1250.0));
        }
        std::size_t above = 0;
        for (std::size_t k = 0; k < result.values.size(); ++k)
            above += result.status[k] == CellStatus::done && result.values[k] > 0.9;
        out << "cells with R > 0.9: " << above << '\n';
    } else {
        throw ParseError("map kind must be stark-bw, stark-scatter or efficiency");
    }

    if (!result.complete) {
        err << "sweep interrupted; " << result.count(CellStatus::pending)
            << " cells pending. Re-run with --resume to continue.\n";
        return interrupted;
    }

    write_values_csv(result, dir / "values.csv", false);
    write_contours_csv(result.contours, dir / "contours.csv");
    write_failures(result, dir / "failures.csv");
    write_manifest(dir, "map", argv, cfg, {"values.csv", "contours.csv", "failures.csv", "checkpoint.csv"});

    const auto lo = result.min_cell();
    const auto hi = result.max_cell();
    if (lo && hi) {
        const auto& g = result.grid;
        out << fmt::format("{} cells: {} done, {} masked, {} failed\n", g.size(), result.count(CellStatus::done),
                           result.count(CellStatus::masked), result.count(CellStatus::failed));
        out << fmt::format("min = {:.6g}{} at ({}={:.6g}, {}={:.6g})\n", lo->value * display_scale,
                           unit_note.empty() ? "" : " " + unit_note, g.x_name, g.x_values[lo->i], g.y_name,
                           g.y_values[lo->j]);
        out << fmt::format("max = {:.6g}{} at ({}={:.6g}, {}={:.6g})\n", hi->value * display_scale,
                           unit_note.empty() ? "" : " " + unit_note, g.x_name, g.x_values[hi->i], g.y_name,
                           g.y_values[hi->j]);
    } else {
        out << "no cell evaluated successfully\n";
    }
    for (const auto& c : result.contours) {
        std::size_t vertices = 0;
        for (const auto& p : c.polylines)
            vertices += p.size();
        out << fmt::format("contour {:.6g}{}: {} polylines, {} vertices\n", c.level * display_scale,
                           unit_note.empty() ? "" : " " + unit_note, c.polylines.size(), vertices);
    }
    if (anchor_line)
        out << *anchor_line << '\n';
    return ok;
}

struct SimulateArgs {
    SimFlags sim;
    std::string out;
    std::string grid_dump;
};

int cmd_simulate(SimulateArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = a.sim.resolve();
    if (!a.grid_dump.empty() && cfg.grid_stride == 0)
        cfg.grid_stride = std::max(1, cfg.nt / 500);
    const FieldRecord rec = simulate(cfg);
    for (const auto& w : rec.warnings)
        err << "warning: " << w << '\n';

    std::vector<std::string> outputs;
    fs::path manifest_dir;
    if (!a.out.empty()) {
        write_traces_csv(rec, a.out);
        const fs::path p(a.out);
        manifest_dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
        outputs.push_back(p.filename().string());
    }
    if (!a.grid_dump.empty()) {
        write_grid_dump(rec, a.grid_dump);
        const fs::path p(a.grid_dump);
        if (manifest_dir.empty())
            manifest_dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
        outputs.push_back(p.filename().string());
    }
    if (!outputs.empty())
        write_manifest(manifest_dir, "simulate", argv, config_json(cfg), outputs);

    EchoMetrics m;
    try {
        m = echo_metrics(rec, cfg.reversal_time, true);
    } catch (const TruncationError& e) {
        err << e.what() << " (--t-max)\n";
        return truncated;
    }
    out << fmt::format("R = {:.6g}\n", m.efficiency);
    if (m.echo_center) {
        out << fmt::format("echo center = {:.6g} tau\n", *m.echo_center);
        if (m.echo_fwhm)
            out << fmt::format("echo FWHM = {:.6g} tau\n", *m.echo_fwhm);
    } else {
        out << "echo: none\n";
    }
    if (m.input_fwhm)
        out << fmt::format("input FWHM = {:.6g} tau\n", *m.input_fwhm);
    out << fmt::format("transmitted fraction = {:.6g}\n", m.transmitted_fraction);
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ac Stark gradient echo memory calculator and Maxwell-Bloch simulator", "asgem"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ASGEM_VERSION);

    std::string wigner_kind;
    std::vector<std::string> wigner_args;
    auto* wigner = app.add_subcommand("wigner", "print a Wigner 3j or 6j symbol");
    wigner->add_option("kind", wigner_kind, "3j or 6j")->required();
    wigner->add_option("args", wigner_args, "six (half-)integers such as 3/2")->required();

    StarkArgs stark_args;
    auto* stark = app.add_subcommand("stark", "ground-state light shifts, bandwidth and scattering rate");
    stark->add_option("--wavelength", stark_args.wavelength, "Stark beam wavelength, e.g. 1064nm");
    stark->add_option("--intensity", stark_args.intensity, "Stark beam intensity in W/m^2");
    stark->add_option("--polarization", stark_args.polarization, "spherical component q")
        ->check(CLI::Range(-1, 1));
    stark->add_option("--line", stark_args.line_ids, "species:line from the registry (default rb87:D1)");
    stark->add_option("--line-file", stark_args.line_files, "atomic data file");
    stark->add_flag("--counter-rotating", stark_args.counter_rotating, "include the counter-rotating term");
    stark->add_option("--out", stark_args.out, "per-sublevel CSV");

    MapArgs map_args;
    auto* map = app.add_subcommand("map", "parameter sweep: stark-bw, stark-scatter or efficiency");
    map->add_option("kind", map_args.kind, "stark-bw | stark-scatter | efficiency")->required();
    map->add_option("--lambda", map_args.lambda, "wavelength range a:b");
    map->add_option("--intensity", map_args.intensity, "intensity range a:b (log spaced)");
    map->add_option("--xi", map_args.xi, "optical depth range a:b");
    map->add_option("--zeta", map_args.zeta, "gradient strength range a:b");
    map->add_option("--grid", map_args.grid, "NxM cells");
    map->add_option("--out", map_args.out, "output directory")->required();
    map->add_option("--workers", map_args.workers, "parallel workers");
    map->add_flag("--resume", map_args.resume, "continue an interrupted sweep");
    map->add_flag("--force", map_args.force, "overwrite an existing output directory");
    map->add_flag("--restart", map_args.restart, "discard a corrupted checkpoint");
    map->add_option("--checkpoint-every", map_args.checkpoint_every, "cells between checkpoints");
    map->add_option("--polarization", map_args.polarization, "Stark polarization q")->check(CLI::Range(-1, 1));
    map->add_option("--line", map_args.line_ids, "species:line");
    map->add_option("--line-file", map_args.line_files, "atomic data file");
    map->add_option("--levels", map_args.levels, "contour levels")->delimiter(',');
    // ξ and ζ are the sweep axes here, not scalar overrides.
    map_args.sim.attach(map, false);

    SimulateArgs sim_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "one storage and retrieval run");
    sim_args.sim.attach(simulate_cmd, true);
    simulate_cmd->add_option("--out", sim_args.out, "input/output trace CSV");
    simulate_cmd->add_option("--grid-dump", sim_args.grid_dump, "binary dump of the space-time probe field");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    std::vector<std::string> argv{"asgem"};
    argv.insert(argv.end(), args.begin(), args.end());

    g_cancel.store(false);
    auto previous = std::signal(SIGINT, on_interrupt);
    struct RestoreSignal {
        decltype(previous) handler;
        ~RestoreSignal() { std::signal(SIGINT, handler); }
    } restore{previous};

    try {
        if (*wigner)
            return cmd_wigner(wigner_kind, wigner_args, out);
        if (*stark)
            return cmd_stark(stark_args, argv, out);
        if (*map)
            return cmd_map(map_args, argv, out, err);
        if (*simulate_cmd)
            return cmd_simulate(sim_args, argv, out, err);
    } catch (const ResonanceError& e) {
        err << "error: " << e.what() << '\n';
        return physics;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return physics;
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << '\n';
        return physics;
    } catch (const TruncationError& e) {
        err << "error: " << e.what() << '\n';
        return truncated;
    } catch (const CheckpointError& e) {
        err << "error: " << e.what() << " (use --restart to discard it)\n";
        return output_conflict;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return usage;
}

} // namespace asgem::cli
