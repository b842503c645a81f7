#pragma once

#include "asgem/units.hpp"

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace asgem {

using cplx = std::complex<double>;

enum class ControlMode {
    gradient, ///< Ω_c(z) = ζ Γ z / L, sign reversed at t_rev
    constant, ///< Ω_c = control_rabi everywhere, sign reversed at t_rev
};

/// Three-level Λ medium driven by a weak Gaussian probe. Rates are in rad/s;
/// times are in units of the excited-state lifetime τ = 1/Γ.
struct SimulationConfig {
    double optical_depth = 2500.0;    ///< ξ
    double gradient_strength = 1250.0; ///< ζ
    double linewidth = kTwoPi * 5e6;   ///< Γ, anchors the time unit
    double dephasing = 0.0;            ///< γ, ground-state decoherence
    double probe_detuning = kTwoPi * 200e6;
    double control_detuning = kTwoPi * 50e6;
    double control_rabi = kTwoPi * 500e6; ///< used only in ControlMode::constant
    ControlMode control_mode = ControlMode::gradient;
    bool reverse = true;
    double probe_amplitude = kTwoPi * 5e3; ///< Ω_p0
    double pulse_center = 0.048;           ///< t0
    double pulse_width = 0.005;            ///< κ
    double reversal_time = 0.16;           ///< t_rev
    double duration = 0.5;                 ///< T
    int nz = 512;
    int nt = 5000; ///< output samples are nt + 1 points over [0, T]
    /// 0 keeps only the boundary traces; k > 0 keeps every k-th output
    /// time row of the full space-time grid.
    int grid_stride = 0;
};

/// Throws ConfigError on a broken invariant; returns warnings (weak-probe
/// regime violations).
std::vector<std::string> validate(const SimulationConfig& config);

/// Ω_c / Γ at time t (τ) and position z (fraction of L). Positive slope
/// before t_rev, negated from t_rev on.
cplx control_profile(double zeta, double t, double z, double t_rev);

struct FieldRecord {
    std::vector<double> time; ///< τ, nt + 1 samples
    std::vector<cplx> input;  ///< Ω_p(t, 0), rad/s
    std::vector<cplx> output; ///< Ω_p(t, L), rad/s

    // Full grid, present when grid_stride > 0. Row-major [row][z].
    std::vector<double> grid_time;
    std::size_t nz = 0;
    std::vector<cplx> probe; ///< rad/s
    std::vector<cplx> rho31;
    std::vector<cplx> rho21;

    double dt = 0.0;       ///< output sample spacing, τ
    double dz = 0.0;       ///< node spacing, fraction of L
    int substeps = 1;      ///< integrator steps per output sample
    double max_coherence = 0.0;
    std::vector<std::string> warnings;
};

/// Integrates the linearised three-level Maxwell-Bloch system in the
/// retarded frame. Throws IntegrationError when the step controller
/// cannot keep the solution bounded.
FieldRecord simulate(const SimulationConfig& config);

struct EchoMetrics {
    double efficiency = 0.0;          ///< ∫_{t_rev}^T |Ω_out|² / ∫ |Ω_in|²
    double transmitted_fraction = 0.0; ///< ∫_0^T |Ω_out|² / ∫ |Ω_in|²
    std::optional<double> echo_center; ///< energy centroid after t_rev, τ
    std::optional<double> echo_fwhm;   ///< τ
    std::optional<double> input_fwhm;  ///< τ
    bool truncated = false;
};

/// With `strict`, throws TruncationError when |Ω_out(T)|² exceeds 1e-3 of
/// the echo peak.
EchoMetrics echo_metrics(const FieldRecord& record, double t_rev, bool strict = true);

/// `t_tau,re_in,im_in,abs2_in,re_out,im_out,abs2_out`
void write_traces_csv(const FieldRecord& record, const std::filesystem::path& path);

/// 64-byte header (magic "ASGEMGRD", u64 rows, u64 nz, f64 dt, f64 dz,
/// zero padding) followed by Ω_p as row-major complex64 pairs, little endian.
void write_grid_dump(const FieldRecord& record, const std::filesystem::path& path);

struct GridDump {
    std::uint64_t rows = 0;
    std::uint64_t nz = 0;
    double dt = 0.0;
    double dz = 0.0;
    std::vector<std::complex<float>> probe;
};
GridDump read_grid_dump(const std::filesystem::path& path);

} // namespace asgem
