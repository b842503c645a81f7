#include "asgem/maxwell_bloch.hpp"

#include "asgem/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace asgem {

namespace {

constexpr cplx I{0.0, 1.0};

// Dimensionless model: time in 1/Γ, space in L, rates and fields in Γ.
struct Model {
    double xi;
    double zeta;
    double probe_detuning;
    double two_photon; // Δc - Δp
    double dephasing;
    double control;    // constant-mode Ω_c / Γ
    bool gradient;
    double amplitude;  // Ω_p0 / Γ
    double t0;
    double kappa;
    int nz;
    double dz;

    double input(double t) const
    {
        const double u = (t - t0) / kappa;
        return amplitude * std::exp(-u * u);
    }

    double control_at(std::size_t k, double sign) const
    {
        return sign * (gradient ? zeta * static_cast<double>(k) * dz : control);
    }
};

class Integrator {
public:
    explicit Integrator(const Model& m)
        : m_(m), n_(static_cast<std::size_t>(m.nz)), r31_(n_), r21_(n_), field_(n_), k31_(4, std::vector<cplx>(n_)),
          k21_(4, std::vector<cplx>(n_)), s31_(n_), s21_(n_)
    {
    }

    // Ω_p(z) from the boundary value and ∂z Ω_p = i (ξ/2) ρ31 (trapezoid rule).
    void fill_field(double t, const std::vector<cplx>& r31, std::vector<cplx>& field) const
    {
        const cplx coupling = I * (0.5 * m_.xi) * (0.5 * m_.dz);
        field[0] = m_.input(t);
        for (std::size_t k = 1; k < n_; ++k)
            field[k] = field[k - 1] + coupling * (r31[k - 1] + r31[k]);
    }

    void rhs(double t, double sign, const std::vector<cplx>& r31, const std::vector<cplx>& r21,
             std::vector<cplx>& d31, std::vector<cplx>& d21)
    {
        fill_field(t, r31, field_);
        const cplx decay31 = -(0.5 + I * m_.probe_detuning);
        const cplx decay21 = I * m_.two_photon - m_.dephasing;
        for (std::size_t k = 0; k < n_; ++k) {
            const double oc = m_.control_at(k, sign);
            d31[k] = decay31 * r31[k] + (0.5 * oc) * I * r21[k] + 0.5 * I * field_[k];
            // Ω_c is real here, so Ω_c* = Ω_c.
            d21[k] = decay21 * r21[k] + (0.5 * oc) * I * r31[k];
        }
    }

    // Classical RK4 over [t, t + h] with a fixed control sign.
    void step(double t, double h, double sign)
    {
        rhs(t, sign, r31_, r21_, k31_[0], k21_[0]);
        stage(0.5 * h, 0);
        rhs(t + 0.5 * h, sign, s31_, s21_, k31_[1], k21_[1]);
        stage(0.5 * h, 1);
        rhs(t + 0.5 * h, sign, s31_, s21_, k31_[2], k21_[2]);
        stage(h, 2);
        rhs(t + h, sign, s31_, s21_, k31_[3], k21_[3]);
        const double w = h / 6.0;
        for (std::size_t k = 0; k < n_; ++k) {
            r31_[k] += w * (k31_[0][k] + 2.0 * k31_[1][k] + 2.0 * k31_[2][k] + k31_[3][k]);
            r21_[k] += w * (k21_[0][k] + 2.0 * k21_[1][k] + 2.0 * k21_[2][k] + k21_[3][k]);
        }
    }

    const std::vector<cplx>& rho31() const { return r31_; }
    const std::vector<cplx>& rho21() const { return r21_; }

private:
    void stage(double h, int s)
    {
        for (std::size_t k = 0; k < n_; ++k) {
            s31_[k] = r31_[k] + h * k31_[s][k];
            s21_[k] = r21_[k] + h * k21_[s][k];
        }
    }

    const Model& m_;
    std::size_t n_;
    std::vector<cplx> r31_, r21_, field_;
    std::vector<std::vector<cplx>> k31_, k21_;
    std::vector<cplx> s31_, s21_;
};

struct Unbounded {
    double t;
    double z;
};

// Returns nullopt on success; the location of the first unbounded
// coherence otherwise.
std::optional<Unbounded> run(const SimulationConfig& cfg, const Model& m, int substeps, FieldRecord& rec)
{
    const double gamma = cfg.linewidth;
    const double dt_out = cfg.duration / cfg.nt;
    const double h = dt_out / substeps;
    const double t_rev = cfg.reversal_time;
    const double eps = 1e-12 * cfg.duration;
    const std::size_t nz = static_cast<std::size_t>(cfg.nz);

    Integrator integ(m);
    std::vector<cplx> field(nz);
    rec = FieldRecord{};
    rec.dt = dt_out;
    rec.dz = m.dz;
    rec.substeps = substeps;
    rec.nz = cfg.grid_stride > 0 ? nz : 0;

    auto sign_for = [&](double mid) { return (cfg.reverse && mid >= t_rev) ? -1.0 : 1.0; };

    for (int n = 0;; ++n) {
        const double t = n * dt_out;
        integ.fill_field(t, integ.rho31(), field);
        rec.time.push_back(t);
        rec.input.push_back(field.front() * gamma);
        rec.output.push_back(field.back() * gamma);

        double worst = 0.0;
        std::size_t worst_k = 0;
        for (std::size_t k = 0; k < nz; ++k) {
            const double a = std::max(std::abs(integ.rho31()[k]), std::abs(integ.rho21()[k]));
            if (!(a <= worst)) {
                worst = a;
                worst_k = k;
            }
        }
        rec.max_coherence = std::max(rec.max_coherence, worst);
        if (!std::isfinite(worst) || worst > 1.0)
            return Unbounded{t, static_cast<double>(worst_k) * m.dz};

        if (cfg.grid_stride > 0 && n % cfg.grid_stride == 0) {
            rec.grid_time.push_back(t);
            for (std::size_t k = 0; k < nz; ++k) {
                rec.probe.push_back(field[k] * gamma);
                rec.rho31.push_back(integ.rho31()[k]);
                rec.rho21.push_back(integ.rho21()[k]);
            }
        }
        if (n == cfg.nt)
            break;

        for (int s = 0; s < substeps; ++s) {
            const double ta = t + s * h;
            const double tb = (s + 1 == substeps) ? (n + 1) * dt_out : ta + h;
            if (cfg.reverse && ta + eps < t_rev && t_rev < tb - eps) {
                integ.step(ta, t_rev - ta, 1.0);
                integ.step(t_rev, tb - t_rev, -1.0);
            } else {
                integ.step(ta, tb - ta, sign_for(0.5 * (ta + tb)));
            }
        }
    }
    return std::nullopt;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y, double from)
{
    double sum = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k] <= from)
            continue;
        double ta = t[k - 1], ya = y[k - 1];
        if (ta < from) {
            const double f = (from - ta) / (t[k] - ta);
            ya = ya + f * (y[k] - ya);
            ta = from;
        }
        sum += 0.5 * (t[k] - ta) * (ya + y[k]);
    }
    return sum;
}

// Full width at half maximum of y around its maximum among samples with
// index >= first, linearly interpolated at the half-maximum crossings.
std::optional<double> fwhm(const std::vector<double>& t, const std::vector<double>& y, std::size_t first)
{
    if (first >= y.size())
        return std::nullopt;
    const auto peak_it = std::max_element(y.begin() + static_cast<std::ptrdiff_t>(first), y.end());
    const std::size_t p = static_cast<std::size_t>(peak_it - y.begin());
    const double half = 0.5 * y[p];
    if (!(half > 0.0))
        return std::nullopt;
    std::size_t l = p;
    while (l > first && y[l - 1] >= half)
        --l;
    std::size_t r = p;
    while (r + 1 < y.size() && y[r + 1] >= half)
        ++r;
    if (l == first || r + 1 == y.size())
        return std::nullopt;
    const double tl = t[l - 1] + (half - y[l - 1]) / (y[l] - y[l - 1]) * (t[l] - t[l - 1]);
    const double tr = t[r] + (y[r] - half) / (y[r] - y[r + 1]) * (t[r + 1] - t[r]);
    return tr - tl;
}

} // namespace

std::vector<std::string> validate(const SimulationConfig& c)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(std::isfinite(c.optical_depth) && c.optical_depth > 0.0, "optical depth must be positive");
    require(std::isfinite(c.gradient_strength), "gradient strength must be finite");
    require(std::isfinite(c.linewidth) && c.linewidth > 0.0, "linewidth must be positive");
    require(std::isfinite(c.dephasing) && c.dephasing >= 0.0, "dephasing must be non-negative");
    require(std::isfinite(c.probe_detuning) && std::isfinite(c.control_detuning), "detunings must be finite");
    require(std::isfinite(c.control_rabi), "control Rabi frequency must be finite");
    require(std::isfinite(c.probe_amplitude), "probe amplitude must be finite");
    require(std::isfinite(c.pulse_width) && c.pulse_width > 0.0, "pulse width must be positive");
    require(c.nz >= 2, "nz must be at least 2");
    require(c.nt >= 2, "nt must be at least 2");
    require(c.grid_stride >= 0, "grid stride must be non-negative");
    require(std::isfinite(c.duration) && 0.0 < c.pulse_center && c.pulse_center < c.reversal_time &&
                c.reversal_time < c.duration,
            "times must satisfy 0 < t0 < t_rev < T");

    std::vector<std::string> warnings;
    if (std::abs(c.probe_amplitude) > 0.1 * c.linewidth)
        warnings.push_back("probe amplitude is not small compared to the linewidth; the linearised "
                           "equations assume a weak probe");
    return warnings;
}

cplx control_profile(double zeta, double t, double z, double t_rev)
{
    const double value = zeta * z;
    return t < t_rev ? cplx(value, 0.0) : cplx(-value, 0.0);
}

FieldRecord simulate(const SimulationConfig& cfg)
{
    auto warnings = validate(cfg);
    const double gamma = cfg.linewidth;

    Model m{};
    m.xi = cfg.optical_depth;
    m.zeta = cfg.gradient_strength;
    m.probe_detuning = cfg.probe_detuning / gamma;
    m.two_photon = (cfg.control_detuning - cfg.probe_detuning) / gamma;
    m.dephasing = cfg.dephasing / gamma;
    m.control = cfg.control_rabi / gamma;
    m.gradient = cfg.control_mode == ControlMode::gradient;
    m.amplitude = cfg.probe_amplitude / gamma;
    m.t0 = cfg.pulse_center;
    m.kappa = cfg.pulse_width;
    m.nz = cfg.nz;
    m.dz = 1.0 / (cfg.nz - 1);

    // Halve the step until dt * (fastest rate) <= 0.5.
    const double control_max = m.gradient ? std::abs(m.zeta) : std::abs(m.control);
    const double fastest = std::max({0.5, std::abs(m.probe_detuning), control_max, std::abs(m.two_photon)});
    const double dt_out = cfg.duration / cfg.nt;
    int substeps = 1;
    while (dt_out / substeps * fastest > 0.5)
        substeps *= 2;

    FieldRecord rec;
    constexpr int kMaxRefinements = 3;
    for (int attempt = 0;; ++attempt) {
        const auto failure = run(cfg, m, substeps, rec);
        if (!failure)
            break;
        if (attempt == kMaxRefinements) {
            std::ostringstream msg;
            msg << "coherences left the linear regime at t=" << failure->t << " tau, z=" << failure->z
                << " L after " << kMaxRefinements << " step refinements";
            throw IntegrationError(msg.str(), failure->t, failure->z);
        }
        substeps *= 2;
    }
    rec.warnings = std::move(warnings);
    return rec;
}

EchoMetrics echo_metrics(const FieldRecord& record, double t_rev, bool strict)
{
    EchoMetrics out;
    const auto& t = record.time;
    std::vector<double> in2(t.size()), out2(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        in2[k] = std::norm(record.input[k]);
        out2[k] = std::norm(record.output[k]);
    }
    const double input_energy = trapezoid(t, in2, t.empty() ? 0.0 : t.front());
    if (!(input_energy > 0.0))
        return out;

    out.efficiency = trapezoid(t, out2, t_rev) / input_energy;
    out.transmitted_fraction = trapezoid(t, out2, t.front()) / input_energy;
    out.input_fwhm = fwhm(t, in2, 0);

    const std::size_t first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t_rev) - t.begin());
    if (first >= t.size())
        return out;
    const double peak = *std::max_element(out2.begin() + static_cast<std::ptrdiff_t>(first), out2.end());
    if (!(peak > 0.0))
        return out;

    std::vector<double> weighted(t.size());
    for (std::size_t k = 0; k < t.size(); ++k)
        weighted[k] = t[k] * out2[k];
    const double energy = trapezoid(t, out2, t_rev);
    if (energy > 0.0)
        out.echo_center = trapezoid(t, weighted, t_rev) / energy;
    out.echo_fwhm = fwhm(t, out2, first);

    out.truncated = out2.back() > 1e-3 * peak;
    if (strict && out.truncated) {
        std::ostringstream msg;
        msg << "echo not decayed at the end of the window (t=" << t.back()
            << " tau, |out|^2/peak=" << out2.back() / peak << "); increase the window length";
        throw TruncationError(msg.str());
    }
    return out;
}

void write_traces_csv(const FieldRecord& record, const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "t_tau,re_in,im_in,abs2_in,re_out,im_out,abs2_out\n";
    for (std::size_t k = 0; k < record.time.size(); ++k) {
        const cplx a = record.input[k], b = record.output[k];
        out << format_double(record.time[k]) << ',' << format_double(a.real()) << ',' << format_double(a.imag())
            << ',' << format_double(std::norm(a)) << ',' << format_double(b.real()) << ','
            << format_double(b.imag()) << ',' << format_double(std::norm(b)) << '\n';
    }
}

namespace {

template <class T>
void put_le(std::vector<unsigned char>& buf, T value)
{
    static_assert(std::endian::native == std::endian::little, "grid dump assumes a little-endian host");
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get_le(const unsigned char* p)
{
    T value;
    std::memcpy(&value, p, sizeof(T));
    return value;
}

constexpr char kMagic[8] = {'A', 'S', 'G', 'E', 'M', 'G', 'R', 'D'};

} // namespace

void write_grid_dump(const FieldRecord& record, const std::filesystem::path& path)
{
    if (record.nz == 0 || record.grid_time.empty())
        throw Error("field record holds no space-time grid; enable grid_stride");
    const std::uint64_t rows = record.grid_time.size();
    const double row_dt = rows > 1 ? record.grid_time[1] - record.grid_time[0] : record.dt;

    std::vector<unsigned char> buf(kMagic, kMagic + 8);
    put_le<std::uint64_t>(buf, rows);
    put_le<std::uint64_t>(buf, record.nz);
    put_le<double>(buf, row_dt);
    put_le<double>(buf, record.dz);
    buf.resize(64, 0);
    buf.reserve(64 + record.probe.size() * 8);
    for (const cplx& v : record.probe) {
        put_le<float>(buf, static_cast<float>(v.real()));
        put_le<float>(buf, static_cast<float>(v.imag()));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

GridDump read_grid_dump(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 64 || std::memcmp(buf.data(), kMagic, 8) != 0)
        throw ParseError("not an ASGEMGRD grid dump");
    GridDump d;
    d.rows = get_le<std::uint64_t>(buf.data() + 8);
    d.nz = get_le<std::uint64_t>(buf.data() + 16);
    d.dt = get_le<double>(buf.data() + 24);
    d.dz = get_le<double>(buf.data() + 32);
    const std::size_t count = d.rows * d.nz;
    if (buf.size() != 64 + count * 8)
        throw ParseError("grid dump size does not match its header");
    d.probe.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        d.probe[k] = {get_le<float>(buf.data() + 64 + 8 * k), get_le<float>(buf.data() + 68 + 8 * k)};
    return d;
}

} // namespace asgem
