#include "doctest.h"

#include "asgem/efficiency_map.hpp"
#include "asgem/error.hpp"
#include "asgem/maxwell_bloch.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace asgem;
namespace fs = std::filesystem;

namespace {

// Coarse grid that still resolves the pulse; keeps each run well under a second.
SimulationConfig coarse()
{
    SimulationConfig c;
    c.nz = 64;
    c.nt = 1000;
    return c;
}

double peak_abs2(const std::vector<cplx>& v)
{
    double p = 0.0;
    for (const auto& x : v)
        p = std::max(p, std::norm(x));
    return p;
}

} // namespace

TEST_CASE("control profile")
{
    CHECK(control_profile(1250.0, 0.1, 1.0, 0.16) == cplx(1250.0, 0.0));
    CHECK(control_profile(1250.0, 0.2, 1.0, 0.16) == cplx(-1250.0, 0.0));
    CHECK(control_profile(1250.0, 0.16, 1.0, 0.16) == cplx(-1250.0, 0.0));
    CHECK(control_profile(1250.0, 0.1, 0.5, 0.16) == cplx(625.0, 0.0));
    for (double t : {0.0, 0.1, 0.3})
        CHECK(std::abs(control_profile(777.0, t, 0.0, 0.16)) == 0.0);
}

TEST_CASE("configuration checks")
{
    auto c = coarse();
    c.pulse_center = 0.2;
    CHECK_THROWS_AS(simulate(c), ConfigError);
    c = coarse();
    c.optical_depth = 0.0;
    CHECK_THROWS_AS(simulate(c), ConfigError);
    c = coarse();
    c.nz = 1;
    CHECK_THROWS_AS(simulate(c), ConfigError);
    c = coarse();
    c.dephasing = -1.0;
    CHECK_THROWS_AS(simulate(c), ConfigError);

    c = coarse();
    CHECK(validate(c).empty());
    c.probe_amplitude = c.linewidth;
    CHECK(validate(c).size() == 1);
}

TEST_CASE("zero input gives identically zero fields")
{
    auto c = coarse();
    c.probe_amplitude = 0.0;
    c.grid_stride = 50;
    const auto rec = simulate(c);
    for (const auto& v : rec.output)
        CHECK(v == cplx(0.0, 0.0));
    for (const auto& v : rec.probe)
        REQUIRE(v == cplx(0.0, 0.0));
    for (const auto& v : rec.rho31)
        REQUIRE(v == cplx(0.0, 0.0));
    const auto m = echo_metrics(rec, c.reversal_time);
    CHECK(m.efficiency == 0.0);
    CHECK_FALSE(m.echo_center.has_value());
    CHECK_FALSE(m.echo_fwhm.has_value());
}

TEST_CASE("the system is linear in the probe amplitude")
{
    auto c = coarse();
    const auto a = simulate(c);
    c.probe_amplitude *= 2.0;
    const auto b = simulate(c);
    const double scale = std::sqrt(peak_abs2(a.output));
    for (std::size_t k = 0; k < a.output.size(); ++k)
        REQUIRE(std::abs(b.output[k] - 2.0 * a.output[k]) <= 1e-12 * scale);
    const double ra = echo_metrics(a, c.reversal_time).efficiency;
    const double rb = echo_metrics(b, c.reversal_time).efficiency;
    CHECK(std::abs(ra - rb) <= 1e-9 * ra);
}

TEST_CASE("passivity and causality")
{
    for (double xi : {300.0, 2500.0, 4000.0}) {
        for (double zeta : {200.0, 1250.0, 2500.0}) {
            auto c = coarse();
            c.optical_depth = xi;
            c.gradient_strength = zeta;
            const auto rec = simulate(c);
            const auto m = echo_metrics(rec, c.reversal_time, false);
            CAPTURE(xi);
            CAPTURE(zeta);
            CHECK(m.transmitted_fraction <= 1.0 + 1e-3);
            CHECK(m.efficiency >= 0.0);
            CHECK(m.efficiency <= m.transmitted_fraction);
            CHECK(rec.max_coherence <= 1.0);

            const double peak = peak_abs2(rec.output);
            const double quiet_until = c.pulse_center - 4.0 * c.pulse_width;
            for (std::size_t k = 0; k < rec.time.size() && rec.time[k] < quiet_until; ++k)
                REQUIRE(std::norm(rec.output[k]) <= 1e-12 * peak);
        }
    }
}

TEST_CASE("reversal produces an echo near 2 t_rev - t0")
{
    const auto c = coarse();
    const auto rec = simulate(c);
    const auto m = echo_metrics(rec, c.reversal_time);
    REQUIRE(m.echo_center.has_value());
    CHECK(std::abs(*m.echo_center - (2 * c.reversal_time - c.pulse_center)) < 0.02);
    CHECK(m.efficiency > 0.5);
    REQUIRE(m.echo_fwhm.has_value());
    REQUIRE(m.input_fwhm.has_value());
    // Gaussian exp(-(t/k)^2) in amplitude: |.|^2 FWHM = k sqrt(2 ln 2)
    CHECK(*m.input_fwhm == doctest::Approx(c.pulse_width * std::sqrt(2.0 * std::log(2.0))).epsilon(1e-3));
}

TEST_CASE("without reversal little energy comes back")
{
    auto c = coarse();
    c.reverse = false;
    const auto rec = simulate(c);
    CHECK_THROWS_AS(echo_metrics(rec, c.reversal_time), TruncationError);
    const auto m = echo_metrics(rec, c.reversal_time, false);
    CHECK(m.truncated);
    CHECK(m.efficiency < 0.05);
    // frozen reference from this exact configuration
    CHECK(m.efficiency == doctest::Approx(0.020402448507568921).epsilon(1e-9));
}

TEST_CASE("short windows report truncation")
{
    auto c = coarse();
    c.duration = 0.275;
    c.nt = 550;
    const auto rec = simulate(c);
    CHECK_THROWS_AS(echo_metrics(rec, c.reversal_time), TruncationError);
    CHECK(echo_metrics(rec, c.reversal_time, false).truncated);
}

TEST_CASE("constant control mode runs")
{
    auto c = coarse();
    c.control_mode = ControlMode::constant;
    const auto rec = simulate(c);
    CHECK(rec.substeps >= 1);
    const auto m = echo_metrics(rec, c.reversal_time, false);
    CHECK(m.transmitted_fraction <= 1.0 + 1e-3);
}

TEST_CASE("runs are deterministic")
{
    const auto c = coarse();
    const auto a = simulate(c), b = simulate(c);
    CHECK(a.output == b.output);
}

TEST_CASE("trace csv and grid dump")
{
    const fs::path dir = fs::temp_directory_path() / ("asgem_mb_" + std::to_string(std::rand()));
    fs::create_directories(dir);
    auto c = coarse();
    c.grid_stride = 100;
    const auto rec = simulate(c);
    REQUIRE(rec.grid_time.size() == 11);
    REQUIRE(rec.probe.size() == 11 * 64);
    // first grid column is the input trace, last is the output
    CHECK(rec.probe[5 * 64] == rec.input[500]);
    CHECK(rec.probe[5 * 64 + 63] == rec.output[500]);

    write_traces_csv(rec, dir / "traces.csv");
    std::ifstream in(dir / "traces.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_tau,re_in,im_in,abs2_in,re_out,im_out,abs2_out");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);)
        rows += !line.empty();
    CHECK(rows == rec.time.size());

    write_grid_dump(rec, dir / "grid.bin");
    CHECK(fs::file_size(dir / "grid.bin") == 64 + 11 * 64 * 8);
    const auto dump = read_grid_dump(dir / "grid.bin");
    CHECK(dump.rows == 11);
    CHECK(dump.nz == 64);
    CHECK(dump.dt == rec.dt * 100);
    CHECK(dump.dz == rec.dz);
    for (std::size_t k = 0; k < rec.probe.size(); ++k) {
        REQUIRE(dump.probe[k].real() == static_cast<float>(rec.probe[k].real()));
        REQUIRE(dump.probe[k].imag() == static_cast<float>(rec.probe[k].imag()));
    }
    {
        std::ifstream raw(dir / "grid.bin", std::ios::binary);
        char magic[8];
        raw.read(magic, 8);
        CHECK(std::string(magic, 8) == "ASGEMGRD");
    }
    std::ofstream(dir / "junk.bin") << "not a dump";
    CHECK_THROWS_AS(read_grid_dump(dir / "junk.bin"), ParseError);

    auto plain = coarse();
    CHECK_THROWS(write_grid_dump(simulate(plain), dir / "none.bin"));
    fs::remove_all(dir);
}

TEST_CASE("efficiency map cells match single runs")
{
    EfficiencyMapSpec spec;
    spec.base = coarse();
    spec.optical_depth = {"xi", 1500.0, 2500.0, 2, Spacing::linear};
    spec.gradient = {"zeta", 1250.0, 1250.0, 1, Spacing::linear};
    const auto r = efficiency_map(spec);
    CHECK(r.grid.value_name == "R");
    CHECK(r.grid.x_name == "xi");
    CHECK(r.grid.y_name == "zeta");
    auto c = coarse();
    c.optical_depth = 2500.0;
    c.gradient_strength = 1250.0;
    const double single = echo_metrics(simulate(c), c.reversal_time).efficiency;
    CHECK(std::abs(r.value(1, 0) - single) <= 1e-6);
    CHECK(efficiency_at(spec.base, 2500.0, 1250.0) == r.value(1, 0));

    spec.optical_depth = {"xi", -1.0, 2500.0, 2, Spacing::linear};
    CHECK_THROWS_AS(efficiency_map(spec), ConfigError);
}
