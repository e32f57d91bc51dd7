#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "shgsim/config.hpp"

using namespace shgsim;

namespace {

bool configs_equal(const RunConfig& a, const RunConfig& b) {
  const CrystalSpec &ca = a.system.crystal, &cb = b.system.crystal;
  const CavitySpec &va = a.system.cavity, &vb = b.system.cavity;
  const BeamSpec &ba = a.system.beam, &bb = b.system.beam;
  return ca.length == cb.length && ca.d_eff == cb.d_eff &&
         ca.n_fundamental == cb.n_fundamental && ca.n_harmonic == cb.n_harmonic &&
         ca.alpha_fundamental == cb.alpha_fundamental &&
         ca.alpha_harmonic == cb.alpha_harmonic &&
         ca.ar_residual_reflectivity == cb.ar_residual_reflectivity &&
         ca.hr_reflectivity_fundamental == cb.hr_reflectivity_fundamental &&
         ca.hr_reflectivity_harmonic == cb.hr_reflectivity_harmonic &&
         ca.hr_radius == cb.hr_radius && ca.delta_k == cb.delta_k &&
         ca.qpm_temperature == cb.qpm_temperature &&
         va.coupler_R_fundamental == vb.coupler_R_fundamental &&
         va.coupler_R_harmonic == vb.coupler_R_harmonic &&
         va.coupler_radius == vb.coupler_radius && va.air_gap == vb.air_gap &&
         va.mode_matching == vb.mode_matching &&
         va.dbs_T_harmonic == vb.dbs_T_harmonic &&
         va.harmonic_rephase == vb.harmonic_rephase &&
         ba.wavelength_fundamental == bb.wavelength_fundamental &&
         ba.waist_radius == bb.waist_radius &&
         ba.focus_position == bb.focus_position &&
         a.sim.segment_count == b.sim.segment_count &&
         a.sim.tolerance == b.sim.tolerance &&
         a.sim.max_iterations == b.sim.max_iterations &&
         a.sim.relaxation == b.sim.relaxation &&
         a.sweep.power_start == b.sweep.power_start &&
         a.sweep.power_stop == b.sweep.power_stop &&
         a.sweep.power_points == b.sweep.power_points &&
         a.scan.pump_power == b.scan.pump_power &&
         a.scan.samples == b.scan.samples &&
         a.simulate.pump_power == b.simulate.pump_power &&
         a.fit.data_path == b.fit.data_path &&
         a.fit.bracket_lo == b.fit.bracket_lo &&
         a.fit.bracket_hi == b.fit.bracket_hi &&
         a.match.bracket_lo == b.match.bracket_lo &&
         a.match.bracket_hi == b.match.bracket_hi;
}

}  // namespace

TEST_CASE("bundled template parses to the experiment parameters") {
  const RunConfig cfg = parse_config(std::string(SHGSIM_CONFIG_DIR) + "/paper.cfg");
  CHECK(cfg.system.crystal.length == Catch::Approx(9.3e-3));
  CHECK(cfg.system.crystal.d_eff == Catch::Approx(7.3e-12));
  CHECK(cfg.system.crystal.alpha_harmonic == Catch::Approx(0.028));
  CHECK(cfg.system.crystal.ar_residual_reflectivity == Catch::Approx(5e-4));
  CHECK(cfg.system.crystal.hr_reflectivity_fundamental == Catch::Approx(0.9995));
  CHECK(cfg.system.crystal.hr_radius == Catch::Approx(12e-3));
  CHECK(cfg.system.crystal.qpm_temperature == Catch::Approx(45.0));
  CHECK(cfg.system.crystal.delta_k == 0.0);
  CHECK(cfg.system.cavity.coupler_R_fundamental == Catch::Approx(0.900));
  CHECK(cfg.system.cavity.coupler_R_harmonic == Catch::Approx(0.002));
  CHECK(cfg.system.cavity.coupler_radius == Catch::Approx(25e-3));
  CHECK(cfg.system.cavity.air_gap == Catch::Approx(24e-3));
  CHECK(cfg.system.cavity.mode_matching == Catch::Approx(0.98));
  CHECK(cfg.system.cavity.dbs_T_harmonic == Catch::Approx(0.993));
  CHECK(cfg.system.cavity.harmonic_rephase == 0.0);
  CHECK(cfg.system.beam.wavelength_fundamental == Catch::Approx(1550e-9));
  CHECK(cfg.system.beam.waist_radius == Catch::Approx(37.6e-6));
  CHECK(cfg.sim.segment_count == 128);
  CHECK(cfg.sim.tolerance == Catch::Approx(1e-10));
  CHECK(cfg.sim.max_iterations == 100000);
}

TEST_CASE("template matches the built-in defaults") {
  const RunConfig parsed =
      parse_config(std::string(SHGSIM_CONFIG_DIR) + "/paper.cfg");
  const RunConfig defaults;
  CHECK(configs_equal(parsed, defaults));
}

TEST_CASE("serialization round trip is exact") {
  RunConfig cfg;
  CHECK(configs_equal(parse_config_text(write_config(cfg)), cfg));

  // Arbitrary in-memory values normalize to the file-format value space in
  // one cycle; from there, serialization round-trips bitwise.
  std::mt19937_64 rng(42u);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_real_distribution<double> len(1e-4, 5e-2);
  for (int rep = 0; rep < 50; ++rep) {
    RunConfig c;
    c.system.crystal.length = len(rng);
    c.system.crystal.d_eff = frac(rng) * 2e-11;
    c.system.crystal.n_fundamental = 1.0 + frac(rng);
    c.system.crystal.n_harmonic = 1.0 + frac(rng);
    c.system.crystal.alpha_fundamental = frac(rng) * 0.1;
    c.system.crystal.alpha_harmonic = frac(rng) * 0.1;
    c.system.crystal.ar_residual_reflectivity = frac(rng) * 1e-3;
    c.system.crystal.hr_reflectivity_fundamental = 0.99 + 0.01 * frac(rng);
    c.system.crystal.hr_reflectivity_harmonic = 0.99 + 0.01 * frac(rng);
    c.system.crystal.hr_radius = len(rng);
    c.system.crystal.delta_k = (frac(rng) - 0.5) * 1e3;
    c.system.crystal.qpm_temperature = 20.0 + 50.0 * frac(rng);
    c.system.cavity.coupler_R_fundamental = 0.5 + 0.49 * frac(rng);
    c.system.cavity.coupler_R_harmonic = frac(rng) * 0.01;
    c.system.cavity.coupler_radius = len(rng);
    c.system.cavity.air_gap = len(rng);
    c.system.cavity.mode_matching = 0.9 + 0.1 * frac(rng);
    c.system.cavity.dbs_T_harmonic = 0.9 + 0.1 * frac(rng);
    c.system.cavity.harmonic_rephase = (frac(rng) - 0.5) * 6.0;
    c.system.beam.wavelength_fundamental = (1.0 + frac(rng)) * 1e-6;
    c.system.beam.waist_radius = (10.0 + 90.0 * frac(rng)) * 1e-6;
    c.system.beam.focus_position = frac(rng) * 1e-2;
    c.sim.segment_count = 8 + static_cast<int>(frac(rng) * 500);
    c.sim.tolerance = std::pow(10.0, -6.0 - 8.0 * frac(rng));
    c.sim.max_iterations = 1 + static_cast<std::size_t>(frac(rng) * 1e6);
    c.sim.relaxation = 0.1 + 0.9 * frac(rng);
    c.sweep.power_start = frac(rng);
    c.sweep.power_stop = 1.0 + frac(rng);
    c.sweep.power_points = 2 + static_cast<int>(frac(rng) * 100);
    c.scan.pump_power = frac(rng) * 2.0;
    c.scan.samples = 16 + static_cast<int>(frac(rng) * 500);
    c.simulate.pump_power = frac(rng) * 2.0;
    c.fit.data_path = rep % 2 ? "data/depletion.csv" : "";
    c.fit.bracket_lo = (0.5 + frac(rng)) * 1e-12;
    c.fit.bracket_hi = (10.0 + frac(rng)) * 1e-12;
    c.match.bracket_lo = 0.5 + frac(rng);
    c.match.bracket_hi = 2.0 + frac(rng);
    INFO("replicate " << rep);
    const RunConfig normalized = parse_config_text(write_config(c));
    // The normalization itself must be faithful.
    CHECK(normalized.system.crystal.length ==
          Catch::Approx(c.system.crystal.length).epsilon(1e-15));
    CHECK(normalized.system.beam.wavelength_fundamental ==
          Catch::Approx(c.system.beam.wavelength_fundamental).epsilon(1e-15));
    CHECK(normalized.system.cavity.air_gap ==
          Catch::Approx(c.system.cavity.air_gap).epsilon(1e-15));
    REQUIRE(configs_equal(parse_config_text(write_config(normalized)), normalized));
  }
}

TEST_CASE("negative crystal length is rejected by name") {
  const std::string text = "[crystal]\nlength_mm = -9.3\n";
  try {
    parse_config_text(text);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("crystal.length_mm") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
  try {
    parse_config_text("[crystal]\nlength_mm = 9.3\nbogus_key = 1\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.key() == "crystal.bogus_key");
    CHECK(e.line() == 3);
  }
  try {
    parse_config_text("[warp_drive]\npower = 11\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("malformed numbers name key, line and unit") {
  try {
    parse_config_text("[cavity]\nair_gap_mm = twenty-four\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.key() == "cavity.air_gap_mm");
    CHECK(e.line() == 2);
    CHECK(e.expected() == "mm");
    CHECK(std::string(e.what()).find("mm") != std::string::npos);
  }
}

TEST_CASE("keys before any section are rejected") {
  CHECK_THROWS_AS(parse_config_text("length_mm = 9.3\n"), config_error);
}

TEST_CASE("omitted optional keys keep their defaults") {
  const RunConfig cfg = parse_config_text("[cavity]\ncoupler_R_fundamental = 0.9\n");
  CHECK(cfg.system.cavity.harmonic_rephase == 0.0);
  CHECK(cfg.system.cavity.dbs_T_harmonic == Catch::Approx(0.993));
  CHECK(cfg.sim.segment_count == 128);
}

TEST_CASE("fit data path is demanded only by the fit command") {
  const RunConfig cfg = parse_config_text("[crystal]\nlength_mm = 9.3\n");
  try {
    require_fit_data_path(cfg);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.key() == "fit.data_path");
    CHECK(e.expected() == "path");
  }
}

TEST_CASE("specs fingerprint tracks parameter changes") {
  RunConfig a, b;
  CHECK(spec_fingerprint(a.system, a.sim) == spec_fingerprint(b.system, b.sim));
  b.system.crystal.d_eff = 7.4e-12;
  CHECK(spec_fingerprint(a.system, a.sim) != spec_fingerprint(b.system, b.sim));
}
