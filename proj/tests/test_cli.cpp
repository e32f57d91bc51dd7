#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "shgsim/run.hpp"

using namespace shgsim;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "shgsim_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_table(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (table.header.empty()) {
      table.header = cells;
      continue;
    }
    std::vector<double> values;
    for (const std::string& c : cells) values.push_back(std::stod(c));
    table.rows.push_back(values);
  }
  return table;
}

std::map<std::string, std::string> parse_summary(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig paper_config() {
  return parse_config(std::string(SHGSIM_CONFIG_DIR) + "/paper.cfg");
}

}  // namespace

TEST_CASE("simulate at zero power writes an all-zero record") {
  RunOptions opt;
  opt.command = Command::simulate;
  opt.config = paper_config();
  opt.power_override = 0.0;
  opt.out_path = (temp_dir() / "zero.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);

  const auto summary = parse_summary(read_file(opt.out_path + ".summary"));
  CHECK(std::stod(summary.at("efficiency")) == 0.0);
  CHECK(std::stod(summary.at("p_harmonic_W")) == 0.0);
  CHECK(std::stod(summary.at("p_reflected_W")) == 0.0);
  CHECK(summary.at("converged") == "true");

  const Table table = parse_table(read_file(opt.out_path));
  REQUIRE(table.rows.size() == 1);
  REQUIRE(table.header.size() >= 3);
  CHECK(table.header[0] == "p_input_W");
  CHECK(table.rows[0][1] == 0.0);
}

TEST_CASE("three-sample scan is symmetric about zero detuning") {
  RunOptions opt;
  opt.command = Command::scan;
  opt.config = paper_config();
  opt.grid_override = parse_grid_spec("-1.0:1.0:3");
  opt.out_path = (temp_dir() / "scan3.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);

  const Table table = parse_table(read_file(opt.out_path));
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][0] == -1.0);
  CHECK(table.rows[1][0] == 0.0);
  CHECK(table.rows[2][0] == 1.0);
  CHECK(table.rows[0][1] == Catch::Approx(table.rows[2][1]).margin(1e-9));
}

TEST_CASE("sweep output is byte-identical across repeated runs") {
  RunOptions opt;
  opt.command = Command::sweep;
  opt.config = paper_config();
  opt.grid_override = parse_grid_spec("0.2:1.0:5");
  opt.out_path = (temp_dir() / "sweep_a.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);
  const std::string first = read_file(opt.out_path);

  opt.out_path = (temp_dir() / "sweep_b.csv").string();
  REQUIRE(run_command(opt, diag) == 0);
  CHECK(first == read_file(opt.out_path));
}

TEST_CASE("sweep over the template grid matches the frozen table") {
  RunOptions opt;
  opt.command = Command::sweep;
  opt.config = paper_config();
  opt.out_path = (temp_dir() / "sweep_golden.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);

  const Table fresh = parse_table(read_file(opt.out_path));
  const Table golden = parse_table(
      read_file(fs::path(SHGSIM_TEST_DATA_DIR) / "golden_sweep.csv"));
  REQUIRE(fresh.header == std::vector<std::string>{"p_input_W", "efficiency",
                                                   "p_harmonic_W"});
  REQUIRE(fresh.rows.size() == 25);
  REQUIRE(golden.rows.size() == fresh.rows.size());
  for (std::size_t i = 0; i < fresh.rows.size(); ++i) {
    REQUIRE(fresh.rows[i].size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      INFO("row " << i << " col " << j);
      CHECK(fresh.rows[i][j] ==
            Catch::Approx(golden.rows[i][j]).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("eigenmode command reports the template waist") {
  RunOptions opt;
  opt.command = Command::eigenmode;
  opt.config = paper_config();
  opt.out_path = (temp_dir() / "eigenmode.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);
  const auto summary = parse_summary(read_file(opt.out_path + ".summary"));
  CHECK(std::stod(summary.at("waist_um")) == Catch::Approx(38.9689).margin(1e-3));
}

TEST_CASE("fit command estimates the nonlinearity from a data file") {
  RunConfig cfg = paper_config();
  // Three noiseless synthetic observations.
  const fs::path data_path = temp_dir() / "fit_data.csv";
  {
    const SegmentGrid grid = make_grid(cfg.system, cfg.sim);
    std::ofstream data(data_path);
    data << "# p_input_W, depletion\n";
    for (double p : {0.2, 0.6, 1.1}) {
      const SteadyStateResult r =
          solve_steady_state(p, 0.0, cfg.system, cfg.sim, grid);
      data << format_value(p) << "," << format_value(r.depletion) << "\n";
    }
  }
  cfg.fit.data_path = data_path.string();

  RunOptions opt;
  opt.command = Command::fit;
  opt.config = cfg;
  opt.out_path = (temp_dir() / "fit.csv").string();
  std::ostringstream diag;
  REQUIRE(run_command(opt, diag) == 0);
  const auto summary = parse_summary(read_file(opt.out_path + ".summary"));
  CHECK(std::stod(summary.at("d_eff_pm_per_V")) == Catch::Approx(7.3).margin(0.01));

  const Table table = parse_table(read_file(opt.out_path));
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) CHECK(std::abs(row[3]) < 1e-6);
}

TEST_CASE("fit command without a data path fails cleanly") {
  RunOptions opt;
  opt.command = Command::fit;
  opt.config = paper_config();
  opt.out_path = (temp_dir() / "fit_missing.csv").string();
  std::ostringstream diag;
  CHECK(run_command(opt, diag) == 2);
  CHECK(diag.str().find("fit.data_path") != std::string::npos);
}

TEST_CASE("solver failures surface verbatim with a nonzero status") {
  RunOptions opt;
  opt.command = Command::simulate;
  opt.config = paper_config();
  opt.config.sim.max_iterations = 5;
  opt.out_path = (temp_dir() / "fail.csv").string();
  std::ostringstream diag;
  CHECK(run_command(opt, diag) == 2);
  CHECK(diag.str().find("no steady state") != std::string::npos);
}

TEST_CASE("unwritable output path reports failure") {
  RunOptions opt;
  opt.command = Command::eigenmode;
  opt.config = paper_config();
  opt.out_path = "/nonexistent_dir_shgsim/out.csv";
  std::ostringstream diag;
  CHECK(run_command(opt, diag) == 2);
  CHECK(diag.str().find("out.csv") != std::string::npos);
}

TEST_CASE("grid spec parsing") {
  const GridSpec g = parse_grid_spec("0.1:1.3:25");
  CHECK(g.start == 0.1);
  CHECK(g.stop == 1.3);
  CHECK(g.count == 25);
  CHECK_THROWS_AS(parse_grid_spec("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_spec("1:2:0"), std::invalid_argument);
}

TEST_CASE("command names resolve") {
  CHECK(command_from_name("simulate") == Command::simulate);
  CHECK(command_from_name("sweep") == Command::sweep);
  CHECK(command_from_name("scan") == Command::scan);
  CHECK(command_from_name("fit") == Command::fit);
  CHECK(command_from_name("match") == Command::match);
  CHECK(command_from_name("eigenmode") == Command::eigenmode);
  CHECK(!command_from_name("bogus").has_value());
}

TEST_CASE("installed binary runs end to end") {
  const fs::path out = temp_dir() / "cli_eigenmode.csv";
  const std::string cmd = std::string(SHGSIM_CLI_PATH) + " eigenmode --config " +
                          SHGSIM_CONFIG_DIR + "/paper.cfg --out " + out.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(out.string() + ".summary"));

  const std::string bad = std::string(SHGSIM_CLI_PATH) +
                          " eigenmode --config /no/such/file.cfg --out " +
                          (temp_dir() / "x.csv").string() + " 2>/dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
