#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fdmac/config_io.hpp"
#include "fdmac/csv.hpp"
#include "fdmac/sweep.hpp"

using namespace fdmac;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "fdmac_test_cfg_" + std::to_string(counter++) + ".conf";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

const char* kQuickConfig = R"(
# fast scenario used by the io tests
num_su_pairs = 2
target_detection_prob = 0.8
pu.mean_idle = 400 ms
pu.mean_active = 100 ms
pu.min_idle = 45 ms
pu.min_active = 40 ms
pu.evacuation_time = 40 ms
mac.mini_slot = 20 us
mac.sifs = 10 us
mac.difs = 50 us
mac.rts = 352 us
mac.cts = 304 us
mac.contention_window = 8
mac.max_contention_window = 1024
mac.fragments_per_packet = 2
mac.fragment_time = 18 ms
radio.tx_power = 11 dB
radio.max_tx_power = 25 dB
radio.noise_power = 1 lin
radio.pu_received_power = -20 dB
radio.si_scale = 0.4
radio.si_exponent = 0.95
radio.sampling_frequency = 6 MHz
analysis.samples = 4000
sim.horizon = 40 s
sim.replications = 2
seed = 5
)";

}  // namespace

TEST_CASE("scenario files parse with mandatory units") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  CHECK(scenario.net.num_su_pairs == 2);
  CHECK(scenario.net.pu.mean_idle == doctest::Approx(0.4));
  CHECK(scenario.net.mac.mini_slot == doctest::Approx(20e-6));
  CHECK(scenario.net.radio.pu_received_power == doctest::Approx(0.01));
  CHECK(scenario.net.radio.sampling_frequency == doctest::Approx(6e6));
  CHECK(scenario.analysis.samples == 4000);
  CHECK(scenario.seed == 5);
  CHECK(scenario.net.violations().empty());
}

TEST_CASE("negative dB powers convert to small linear values") {
  ScenarioConfig scenario;
  scenario.apply("radio.pu_received_power", "-20 dB");
  CHECK(scenario.net.radio.pu_received_power == doctest::Approx(0.01));
}

TEST_CASE("unknown keys and missing units are rejected") {
  ScenarioConfig scenario;
  CHECK_THROWS_AS(scenario.apply("mac.fragment", "18 ms"), ConfigError);
  CHECK_THROWS_AS(scenario.apply("mac.fragment_time", "18"), ConfigError);
  CHECK_THROWS_AS(scenario.apply("radio.tx_power", "11"), ConfigError);

  TempFile bad("mac.fragment_time = 18\n");
  CHECK_THROWS_AS(load_scenario(bad.path), ConfigError);
}

TEST_CASE("validation lists every violated invariant") {
  TempFile file(kQuickConfig);
  ScenarioConfig scenario = load_scenario(file.path);
  scenario.apply("mac.fragment_time", "45 ms");  // above the deadline
  scenario.apply("num_su_pairs", "0");
  const ValidationReport report = validate_scenario(scenario);
  CHECK(!report.ok());
  CHECK(report.violations.size() >= 2);
  bool found_deadline = false;
  for (const auto& v : report.violations) {
    if (v.find("evacuation_time") != std::string::npos) found_deadline = true;
  }
  CHECK(found_deadline);
}

TEST_CASE("validation reports the derived operating point") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  const ValidationReport report = validate_scenario(scenario);
  CHECK(report.ok());
  bool saw_interference = false, saw_threshold = false;
  for (const auto& [key, value] : report.derived) {
    (void)value;
    if (key == "self_interference_lin") saw_interference = true;
    if (key == "threshold_fd") saw_threshold = true;
  }
  CHECK(saw_interference);
  CHECK(saw_threshold);
}

TEST_CASE("empty sweep emits a header-only file") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  SweepSpec spec;
  spec.parameter = "mac.contention_window";
  spec.mode = SweepMode::Analysis;
  std::ostringstream out, err;
  CHECK(run_experiment(scenario, spec, out, err) == 0);
  const std::string text = out.str();
  CHECK(!text.empty());
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE("sweep rows carry provenance and stay byte-identical") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  SweepSpec spec;
  spec.parameter = "mac.contention_window";
  spec.values = {"4", "8"};
  spec.mode = SweepMode::Analysis;

  std::ostringstream first, second, err;
  CHECK(run_experiment(scenario, spec, first, err) == 0);
  CHECK(run_experiment(scenario, spec, second, err) == 0);
  CHECK(first.str() == second.str());

  std::istringstream lines(first.str());
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header.find("mac.contention_window") != std::string::npos);
  CHECK(header.find("nt") != std::string::npos);
  CHECK(row1.find(",4,") != std::string::npos);
  CHECK(row2.find(",8,") != std::string::npos);
  CHECK(!row1.empty());
  CHECK(!row2.empty());
}

TEST_CASE("unknown sweep parameter fails with a message") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  SweepSpec spec;
  spec.parameter = "mac.bogus";
  spec.values = {"1"};
  std::ostringstream out, err;
  CHECK(run_experiment(scenario, spec, out, err) != 0);
  CHECK(err.str().find("mac.bogus") != std::string::npos);
}

TEST_CASE("failing sweep point names itself") {
  TempFile file(kQuickConfig);
  const ScenarioConfig scenario = load_scenario(file.path);
  SweepSpec spec;
  spec.parameter = "mac.fragment_time";
  spec.values = {"18 ms", "90 ms"};  // second value breaks the deadline
  std::ostringstream out, err;
  CHECK(run_experiment(scenario, spec, out, err) == 1);
  CHECK(err.str().find("90 ms") != std::string::npos);
}

TEST_CASE("cross validation runs end to end on a small scenario") {
  TempFile file(kQuickConfig);
  ScenarioConfig scenario = load_scenario(file.path);
  scenario.apply("analysis.samples", "20000");
  scenario.apply("sim.horizon", "120 s");
  scenario.apply("sim.replications", "3");
  scenario.finalize();
  const CrossValidation cv = cross_validate(scenario);
  CHECK(cv.analysis_nt > 0.0);
  CHECK(cv.sim_mean_nt > 0.0);
  CHECK(cv.replications == 3);
  // loose smoke bound; the acceptance suite pins the real tolerance
  CHECK(std::abs(cv.relative_diff) < 0.5);
}

TEST_CASE("csv escaping") {
  CHECK(CsvWriter::escape("plain") == "plain");
  CHECK(CsvWriter::escape("a,b") == "\"a,b\"");
  CHECK(CsvWriter::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
