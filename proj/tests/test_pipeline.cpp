#include "triosc/config.hpp"
#include "triosc/errors.hpp"
#include "triosc/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace triosc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("triosc_test_" + name);
    fs::remove_all(p);
    return p;
}

ScenarioConfig small_family() {
    return parse_config_text(R"(
[oscillator.1]
m = kind=sinusoid, offset=1, amp=0.2, freq=0.0125
omega = 1
b = 0.2
[oscillator.2]
m = kind=sinusoid, offset=2, amp=0.4, freq=0.0125
omega = 1
b = 0.2
[oscillator.3]
m = kind=sinusoid, offset=4, amp=0.8, freq=0.0125
omega = 1
b = 0.2
[couplings]
d12 = 0.15
d13 = 0.1
d23 = 0.05
[grid]
t1 = 30
N = 2048
spatial_points = 96
quadrature = 24
[pipelines]
trajectories = 3
[output]
wavefunction_slice = true
)");
}

}  // namespace

TEST_CASE("pipeline: exit codes by error kind") {
    CHECK(exit_code_for(ErrorKind::config) == 2);
    CHECK(exit_code_for(ErrorKind::validation) == 2);
    CHECK(exit_code_for(ErrorKind::inadmissible) == 3);
    CHECK(exit_code_for(ErrorKind::no_fixed_point) == 3);
    CHECK(exit_code_for(ErrorKind::accuracy) == 4);
    CHECK(exit_code_for(ErrorKind::containment) == 4);
    CHECK(exit_code_for(ErrorKind::formula_inconsistency) == 5);
    CHECK(unit_uniform(0) == 0.0);
    CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("pipeline: full run writes every output and passes") {
    const fs::path out = scratch("run");
    const RunReport r = run(small_family(), Command::run, out.string());
    for (const auto& c : r.checks) {
        INFO(c.stage << " " << c.name << " = " << c.value);
        CHECK(c.pass);
    }
    CHECK(r.pass);
    CHECK(r.exit_code == 0);
    for (const char* f : {"report.txt", "checks.csv", "drift.csv", "spectrum.csv", "eigenvalues.csv",
                          "wavefunction_slice.csv", "auxiliary.csv", "angle_sets.csv"}) {
        CHECK(fs::exists(out / f));
    }
    CHECK(slurp(out / "drift.csv").rfind("t,I,rel_drift\n", 0) == 0);
    CHECK(slurp(out / "spectrum.csv")
              .rfind("w01sq,w02sq,w03sq,D12,D13,D23,evp1,evp2,evp3,phi,theta,varphi,class,max_offdiag\n", 0) == 0);
    CHECK(slurp(out / "eigenvalues.csv").rfind("n1,n2,n3,lambda\n", 0) == 0);
    CHECK(slurp(out / "report.txt").find("overall: PASS") != std::string::npos);
    CHECK(slurp(out / "checks.csv").find('\r') == std::string::npos);
}

TEST_CASE("pipeline: single stages") {
    const fs::path out = scratch("stages");
    RunReport r = run(small_family(), Command::validate, out.string());
    CHECK(r.pass);
    CHECK_FALSE(fs::exists(out / "drift.csv"));
    r = run(small_family(), Command::spectrum, out.string());
    CHECK(r.pass);
    CHECK(r.gamma.has_value());
    CHECK(fs::exists(out / "spectrum.csv"));
    CHECK_FALSE(fs::exists(out / "eigenvalues.csv"));
}

TEST_CASE("pipeline: negative controls fail with admissibility or numeric codes") {
    ScenarioConfig c = small_family();
    c.pipelines.eigen = false;
    c.params.alpha0[1] = 1.1;
    RunReport r = run(c, Command::run, scratch("alpha").string());
    CHECK_FALSE(r.pass);
    CHECK(r.exit_code == 3);

    c = small_family();
    c.params.coupling_mode = CouplingMode::frozen;
    c.pipelines.validate = false;
    c.pipelines.spectrum = false;
    c.pipelines.eigen = false;
    r = run(c, Command::run, scratch("frozen").string());
    CHECK_FALSE(r.pass);
    CHECK(r.exit_code == 4);
    bool drift_failed = false;
    for (const auto& k : r.checks) drift_failed |= k.name == "invariant_drift" && !k.pass && k.value >= 1e-3;
    CHECK(drift_failed);
}

TEST_CASE("pipeline: stage errors are named and partial output kept") {
    ScenarioConfig c = small_family();
    for (auto& b : c.params.b) b = ParameterCurve::constant(1.2);  // no Ermakov fixed point
    const fs::path out = scratch("error");
    const RunReport r = run(c, Command::run, out.string());
    CHECK(r.failed_stage == "params");
    CHECK(r.exit_code == 3);
    CHECK(slurp(out / "report.txt").find("stage 'params' stopped") != std::string::npos);
}

TEST_CASE("pipeline: runs are deterministic") {
    ScenarioConfig c = small_family();
    c.pipelines.eigen = false;
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run(c, Command::run, a.string());
    run(c, Command::run, b.string());
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
}

TEST_CASE("pipeline: sweep") {
    const ScenarioConfig c = small_family();
    CHECK_THROWS_AS(sweep(c, 0, 1, scratch("sweep0").string()), Error);
    const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
    const SweepReport r = sweep(c, 200, 9, a.string());
    CHECK(r.failures == 0);
    CHECK(r.class1 + r.class2 == 200);
    CHECK(r.max_eigen_rel_error <= 1e-10);
    sweep(c, 200, 9, b.string());
    CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
}
