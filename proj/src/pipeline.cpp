#include "triosc/pipeline.hpp"

#include "triosc/dynamics.hpp"
#include "triosc/eigenstates.hpp"
#include "triosc/invariant.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

namespace triosc {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config:
        case ErrorKind::validation:
            return exit_code::config;
        case ErrorKind::inadmissible:
        case ErrorKind::no_fixed_point:
            return exit_code::admissibility;
        case ErrorKind::formula_inconsistency:
        case ErrorKind::contract:
            return exit_code::formula;
        case ErrorKind::domain:
        case ErrorKind::singularity:
        case ErrorKind::accuracy:
        case ErrorKind::divergence:
        case ErrorKind::degeneracy:
        case ErrorKind::containment:
            return exit_code::numeric;
    }
    return exit_code::numeric;
}

double unit_uniform(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
        if (!out_) fail(ErrorKind::config, fmt::format("cannot write '{}'", path.string()));
        row_strings(header);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> s;
        s.reserve(values.size());
        for (double v : values) s.push_back(num(v));
        row_strings(s);
    }

    void row_strings(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

class Runner {
public:
    Runner(const ScenarioConfig& cfg, std::string out_dir) : cfg_(cfg), out_(std::move(out_dir)) {
        fs::create_directories(out_);
    }

    RunReport execute(Command command) {
        const Pipelines& pl = cfg_.pipelines;
        const bool all = command == Command::run;
        const bool want_validate = all ? pl.validate : true;
        const bool want_evolve = all ? pl.evolve : command == Command::evolve;
        const bool want_eigen = all ? pl.eigen : command == Command::eigen;
        const bool want_spectrum = all ? (pl.spectrum || pl.eigen) : (command == Command::spectrum || want_eigen);

        bool ok = stage("params", [&] { params_stage(want_validate); });
        if (ok && want_evolve) ok = stage("invariant", [&] { evolve_stage(); });
        bool spectrum_ok = ok;
        if (ok && want_spectrum) spectrum_ok = stage("spectrum", [&] { spectrum_stage(); });
        if (ok && spectrum_ok && want_eigen) stage("eigenstates", [&] { eigen_stage(); });

        finish();
        return std::move(report_);
    }

private:
    const ScenarioConfig& cfg_;
    fs::path out_;
    RunReport report_;
    std::optional<AuxiliarySolution> aux_;
    int first_failure_{exit_code::pass};
    std::string current_;

    void note_failure(int code) {
        if (first_failure_ == exit_code::pass) first_failure_ = code;
    }

    void check(const std::string& name, double value, double tolerance, int code, bool lower_bound = false) {
        Check c;
        c.stage = current_;
        c.name = name;
        c.value = value;
        c.tolerance = tolerance;
        c.lower_bound = lower_bound;
        c.pass = lower_bound ? value >= tolerance : value <= tolerance;
        if (!std::isfinite(value)) c.pass = false;
        c.failure_code = code;
        if (!c.pass) note_failure(code);
        report_.checks.push_back(c);
    }

    bool stage(const std::string& name, const std::function<void()>& body) {
        current_ = name;
        const auto start = std::chrono::steady_clock::now();
        bool ok = true;
        try {
            body();
        } catch (const Error& e) {
            ok = false;
            report_.failed_stage = name;
            report_.error_message = fmt::format("{} error: {}", to_string(e.kind()), e.what());
            note_failure(exit_code_for(e.kind()));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report_.timings.push_back({name, secs});
        return ok;
    }

    IntegratorOptions integrator() const {
        IntegratorOptions o;
        o.step_tolerance = cfg_.tolerances.step;
        return o;
    }

    void params_stage(bool checks) {
        const SystemParameters& p = cfg_.params;
        aux_.emplace(solve_auxiliary(p, integrator()));
        const AuxiliarySolution& aux = *aux_;
        const Tolerances& tol = cfg_.tolerances;

        const AdmissibilityReport adm = validate_admissibility(p, aux, {tol.admissibility, tol.coupling});
        if (checks) {
            check("alpha_m_spread", adm.max_alpha_m_violation, tol.admissibility, exit_code::admissibility);
            check("coupling_ode_residual", adm.max_coupling_residual, tol.coupling, exit_code::admissibility);
            check("g_form_discrepancy", check_g_form_consistency(p, aux), tol.g_form, exit_code::admissibility);
            double erm = 0.0;
            for (int j = 0; j < 3; ++j) erm = std::max(erm, max_ermakov_residual(p, aux, j));
            check("ermakov_residual", erm, tol.ermakov, exit_code::numeric);
        }

        CsvFile csv(out_ / "auxiliary.csv", {"t", "rho1", "rho2", "rho3", "rhodot1", "rhodot2", "rhodot3", "d12",
                                             "d13", "d23", "alpha_m1", "alpha_m2", "alpha_m3", "wtilde_sq1",
                                             "wtilde_sq2", "wtilde_sq3"});
        double min_wtilde = INFINITY;
        const TimeGrid& g = aux.grid();
        for (int k = 0; k < g.size(); ++k) {
            const double t = g.at(k);
            const AuxiliaryState s = aux.sample(k);
            const Couplings d = couplings_at(p, aux, t);
            const auto& am = adm.alpha_m[static_cast<std::size_t>(k)];
            std::array<double, 3> w{};
            for (int j = 0; j < 3; ++j) {
                w[static_cast<std::size_t>(j)] = modified_frequency_sq(p, j, t);
                min_wtilde = std::min(min_wtilde, w[static_cast<std::size_t>(j)]);
            }
            csv.row({t, s.rho[0], s.rho[1], s.rho[2], s.rhodot[0], s.rhodot[1], s.rhodot[2], d[0], d[1], d[2], am[0],
                     am[1], am[2], w[0], w[1], w[2]});
        }
        report_.notes.push_back({"min modified frequency squared (auxiliary.csv wtilde_sq*)", min_wtilde});
    }

    void evolve_stage() {
        const SystemParameters& p = cfg_.params;
        const AuxiliarySolution& aux = *aux_;
        const Tolerances& tol = cfg_.tolerances;

        std::mt19937_64 rng(cfg_.seed);
        auto uniform = [&] { return 2.0 * unit_uniform(rng()) - 1.0; };
        const bool explicit_state = std::any_of(cfg_.x0.begin(), cfg_.x0.end(), [](auto& v) { return v.has_value(); }) ||
                                    std::any_of(cfg_.p0.begin(), cfg_.p0.end(), [](auto& v) { return v.has_value(); });
        double worst = 0.0;
        bool absolute = false;
        for (int r = 0; r < cfg_.trajectories; ++r) {
            ClassicalState s0;
            s0.t = p.grid.t0;
            for (std::size_t j = 0; j < 3; ++j) {
                if (r == 0 && explicit_state) {
                    s0.x[j] = cfg_.x0[j].value_or(0.0);
                    s0.p[j] = cfg_.p0[j].value_or(0.0);
                } else {
                    s0.x[j] = uniform();
                    s0.p[j] = uniform();
                }
            }
            const Trajectory traj = integrate_classical(p, aux, s0, integrator());
            const DriftReport drift = invariant_drift(p, aux, traj);
            worst = std::max(worst, drift.max_drift);
            absolute = absolute || drift.absolute;
            if (r == 0) {
                CsvFile dcsv(out_ / "drift.csv", {"t", "I", "rel_drift"});
                for (const auto& d : drift.series) dcsv.row({d.t, d.value, d.rel_drift});
                CsvFile tcsv(out_ / "trajectory.csv", {"t", "x1", "x2", "x3", "p1", "p2", "p3"});
                for (const auto& s : traj.states) tcsv.row({s.t, s.x[0], s.x[1], s.x[2], s.p[0], s.p[1], s.p[2]});
            }
        }
        check(absolute ? "invariant_drift_absolute" : "invariant_drift", worst, tol.drift, exit_code::numeric);

        const LvnResidualReport lvn = lvn_residuals(p, aux, 0.0, tol.lvn);
        static const char* names[6] = {"lvn_alpha", "lvn_beta", "lvn_gamma", "lvn_delta12", "lvn_delta13", "lvn_delta23"};
        for (std::size_t i = 0; i < 6; ++i) check(names[i], lvn.max_residual[i], tol.lvn, exit_code::numeric);

        double ident = 0.0;
        const TimeGrid& g = aux.grid();
        for (int k = 0; k < g.size(); ++k) {
            const InvariantCoefficients c = coefficients_at(p, aux, g.at(k));
            const auto v = frequency_identity(c);
            for (std::size_t j = 0; j < 3; ++j) {
                const double w = p.alpha0[j] * p.Omega[j];
                const double ref = 0.25 * w * w;
                ident = std::max(ident, std::abs(v[j] - ref) / ref);
            }
        }
        check("frequency_identity", ident, tol.identity, exit_code::numeric);
    }

    void spectrum_stage() {
        const SystemParameters& p = cfg_.params;
        const Tolerances& tol = cfg_.tolerances;
        const GammaBuild gb = sample_gamma(p, *aux_, tol.gamma);
        report_.gamma = gb.gamma;
        check("gamma_constancy", gb.constancy.max_drift, tol.gamma, exit_code::admissibility);
        const Mat3 g = gb.gamma.matrix();
        const double norm = gb.gamma.norm();
        const double minor = std::min({g(0, 0), g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1), g.determinant()});
        check("min_leading_minor", minor, 0.0, exit_code::admissibility, true);

        const Diagonalization d = diagonalize(gb.gamma, tol.offdiag);
        report_.diagonalization = d;
        check("offdiag_residual", d.offdiag_residual / norm, tol.offdiag, exit_code::formula);
        const SymmetricEigen je = jacobi_eigen(g);
        double radius = 0.0, err = 0.0;
        for (int k = 0; k < 3; ++k) radius = std::max(radius, std::abs(je.values(k)));
        for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(d.eig.values[static_cast<std::size_t>(k)] - je.values(k)));
        check("eigenvalue_vs_jacobi", radius > 0.0 ? err / radius : err, tol.eigenvalues, exit_code::numeric);
        const double orth = (d.R.transpose() * d.R - Mat3::Identity()).cwiseAbs().maxCoeff();
        check("rotation_orthogonality", std::max(orth, std::abs(d.R.determinant() - 1.0)), tol.formula,
              exit_code::formula);
        const TransformedGamma tg = transformed_gamma(gb.gamma, d.angles);
        check("transformed_formula_mismatch", tg.max_mismatch / std::max(1.0, norm), tol.formula, exit_code::formula);
        const double composite = (composite_rotation(d.angles) - d.R).cwiseAbs().maxCoeff();
        check("composite_rotation_mismatch", composite, tol.formula, exit_code::formula);

        CsvFile scsv(out_ / "spectrum.csv", {"w01sq", "w02sq", "w03sq", "D12", "D13", "D23", "evp1", "evp2", "evp3",
                                             "phi", "theta", "varphi", "class", "max_offdiag"});
        const double cls = d.eigensolver_fallback ? 0.0 : static_cast<double>(static_cast<int>(d.angles.cls));
        scsv.row({gb.gamma.w0sq[0], gb.gamma.w0sq[1], gb.gamma.w0sq[2], gb.gamma.Delta[0], gb.gamma.Delta[1],
                  gb.gamma.Delta[2], d.eig.values[0], d.eig.values[1], d.eig.values[2], d.angles.phi, d.angles.theta,
                  d.angles.varphi, cls, d.offdiag_residual});

        if (!d.eigensolver_fallback) {
            const AngleSetReport sets = alternative_angle_sets(gb.gamma, d.eig, tol.offdiag);
            double worst = 0.0, opposite = INFINITY;
            CsvFile acsv(out_ / "angle_sets.csv",
                         {"set", "phi", "theta", "varphi", "max_offdiag", "opposite_class_max_offdiag"});
            for (std::size_t i = 0; i < sets.sets.size(); ++i) {
                const auto& a = sets.sets[i];
                worst = std::max(worst, sets.residuals[i]);
                opposite = std::min(opposite, sets.opposite_class_residuals[i]);
                acsv.row({static_cast<double>(a.set_id), a.phi, a.theta, a.varphi, sets.residuals[i],
                          sets.opposite_class_residuals[i]});
            }
            check("angle_sets_offdiag", worst / norm, tol.offdiag, exit_code::formula);
            // Only meaningful when Gamma is not already diagonal.
            if (max_offdiagonal(g) > tol.offdiag * norm) {
                check("opposite_class_min_offdiag", opposite / norm, tol.offdiag, exit_code::formula, true);
            }
        }
    }

    void eigen_stage() {
        const SystemParameters& p = cfg_.params;
        const Tolerances& tol = cfg_.tolerances;
        const AuxiliarySolution& aux = *aux_;
        const EigenFrame frame = make_frame(*report_.diagonalization, p.hbar, p.M,
                                            [&p, &aux](double t) { return coefficients_at(p, aux, t); });
        const auto modes = modes_up_to(cfg_.mode_level);

        CsvFile ecsv(out_ / "eigenvalues.csv", {"n1", "n2", "n3", "lambda"});
        for (const auto& m : modes) {
            ecsv.row({static_cast<double>(m.n1), static_cast<double>(m.n2), static_cast<double>(m.n3),
                      eigenvalue(m, frame)});
        }

        const double t0 = p.grid.t0, t1 = p.grid.t1;
        double gram = 0.0, expect = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double t = k == 4 ? t1 : t0 + 0.25 * k * (t1 - t0);
            const Quadrature q(frame, t, cfg_.quadrature_order, cfg_.n_max);
            if (k == 0) gram = max_identity_deviation(gram_matrix(q, modes));
            for (const auto& m : modes) {
                expect = std::max(expect, std::abs(expectation_of_invariant(m, q) - eigenvalue(m, frame)));
            }
            if (k == 0) {
                double ladder = 0.0;
                for (const auto& m : modes) {
                    for (int j = 0; j < 3; ++j) {
                        const LadderCheck lc = ladder_check(j, q, m);
                        ladder = std::max({ladder, std::abs(lc.projection - lc.expected), lc.remainder});
                    }
                }
                check("ladder_factor", ladder, tol.ladder, exit_code::numeric);
            }
        }
        check("gram_identity", gram, tol.gram, exit_code::numeric);
        check("invariant_expectation", expect, tol.expectation, exit_code::numeric);

        const int comm_order = std::max(cfg_.n_max + 5, 2 * cfg_.mode_level + 6);
        const Quadrature qc(frame, t0, comm_order, cfg_.n_max);
        check("ladder_commutator", commutator_deviation(qc, modes), tol.commutator, exit_code::numeric);

        const ModeIndex ground{0, 0, 0};
        GridSpec coarse_spec = cfg_.spatial;
        coarse_spec.points = std::max(8, cfg_.spatial.points / 2);
        const GridResidual fine = grid_operator_residual(ground, frame, t0, cfg_.spatial);
        const GridResidual coarse = grid_operator_residual(ground, frame, t0, coarse_spec);
        check("grid_residual", fine.residual, tol.grid_residual, exit_code::numeric);
        const double order = std::log(coarse.residual / fine.residual) / std::log(coarse.spacing_max / fine.spacing_max);
        check("grid_convergence_order", order, 1.8, exit_code::numeric, true);

        if (cfg_.wavefunction_slice) {
            SliceSpec slice;
            double sigma = 0.0;
            for (double w : frame.wbar) sigma = std::max(sigma, std::sqrt(p.hbar / w));
            const InvariantCoefficients c0 = coefficients_at(p, aux, t0);
            slice.half_width = 3.0 * sigma * std::sqrt(*std::max_element(c0.alpha.begin(), c0.alpha.end()));
            CsvFile w(out_ / "wavefunction_slice.csv", {"x1", "x2", "x3", "re", "im", "abs"});
            for (const auto& s : wavefunction_slice(ground, frame, t0, slice)) {
                w.row({s.x[0], s.x[1], s.x[2], s.value.real(), s.value.imag(), std::abs(s.value)});
            }
        }
    }

    void finish() {
        report_.exit_code = first_failure_;
        report_.pass = first_failure_ == exit_code::pass;

        CsvFile csv(out_ / "checks.csv", {"stage", "check", "value", "tolerance", "pass"});
        for (const auto& c : report_.checks) {
            csv.row_strings({c.stage, c.name, num(c.value), num(c.tolerance), c.pass ? "1" : "0"});
        }

        std::ofstream rep(out_ / "report.txt", std::ios::binary);
        rep << "triosc run report\n\n";
        std::string stage;
        for (const auto& c : report_.checks) {
            if (c.stage != stage) {
                stage = c.stage;
                rep << "[" << stage << "]\n";
            }
            rep << fmt::format("  {:<30} {:>24} {} {:<24} {}\n", c.name, num(c.value), c.lower_bound ? ">=" : "<=",
                               num(c.tolerance), c.pass ? "PASS" : "FAIL");
        }
        for (const auto& [label, value] : report_.notes) rep << fmt::format("\n{}: {}\n", label, num(value));
        if (report_.gamma) {
            const Mat3 g = report_.gamma->matrix();
            rep << "\nGamma (spectrum.csv w0*sq, D*):\n";
            for (int i = 0; i < 3; ++i) rep << fmt::format("  {:>24} {:>24} {:>24}\n", num(g(i, 0)), num(g(i, 1)), num(g(i, 2)));
        }
        if (report_.diagonalization) {
            const auto& d = *report_.diagonalization;
            rep << fmt::format("eigenvalues (evp1..3): {} {} {}\n", num(d.eig.values[0]), num(d.eig.values[1]),
                               num(d.eig.values[2]));
            rep << fmt::format("angles (phi, theta, varphi): {} {} {}\n", num(d.angles.phi), num(d.angles.theta),
                               num(d.angles.varphi));
            rep << (d.eigensolver_fallback ? "class: eigensolver route (degenerate spectrum)\n"
                                           : fmt::format("class: {}\n", static_cast<int>(d.angles.cls)));
        }
        if (!report_.failed_stage.empty()) {
            rep << fmt::format("\nstage '{}' stopped: {}\n", report_.failed_stage, report_.error_message);
        }
        rep << fmt::format("\noverall: {} (exit code {})\n", report_.pass ? "PASS" : "FAIL", report_.exit_code);
    }
};

}  // namespace

RunReport run(const ScenarioConfig& config, Command command, const std::string& out_dir) {
    Runner r(config, out_dir);
    return r.execute(command);
}

SweepReport sweep(const ScenarioConfig& config, int count, std::uint64_t seed, const std::string& out_dir) {
    if (count < 1) fail(ErrorKind::validation, "sweep count must be >= 1");
    const Tolerances& tol = config.tolerances;
    fs::create_directories(out_dir);
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng()); };

    SweepReport rep;
    rep.count = count;
    rep.min_opposite_offdiag = INFINITY;
    CsvFile csv(fs::path(out_dir) / "sweep.csv",
                {"index", "w01sq", "w02sq", "w03sq", "D12", "D13", "D23", "evp1", "evp2", "evp3", "jac1", "jac2",
                 "jac3", "eig_rel_err", "class", "class_res_plus", "class_res_minus", "primary_offdiag",
                 "max_alt_offdiag", "min_opposite_offdiag", "formula_mismatch", "pass"});
    for (int i = 0; i < count; ++i) {
        GammaMatrix gm;
        ClosedFormEigenvalues eig;
        for (;;) {
            for (auto& w : gm.w0sq) w = uniform(0.5, 3.0);
            for (auto& d : gm.Delta) d = uniform(-1.0, 1.0);
            const SymmetricEigen je = jacobi_eigen(gm.matrix());
            const double gap = std::min(je.values(0) - je.values(1), je.values(1) - je.values(2));
            if (gap >= 1e-3 * gm.norm()) break;
        }
        const double phi = uniform(-std::numbers::pi, std::numbers::pi);
        const double theta = uniform(-std::numbers::pi, std::numbers::pi);
        const double varphi = uniform(-std::numbers::pi, std::numbers::pi);

        const double norm = gm.norm();
        const Mat3 g = gm.matrix();
        bool ok = true;
        std::string note;
        double rel = NAN, cls = 0.0, cr_plus = NAN, cr_minus = NAN, primary = NAN, alt = NAN, opposite = NAN;
        const SymmetricEigen je = jacobi_eigen(g);
        try {
            eig = closed_form_eigenvalues(gm);
            const double radius = std::max({std::abs(je.values(0)), std::abs(je.values(1)), std::abs(je.values(2))});
            rel = 0.0;
            for (int k = 0; k < 3; ++k) rel = std::max(rel, std::abs(eig.values[static_cast<std::size_t>(k)] - je.values(k)) / radius);
            rep.max_eigen_rel_error = std::max(rep.max_eigen_rel_error, rel);
            if (rel > tol.eigenvalues) {
                ok = false;
                note = "eigenvalue mismatch";
            }
            if (!(eig.values[0] >= eig.values[1] && eig.values[1] >= eig.values[2])) {
                ok = false;
                note = "eigenvalue ordering";
            }
            const EulerSolution es = euler_angles(gm, eig, tol.offdiag);
            cls = static_cast<double>(static_cast<int>(es.angles.cls));
            cr_plus = es.class_residual[0] / norm;
            cr_minus = es.class_residual[1] / norm;
            (es.angles.cls == GammaClass::class1 ? rep.class1 : rep.class2) += 1;
            const int passing = (es.class_residual[0] <= es.tolerance) + (es.class_residual[1] <= es.tolerance);
            if (passing != 1) {
                ++rep.exclusivity_failures;
                ok = false;
                note = "class exclusivity";
            }
            primary = es.offdiag_residual / norm;
            rep.max_primary_offdiag = std::max(rep.max_primary_offdiag, primary);
            const AngleSetReport sets = alternative_angle_sets(gm, eig, tol.offdiag);
            alt = 0.0;
            opposite = INFINITY;
            for (std::size_t s = 0; s < sets.sets.size(); ++s) {
                alt = std::max(alt, sets.residuals[s] / norm);
                opposite = std::min(opposite, sets.opposite_class_residuals[s] / norm);
            }
            rep.max_alternative_offdiag = std::max(rep.max_alternative_offdiag, alt);
            rep.min_opposite_offdiag = std::min(rep.min_opposite_offdiag, opposite);
            if (opposite <= tol.offdiag) {
                ok = false;
                note = "opposite-class set diagonalizes";
            }
            const Mat3 r = rotation_matrix(es.angles);
            const double rot = std::max((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff(),
                                        std::abs(r.determinant() - 1.0));
            rep.max_rotation_error = std::max(rep.max_rotation_error, rot);
            if (rot > tol.formula) {
                ok = false;
                note = "rotation not orthogonal";
            }
        } catch (const Error& e) {
            ok = false;
            note = fmt::format("{}: {}", to_string(e.kind()), e.what());
            if (e.kind() == ErrorKind::formula_inconsistency) rep.exit_code = exit_code::formula;
        }
        EulerAngles random_angles;
        random_angles.phi = phi;
        random_angles.theta = theta;
        random_angles.varphi = varphi;
        const TransformedGamma tg = transformed_gamma(gm, random_angles);
        const double composite = (composite_rotation(random_angles) - rotation_matrix(random_angles)).cwiseAbs().maxCoeff();
        const double mismatch = std::max(tg.max_mismatch, composite);
        rep.max_formula_mismatch = std::max(rep.max_formula_mismatch, mismatch);
        if (mismatch > tol.formula) {
            ok = false;
            note = "trigonometric formula mismatch";
        }
        if (!ok) {
            ++rep.failures;
            rep.failure_notes.push_back(fmt::format("matrix {}: {}", i, note));
        }
        csv.row({static_cast<double>(i), gm.w0sq[0], gm.w0sq[1], gm.w0sq[2], gm.Delta[0], gm.Delta[1], gm.Delta[2],
                 eig.values[0], eig.values[1], eig.values[2], je.values(0), je.values(1), je.values(2), rel, cls,
                 cr_plus, cr_minus, primary, alt, opposite, mismatch, ok ? 1.0 : 0.0});
    }
    if (rep.failures > 0 && rep.exit_code == exit_code::pass) rep.exit_code = exit_code::numeric;

    std::ofstream out(fs::path(out_dir) / "sweep_report.txt", std::ios::binary);
    out << fmt::format("triosc sweep: {} matrices, seed {}\n\n", count, seed);
    out << fmt::format("failures                         {}\n", rep.failures);
    out << fmt::format("class 1 / class 2                {} / {}\n", rep.class1, rep.class2);
    out << fmt::format("class exclusivity failures       {}\n", rep.exclusivity_failures);
    out << fmt::format("max eigenvalue rel error         {}\n", num(rep.max_eigen_rel_error));
    out << fmt::format("max primary offdiag / |Gamma|    {}\n", num(rep.max_primary_offdiag));
    out << fmt::format("max alt-set offdiag / |Gamma|    {}\n", num(rep.max_alternative_offdiag));
    out << fmt::format("min opposite offdiag / |Gamma|   {}\n", num(rep.min_opposite_offdiag));
    out << fmt::format("max formula mismatch             {}\n", num(rep.max_formula_mismatch));
    out << fmt::format("max rotation error               {}\n", num(rep.max_rotation_error));
    for (const auto& n : rep.failure_notes) out << n << '\n';
    out << fmt::format("\noverall: {} (exit code {})\n", rep.failures == 0 ? "PASS" : "FAIL", rep.exit_code);
    return rep;
}

}  // namespace triosc
