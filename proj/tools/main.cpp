// heisflow command line: Smirnov decompositions of horizontal vector charges
// on the Heisenberg group.  Exit codes: 0 pass, 1 input error, 2 wrong
// pipeline (charge not solenoidal), 3 verification failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "heisflow/calculus.hpp"
#include "heisflow/presets.hpp"
#include "heisflow/serialization.hpp"

namespace fs = std::filesystem;
using namespace heis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotSolenoidal = 2;
constexpr int kExitVerify = 3;

class WriterSink : public CurveSink {
public:
    WriterSink(std::ostream& json_os, std::ostream& csv_os, double l, int n)
        : writer_(json_os, l), csv_(csv_os) {
        io::write_trajectory_csv_header(csv_, n, /*curve_column=*/true);
    }
    void consume(size_t, double weight, const HorizontalCurve& curve) override {
        writer_.entry(weight, curve);
        io::write_trajectory_csv_rows(csv_, curve, io::CsvCurveTag{next_id_++, weight});
    }
    void close() { writer_.close(); }

private:
    io::MeasureWriter writer_;
    std::ostream& csv_;
    long next_id_ = 0;
};

std::vector<HVectorField> dictionary_for(const DiscreteCharge& mu, double eps) {
    return reconstruction_dictionary(mu.n, mu.bounding_box().padded(eps + 0.5));
}

int run_decompose(const std::string& config_path, const std::string& charge_path, bool general,
                  const std::string& out_dir, const std::vector<double>& schedule_flag,
                  int threads_flag) {
    RunConfig cfg = io::read_config_json(config_path);
    std::vector<DivergenceAtom> divergence;
    DiscreteCharge mu = io::read_charge_json(charge_path, &divergence);
    if (cfg.n != 0 && cfg.n != mu.n) {
        std::cerr << "input error: config n=" << cfg.n << " does not match charge n=" << mu.n
                  << "\n";
        return kExitInput;
    }
    if (!schedule_flag.empty()) cfg.eps_schedule = schedule_flag;
    if (threads_flag > 0) cfg.threads = threads_flag;

    fs::create_directories(out_dir);
    std::ofstream curves_json(fs::path(out_dir) / "curves.json");
    std::ofstream curves_csv(fs::path(out_dir) / "curves.csv");
    std::ofstream report_json(fs::path(out_dir) / "report.json");

    const auto dict = dictionary_for(mu, cfg.eps);
    io::ReportInputs rin;
    rin.tol = cfg.verify_tolerances();
    rin.var_mu = mu.var();

    if (!general) {
        std::vector<EpsilonStage> stages;
        if (!cfg.eps_schedule.empty()) {
            stages = refine_epsilon(mu, cfg.eps_schedule, cfg.decompose_options());
            cfg.eps = cfg.eps_schedule.back();
        }
        WriterSink writer(curves_json, curves_csv, cfg.l, mu.n);
        VerifySink verify(mu, dict, cfg.eps + cfg.grid + 1e-9);
        std::vector<CurveSink*> sinks{&verify, &writer};
        RunSummary summary;
        try {
            summary = run_smirnov_flow(mu, cfg.decompose_options(), sinks);
        } catch (const NotSolenoidal& e) {
            writer.close();
            std::cerr << "charge is not solenoidal (residual " << e.residual << " > tol "
                      << e.tolerance << "); run with --general for the lifted pipeline\n";
            return kExitNotSolenoidal;
        }
        writer.close();
        const auto targets = mu.atoms.empty()
                                 ? std::vector<double>(dict.size(), 0.0)
                                 : pairing_mollified(mu, cfg.eps, dict, 0.5 * cfg.grid);
        VerifyReport rep =
            verify.finalize(targets, summary.var_mollified_estimate, mu.var(), cfg.l, rin.tol);
        rin.pipeline = "solenoidal";
        rin.verify = rep;
        rin.hull_rank = summary.hull_rank;
        if (!stages.empty()) rin.schedule = &stages;
        io::write_report_json(report_json, rin);
        if (!rep.all_pass() && !mu.atoms.empty()) {
            std::cerr << "verification failed:";
            if (!rep.pass_mass) std::cerr << " mass_identity";
            if (!rep.pass_pairing) std::cerr << " weak_reconstruction";
            if (!rep.pass_variation) std::cerr << " variation_identity";
            if (!rep.pass_support) std::cerr << " support_confinement";
            std::cerr << "\n";
            return kExitVerify;
        }
        return kExitOk;
    }

    // Lifted pipeline.
    if (divergence.empty()) divergence = extract_divergence_atoms(mu, cfg.div_extraction_grid);
    WriterSink writer(curves_json, curves_csv, cfg.l, mu.n);
    VerifySink verify(mu, dict, cfg.eps + cfg.grid + 1e-9);
    GeneralDiagnostics diag;
    std::vector<CurveSink*> sinks{&verify, &writer};
    try {
        decompose_general_streaming(mu, divergence, cfg.general_options(), diag, sinks);
    } catch (const NotSolenoidal& e) {
        writer.close();
        std::cerr << "lifted charge failed the solenoidality check (residual " << e.residual
                  << "); the supplied divergence atoms do not match the charge\n";
        return kExitNotSolenoidal;
    }
    writer.close();
    VerifyReport rep = verify.finalize(pairing_exact(mu, dict), mu.var(), mu.var(), cfg.l, rin.tol);
    // The meaningful mass identity for the lifted run lives upstairs.
    rep.mass_identity_rel_err =
        std::abs(cfg.l * diag.inner_total_weight - diag.inner_var_mollified) /
        std::max(diag.inner_var_mollified, 1e-300);
    rep.pass_mass = rep.mass_identity_rel_err <= rin.tol.mass_rel;
    rin.pipeline = "general";
    rin.verify = rep;
    rin.general = &diag;
    io::write_report_json(report_json, rin);
    if (!rep.pass_pairing || !rep.pass_mass) {
        std::cerr << "verification failed:";
        if (!rep.pass_mass) std::cerr << " mass_identity";
        if (!rep.pass_pairing) std::cerr << " weak_reconstruction";
        std::cerr << "\n";
        return kExitVerify;
    }
    return kExitOk;
}

int run_verify(const std::string& curves_path, const std::string& charge_path,
               const std::string& config_path, bool general) {
    const RunConfig cfg = io::read_config_json(config_path);
    DiscreteCharge mu = io::read_charge_json(charge_path);
    CurveMeasure nu = io::read_measure_json(curves_path);
    if (!nu.entries.empty() && nu.n != mu.n) {
        std::cerr << "input error: curves n=" << nu.n << " does not match charge n=" << mu.n
                  << "\n";
        return kExitInput;
    }
    const auto dict = dictionary_for(mu, cfg.eps);
    VerifyReport rep =
        verify_decomposition(mu, general ? std::nullopt : std::optional<double>(cfg.eps), nu, dict,
                             cfg.verify_tolerances(), 0.5 * cfg.grid);
    io::ReportInputs rin;
    rin.pipeline = general ? "general" : "solenoidal";
    rin.verify = rep;
    rin.tol = cfg.verify_tolerances();
    rin.var_mu = mu.var();
    io::write_report_json(std::cout, rin);
    const bool pass = general ? rep.pass_pairing : rep.all_pass();
    if (!pass && !nu.entries.empty()) {
        std::cerr << "verification failed:";
        if (!rep.pass_mass) std::cerr << " mass_identity";
        if (!rep.pass_pairing) std::cerr << " weak_reconstruction";
        if (!rep.pass_variation) std::cerr << " variation_identity";
        if (!rep.pass_support) std::cerr << " support_confinement";
        std::cerr << "\n";
        return kExitVerify;
    }
    return kExitOk;
}

HVectorField field_from_spec(const std::string& spec, const RunConfig& cfg, int* n_out,
                             double* gronwall_c, double* gronwall_K) {
    auto from_json = [&](const std::string& path) -> HVectorField {
        std::ifstream in(path);
        if (!in) throw io::ParseError("cannot open field spec: " + path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw io::ParseError(path + ": " + e.what());
        }
        const std::string type = j.value("type", "");
        if (j.contains("growth_c")) *gronwall_c = j["growth_c"].get<double>();
        if (j.contains("gronwall_K")) *gronwall_K = j["gronwall_K"].get<double>();
        if (type == "rotational") {
            *n_out = j.value("n", 1);
            return rotational_field(*n_out);
        }
        if (type == "lagrangian_rotational") {
            *n_out = 2;
            return lagrangian_rotational_field();
        }
        if (type == "constant") {
            *n_out = j.value("n", 1);
            Coords c;
            for (const auto& v : j["coeffs"]) c.push_back(v.get<double>());
            return constant_field(*n_out, c);
        }
        if (type == "charge") {
            DiscreteCharge mu = io::read_charge_json(j["charge"].get<std::string>());
            *n_out = mu.n;
            const double eps = j.value("epsilon", cfg.eps);
            MollifiedFlowField f(std::make_shared<DiscreteCharge>(std::move(mu)),
                                 Mollifier(*n_out, eps), cfg.th.division);
            return f.as_field();
        }
        throw io::ParseError(path + ": unknown field type '" + type + "'");
    };
    if (spec == "rotational") {
        *n_out = 1;
        return rotational_field(1);
    }
    if (spec == "lagrangian_rotational") {
        *n_out = 2;
        return lagrangian_rotational_field();
    }
    if (spec == "constant") {
        *n_out = 1;
        Coords c{1.0, 0.0};
        return constant_field(1, c);
    }
    if (spec == "dipole") {
        *n_out = 1;
        MollifiedFlowField f(std::make_shared<DiscreteCharge>(dipole_charge()),
                             Mollifier(1, cfg.eps), cfg.th.division);
        return f.as_field();
    }
    return from_json(spec);
}

int run_flow(const std::string& config_path, const std::string& field_spec,
             const std::string& seeds_path, const std::string& out_dir, double cflag,
             double Kflag) {
    const RunConfig cfg = io::read_config_json(config_path);
    double gron_c = cflag, gron_K = Kflag;
    int n = 1;
    const HVectorField field = field_from_spec(field_spec, cfg, &n, &gron_c, &gron_K);
    const std::vector<HPoint> seeds = io::read_points_json(seeds_path, n);
    FlowConfig fc;
    fc.dt = cfg.dt;
    fc.t_max = cfg.t_max > 0 ? cfg.t_max : cfg.l;
    fs::create_directories(out_dir);
    std::ofstream rep(fs::path(out_dir) / "flow_report.json");
    rep << "{\"trajectories\":[";
    for (size_t i = 0; i < seeds.size(); ++i) {
        HorizontalCurve c;
        try {
            c = integrate(seeds[i], field, fc);
        } catch (const SpeedBoundExceeded& e) {
            rep << "]}\n";
            std::cerr << "SpeedBound: " << e.what() << " (seed " << i << ")\n";
            return kExitVerify;
        }
        std::ofstream csv(fs::path(out_dir) / ("traj_" + std::to_string(i) + ".csv"));
        io::write_trajectory_csv_header(csv, n, false);
        io::write_trajectory_csv_rows(csv, c);
        if (i) rep << ',';
        rep << "{\"seed\":" << i << ",\"endpoint\":";
        rep << io::point_or_infinity_to_json(c.back());
        const CurveValidation val = validate_curve(c);
        rep << ",\"max_contact_defect\":" << io::fmt17(val.max_contact_defect)
            << ",\"max_speed\":" << io::fmt17(val.max_speed);
        if (gron_c > 0 && gron_K > 0) {
            const GronwallReport g = gronwall_certificate(c, gron_c, gron_K);
            rep << ",\"gronwall\":{\"holds\":" << (g.holds ? "true" : "false")
                << ",\"max_slack\":" << io::fmt17(g.max_slack)
                << ",\"worst_t\":" << io::fmt17(g.worst_t) << ",\"K\":" << io::fmt17(g.rate_constant)
                << '}';
        }
        rep << '}';
    }
    rep << "]}\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smirnov decomposition of horizontal vector charges on the Heisenberg group"};
    app.require_subcommand(1);

    std::string config_path, charge_path, curves_path, out_dir = "out", field_spec = "rotational",
                seeds_path, schedule_str;
    bool general = false;
    int threads = 0;
    double gron_c = 0, gron_K = 0;

    CLI::App* dec = app.add_subcommand("decompose", "decompose a charge into weighted curves");
    dec->add_option("--config", config_path)->required();
    dec->add_option("--charge", charge_path)->required();
    dec->add_flag("--general", general, "lifted pipeline for charges with measure divergence");
    dec->add_option("--out", out_dir);
    dec->add_option("--epsilon-schedule", schedule_str, "comma-separated decreasing epsilons");
    dec->add_option("--threads", threads);

    CLI::App* ver = app.add_subcommand("verify", "re-verify stored curves against a charge");
    ver->add_option("--curves", curves_path)->required();
    ver->add_option("--charge", charge_path)->required();
    ver->add_option("--config", config_path)->required();
    ver->add_flag("--general", general, "verify against the charge itself (lifted-run output)");

    CLI::App* flw = app.add_subcommand("flow", "integrate flow curves of a horizontal field");
    flw->add_option("--config", config_path)->required();
    flw->add_option("--field", field_spec, "preset name or field-spec JSON path");
    flw->add_option("--seeds", seeds_path)->required();
    flw->add_option("--out", out_dir);
    flw->add_option("--gronwall-c", gron_c);
    flw->add_option("--gronwall-K", gron_K);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dec->parsed()) {
            std::vector<double> schedule;
            if (!schedule_str.empty()) {
                std::stringstream ss(schedule_str);
                std::string tok;
                while (std::getline(ss, tok, ',')) schedule.push_back(std::stod(tok));
            }
            return run_decompose(config_path, charge_path, general, out_dir, schedule, threads);
        }
        if (ver->parsed()) return run_verify(curves_path, charge_path, config_path, general);
        if (flw->parsed()) return run_flow(config_path, field_spec, seeds_path, out_dir, gron_c, gron_K);
    } catch (const io::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DimensionMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerify;
    }
    return kExitOk;
}
