#include <qbound/cli.hpp>
#include <qbound/state_io.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace qbound::cli {

namespace {

struct Expected {
    const char* name;
    double value;
    double computed;
};

std::uint64_t require_seed(const RunConfig& config, const char* command) {
    if (!config.seed) throw ConfigError(fmt::format("{}: --seed is required", command));
    return *config.seed;
}

std::string render_records(const std::vector<BoundReport>& records, OutputFormat format) {
    return format == OutputFormat::Table ? records_to_table(records) : records_to_jsonl(records);
}

const char* records_file_name(OutputFormat format) {
    return format == OutputFormat::Table ? "records.csv" : "records.jsonl";
}

EnsembleConfig ensemble_config(const RunConfig& config, const char* command, bool keep_all) {
    if (!config.dims) throw ConfigError(fmt::format("{}: --dims is required", command));
    if (config.samples < 1) throw ConfigError(fmt::format("{}: --samples must be >= 1", command));
    if (config.bounds.empty()) throw ConfigError(fmt::format("{}: at least one --bound is required", command));
    EnsembleConfig e;
    e.bounds = config.bounds;
    e.witness_kinds = config.witness_kinds;
    e.dims = *config.dims;
    e.ensemble = config.ensemble;
    e.samples = config.samples;
    e.seed = require_seed(config, command);
    e.context = config.context;
    e.workers = config.workers;
    e.keep_all_records = keep_all;
    return e;
}

void write_outputs(const RunConfig& config, const EnsembleConfig& ec, const EnsembleResult& result,
                   std::ostream& out, std::ostream& diag) {
    const std::string records = render_records(result.records, config.format);
    const std::string summary = result.summary_json(ec).dump(2) + "\n";
    if (config.out) {
        const auto& dir = *config.out;
        write_text_file(dir / records_file_name(config.format), records);
        write_text_file(dir / "summary.json", summary);
        for (const auto& cert : result.certificates) {
            write_text_file(dir / "certificates" / cert.file_name(), cert.to_text());
        }
        out << summary;
    } else {
        out << records;
        diag << summary;
    }
}

}  // namespace

int report_proven_violation(const RunConfig& config, const ProvenBoundViolation& v, std::ostream& diag) {
    diag << "error: " << v.what() << "\n";
    diag << "diagnostic dump:\n" << v.certificate().to_text();
    if (config.out) {
        write_text_file(*config.out / "violations" / v.certificate().file_name(), v.certificate().to_text());
    }
    return kExitProvenViolation;
}

int cmd_reproduce_phi_plus(std::ostream& out, std::ostream& diag) {
    const auto phi = bell_phi_plus(2);
    const auto report = check_eq20(phi, Rng(0));
    const auto witness = negativity_witness(phi);
    const Expected rows[] = {
        {"D2", 0.5, report.quantities.at("D2")},
        {"E_w", 0.5, witness.e_w},
        {"Tr(W^2)", 1.0, witness.hs_sq},
        {"eq20 rhs", 0.25, report.rhs},
        {"eq20 margin", 0.25, report.margin},
    };
    out << "phi_plus (2x2): D2 >= E_w^2 / Tr(W^2)\n";
    bool all_match = true;
    for (const auto& row : rows) {
        const double diff = row.computed - row.value;
        const bool ok = std::abs(diff) <= 1e-9;
        all_match = all_match && ok;
        out << fmt::format("{:<12} = {:.15f}  expected {:.15f}  {}\n", row.name, row.computed, row.value,
                           ok ? "ok" : fmt::format("MISMATCH (diff {:.3e})", diff));
    }
    out << fmt::format("eq20 satisfied: {}\n", report.satisfied ? "yes" : "no");
    if (!all_match) {
        diag << "reproduce: computed values differ from the worked example\n";
        return kExitMismatch;
    }
    return kExitOk;
}

int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    if (!config.input) throw ConfigError("compute: --input is required");
    const StateDocument doc = read_state_file(*config.input);
    const auto& rho = doc.state;

    std::optional<CounterexampleCertificate> cert;
    if (doc.extra.contains("certificate")) {
        std::ifstream in(*config.input);
        std::stringstream buffer;
        buffer << in.rdbuf();
        cert = parse_certificate(buffer.str());
    }
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    if (config.seed) {
        seed = *config.seed;
        index = rho.provenance() ? rho.provenance()->index : 0;
    } else if (rho.provenance()) {
        seed = rho.provenance()->seed;
        index = rho.provenance()->index;
    } else {
        throw ConfigError("compute: --seed is required unless the state file records seed and index");
    }
    const CheckContext ctx = cert ? cert->context : config.context;
    diag << fmt::format("compute: {} ({}), seed {} index {}\n", config.input->string(), rho.dims().to_string(),
                        seed, index);

    std::vector<BoundReport> records;
    const BoundId all[] = {BoundId::Eq20, BoundId::Eq21Historical, BoundId::LemmaTrW2, BoundId::CorrectedTrace,
                           BoundId::Eq22};
    for (const BoundId id : all) {
        const bool per_kind = id == BoundId::CorrectedTrace || id == BoundId::Eq22;
        const std::vector<WitnessKind> kinds =
            per_kind ? config.witness_kinds : std::vector<WitnessKind>{WitnessKind::Negativity};
        for (const WitnessKind kind : kinds) {
            auto r = check_bound(id, rho, kind, check_rng(seed, index, id, kind), ctx);
            r.state.file = config.input->string();
            records.push_back(std::move(r));
        }
    }

    nlohmann::json summary;
    summary["record"] = "state_summary";
    summary["file"] = config.input->string();
    summary["dims"] = rho.dims().to_string();
    summary["seed"] = seed;
    summary["index"] = index;
    summary["N"] = negativity(rho);
    Rng d2_rng = check_rng(seed, index, BoundId::Eq20, WitnessKind::Negativity).split(0);
    summary["D2"] = geometric_discord_2norm(rho, d2_rng, ctx.discord).value;
    try {
        const auto w = negativity_witness(rho, ctx.negativity_tol);
        summary["m"] = *w.neg_count;
        summary["E_w"] = w.e_w;
        summary["trW2"] = w.hs_sq;
        summary["sup_norm"] = w.sup_norm;
    } catch (const PPTError&) {
        summary["m"] = 0;
        summary["E_w"] = 0.0;
        summary["trW2"] = 0.0;
        summary["sup_norm"] = 0.0;
    }
    Rng upper_rng = check_rng(seed, index, BoundId::CorrectedTrace, WitnessKind::Negativity).split(2);
    summary["D1_upper"] = trace_discord_upper(rho, ctx.trace_restarts, upper_rng).value;
    nlohmann::json margins = nlohmann::json::object();
    for (const auto& r : records) margins[r.key()] = r.margin;
    summary["margins"] = margins;

    int status = kExitOk;
    if (cert) {
        const auto again = reverify(*cert);
        const double diff = std::abs(again.margin - cert->report.margin);
        summary["certificate"] = {{"bound", cert->report.key()},
                                  {"stored_margin", cert->report.margin},
                                  {"recomputed_margin", again.margin},
                                  {"match", diff <= 1e-10}};
        if (diff > 1e-10) {
            diag << fmt::format("compute: certificate margin mismatch ({:.3e})\n", diff);
            status = kExitMismatch;
        }
    }

    std::string text = render_records(records, config.format);
    if (config.format == OutputFormat::Records) text = summary.dump() + "\n" + text;
    if (config.out) {
        write_text_file(*config.out, text);
    } else {
        out << text;
    }
    return status;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    const EnsembleConfig ec = ensemble_config(config, "verify", true);
    diag << fmt::format("verify: {} samples of {} at {}, seed {}\n", ec.samples, ec.ensemble.to_string(),
                        ec.dims.to_string(), ec.seed);
    try {
        const EnsembleResult result = run_ensemble(ec);
        write_outputs(config, ec, result, out, diag);
    } catch (const ProvenBoundViolation& v) {
        return report_proven_violation(config, v, diag);
    }
    return kExitOk;
}

int cmd_falsify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    const EnsembleConfig ec = ensemble_config(config, "falsify", false);
    diag << fmt::format("falsify: {} samples of {} at {}, seed {}\n", ec.samples, ec.ensemble.to_string(),
                        ec.dims.to_string(), ec.seed);
    try {
        const EnsembleResult result = run_ensemble(ec);
        write_outputs(config, ec, result, out, diag);
        if (result.certificates.empty()) {
            diag << "falsify: none found in budget\n";
            return kExitNoneFound;
        }
        diag << fmt::format("falsify: {} certificate(s)\n", result.certificates.size());
    } catch (const ProvenBoundViolation& v) {
        return report_proven_violation(config, v, diag);
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
    CLI::App app{"Entanglement-witness and geometric-discord bound checker", "qbound"};
    app.require_subcommand(1);

    RunConfig config;
    std::string dims_text;
    std::string ensemble_text = "pure";
    std::vector<std::string> bound_names;
    std::string witness_text = "both";
    std::string format_text = "records";
    std::string input_text;
    std::string out_text;
    std::uint64_t seed = 0;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());

    auto add_ensemble_flags = [&](CLI::App* sub) {
        sub->add_option("--dims", dims_text, "Subsystem dimensions, e.g. 2x4")->required();
        sub->add_option("--ensemble", ensemble_text, "pure or induced:K")->capture_default_str();
        sub->add_option("--samples", config.samples, "Number of ensemble samples")->required();
        sub->add_option("--bound", bound_names, "eq20, eq21, eq22, corrected, lemma")
            ->delimiter(',')
            ->required();
        sub->add_option("--workers", workers, "Worker threads (does not affect output)")->capture_default_str();
    };
    auto add_common_flags = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "64-bit generator seed");
        sub->add_option("--restarts", config.context.discord.restarts, "D2 optimizer restarts")
            ->capture_default_str();
        sub->add_option("--trace-restarts", config.context.trace_restarts, "Trace-norm search restarts")
            ->capture_default_str();
        sub->add_option("--cq-samples", config.context.cq_samples, "CQ samples per state for trace bounds")
            ->capture_default_str();
        sub->add_option("--witness", witness_text, "negativity, random_robustness or both")
            ->capture_default_str();
        sub->add_flag("--eq21-unsquared", config.context.eq21_unsquared,
                      "Also report D2 >= N^2/(d-1)");
        sub->add_option("--out", out_text, "Output file (compute) or directory (verify, falsify)");
        sub->add_option("--format", format_text, "records or table")->capture_default_str();
    };

    auto* reproduce = app.add_subcommand("reproduce", "Reproduce the phi_plus worked example");
    auto* compute = app.add_subcommand("compute", "All quantities and bound margins for one state file");
    compute->add_option("--input,input", input_text, "State or certificate file")->required();
    add_common_flags(compute);
    auto* verify = app.add_subcommand("verify", "Check bounds over a seeded ensemble");
    add_ensemble_flags(verify);
    add_common_flags(verify);
    auto* falsify = app.add_subcommand("falsify", "Search a seeded ensemble for counterexamples");
    add_ensemble_flags(falsify);
    add_common_flags(falsify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        std::ostringstream err;
        const int code = app.exit(e, msg, err);
        out << msg.str();
        diag << err.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!dims_text.empty()) config.dims = BipartiteDims::parse(dims_text);
        config.ensemble = Ensemble::parse(ensemble_text);
        for (const auto& b : bound_names) config.bounds.push_back(parse_bound_id(b));
        if (witness_text == "both") {
            config.witness_kinds = {WitnessKind::Negativity, WitnessKind::RandomRobustness};
        } else {
            const WitnessKind kind = parse_witness_kind(witness_text);
            if (kind == WitnessKind::Custom) throw ConfigError("--witness custom is not supported here");
            config.witness_kinds = {kind};
        }
        if (format_text == "records") {
            config.format = OutputFormat::Records;
        } else if (format_text == "table") {
            config.format = OutputFormat::Table;
        } else {
            throw ConfigError("--format must be records or table");
        }
        for (const CLI::App* sub : {compute, verify, falsify}) {
            if (sub->parsed() && sub->count("--seed") > 0) config.seed = seed;
        }
        if (!input_text.empty()) config.input = input_text;
        if (!out_text.empty()) config.out = out_text;
        config.workers = std::max(1u, workers);
        if (config.context.discord.restarts < 1 || config.context.trace_restarts < 1 ||
            config.context.cq_samples < 0) {
            throw ConfigError("restarts must be >= 1 and cq-samples >= 0");
        }
    } catch (const Error& e) {
        diag << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (reproduce->parsed()) return cmd_reproduce_phi_plus(out, diag);
        if (compute->parsed()) {
            config.command = Command::Compute;
            return cmd_compute(config, out, diag);
        }
        if (verify->parsed()) {
            config.command = Command::Verify;
            return cmd_verify(config, out, diag);
        }
        config.command = Command::Falsify;
        return cmd_falsify(config, out, diag);
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        diag << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        diag << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
}

}  // namespace qbound::cli
