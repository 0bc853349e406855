#include <qbound/ensemble.hpp>
#include <qbound/state_io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace qbound {

Ensemble Ensemble::induced(int ancilla) {
    if (ancilla < 1) throw ParseError(fmt::format("induced ancilla must be >= 1, got {}", ancilla));
    return {Kind::Induced, ancilla};
}

Ensemble Ensemble::parse(const std::string& text) {
    if (text == "pure") return pure();
    const std::string prefix = "induced:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string k = text.substr(prefix.size());
        try {
            std::size_t used = 0;
            const int ancilla = std::stoi(k, &used);
            if (used == k.size()) return induced(ancilla);
        } catch (const std::logic_error&) {
        }
    }
    throw ParseError("ensemble must be 'pure' or 'induced:K', got '" + text + "'");
}

std::string Ensemble::to_string() const {
    return kind == Kind::Pure ? std::string("pure") : fmt::format("induced:{}", ancilla);
}

BipartiteDensityMatrix Ensemble::sample(const BipartiteDims& dims, Rng& rng) const {
    return kind == Kind::Pure ? random_pure(dims, rng) : random_mixed_induced(dims, ancilla, rng);
}

BipartiteDensityMatrix ensemble_state(const Ensemble& ensemble, const BipartiteDims& dims,
                                      std::uint64_t seed, std::uint64_t index) {
    Rng rng = Rng(seed).split(index).split(0);
    return ensemble.sample(dims, rng).with_provenance({seed, index});
}

Rng check_rng(std::uint64_t seed, std::uint64_t index, BoundId id, WitnessKind kind) {
    const auto slot = static_cast<std::uint64_t>(id) * 4 + static_cast<std::uint64_t>(kind);
    return Rng(seed).split(index).split(1).split(slot);
}

namespace {

nlohmann::json context_json(const CheckContext& c) {
    return {{"restarts", c.discord.restarts},
            {"max_iterations", c.discord.max_iterations},
            {"gradient_tol", c.discord.gradient_tol},
            {"cq_samples", c.cq_samples},
            {"trace_restarts", c.trace_restarts},
            {"negativity_tol", c.negativity_tol},
            {"eq21_unsquared", c.eq21_unsquared}};
}

CheckContext context_from(const nlohmann::json& j) {
    CheckContext c;
    c.discord.restarts = j.at("restarts").get<int>();
    c.discord.max_iterations = j.at("max_iterations").get<int>();
    c.discord.gradient_tol = j.at("gradient_tol").get<double>();
    c.cq_samples = j.at("cq_samples").get<int>();
    c.trace_restarts = j.at("trace_restarts").get<int>();
    c.negativity_tol = j.at("negativity_tol").get<double>();
    c.eq21_unsquared = j.at("eq21_unsquared").get<bool>();
    return c;
}

WitnessKind slot_kind(const BoundReport& r) { return r.witness.value_or(WitnessKind::Negativity); }

}  // namespace

std::string CounterexampleCertificate::to_text() const {
    nlohmann::json cert = report.to_json();
    cert["ensemble"] = ensemble;
    cert["context"] = context_json(context);
    nlohmann::json extra;
    extra["certificate"] = cert;
    if (report.state.seed) extra["seed"] = *report.state.seed;
    if (report.state.index) extra["index"] = *report.state.index;
    extra["label"] = fmt::format("counterexample {}", report.key());
    std::vector<std::pair<std::string, ComplexMatrix>> matrices;
    if (witness.size() > 0) matrices.emplace_back("witness", witness);
    return matrix_document_to_text(state.matrix(), state.dims(), extra, matrices);
}

std::string CounterexampleCertificate::file_name() const {
    std::string name(to_string(report.bound));
    if (report.witness) name += fmt::format("-{}", to_string(*report.witness));
    name += fmt::format("-{:06d}.json", report.state.index.value_or(0));
    return name;
}

CounterexampleCertificate parse_certificate(const std::string& text) {
    StateDocument doc = parse_state_document(text);
    if (!doc.extra.contains("certificate")) throw ParseError("document has no 'certificate' field");
    const auto& c = doc.extra["certificate"];
    try {
        BoundReport r;
        r.bound = parse_bound_id(c.at("bound_id").get<std::string>());
        if (!c.at("witness").is_null()) r.witness = parse_witness_kind(c.at("witness").get<std::string>());
        r.state = StateRef::of(doc.state);
        r.quantities = c.at("quantities").get<std::map<std::string, double>>();
        r.lhs = c.at("lhs").get<double>();
        r.rhs = c.at("rhs").get<double>();
        r.margin = c.at("margin").get<double>();
        r.satisfied = c.at("satisfied").get<bool>();
        r.vacuous = c.at("vacuous").get<bool>();
        r.notes = c.at("notes").get<std::string>();
        ComplexMatrix w;
        if (doc.extra.contains("witness")) w = parse_matrix_field(doc.extra["witness"], "witness");
        return {std::move(r), std::move(doc.state), std::move(w), c.at("ensemble").get<std::string>(),
                context_from(c.at("context"))};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("field 'certificate': {}", e.what()));
    }
}

BoundReport reverify(const CounterexampleCertificate& cert) {
    const auto seed = cert.report.state.seed.value_or(0);
    const auto index = cert.report.state.index.value_or(0);
    const WitnessKind kind = slot_kind(cert.report);
    return check_bound(cert.report.bound, cert.state, kind, check_rng(seed, index, cert.report.bound, kind),
                       cert.context);
}

ProvenBoundViolation::ProvenBoundViolation(CounterexampleCertificate cert)
    : Error(fmt::format("proven bound {} violated at index {} (margin {:.6e})", cert.report.key(),
                        cert.report.state.index.value_or(0), cert.report.margin)),
      cert_(std::move(cert)) {}

namespace {

ComplexMatrix witness_for(const BoundReport& r, const BipartiteDensityMatrix& rho, const CheckContext& ctx) {
    if (r.vacuous) return {};
    const WitnessKind kind = slot_kind(r);
    auto w = build_witness(rho, kind, ctx.negativity_tol);
    if (r.bound == BoundId::Eq22) w = sup_normalize(w);
    return w.matrix;
}

struct Tally {
    std::string key;
    bool vacuous;
    bool satisfied;
    double margin;
};

struct SampleOutcome {
    std::vector<Tally> tallies;  // every report, kept or not
    std::vector<BoundReport> reports;
    std::vector<CounterexampleCertificate> certificates;
};

SampleOutcome evaluate_sample(const EnsembleConfig& config, std::uint64_t index) {
    SampleOutcome out;
    const auto rho = ensemble_state(config.ensemble, config.dims, config.seed, index);
    for (const BoundId id : config.bounds) {
        const bool per_kind = id == BoundId::CorrectedTrace || id == BoundId::Eq22;
        const std::vector<WitnessKind> kinds =
            per_kind ? config.witness_kinds : std::vector<WitnessKind>{WitnessKind::Negativity};
        for (const WitnessKind kind : kinds) {
            BoundReport r = check_bound(id, rho, kind, check_rng(config.seed, index, id, kind), config.context);
            if (!r.satisfied) {
                out.certificates.push_back({r, rho, witness_for(r, rho, config.context),
                                            config.ensemble.to_string(), config.context});
            }
            out.tallies.push_back({r.key(), r.vacuous, r.satisfied, r.margin});
            if (config.keep_all_records || !r.satisfied) out.reports.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& config) {
    if (config.samples < 1) throw Error("samples must be >= 1");
    std::vector<SampleOutcome> outcomes(config.samples);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= config.samples) return;
            try {
                outcomes[i] = evaluate_sample(config, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(config.samples);
                return;
            }
        }
    };
    const unsigned workers = std::max(1u, config.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    EnsembleResult result;
    for (auto& o : outcomes) {
        for (const auto& t : o.tallies) {
            auto& s = result.summary[t.key];
            if (t.vacuous) {
                ++s.vacuous;
            } else {
                t.satisfied ? ++s.satisfied : ++s.violated;
                s.min_margin = s.has_margin ? std::min(s.min_margin, t.margin) : t.margin;
                s.has_margin = true;
            }
        }
        for (auto& r : o.reports) result.records.push_back(std::move(r));
        for (auto& c : o.certificates) {
            if (is_proven(c.report.bound)) throw ProvenBoundViolation(std::move(c));
            result.certificates.push_back(std::move(c));
        }
    }
    return result;
}

nlohmann::json EnsembleResult::summary_json(const EnsembleConfig& config) const {
    nlohmann::json j;
    j["dims"] = config.dims.to_string();
    j["ensemble"] = config.ensemble.to_string();
    j["samples"] = config.samples;
    j["seed"] = config.seed;
    nlohmann::json bounds = nlohmann::json::object();
    for (const auto& [key, s] : summary) {
        bounds[key] = {{"satisfied", s.satisfied},
                       {"violated", s.violated},
                       {"vacuous", s.vacuous},
                       {"min_margin", s.has_margin ? nlohmann::json(s.min_margin) : nlohmann::json(nullptr)}};
    }
    j["bounds"] = bounds;
    j["certificates"] = certificates.size();
    return j;
}

std::vector<CounterexampleCertificate> falsify_search(BoundId bound, const BipartiteDims& dims,
                                                      const Ensemble& ensemble, std::uint64_t samples,
                                                      std::uint64_t seed, const CheckContext& ctx,
                                                      unsigned workers) {
    EnsembleConfig config;
    config.bounds = {bound};
    config.dims = dims;
    config.ensemble = ensemble;
    config.samples = samples;
    config.seed = seed;
    config.context = ctx;
    config.workers = workers;
    config.keep_all_records = false;
    return run_ensemble(config).certificates;
}

std::string records_to_jsonl(const std::vector<BoundReport>& records) {
    std::string out;
    for (const auto& r : records) out += r.to_json().dump() + "\n";
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string number(double x) { return nlohmann::json(x).dump(); }

}  // namespace

std::string records_to_table(const std::vector<BoundReport>& records) {
    std::set<std::string> names;
    for (const auto& r : records)
        for (const auto& [k, v] : r.quantities) names.insert(k);
    std::string out = "bound_id,witness,dims,seed,index,lhs,rhs,margin,satisfied,vacuous";
    for (const auto& n : names) out += "," + n;
    out += ",notes\n";
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}", to_string(r.bound),
                           r.witness ? std::string(to_string(*r.witness)) : std::string(),
                           r.state.dims.to_string(), r.state.seed ? std::to_string(*r.state.seed) : "",
                           r.state.index ? std::to_string(*r.state.index) : "", number(r.lhs), number(r.rhs),
                           number(r.margin), r.satisfied ? "true" : "false", r.vacuous ? "true" : "false");
        for (const auto& n : names) {
            const auto it = r.quantities.find(n);
            out += "," + (it == r.quantities.end() ? std::string() : number(it->second));
        }
        out += "," + csv_field(r.notes) + "\n";
    }
    return out;
}

}  // namespace qbound
