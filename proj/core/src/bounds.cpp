#include <qbound/bounds.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbound {

std::string_view to_string(BoundId id) {
    switch (id) {
        case BoundId::Eq20: return "eq20";
        case BoundId::Eq21Historical: return "eq21_historical";
        case BoundId::Eq22: return "eq22";
        case BoundId::CorrectedTrace: return "corrected_trace";
        case BoundId::LemmaTrW2: return "lemma_trw2";
    }
    return "eq20";
}

BoundId parse_bound_id(std::string_view text) {
    if (text == "eq20") return BoundId::Eq20;
    if (text == "eq21" || text == "eq21_historical") return BoundId::Eq21Historical;
    if (text == "eq22") return BoundId::Eq22;
    if (text == "corrected" || text == "corrected_trace") return BoundId::CorrectedTrace;
    if (text == "lemma" || text == "lemma_trw2") return BoundId::LemmaTrW2;
    throw ParseError(fmt::format("unknown bound '{}'", text));
}

bool is_proven(BoundId id) {
    return id == BoundId::Eq20 || id == BoundId::Eq22 || id == BoundId::CorrectedTrace;
}

StateRef StateRef::of(const BipartiteDensityMatrix& rho) {
    StateRef ref(rho.dims());
    if (rho.provenance()) {
        ref.seed = rho.provenance()->seed;
        ref.index = rho.provenance()->index;
    }
    return ref;
}

std::string BoundReport::key() const {
    std::string k(to_string(bound));
    if (witness) k += fmt::format("[{}]", to_string(*witness));
    return k;
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["bound_id"] = to_string(bound);
    j["witness"] = witness ? nlohmann::json(to_string(*witness)) : nlohmann::json(nullptr);
    j["dims"] = state.dims.to_string();
    j["seed"] = state.seed ? nlohmann::json(*state.seed) : nlohmann::json(nullptr);
    j["index"] = state.index ? nlohmann::json(*state.index) : nlohmann::json(nullptr);
    if (state.file) j["file"] = *state.file;
    j["quantities"] = quantities;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["satisfied"] = satisfied;
    j["vacuous"] = vacuous;
    j["notes"] = notes;
    return j;
}

namespace {

BoundReport start_report(BoundId id, const BipartiteDensityMatrix& rho) {
    BoundReport r;
    r.bound = id;
    r.state = StateRef::of(rho);
    r.quantities["d"] = rho.dims().min_side();
    return r;
}

void finalize(BoundReport& r) {
    r.margin = r.lhs - r.rhs;
    r.satisfied = r.margin >= -kSatisfactionTol;
}

BoundReport vacuous(BoundReport r, const PPTError& e) {
    r.vacuous = true;
    r.satisfied = true;
    r.lhs = r.rhs = r.margin = 0.0;
    r.quantities["N"] = 0.0;
    r.quantities["lambda_min"] = e.lambda_min();
    r.notes = "no witness: state is PPT";
    return r;
}

void add_witness_quantities(BoundReport& r, const EntanglementWitness& w) {
    r.quantities["E_w"] = w.e_w;
    r.quantities["trW2"] = w.hs_sq;
    r.quantities["sup_norm"] = w.sup_norm;
    if (w.neg_count) r.quantities["m"] = *w.neg_count;
}

}  // namespace

BoundReport check_eq20(const BipartiteDensityMatrix& rho, Rng rng, const CheckContext& ctx) {
    BoundReport r = start_report(BoundId::Eq20, rho);
    EntanglementWitness w{ComplexMatrix(), rho.dims()};
    try {
        w = negativity_witness(rho, ctx.negativity_tol);
    } catch (const PPTError& e) {
        return vacuous(std::move(r), e);
    }
    Rng discord_rng = rng.split(0);
    const auto d2 = geometric_discord_2norm(rho, discord_rng, ctx.discord);
    add_witness_quantities(r, w);
    r.quantities["N"] = negativity(rho);
    r.quantities["D2"] = d2.value;
    r.lhs = d2.value;
    r.rhs = w.e_w * w.e_w / w.hs_sq;
    finalize(r);
    r.notes = fmt::format("D2 via {}", to_string(d2.method));
    return r;
}

BoundReport check_eq21_historical(const BipartiteDensityMatrix& rho, Rng rng, const CheckContext& ctx) {
    BoundReport r = start_report(BoundId::Eq21Historical, rho);
    EntanglementWitness w{ComplexMatrix(), rho.dims()};
    try {
        w = negativity_witness(rho, ctx.negativity_tol);
    } catch (const PPTError& e) {
        return vacuous(std::move(r), e);
    }
    Rng discord_rng = rng.split(0);
    const auto d2 = geometric_discord_2norm(rho, discord_rng, ctx.discord);
    const double n = negativity(rho);
    const double dm1 = rho.dims().min_side() - 1.0;
    add_witness_quantities(r, w);
    r.quantities["N"] = n;
    r.quantities["D2"] = d2.value;
    r.lhs = d2.value;
    r.rhs = n * n / (dm1 * dm1);
    finalize(r);

    // Cross-link with eq20 and the lemma on the same state.
    const double eq20_rhs = w.e_w * w.e_w / w.hs_sq;
    r.quantities["eq20_rhs"] = eq20_rhs;
    r.quantities["eq20_margin"] = d2.value - eq20_rhs;
    const int m = *w.neg_count;
    std::string notes = fmt::format("m = {} {} d-1 = {}", m, m > dm1 ? ">" : "<=", static_cast<int>(dm1));
    if (!r.satisfied) {
        notes += d2.value - eq20_rhs >= -kSatisfactionTol ? "; eq20 satisfied on this state"
                                                          : "; eq20 VIOLATED on this state";
    }
    if (ctx.eq21_unsquared) {
        const double rhs1 = n * n / dm1;
        r.quantities["rhs_unsquared"] = rhs1;
        r.quantities["margin_unsquared"] = d2.value - rhs1;
    }
    r.notes = std::move(notes);
    return r;
}

BoundReport check_lemma_trw2(const BipartiteDensityMatrix& rho, const CheckContext& ctx) {
    BoundReport r = start_report(BoundId::LemmaTrW2, rho);
    EntanglementWitness w{ComplexMatrix(), rho.dims()};
    try {
        w = negativity_witness(rho, ctx.negativity_tol);
    } catch (const PPTError& e) {
        return vacuous(std::move(r), e);
    }
    add_witness_quantities(r, w);
    r.quantities["N"] = negativity(rho);
    r.lhs = rho.dims().min_side() - 1.0;
    r.rhs = static_cast<double>(*w.neg_count);
    finalize(r);
    r.notes = fmt::format("Tr(W^2) = {:.12g}", w.hs_sq);
    return r;
}

namespace {

// Shared evidence layers of the trace-norm bounds.
void trace_layers(BoundReport& r, const BipartiteDensityMatrix& rho, const EntanglementWitness& w,
                  double e_w, double rhs, Rng rng, const CheckContext& ctx) {
    Rng cq_rng = rng.split(1);
    double min_dist = std::numeric_limits<double>::infinity();
    double min_product_margin = std::numeric_limits<double>::infinity();
    double min_w_chi = std::numeric_limits<double>::infinity();
    int failures = 0;
    for (int k = 0; k < ctx.cq_samples; ++k) {
        Rng sample = cq_rng.split(static_cast<std::uint64_t>(k));
        const auto chi = random_cq(rho.dims(), sample);
        const double dist = trace_distance_raw(rho, chi.assembled);
        min_dist = std::min(min_dist, dist);
        min_product_margin = std::min(min_product_margin, dist * w.sup_norm - e_w);
        min_w_chi = std::min(min_w_chi, witness_expectation(w.matrix, chi.assembled.matrix()));
        if (dist - rhs < -kSatisfactionTol) ++failures;
    }
    Rng upper_rng = rng.split(2);
    const auto upper = trace_discord_upper(rho, ctx.trace_restarts, upper_rng);

    r.quantities["E_w"] = e_w;
    r.quantities["sup_norm"] = w.sup_norm;
    r.quantities["trW2"] = w.hs_sq;
    if (w.neg_count) r.quantities["m"] = *w.neg_count;
    r.quantities["N"] = negativity(rho);
    r.quantities["D1_upper"] = upper.value;
    r.quantities["cq_samples"] = ctx.cq_samples;
    r.quantities["chi_failures"] = failures;
    if (ctx.cq_samples > 0) {
        r.quantities["chi_min_distance"] = min_dist;
        r.quantities["chi_min_product_margin"] = min_product_margin;
        r.quantities["chi_min_witness_value"] = min_w_chi;
    }
    r.lhs = std::min(min_dist, upper.value);
    r.rhs = rhs;
    finalize(r);
    r.notes = fmt::format("witness {}{}; per-chi failures {}; D1_upper {}", to_string(w.kind),
                          w.sup_normalized ? " (sup-normalized)" : "", failures,
                          upper.value - rhs >= -kSatisfactionTol ? "ok" : "FAILS");
}

}  // namespace

BoundReport check_corrected_trace(const BipartiteDensityMatrix& rho, WitnessKind kind, Rng rng,
                                  const CheckContext& ctx) {
    BoundReport r = start_report(BoundId::CorrectedTrace, rho);
    r.witness = kind;
    EntanglementWitness w{ComplexMatrix(), rho.dims()};
    try {
        w = build_witness(rho, kind, ctx.negativity_tol);
    } catch (const PPTError& e) {
        return vacuous(std::move(r), e);
    }
    trace_layers(r, rho, w, w.e_w, w.e_w / w.sup_norm, rng, ctx);
    return r;
}

BoundReport check_eq22(const BipartiteDensityMatrix& rho, const EntanglementWitness& w, Rng rng,
                       const CheckContext& ctx) {
    if (w.sup_norm > 1.0 + 1e-10) {
        throw DomainError(fmt::format("witness has ||W||_inf = {:.12g} > 1, outside -I <= W <= I",
                                      w.sup_norm),
                          w.sup_norm);
    }
    BoundReport r = start_report(BoundId::Eq22, rho);
    r.witness = w.kind;
    const double e_w = witnessed_entanglement(rho, w);
    trace_layers(r, rho, w, e_w, e_w, rng, ctx);
    return r;
}

BoundReport check_bound(BoundId id, const BipartiteDensityMatrix& rho, WitnessKind kind, Rng rng,
                        const CheckContext& ctx) {
    switch (id) {
        case BoundId::Eq20: return check_eq20(rho, rng, ctx);
        case BoundId::Eq21Historical: return check_eq21_historical(rho, rng, ctx);
        case BoundId::LemmaTrW2: return check_lemma_trw2(rho, ctx);
        case BoundId::CorrectedTrace: return check_corrected_trace(rho, kind, rng, ctx);
        case BoundId::Eq22: {
            try {
                return check_eq22(rho, sup_normalize(build_witness(rho, kind, ctx.negativity_tol)), rng, ctx);
            } catch (const PPTError& e) {
                BoundReport r = start_report(BoundId::Eq22, rho);
                r.witness = kind;
                return vacuous(std::move(r), e);
            }
        }
    }
    throw Error("unknown bound");
}

nlohmann::json HolderChainAudit::to_json() const {
    auto link = [](const HolderLink& l) {
        return nlohmann::json{{"lhs", l.lhs}, {"rhs", l.rhs}, {"holds", l.holds}};
    };
    nlohmann::json j;
    j["a_norms"] = link(norms);
    j["b_separability"] = link(separability);
    j["c_witnessed"] = link(witnessed);
    j["e_w"] = e_w;
    j["first_failure"] = first_failure ? nlohmann::json(std::string(1, *first_failure)) : nlohmann::json(nullptr);
    return j;
}

HolderChainAudit holder_chain_audit(const BipartiteDensityMatrix& rho, const ClassicalQuantumState& chi,
                                    const EntanglementWitness& w, const HolderPair& pair) {
    if (!(rho.dims() == chi.assembled.dims()) || w.matrix.rows() != rho.side()) {
        throw DimsError("holder_chain_audit: state, CQ state and witness dimensions disagree");
    }
    const ComplexMatrix diff = rho.matrix() - chi.assembled.matrix();
    const double overlap = std::abs(trace_of_product(diff, w.matrix));
    HolderChainAudit audit;
    audit.e_w = witnessed_entanglement(rho, w);
    audit.norms = {schatten_norm(diff, pair.p()) * schatten_norm(w.matrix, pair.q()), overlap};
    audit.norms.holds = audit.norms.lhs - audit.norms.rhs >= -kSatisfactionTol;
    audit.separability = {witness_expectation(w.matrix, chi.assembled.matrix()), 0.0};
    audit.separability.holds = audit.separability.lhs >= -kSatisfactionTol;
    audit.witnessed = {overlap, audit.e_w};
    audit.witnessed.holds = audit.witnessed.lhs - audit.witnessed.rhs >= -kSatisfactionTol;
    if (!audit.norms.holds) {
        audit.first_failure = 'a';
    } else if (!audit.separability.holds) {
        audit.first_failure = 'b';
    } else if (!audit.witnessed.holds) {
        audit.first_failure = 'c';
    }
    return audit;
}

}  // namespace qbound
