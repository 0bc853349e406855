#pragma once

#include <qbound/discord.hpp>
#include <qbound/witnesses.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbound {

/// A report is satisfied iff margin >= -kSatisfactionTol.
inline constexpr double kSatisfactionTol = 1e-8;

enum class BoundId {
    Eq20,            // D2 >= E_w^2 / Tr(W^2), negativity witness
    Eq21Historical,  // D2 >= N^2 / (d-1)^2, retracted
    Eq22,            // D1 >= E_w for witnesses with -I <= W <= I
    CorrectedTrace,  // D1 >= E_w / ||W||_inf
    LemmaTrW2,       // Tr(W^2) <= d-1, retracted
};

std::string_view to_string(BoundId id);
/// Accepts the canonical names and the CLI short forms (eq21, corrected, lemma).
BoundId parse_bound_id(std::string_view text);
/// Bounds that hold for every state; a violation means a defect.
bool is_proven(BoundId id);

struct StateRef {
    explicit StateRef(BipartiteDims d) : dims(d) {}

    BipartiteDims dims;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> index;
    std::optional<std::string> file;

    static StateRef of(const BipartiteDensityMatrix& rho);
};

struct BoundReport {
    BoundId bound = BoundId::Eq20;
    std::optional<WitnessKind> witness;  // for eq22 / corrected_trace
    StateRef state = StateRef(BipartiteDims(2, 2));
    std::map<std::string, double> quantities;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool satisfied = true;
    bool vacuous = false;
    std::string notes;

    /// "eq20", or "corrected_trace[negativity]" when a witness kind is attached.
    std::string key() const;
    nlohmann::json to_json() const;
};

struct CheckContext {
    OptimizerSettings discord{};      // D2 optimizer when dA > 2
    int cq_samples = 100;             // per-state CQ samples for the trace bounds
    int trace_restarts = 4;           // restarts of trace_discord_upper
    double negativity_tol = -1.0;     // < 0: default_negativity_tol
    bool eq21_unsquared = false;      // also report D2 >= N^2/(d-1)
};

BoundReport check_eq20(const BipartiteDensityMatrix& rho, Rng rng, const CheckContext& ctx = {});
BoundReport check_eq21_historical(const BipartiteDensityMatrix& rho, Rng rng, const CheckContext& ctx = {});
BoundReport check_lemma_trw2(const BipartiteDensityMatrix& rho, const CheckContext& ctx = {});

/// rhs = E_w / ||W||_inf. Evidence: every sampled CQ state chi must satisfy
/// ||rho - chi||_1 >= rhs, and so must the trace_discord_upper estimate. lhs is the
/// smallest of those distances.
BoundReport check_corrected_trace(const BipartiteDensityMatrix& rho, WitnessKind kind, Rng rng,
                                  const CheckContext& ctx = {});

/// As check_corrected_trace with rhs = E_w. Throws DomainError when ||W||_inf > 1 + 1e-10.
BoundReport check_eq22(const BipartiteDensityMatrix& rho, const EntanglementWitness& w, Rng rng,
                       const CheckContext& ctx = {});

/// Runs one bound. For eq22 the witness is sup_normalize(build_witness(rho, kind)).
BoundReport check_bound(BoundId id, const BipartiteDensityMatrix& rho, WitnessKind kind, Rng rng,
                        const CheckContext& ctx = {});

struct HolderLink {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

struct HolderChainAudit {
    HolderLink norms;          // (a) ||rho - chi||_p ||W||_q >= |Tr[(rho - chi) W]|
    HolderLink separability;   // (b) Tr(W chi) >= -1e-8
    HolderLink witnessed;      // (c) |Tr[(rho - chi) W]| >= E_w
    std::optional<char> first_failure;  // 'a', 'b' or 'c'
    double e_w = 0.0;

    nlohmann::json to_json() const;
};

HolderChainAudit holder_chain_audit(const BipartiteDensityMatrix& rho, const ClassicalQuantumState& chi,
                                    const EntanglementWitness& w, const HolderPair& pair);

}  // namespace qbound
