#pragma once

#include <qbound/bounds.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbound {

/// Random-state family: Haar pure states or the induced measure with a given ancilla.
struct Ensemble {
    enum class Kind { Pure, Induced };
    Kind kind = Kind::Pure;
    int ancilla = 1;

    static Ensemble pure() { return {Kind::Pure, 1}; }
    static Ensemble induced(int ancilla);
    /// "pure" or "induced:K".
    static Ensemble parse(const std::string& text);
    std::string to_string() const;

    BipartiteDensityMatrix sample(const BipartiteDims& dims, Rng& rng) const;
};

/// Sample `index` of an ensemble run with `seed`. The state uses stream
/// Rng(seed).split(index).split(0); checks use .split(1).split(slot).
BipartiteDensityMatrix ensemble_state(const Ensemble& ensemble, const BipartiteDims& dims,
                                      std::uint64_t seed, std::uint64_t index);
Rng check_rng(std::uint64_t seed, std::uint64_t index, BoundId id, WitnessKind kind);

struct CounterexampleCertificate {
    BoundReport report;
    BipartiteDensityMatrix state;
    ComplexMatrix witness;
    std::string ensemble;  // regeneration recipe: ensemble + report.state.seed/index
    CheckContext context;

    /// State document with a "certificate" object and a "witness" matrix.
    std::string to_text() const;
    std::string file_name() const;
};

/// Reads a certificate (or any state document carrying a "certificate" field).
CounterexampleCertificate parse_certificate(const std::string& text);

/// Re-runs the verifier on the stored state with the recorded seed/index.
BoundReport reverify(const CounterexampleCertificate& cert);

struct EnsembleConfig {
    std::vector<BoundId> bounds;
    std::vector<WitnessKind> witness_kinds{WitnessKind::Negativity, WitnessKind::RandomRobustness};
    BipartiteDims dims{2, 2};
    Ensemble ensemble;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    CheckContext context;
    unsigned workers = 1;
    /// Keep every record (verify) or only violations (falsify).
    bool keep_all_records = true;
};

struct BoundSummary {
    std::uint64_t satisfied = 0;
    std::uint64_t violated = 0;
    std::uint64_t vacuous = 0;
    double min_margin = 0.0;  // over non-vacuous records
    bool has_margin = false;
};

struct EnsembleResult {
    std::vector<BoundReport> records;  // index order, then bound order
    std::vector<CounterexampleCertificate> certificates;
    std::map<std::string, BoundSummary> summary;  // keyed by BoundReport::key()

    nlohmann::json summary_json(const EnsembleConfig& config) const;
};

/// A proven bound failed: carries the offending certificate for a diagnostic dump.
class ProvenBoundViolation : public Error {
public:
    explicit ProvenBoundViolation(CounterexampleCertificate cert);
    const CounterexampleCertificate& certificate() const noexcept { return cert_; }

private:
    CounterexampleCertificate cert_;
};

/// Evaluates every configured bound on every sample. Output is independent of
/// `workers`. Throws ProvenBoundViolation (lowest index first) after the run when a
/// proven bound is violated.
EnsembleResult run_ensemble(const EnsembleConfig& config);

/// Certificates for every violated record of `bound`.
std::vector<CounterexampleCertificate> falsify_search(BoundId bound, const BipartiteDims& dims,
                                                      const Ensemble& ensemble, std::uint64_t samples,
                                                      std::uint64_t seed, const CheckContext& ctx = {},
                                                      unsigned workers = 1);

/// One JSON object per line.
std::string records_to_jsonl(const std::vector<BoundReport>& records);
/// CSV with a header row; quantity columns are the sorted union of all quantity names.
std::string records_to_table(const std::vector<BoundReport>& records);

}  // namespace qbound
