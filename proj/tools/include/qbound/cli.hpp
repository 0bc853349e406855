#pragma once

#include <qbound/ensemble.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitNoneFound = 2;
inline constexpr int kExitProvenViolation = 3;
inline constexpr int kExitConfig = 64;

enum class Command { Compute, Verify, Falsify, Reproduce };
enum class OutputFormat { Records, Table };

struct RunConfig {
    Command command = Command::Reproduce;
    std::optional<BipartiteDims> dims;
    Ensemble ensemble = Ensemble::pure();
    std::uint64_t samples = 1;
    std::optional<std::uint64_t> seed;
    std::vector<BoundId> bounds;
    std::vector<WitnessKind> witness_kinds{WitnessKind::Negativity, WitnessKind::RandomRobustness};
    CheckContext context;
    std::optional<std::filesystem::path> input;
    /// compute: output file; verify/falsify: output directory.
    std::optional<std::filesystem::path> out;
    OutputFormat format = OutputFormat::Records;
    unsigned workers = 1;
};

/// Raised for inconsistent configurations; maps to exit code 64.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Writes the diagnostic dump (and DIR/violations/ when --out is set); returns 3.
int report_proven_violation(const RunConfig& config, const ProvenBoundViolation& v, std::ostream& diag);

/// Prints the phi_plus worked example and compares it with the expected values.
int cmd_reproduce_phi_plus(std::ostream& out, std::ostream& diag);
int cmd_compute(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_falsify(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// Parses argv and dispatches. Never throws; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace qbound::cli
