// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if
// any criterion fails. Pass criterion numbers as arguments to run a subset.

#include "oracles.hpp"

#include <qbound/cli.hpp>
#include <qbound/ensemble.hpp>
#include <qbound/state_io.hpp>

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace qbound;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

constexpr double kMarginTol = 1e-8;

Verdict fail(std::string why) { return {false, std::move(why)}; }

// ---------------------------------------------------------------------------

Verdict criterion_1() {
    const auto phi = bell_phi_plus(2);
    const auto eq20 = check_eq20(phi, Rng(1));
    const auto w = negativity_witness(phi);
    const double d2 = eq20.lhs;
    const double ew = w.e_w;
    const double hs = w.hs_sq;
    const double margin = eq20.margin;
    const bool ok = std::abs(d2 - 0.5) <= 1e-9 && std::abs(ew - 0.5) <= 1e-9 && std::abs(hs - 1.0) <= 1e-9 &&
                    std::abs(margin - 0.25) <= 1e-9;
    std::ostringstream out, diag;
    const int code = cli::cmd_reproduce_phi_plus(out, diag);
    return {ok && code == cli::kExitOk,
            fmt::format("D2={:.15f} E_w={:.15f} TrW2={:.15f} margin={:.15f} reproduce_exit={}", d2, ew, hs, margin,
                        code)};
}

Verdict criterion_2() {
    std::string detail;
    bool pass = true;
    for (int dB : {2, 3, 4, 8}) {
        EnsembleConfig cfg;
        cfg.bounds = {BoundId::Eq20};
        cfg.dims = BipartiteDims(2, dB);
        cfg.ensemble = Ensemble::induced(2 * dB);
        cfg.samples = 10000;
        cfg.seed = 20;
        cfg.keep_all_records = false;
        try {
            const auto res = run_ensemble(cfg);
            const auto& s = res.summary.at("eq20");
            pass = pass && s.violated == 0 && (!s.has_margin || s.min_margin >= -kMarginTol);
            detail += fmt::format("2x{}: {} satisfied, {} vacuous, {} violated, min margin {:.3e}; ", dB, s.satisfied,
                                  s.vacuous, s.violated, s.min_margin);
        } catch (const ProvenBoundViolation& v) {
            return fail(fmt::format("2x{}: proven violation: {}", dB, v.what()));
        }
    }
    return {pass, detail};
}

Verdict criterion_3() {
    EnsembleConfig cfg;
    cfg.bounds = {BoundId::LemmaTrW2};
    cfg.dims = BipartiteDims(2, 8);
    cfg.ensemble = Ensemble::induced(16);
    cfg.samples = 1000;
    cfg.seed = 3;
    const auto res = run_ensemble(cfg);
    const auto& s = res.summary.at("lemma_trw2");
    double max_m = 0;
    for (const auto& c : res.certificates) max_m = std::max(max_m, c.report.quantities.at("m"));
    const double freq = static_cast<double>(s.violated) / cfg.samples;
    return {s.violated >= 1 && !res.certificates.empty(),
            fmt::format("{} of {} draws have Tr(W^2) = m >= 2 > d-1 = 1 (frequency {:.3f}, max m {})", s.violated,
                        cfg.samples, freq, max_m)};
}

// A certificate is accepted when the historical bound fails, the proven bound
// holds on the same state, and re-verification from the serialized text
// reproduces the margin bit for bit.
bool accept_eq21_certificate(const CounterexampleCertificate& cert, std::string& why) {
    if (cert.report.satisfied) {
        why = "report satisfied";
        return false;
    }
    const double eq20_margin = cert.report.quantities.at("eq20_margin");
    if (eq20_margin < -kMarginTol) {
        why = "eq20 violated on the same state";
        return false;
    }
    const auto parsed = parse_certificate(cert.to_text());
    const auto again = reverify(parsed);
    const auto regen = ensemble_state(Ensemble::parse(parsed.ensemble), cert.state.dims(),
                                      *parsed.report.state.seed, *parsed.report.state.index);
    if (again.margin != cert.report.margin || regen.matrix() != cert.state.matrix()) {
        why = "re-verification is not bit-stable";
        return false;
    }
    why = fmt::format("seed {} index {}: D2={:.6g} < N^2/(d-1)^2={:.6g}, eq20 rhs {:.6g} (margin {:.3e}), m={}",
                      *cert.report.state.seed, *cert.report.state.index, cert.report.lhs, cert.report.rhs,
                      cert.report.quantities.at("eq20_rhs"), eq20_margin, cert.report.quantities.at("m"));
    return true;
}

Verdict criterion_4() {
    const BipartiteDims dims(2, 32);
    auto search = [&](int ancilla, std::uint64_t seed, std::uint64_t samples, std::string& why) {
        const auto certs = falsify_search(BoundId::Eq21Historical, dims, Ensemble::induced(ancilla), samples, seed);
        for (const auto& c : certs) {
            if (accept_eq21_certificate(c, why)) return std::make_pair(certs.size(), true);
        }
        return std::make_pair(certs.size(), false);
    };

    std::string why;
    const auto [primary_count, primary_ok] = search(64, 21, 10000, why);
    if (primary_ok) {
        return {true, fmt::format("induced:64, seed 21, 1e4 samples: {} certificate(s); {}", primary_count, why)};
    }
    std::string detail = fmt::format(
        "induced:64, seed 21, 1e4 samples: {} certificate(s). Fallback (with criterion 3): ", primary_count);

    // Documented sweep: further seeds at the same ensemble, then smaller ancillas.
    for (std::uint64_t seed : {22, 23}) {
        const auto [n, ok] = search(64, seed, 10000, why);
        detail += fmt::format("induced:64 seed {} -> {}; ", seed, n);
        if (ok) return {true, detail + why};
    }
    for (int ancilla : {48, 32, 16}) {
        const auto [n, ok] = search(ancilla, 21, 2000, why);
        detail += fmt::format("induced:{} seed 21 (2e3) -> {}; ", ancilla, n);
        if (ok) return {true, detail + why};
    }
    return fail(detail + "no certificate in the sweep");
}

Verdict criterion_5() {
    double worst_opt = 0, worst_grid = 0;
    for (int dB : {2, 3}) {
        const BipartiteDims dims(2, dB);
        Rng rng(Rng(5).split(dB));
        for (int t = 0; t < 100; ++t) {
            const auto rho = random_mixed_induced(dims, 1 + t % (2 * dB), rng);
            const double closed = geometric_discord_2norm_qubitA(rho).value;
            Rng opt = rng.split(1000 + t);
            const double optimized = geometric_discord_2norm_opt(rho, opt).value;
            const double grid = oracle::d2_qubit_grid(rho.matrix(), dB).value;
            worst_opt = std::max(worst_opt, std::abs(closed - optimized));
            worst_grid = std::max(worst_grid, std::abs(closed - grid));
        }
    }
    return {worst_opt <= 1e-6 && worst_grid <= 1e-6,
            fmt::format("200 states; max |closed - optimizer| = {:.2e}, max |closed - grid| = {:.2e}", worst_opt,
                        worst_grid)};
}

Verdict criterion_6() {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, inf};
    Rng rng(6);
    double worst = inf;
    for (int t = 0; t < 10000; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform() * 5);
        const int m = 2 + static_cast<int>(rng.uniform() * 5);
        const ComplexMatrix a = ginibre(n, m, rng);
        // Every fourth pair is colinear, which makes the p = 2 case an equality.
        const ComplexMatrix b = t % 4 == 0 ? ComplexMatrix(a * (0.5 + rng.uniform())) : ginibre(n, m, rng);
        const auto pair = HolderPair::conjugate_of(SchattenOrder(ps[t % ps.size()]));
        worst = std::min(worst, holder_check(a, b, pair));
    }
    const auto one = HolderPair::conjugate_of(SchattenOrder(1.0));
    const auto top = HolderPair::conjugate_of(SchattenOrder::infinity());
    const bool sentinel = one.q().is_infinite() && one.q().reciprocal() == 0.0 &&
                          one.p().reciprocal() + one.q().reciprocal() == 1.0 && top.q().value() == 1.0 &&
                          HolderPair::conjugate_of(SchattenOrder(2.0)).q().value() == 2.0 &&
                          HolderPair::conjugate_of(SchattenOrder(1.5)).q().value() == 3.0 &&
                          HolderPair::conjugate_of(SchattenOrder(3.0)).q().value() == 1.5;
    return {worst >= -1e-10 && sentinel,
            fmt::format("min margin over 1e4 triples {:.3e}; sentinel arithmetic {}", worst,
                        sentinel ? "exact" : "WRONG")};
}

Verdict criterion_7() {
    CheckContext ctx;
    ctx.cq_samples = 100;
    int states = 0;
    std::uint64_t index = 0;
    int chi_failures = 0, upper_failures = 0, unsatisfied = 0;
    double min_product_margin = std::numeric_limits<double>::infinity();
    double min_upper_margin = std::numeric_limits<double>::infinity();
    while (states < 1000) {
        const BipartiteDims dims(2, 2 + static_cast<int>(index % 3));
        const auto rho = ensemble_state(Ensemble::induced(2), dims, 7, index);
        const std::uint64_t i = index++;
        if (negativity(rho) <= default_negativity_tol(dims)) continue;
        ++states;
        for (auto kind : {WitnessKind::Negativity, WitnessKind::RandomRobustness}) {
            const auto rep = check_corrected_trace(rho, kind, check_rng(7, i, BoundId::CorrectedTrace, kind), ctx);
            chi_failures += static_cast<int>(rep.quantities.at("chi_failures"));
            min_product_margin = std::min(min_product_margin, rep.quantities.at("chi_min_product_margin"));
            const double upper_margin = rep.quantities.at("D1_upper") - rep.rhs;
            min_upper_margin = std::min(min_upper_margin, upper_margin);
            upper_failures += upper_margin < -kMarginTol;
            unsatisfied += !rep.satisfied;
        }
    }
    return {chi_failures == 0 && upper_failures == 0 && unsatisfied == 0 && min_product_margin >= -kMarginTol,
            fmt::format("{} NPT states x 100 CQ x 2 kinds ({} draws); per-chi failures {}, min dist*sup - E_w "
                        "{:.3e}; D1_upper failures {}, min margin {:.3e}",
                        states, index, chi_failures, min_product_margin, upper_failures, min_upper_margin)};
}

Verdict criterion_8() {
    std::string detail;
    bool pass = true;
    for (auto kind : {WitnessKind::Negativity, WitnessKind::RandomRobustness}) {
        Rng rng(Rng(8).split(static_cast<std::uint64_t>(kind)));
        double worst = std::numeric_limits<double>::infinity();
        int witnesses = 0;
        std::uint64_t index = 0;
        while (witnesses < 100) {
            const BipartiteDims dims(2, 2 + static_cast<int>(index % 3));
            const auto rho = ensemble_state(Ensemble::induced(3), dims, 8, index++);
            if (negativity(rho) <= default_negativity_tol(dims)) continue;
            const auto w = build_witness(rho, kind);
            ++witnesses;
            for (int s = 0; s < 100; ++s) {
                const auto sigma = random_product(dims, 1 + s % 3, rng);
                worst = std::min(worst, witness_expectation(w.matrix, sigma.matrix()));
            }
        }
        pass = pass && worst >= -kMarginTol;
        detail += fmt::format("{}: 1e4 products, min Tr(W sigma) {:.3e}; ", to_string(kind), worst);
    }
    return {pass, detail};
}

Verdict criterion_9() {
    double worst_n = 0, worst_d2 = 0, worst_pt_inv = 0, worst_pt_norm = 0;
    int m_changes = 0;
    Rng rng(9);
    for (int s = 0; s < 50; ++s) {
        const BipartiteDims dims(2, 2 + s % 3);
        const auto rho = random_mixed_induced(dims, 1 + s % 4, rng);
        const double n0 = negativity(rho);
        const double d0 = geometric_discord_2norm_qubitA(rho).value;
        int m0 = 0;
        try {
            m0 = pt_negative_subspace(rho).count;
        } catch (const PPTError&) {
        }
        const ComplexMatrix pt = partial_transpose(rho.matrix(), dims);
        worst_pt_inv = std::max(worst_pt_inv, (partial_transpose(pt, dims) - rho.matrix()).cwiseAbs().maxCoeff());
        worst_pt_norm = std::max(worst_pt_norm, std::abs(pt.norm() - rho.matrix().norm()));
        for (int u = 0; u < 20; ++u) {
            const auto moved = apply_local_unitary(rho, haar_unitary(dims.dA(), rng), haar_unitary(dims.dB(), rng));
            worst_n = std::max(worst_n, std::abs(negativity(moved) - n0));
            worst_d2 = std::max(worst_d2, std::abs(geometric_discord_2norm_qubitA(moved).value - d0));
            int m1 = 0;
            try {
                m1 = pt_negative_subspace(moved).count;
            } catch (const PPTError&) {
            }
            m_changes += m1 != m0;
        }
    }
    return {worst_n <= 1e-8 && worst_d2 <= 1e-8 && m_changes == 0 && worst_pt_inv <= 1e-12 && worst_pt_norm <= 1e-12,
            fmt::format("max dN {:.2e}, max dD2 {:.2e}, m changes {}, PT involution {:.1e}, PT 2-norm {:.1e}",
                        worst_n, worst_d2, m_changes, worst_pt_inv, worst_pt_norm)};
}

Verdict criterion_10() {
    const char* base = std::getenv("QBOUND_TEST_TMP");
    const fs::path root = fs::path(base ? base : fs::temp_directory_path().string()) / "acceptance_determinism";
    fs::remove_all(root);
    auto slurp_dir = [](const fs::path& dir) {
        std::string all;
        std::set<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(dir)) {
            if (e.is_regular_file()) files.insert(fs::relative(e.path(), dir));
        }
        for (const auto& f : files) {
            std::ifstream in(dir / f, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            all += f.string() + "\n" + ss.str();
        }
        return all;
    };
    std::string ref_stream, ref_files;
    bool pass = true;
    std::size_t bytes = 0;
    for (unsigned workers : {1u, 4u, 8u}) {
        cli::RunConfig cfg;
        cfg.command = cli::Command::Verify;
        cfg.dims = BipartiteDims(2, 3);
        cfg.ensemble = Ensemble::induced(3);
        cfg.samples = 300;
        cfg.seed = 10;
        cfg.bounds = {BoundId::Eq20, BoundId::Eq21Historical, BoundId::CorrectedTrace, BoundId::LemmaTrW2};
        cfg.context.cq_samples = 20;
        cfg.workers = workers;
        std::ostringstream out, diag;
        if (cli::cmd_verify(cfg, out, diag) != cli::kExitOk) return fail("verify did not exit 0");
        const fs::path dir = root / std::to_string(workers);
        cfg.out = dir;
        std::ostringstream out2, diag2;
        if (cli::cmd_verify(cfg, out2, diag2) != cli::kExitOk) return fail("verify --out did not exit 0");
        const std::string stream = out.str() + diag.str() + out2.str() + diag2.str();
        const std::string files = slurp_dir(dir);
        if (workers == 1) {
            ref_stream = stream;
            ref_files = files;
            bytes = stream.size() + files.size();
        } else {
            pass = pass && stream == ref_stream && files == ref_files;
        }
    }
    fs::remove_all(root);
    return {pass, fmt::format("workers 1/4/8: {} bytes of stdout, stderr and files compared", bytes)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "phi_plus golden values", 1, criterion_1},
        {2, "eq20 ensemble soundness", 300, criterion_2},
        {3, "Tr(W^2) <= d-1 falsification", 60, criterion_3},
        {4, "eq21 counterexample search", 600, criterion_4},
        {5, "discord closed form / optimizer / grid agreement", 120, criterion_5},
        {6, "Holder property suite", 60, criterion_6},
        {7, "corrected trace bound", 300, criterion_7},
        {8, "witness validity on product states", 60, criterion_8},
        {9, "local-unitary invariance and partial transpose", 60, criterion_9},
        {10, "verify output independent of worker count", 60, criterion_10},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            v.pass = false;
            v.detail += fmt::format(" [over budget: {:.1f} s > {:.0f} s]", secs, c.budget_seconds);
        }
        failures += !v.pass;
        fmt::print("{} criterion {:2} {} ({:.2f} s): {}\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
