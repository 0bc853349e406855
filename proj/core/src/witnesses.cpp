#include <qbound/witnesses.hpp>

#include <fmt/format.h>

#include <cmath>

namespace qbound {

double default_negativity_tol(const BipartiteDims& dims) { return 1e-9 * dims.total(); }

NegativeSubspace pt_negative_subspace(const BipartiteDensityMatrix& rho, double tol) {
    const double threshold = tol < 0.0 ? default_negativity_tol(rho.dims()) : tol;
    const auto eig = hermitian_eigensystem(partial_transpose(rho.matrix(), rho.dims()));
    int count = 0;
    while (count < eig.values.size() && eig.values(count) < -threshold) ++count;
    if (count == 0) {
        throw PPTError(fmt::format("state is PPT at tolerance {:.1e} (lambda_min = {:.3e})", threshold,
                                   eig.values(0)),
                       eig.values(0));
    }
    NegativeSubspace out;
    out.count = count;
    out.negative_eigenvalues = eig.values.head(count);
    out.eigenvectors = eig.vectors.leftCols(count);
    out.projector = out.eigenvectors * out.eigenvectors.adjoint();
    return out;
}

double negativity(const BipartiteDensityMatrix& rho) {
    const RealVector values = hermitian_eigenvalues(partial_transpose(rho.matrix(), rho.dims()));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < values.size() && values(i) < 0.0; ++i) sum -= values(i);
    return sum;
}

std::string_view to_string(WitnessKind kind) {
    switch (kind) {
        case WitnessKind::Negativity: return "negativity";
        case WitnessKind::RandomRobustness: return "random_robustness";
        case WitnessKind::Custom: return "custom";
    }
    return "custom";
}

WitnessKind parse_witness_kind(std::string_view text) {
    if (text == "negativity") return WitnessKind::Negativity;
    if (text == "random_robustness") return WitnessKind::RandomRobustness;
    if (text == "custom") return WitnessKind::Custom;
    throw ParseError(fmt::format("unknown witness kind '{}'", text));
}

nlohmann::json EntanglementWitness::export_fields() const {
    nlohmann::json j;
    j["kind"] = to_string(kind);
    j["normalized"] = sup_normalized;
    j["e_w"] = e_w;
    j["hs_sq"] = hs_sq;
    j["sup_norm"] = sup_norm;
    j["neg_count"] = neg_count ? nlohmann::json(*neg_count) : nlohmann::json(nullptr);
    return j;
}

double witness_expectation(const ComplexMatrix& w, const ComplexMatrix& sigma) {
    if (w.rows() != sigma.rows() || w.cols() != sigma.cols()) {
        throw DimsError(fmt::format("witness is {}x{} but state is {}x{}", w.rows(), w.cols(),
                                    sigma.rows(), sigma.cols()));
    }
    return trace_of_product(w, sigma).real();
}

namespace {

EntanglementWitness finish(ComplexMatrix w, const BipartiteDensityMatrix& rho, WitnessKind kind) {
    EntanglementWitness out{std::move(w), rho.dims()};
    out.kind = kind;
    out.e_w = -witness_expectation(out.matrix, rho.matrix());
    out.hs_sq = trace_of_product(out.matrix, out.matrix).real();
    out.sup_norm = schatten_norm(out.matrix, SchattenOrder::infinity());
    return out;
}

}  // namespace

EntanglementWitness custom_witness(const ComplexMatrix& w, const BipartiteDensityMatrix& rho) {
    require_square(w, "witness");
    if (w.rows() != rho.side()) throw DimsError("witness does not match the state dimensions");
    const double violation = hermiticity_violation(w);
    if (violation > default_hermitian_tol(w)) {
        throw NonHermitianError(fmt::format("witness is not Hermitian ({:.3e})", violation), violation);
    }
    auto out = finish((w + w.adjoint()) * 0.5, rho, WitnessKind::Custom);
    if (!(out.e_w > 0.0)) {
        throw DegenerateWitnessError(
            fmt::format("operator does not detect the state (Tr(W rho) = {:.3e})", -out.e_w));
    }
    return out;
}

EntanglementWitness negativity_witness(const BipartiteDensityMatrix& rho, double tol) {
    const NegativeSubspace neg = pt_negative_subspace(rho, tol);
    auto out = finish(partial_transpose(neg.projector, rho.dims()), rho, WitnessKind::Negativity);
    out.neg_count = neg.count;
    return out;
}

EntanglementWitness random_robustness_witness(const BipartiteDensityMatrix& rho, double tol) {
    const NegativeSubspace neg = pt_negative_subspace(rho, tol);
    // Ascending order: column 0 belongs to lambda_min; ties resolve to the solver's first vector.
    const ComplexVector v = neg.eigenvectors.col(0);
    const double side = static_cast<double>(rho.side());
    return finish(side * partial_transpose(v * v.adjoint(), rho.dims()), rho, WitnessKind::RandomRobustness);
}

double witnessed_entanglement(const BipartiteDensityMatrix& rho, const EntanglementWitness& w) {
    if (w.matrix.rows() != rho.side()) {
        throw DimsError(fmt::format("witness side {} does not match state side {}", w.matrix.rows(),
                                    rho.side()));
    }
    const Complex value = trace_of_product(w.matrix, rho.matrix());
    if (std::abs(value.imag()) > 1e-10) {
        throw NonHermitianError(fmt::format("Tr(W rho) has imaginary part {:.3e}", value.imag()),
                                std::abs(value.imag()));
    }
    return std::max(0.0, -value.real());
}

EntanglementWitness sup_normalize(const EntanglementWitness& w) {
    if (!(w.sup_norm > 0.0)) throw DegenerateWitnessError("cannot normalize a zero witness");
    EntanglementWitness out = w;
    const double scale = 1.0 / w.sup_norm;
    out.matrix *= scale;
    out.e_w *= scale;
    out.hs_sq *= scale * scale;
    out.sup_norm = schatten_norm(out.matrix, SchattenOrder::infinity());
    out.sup_normalized = true;
    return out;
}

EntanglementWitness build_witness(const BipartiteDensityMatrix& rho, WitnessKind kind, double tol) {
    switch (kind) {
        case WitnessKind::Negativity: return negativity_witness(rho, tol);
        case WitnessKind::RandomRobustness: return random_robustness_witness(rho, tol);
        case WitnessKind::Custom: break;
    }
    throw Error("custom witnesses need an explicit operator");
}

}  // namespace qbound
