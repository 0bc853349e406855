#include <qbound/random.hpp>
#include <qbound/state_io.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

using namespace qbound;

TEST_CASE("format_exact round-trips doubles") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20);
        CHECK(std::stod(format_exact(x)) == x);
    }
    CHECK_THROWS_AS(format_exact(std::nan("")), NonFiniteError);
}

TEST_CASE("state documents round-trip bit for bit") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto rho = random_mixed_induced(BipartiteDims(2, 3), 4, rng)
                             .with_label("draw")
                             .with_provenance({17, static_cast<std::uint64_t>(t)});
        const std::string text = state_to_text(rho, {{"note", "x"}});
        const auto doc = parse_state_document(text);
        CHECK(doc.state.matrix() == rho.matrix());
        CHECK(doc.state.dims() == rho.dims());
        CHECK(doc.extra.at("note") == "x");
        CHECK(doc.extra.at("seed") == 17);
        CHECK(doc.extra.at("index") == t);
        CHECK(doc.extra.at("label") == "draw");
        // Writing the parsed state again yields the same text.
        CHECK(state_to_text(doc.state.with_label("draw").with_provenance({17, static_cast<std::uint64_t>(t)}),
                            {{"note", "x"}}) == text);
    }
}

TEST_CASE("extra matrices are carried in documents") {
    Rng rng(3);
    const ComplexMatrix w = ginibre(4, 4, rng);
    const ComplexMatrix id = ComplexMatrix::Identity(4, 4) / 4.0;
    const std::string text = matrix_document_to_text(id, BipartiteDims(2, 2), nlohmann::json::object(), {{"witness", w}});
    const auto doc = parse_state_document(text);
    CHECK(parse_matrix_field(doc.extra.at("witness"), "witness") == w);
}

TEST_CASE("parse errors carry line and field diagnostics") {
    auto message_of = [](const std::string& text) -> std::string {
        try {
            parse_state_document(text);
        } catch (const ParseError& e) {
            return e.what();
        }
        return {};
    };
    CHECK(message_of("{\n\"dims\": [2, 2],\n\"matrix\": [[[1, 0]] oops\n}").find("line 3") != std::string::npos);
    CHECK(message_of("{\"matrix\": [[[1,0]]]}").find("dims") != std::string::npos);
    CHECK(message_of("{\"dims\": [2, 2]}").find("matrix") != std::string::npos);
    CHECK(message_of("{\"dims\": [2], \"matrix\": [[[1,0]]]}").find("dims") != std::string::npos);
    CHECK(message_of("{\"dims\": [2, 2], \"matrix\": [[[1, 0], [0, 0]], [[0, 0]]]}").find("row 1") !=
          std::string::npos);
    CHECK(message_of("[1, 2]").find("object") != std::string::npos);

    // Parsed documents are validated as states.
    const std::string bad_trace =
        "{\"dims\": [2, 2], \"matrix\": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],"
        "[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}";
    CHECK_THROWS_AS(parse_state_document(bad_trace), TraceError);
}

TEST_CASE("files") {
    const char* tmp = std::getenv("TMPDIR");
    const std::filesystem::path dir = std::filesystem::path(tmp ? tmp : "/tmp") / "qbound_state_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    Rng rng(4);
    const auto rho = random_mixed_induced(BipartiteDims(2, 2), 2, rng);
    write_text_file(dir / "s.json", state_to_text(rho));
    CHECK(read_state_file(dir / "s.json").state.matrix() == rho.matrix());
    CHECK_THROWS_AS(read_state_file(dir / "missing.json"), ParseError);
    std::filesystem::remove_all(dir.parent_path());
}
