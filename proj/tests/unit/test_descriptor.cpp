#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "selberg/descriptor.hpp"

using namespace selberg;

static SelbergDatum parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_descriptor_text(in, "<test>");
}

TEST_CASE("descriptor round trip for a zeta-like datum") {
    auto d = parse_text(
        "# completed zeta\n"
        "label = my_zeta\n"
        "q = 1\n"
        "Q = 0.5641895835477563\n"
        "lambda = [0.5]\n"
        "mu = [[0, 0]]\n"
        "omega = [1, 0]\n"
        "pole_order = 1\n"
        "coeffs = zeta\n");
    CHECK(d.label == "my_zeta");
    CHECK(d.q() == 1);
    CHECK(d.lambdas[0] == 0.5);
    CHECK(d.pole_order == 1);
    CHECK(d.coeffs->kind() == coefficient_kind::zeta);
}

TEST_CASE("descriptor with two Gamma factors and complex mu") {
    auto d = parse_text(
        "label = pair\n"
        "Q = 0.02533029591058444\n"
        "lambda = [1, 1]\n"
        "mu = [[0, 0], [11, 0]]\n"
        "omega = [1, 0]\n"
        "pole_order = 1\n"
        "coeffs = rankin_selberg\n");
    CHECK(d.q() == 2);
    CHECK(d.mus[1] == cplx(11, 0));
}

TEST_CASE("unknown fields are rejected by name") {
    try {
        parse_text("label = x\nQ = 1\nlambda = [1]\nmu = [[1,0]]\nomega = [1,0]\npole_order = 0\n"
                   "coeffs = zeta\nconductor = 7\n");
        FAIL("expected validation error");
    } catch (const validation_error& e) {
        CHECK(e.field() == "conductor");
    }
}

TEST_CASE("missing fields and q mismatch are rejected") {
    CHECK_THROWS_AS(parse_text("label = x\n"), validation_error);
    CHECK_THROWS_AS(
        parse_text("label = x\nq = 2\nQ = 1\nlambda = [1]\nmu = [[1,0]]\nomega = [1,0]\n"
                   "pole_order = 0\ncoeffs = zeta\n"),
        validation_error);
}

TEST_CASE("coefficient table files: parse, gaps, emptiness") {
    const char* path = "test_table_tmp.csv";
    {
        std::ofstream out(path);
        out << "# table\n1,1,0\n2,-0.5,0.25\n3,0.1,-0.1\n";
    }
    auto table = read_coefficient_table(path);
    REQUIRE(table.size() == 3);
    CHECK(table[1] == cplx(-0.5, 0.25));

    {
        std::ofstream out(path);
        out << "1,1,0\n3,0.1,0\n";
    }
    CHECK_THROWS_AS(read_coefficient_table(path), validation_error);

    {
        std::ofstream out(path);
        out << "# nothing\n";
    }
    CHECK_THROWS_AS(read_coefficient_table(path), validation_error);
    std::remove(path);
}

TEST_CASE("resolve_datum prefers built-ins, falls back to files") {
    CHECK(resolve_datum("zeta").label == "zeta");
    CHECK(resolve_datum("delta").label == "delta");
    CHECK_THROWS_AS(resolve_datum("no_such_file.datum"), io_error);
}
