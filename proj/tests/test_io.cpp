#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpq/io.hpp"

using namespace mpq;

TEST_CASE("round trip: datum, matrices, twist, cocycle") {
    for (auto entry : desk_catalogue()) {
        auto datum = build_datum(entry.type, entry.rank);
        CHECK(parse_datum(to_json(datum)) == datum);

        MultiparamMatrix P = generic_matrix(datum);
        CHECK(parse_matrix(to_json(P)) == P);
        MultiparamMatrix S = standard_matrix(datum);
        CHECK(parse_matrix(to_json(S)) == S);
    }
    // Free grey nodes survive the trip.
    auto grey = build_datum(TypeTag::A, 3, {}, {2});
    CHECK(parse_datum(to_json(grey)) == grey);

    TwistData tw = TwistData::symbolic(4, "iophi");
    CHECK(parse_twist(to_json(tw)).phi == tw.phi);
    tw.phi[0][1] += ExponentPoly::unit(Rat(3, 2));
    tw.phi[1][0] -= ExponentPoly::unit(Rat(3, 2));
    CHECK(parse_twist(to_json(tw)).phi == tw.phi);

    CocycleData cz = CocycleData::zero(5);
    CHECK(parse_cocycle(to_json(cz)).chi == cz.chi);
}

TEST_CASE("round trip: realization and polynomial multiparameter") {
    auto datum = build_datum(TypeTag::B1, 2);
    MultiparamMatrix P = generic_matrix(datum);
    Realization R = build_realization(P, datum, RealizationFlavor::straight_split, 4);
    Realization back = parse_realization(to_json(R));
    CHECK(back.P == R.P);
    CHECK(back.t == R.t);
    CHECK(back.root == R.root);
    CHECK(back.cplus == R.cplus);
    CHECK(back.cminus == R.cminus);

    PolyMultiparam q = PolyMultiparam::generic(datum);
    for (AtomId a : q.exponents.at(1, 2).atoms())
        if (a != unit_atom()) q.specialization[a] = Rat(7, 3);
    PolyMultiparam qb = parse_poly_multiparam(to_json(q));
    CHECK(qb.exponents == q.exponents);
    CHECK(qb.specialization == q.specialization);
    CHECK(qb.not_root_of_unity == q.not_root_of_unity);

    // Serialized text parses back through the generic entry point too.
    Json again = parse_json_text(to_json(q).dump());
    CHECK(parse_poly_multiparam(again).exponents == q.exponents);
}

TEST_CASE("malformed input is rejected with a located ParseError") {
    // Ragged matrix rows.
    Json ragged = Json::array();
    ragged.push_back(Json::array({to_json(ExponentPoly(Rat(1))), to_json(ExponentPoly())}));
    ragged.push_back(Json::array({to_json(ExponentPoly(Rat(2)))}));
    CHECK_THROWS_AS((void)parse_matrix(ragged), ParseError);
    try {
        (void)parse_matrix(ragged);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("matrix[1]") != std::string::npos);
        CHECK(std::string(e.what()).find("ragged") != std::string::npos);
    }

    // Syntax errors carry the byte offset.
    CHECK_THROWS_AS((void)parse_json_text("{\"phi\": [,]}"), ParseError);
    try {
        (void)parse_json_text("{\"phi\": [,]}");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }

    // Missing fields and wrong scalar shapes.
    auto datum = build_datum(TypeTag::A, 2);
    Json dj = to_json(datum);
    dj.erase("parity");
    CHECK_THROWS_AS((void)parse_datum(dj), ParseError);
    Json dj2 = to_json(datum);
    dj2["rank"] = "two";
    CHECK_THROWS_AS((void)parse_datum(dj2), ParseError);
    Json dj3 = to_json(datum);
    dj3["cartan"][0][1] = -7; // not the catalogue Cartan matrix
    CHECK_THROWS_AS((void)parse_datum(dj3), ParseError);

    // Non-antisymmetric twist data.
    Json tj;
    PolyMatrix bad(2, std::vector<ExponentPoly>(2));
    bad[0][1] = ExponentPoly(Rat(1));
    tj["phi"] = to_json(bad);
    CHECK_THROWS_AS((void)parse_twist(tj), NotAntisymmetric);
}

TEST_CASE("inconsistent realizations are rejected on load") {
    auto datum = build_datum(TypeTag::A, 2);
    MultiparamMatrix P = generic_matrix(datum);
    Realization R = build_realization(P, datum, RealizationFlavor::straight_split, 4);
    Json j = to_json(R);
    // Corrupt one coroot coordinate: the pairing no longer reproduces P.
    j["cplus"][0][0] = to_json(ExponentPoly(Rat(5)));
    CHECK_THROWS_AS((void)parse_realization(j), InvariantViolation);
}
