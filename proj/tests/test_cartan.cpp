#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpq/cartan.hpp"

using namespace mpq;

TEST_CASE("rank-1 datum") {
    auto datum = build_datum(TypeTag::A, 1);
    CHECK(datum.A == IntMatrix{{2}});
    CHECK(datum.d == std::vector<Rat>{Rat(1)});
    CHECK(datum.parity == std::vector<int>{0});
    auto grey = build_datum(TypeTag::A, 1, {}, {1});
    CHECK(grey.parity == std::vector<int>{1});
}

TEST_CASE("fixed sign tables") {
    auto f4 = build_datum(TypeTag::F4, 4);
    CHECK(f4.epsilon == std::vector<long>{6, -2, -2, -2});
    CHECK(f4.p(2) == 1);
    CHECK(f4.d == std::vector<Rat>{Rat(2), Rat(1), Rat(1), Rat(2)});
    CHECK(f4.diagram_order == std::vector<int>{1, 4, 3, 2});

    auto g3 = build_datum(TypeTag::G3, 3);
    CHECK(g3.epsilon == std::vector<long>{-2, 2, 6});
    CHECK(g3.p(1) == 1);
    CHECK(g3.d == std::vector<Rat>{Rat(1), Rat(3), Rat(1)});

    CHECK_THROWS_AS(build_datum(TypeTag::F4, 5), InvalidRank);
    CHECK_THROWS_AS(build_datum(TypeTag::G3, 2), InvalidRank);
    CHECK_THROWS_AS(build_datum(TypeTag::F4, 4, {1, 1, 1, 1}), InvalidEpsilon);
}

TEST_CASE("symmetrizers across the catalogue") {
    CHECK(build_datum(TypeTag::B1, 2).d == std::vector<Rat>{Rat(1), Rat(1, 2)});
    CHECK(build_datum(TypeTag::B2, 3).d == std::vector<Rat>{Rat(1), Rat(1), Rat(1, 2)});
    CHECK(build_datum(TypeTag::C, 2).d == std::vector<Rat>{Rat(1, 2), Rat(1)});
    CHECK(build_datum(TypeTag::C, 3).d == std::vector<Rat>{Rat(1), Rat(1), Rat(2)});
    CHECK(build_datum(TypeTag::D1, 4).d == std::vector<Rat>(4, Rat(1)));
    CHECK(build_datum(TypeTag::D2, 4).d == std::vector<Rat>(4, Rat(1)));
}

TEST_CASE("standard matrices") {
    auto a2 = build_datum(TypeTag::A, 2);
    auto m = standard_matrix(a2);
    CHECK(m.at(1, 1) == ExponentPoly::unit(Rat(2)));
    CHECK(m.at(1, 2) == ExponentPoly::unit(Rat(-1)));
    CHECK(m.at(2, 1) == ExponentPoly::unit(Rat(-1)));
    CHECK(m.at(2, 2) == ExponentPoly::unit(Rat(2)));

    auto b2 = build_datum(TypeTag::B1, 2);
    auto mb = standard_matrix(b2);
    CHECK(mb.at(1, 1) == ExponentPoly::unit(Rat(2)));
    CHECK(mb.at(1, 2) == ExponentPoly::unit(Rat(-1)));
    CHECK(mb.at(2, 1) == ExponentPoly::unit(Rat(-1)));
    CHECK(mb.at(2, 2) == ExponentPoly::unit(Rat(1)));

    CHECK(m.symmetric_part() == m);
}

TEST_CASE("Cartan-type predicate") {
    auto a2 = build_datum(TypeTag::A, 2);
    auto P = standard_matrix(a2);
    CHECK(check_cartan_type(P, a2));
    CHECK(check_cartan_type(generic_matrix(a2), a2));

    MultiparamMatrix tilted = P;
    ExponentPoly lam = ExponentPoly::atom(named_atom("lam"));
    tilted.entries[0][1] += lam;
    tilted.entries[1][0] -= lam;
    CHECK(check_cartan_type(tilted, a2));

    MultiparamMatrix bad = P;
    bad.entries[0][0] += ExponentPoly(Rat(1));
    CHECK_FALSE(check_cartan_type(bad, a2));

    MultiparamMatrix wrong_size;
    wrong_size.entries.assign(3, std::vector<ExponentPoly>(3));
    CHECK_THROWS_AS(check_cartan_type(wrong_size, a2), RankMismatch);
}

TEST_CASE("catalogue-wide identities") {
    for (const auto& entry : desk_catalogue()) {
        CAPTURE(entry.label);
        auto datum = build_datum(entry.type, entry.rank);
        CHECK(build_datum(entry.type, entry.rank) == datum); // deterministic
        for (int i = 1; i <= datum.rank; ++i) {
            // q_{ii}^{1/2} = q^{d_i} = q_i
            CHECK(Rat(1, 2) * p_entry(datum, i, i) == ExponentPoly::unit(datum.d_at(i)));
            for (int j = 1; j <= datum.rank; ++j) {
                // DA symmetric and integral
                Rat entry_ij = datum.d_at(i) * Rat(datum.a(i, j));
                CHECK(entry_ij == datum.d_at(j) * Rat(datum.a(j, i)));
                CHECK(denominator(entry_ij) == 1);
                // q_{ij} q_{ji} = q_{ii}^{a_{ij}} after eliminating p_{ji}
                ToralScalar lhs = ToralScalar::q_power(p_entry(datum, i, j)) *
                                  ToralScalar::q_power(p_entry(datum, j, i));
                ToralScalar rhs =
                    ToralScalar::q_power(Rat(datum.a(i, j)) * p_entry(datum, i, i));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("sign table constraints for the forked types") {
    CHECK_NOTHROW(build_datum(TypeTag::D1, 4, {1, -1, 1, 1}));
    CHECK_THROWS_AS(build_datum(TypeTag::D1, 4, {1, 1, 1, -1}), InvalidEpsilon);
    CHECK_NOTHROW(build_datum(TypeTag::D2, 4, {1, 1, 1, -1}));
    CHECK_THROWS_AS(build_datum(TypeTag::D2, 4, {1, 1, 1, 1}), InvalidEpsilon);
    CHECK(build_datum(TypeTag::D2, 4).epsilon == std::vector<long>{1, 1, 1, -1});
    CHECK_THROWS_AS(build_datum(TypeTag::A, 2, {2, 1}), InvalidEpsilon);
    CHECK_THROWS_AS(build_datum(TypeTag::A, 2, {1}), InvalidEpsilon);
    // Fixed colours cannot be overridden.
    CHECK_THROWS_AS(build_datum(TypeTag::B1, 2, {}, {2}), InvalidEpsilon);
}
