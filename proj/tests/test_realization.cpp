#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpq/realization.hpp"

using namespace mpq;

namespace {

// A hand-made rank-2 datum with singular symmetrized matrix, used to
// exercise the degenerate branches that the regular catalogue never hits.
CartanSuperDatum singular_datum() {
    CartanSuperDatum d;
    d.type = TypeTag::A;
    d.rank = 2;
    d.A = {{2, -2}, {-2, 2}};
    d.parity = {0, 0};
    d.d = {Rat(1), Rat(1)};
    d.epsilon = {1, 1};
    d.diagram_order = {1, 2};
    return d;
}

} // namespace

TEST_CASE("straight split construction at the generic matrix") {
    auto datum = build_datum(TypeTag::A, 2);
    auto P = generic_matrix(datum);
    auto R = build_realization(P, datum, RealizationFlavor::straight_split, 4);
    auto flags = classify(R);
    CHECK(flags.straight);
    CHECK(flags.split);
    CHECK_THROWS_AS(build_realization(P, datum, RealizationFlavor::straight_split, 3),
                    RankTooSmall);
}

TEST_CASE("straight small construction") {
    auto datum = build_datum(TypeTag::A, 2);
    auto P = generic_matrix(datum);
    // t = 2n - rk(P_s) = 2 here.
    auto R = build_realization(P, datum, RealizationFlavor::straight_small, 2);
    auto flags = classify(R);
    CHECK(flags.straight);
    CHECK(flags.small);
    // S-span equals coroot span by construction.
    FracMat stacked = FracMat::stack(to_frac(R.cplus), to_frac(R.cminus));
    CHECK(stacked.rank() == to_frac(R.s_matrix()).rank());
}

TEST_CASE("small obstruction on a singular symmetric part") {
    auto datum = singular_datum();
    auto P = generic_matrix(datum);
    CHECK_THROWS_AS(build_realization(P, datum, RealizationFlavor::straight_small, 4),
                    SmallObstruction);
    // The symmetric matrix itself has zero antisymmetric part: no obstruction.
    auto R = build_realization(standard_matrix(datum), datum,
                               RealizationFlavor::straight_small, 3);
    CHECK(classify(R).straight);
    CHECK(classify(R).small);
}

TEST_CASE("split minimal construction uses the coroot basis") {
    auto datum = build_datum(TypeTag::A, 2);
    auto P = generic_matrix(datum);
    auto R = build_realization(P, datum, RealizationFlavor::split_minimal, 4);
    auto flags = classify(R);
    CHECK(flags.split);
    CHECK(flags.minimal);
    CHECK_THROWS_AS(build_realization(P, datum, RealizationFlavor::split_minimal, 5),
                    RankTooSmall);
}

TEST_CASE("coinciding coroot pairs are small but not split") {
    // T_i^+ = T_i^- forces P symmetric; the identity coroots realize P_s.
    auto datum = build_datum(TypeTag::A, 2);
    auto R = build_realization(standard_matrix(datum), datum,
                               RealizationFlavor::straight_small, 2);
    CHECK(R.cplus == R.cminus);
    auto flags = classify(R);
    CHECK_FALSE(flags.split);
    CHECK(flags.small);
}

TEST_CASE("split lift fixes the dependent coroots") {
    auto datum = build_datum(TypeTag::A, 2);
    auto R = build_realization(standard_matrix(datum), datum,
                               RealizationFlavor::straight_small, 2);
    REQUIRE_FALSE(classify(R).split);
    auto [hat, pi] = lift(R, LiftMode::split);
    auto flags = classify(hat);
    CHECK(flags.split);
    CHECK(flags.straight); // straightness persists
    // The projection induces an isomorphism h-hat/h-hat_T = h/h_T.
    int src_codim = hat.t - FracMat::stack(to_frac(hat.cplus), to_frac(hat.cminus)).rank();
    int tgt_codim = R.t - FracMat::stack(to_frac(R.cplus), to_frac(R.cminus)).rank();
    CHECK(src_codim == tgt_codim);
    // Lifting an already split realization keeps the flag and adds nothing.
    auto [hat2, pi2] = lift(hat, LiftMode::split);
    CHECK(classify(hat2).split);
    CHECK(hat2.t == hat.t);
}

TEST_CASE("straight lift adjoins dual directions") {
    // Non-straight input: singular symmetric matrix realized on itself.
    auto datum = singular_datum();
    Realization R;
    R.datum = datum;
    R.P = standard_matrix(datum);
    R.t = 2;
    R.root = R.P.entries;
    R.cplus = {{ExponentPoly(Rat(1)), ExponentPoly()},
               {ExponentPoly(), ExponentPoly(Rat(1))}};
    R.cminus = R.cplus;
    R.validate();
    REQUIRE_FALSE(classify(R).straight);
    auto [hat, pi] = lift(R, LiftMode::straight);
    CHECK(classify(hat).straight);
    CHECK(hat.t == R.t + 2);
    // No dual vectors exist here, so the fallback projection is not a
    // strict morphism.
    CHECK_THROWS_AS((void)morphism_kernel(pi), NotAMorphism);

    // On a straight input the lift comes with a genuine morphism whose
    // kernel is killed by all lifted roots.
    auto datum2 = build_datum(TypeTag::A, 2);
    auto R2 = build_realization(generic_matrix(datum2), datum2,
                                RealizationFlavor::straight_split, 4);
    auto [hat2, pi2] = lift(R2, LiftMode::straight);
    CHECK(classify(hat2).straight);
    CHECK(classify(hat2).split);
    FracMat K = morphism_kernel(pi2);
    CHECK(K.cols() == 2);
}

TEST_CASE("identity morphism has zero kernel") {
    auto datum = build_datum(TypeTag::A, 2);
    auto R = build_realization(generic_matrix(datum), datum,
                               RealizationFlavor::straight_split, 4);
    RealizationMorphism id;
    id.source = R;
    id.target = R;
    id.sigma = {1, 2};
    id.map.assign(4, std::vector<ExponentPoly>(4));
    for (int g = 0; g < 4; ++g) id.map[g][g] = ExponentPoly(Rat(1));
    CHECK(morphism_kernel(id).cols() == 0);
}

TEST_CASE("quotient by a central line") {
    auto datum = build_datum(TypeTag::A, 2);
    auto P = generic_matrix(datum);
    auto R5 = build_realization(P, datum, RealizationFlavor::straight_split, 5);
    auto R4 = build_realization(P, datum, RealizationFlavor::straight_split, 4);
    // Drop the fifth coordinate: it pairs to zero with every root and
    // carries no coroot coordinate.
    RealizationMorphism pi;
    pi.source = R5;
    pi.target = R4;
    pi.sigma = {1, 2};
    pi.map.assign(4, std::vector<ExponentPoly>(5));
    for (int g = 0; g < 4; ++g) pi.map[g][g] = ExponentPoly(Rat(1));
    FracMat K = morphism_kernel(pi);
    CHECK(K.cols() == 1);
    // Kernel vector is the central line e_5.
    CHECK(K.at(4, 0) == PolyFrac(1));
}

TEST_CASE("symmetrized companion") {
    auto datum = build_datum(TypeTag::A, 2);
    auto P = generic_matrix(datum);
    auto R = build_realization(P, datum, RealizationFlavor::straight_split, 4);
    auto S = symmetrized_realization(R);
    // alpha_j(S_i) = d_i a_ij, independent of the antisymmetric part.
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            CHECK(S.alpha(j, S.tplus(i)) ==
                  ExponentPoly::unit(datum.d_at(i) * Rat(datum.a(i, j))));
    // A different antisymmetric perturbation gives the same companion.
    MultiparamMatrix P2 = standard_matrix(datum);
    ExponentPoly lam = ExponentPoly::atom(named_atom("lam"));
    P2.entries[0][1] += lam;
    P2.entries[1][0] -= lam;
    auto R2 = build_realization(P2, datum, RealizationFlavor::straight_split, 4);
    auto S2 = symmetrized_realization(R2);
    CHECK(S2.P.entries == S.P.entries);

    // Symmetric input with coinciding coroots is its own companion.
    auto Rsym = build_realization(standard_matrix(datum), datum,
                                  RealizationFlavor::straight_small, 2);
    auto Ssym = symmetrized_realization(Rsym);
    CHECK(Ssym.cplus == Rsym.cplus);

    // Non-straight inputs are rejected.
    auto sing = singular_datum();
    Realization NS;
    NS.datum = sing;
    NS.P = standard_matrix(sing);
    NS.t = 2;
    NS.root = NS.P.entries;
    NS.cplus = {{ExponentPoly(Rat(1)), ExponentPoly()},
                {ExponentPoly(), ExponentPoly(Rat(1))}};
    NS.cminus = NS.cplus;
    CHECK_THROWS_AS((void)symmetrized_realization(NS), NotStraight);
}

TEST_CASE("constructed realizations satisfy the pairing identities") {
    for (const auto& entry : desk_catalogue()) {
        CAPTURE(entry.label);
        auto datum = build_datum(entry.type, entry.rank);
        auto P = generic_matrix(datum);
        int n = datum.rank;
        int s = to_frac(standard_matrix(datum).entries).rank();
        for (auto flavor : {RealizationFlavor::straight_split,
                            RealizationFlavor::straight_small,
                            RealizationFlavor::split_minimal}) {
            if (flavor == RealizationFlavor::straight_small && s < n) {
                // The generic antisymmetric part escapes a singular
                // symmetric row space.
                CHECK_THROWS_AS(
                    build_realization(P, datum, flavor, 2 * n - s), SmallObstruction);
                continue;
            }
            int t = flavor == RealizationFlavor::straight_split ? 3 * n - s
                    : flavor == RealizationFlavor::straight_small ? 2 * n - s
                                                                  : 2 * n;
            auto R = build_realization(P, datum, flavor, t);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    CHECK(R.alpha(j, R.tplus(i)) == P.at(i, j));
                    CHECK(R.alpha(j, R.tminus(i)) == P.at(j, i));
                }
        }
    }
}
