// Polynomial form of the quantum algebra: the multiparameter ring in
// normal form (q_{ji} eliminated through q_{ij} q_{ji} = q_{ii}^{a_ij},
// q_{ii} = q^{2 d_i}), the presentation on group-like generators
// K_i = e^{+h T_i^+} and L_i = e^{-h T_i^-} with no primitive torals,
// the embedding into the formal model, the even-integrality conditions
// that let a toral twist act on the coproduct, and composition of
// multiparameters by group 2-cocycles on the K/L lattice.
#pragma once

#include "hopf.hpp"

namespace mpq {

// ---------------------------------------------------------------------------
// Multiparameters of polynomial type.
// ---------------------------------------------------------------------------

// q_{ij} = q^{exponents[i][j]}; the normal form keeps q^{1/2} and the
// entries above the diagonal, everything else being determined by the
// defining identities.  A specialization assigns rational exponent
// values to the free parameter atoms; the caller asserts that the
// resulting values are not roots of unity.
struct PolyMultiparam {
    CartanSuperDatum datum;
    MultiparamMatrix exponents;
    std::map<AtomId, Rat> specialization;
    bool not_root_of_unity = true;

    int n() const { return datum.rank; }

    void validate() const {
        if (!check_cartan_type(exponents, datum))
            throw NotCartanType("multiparameter is not of Cartan type for the given datum");
    }

    // Fully generic entries (free atoms above the diagonal).
    static PolyMultiparam generic(const CartanSuperDatum& d) {
        return PolyMultiparam{d, generic_matrix(d), {}, true};
    }
    // The standard multiparameter q_{ij} = q^{d_i a_ij}.
    static PolyMultiparam standard(const CartanSuperDatum& d) {
        return PolyMultiparam{d, standard_matrix(d), {}, true};
    }

    // Exponent of q_{ij}, with the specialization applied.
    ExponentPoly exp_at(int i, int j) const {
        ExponentPoly e = exponents.at(i, j);
        for (const auto& [a, v] : specialization) e = e.substitute(a, ExponentPoly(v));
        return e;
    }
    // The eliminated entry, recomputed from the normal form:
    // q_{ji} = q_{ii}^{a_ij} q_{ij}^{-1}.
    ExponentPoly eliminated(int i, int j) const {
        return Rat(datum.a(i, j)) * exp_at(i, i) - exp_at(i, j);
    }
    ToralScalar q_at(int i, int j) const { return ToralScalar::q_power(exp_at(i, j)); }
    // k_{ij} = q_{ij}^{1/2} q_{ji}^{-1/2}.
    ToralScalar k_at(int i, int j) const {
        return ToralScalar::q_power(Rat(1, 2) * (exp_at(i, j) - exp_at(j, i)));
    }

    PolyMultiparam specialize(const std::map<AtomId, Rat>& values,
                              bool caller_asserts_not_root_of_unity = true) const {
        PolyMultiparam out = *this;
        for (const auto& [a, v] : values) out.specialization[a] = v;
        out.not_root_of_unity = caller_asserts_not_root_of_unity;
        return out;
    }

    friend bool operator==(const PolyMultiparam& a, const PolyMultiparam& b) {
        return a.exponents == b.exponents && a.specialization == b.specialization;
    }
};

// ---------------------------------------------------------------------------
// The polynomial algebra handle: engine instance whose only toral
// elements are the K/L group-likes.
// ---------------------------------------------------------------------------

struct PolyAlgebraHandle {
    CartanSuperDatum datum;
    PolyMultiparam q;
    Context ctx; // split minimal realization: basis = the coroots
    RelationSet relations;

    AlgebraElement K(int i) const { return AlgebraElement::k_plus(ctx, i); }
    AlgebraElement L(int i) const { return AlgebraElement::l_minus(ctx, i); }
    AlgebraElement K_inv(int i) const {
        GroupExponent lam = ctx->tplus(i);
        for (auto& x : lam) x = ExponentPoly() - x;
        return AlgebraElement::grouplike(ctx, lam);
    }
    AlgebraElement L_inv(int i) const {
        return AlgebraElement::grouplike(ctx, ctx->tminus(i));
    }
    AlgebraElement E(int i) const { return AlgebraElement::E(ctx, i); }
    AlgebraElement F(int i) const { return AlgebraElement::F(ctx, i); }
};

inline PolyAlgebraHandle build_poly(const CartanSuperDatum& datum, const PolyMultiparam& q) {
    q.validate();
    MultiparamMatrix P;
    P.entries.assign(datum.rank, std::vector<ExponentPoly>(datum.rank));
    for (int i = 1; i <= datum.rank; ++i)
        for (int j = 1; j <= datum.rank; ++j) P.entries[i - 1][j - 1] = q.exp_at(i, j);
    Realization R =
        build_realization(P, datum, RealizationFlavor::split_minimal, 2 * datum.rank);
    PolyAlgebraHandle h;
    h.datum = datum;
    h.q = q;
    h.ctx = std::make_shared<Realization>(R);
    h.relations = relation_set(datum, P, R);
    return h;
}

// Structural checks for the handle: the group-like commutation rules of
// the presentation, the cross relation shape, the Hopf tables on
// generators, and the identification with the formal model under
// K_i -> e^{+h T_i^+}, L_i -> e^{-h T_i^-}.
inline VerifyReport verify_poly(const PolyAlgebraHandle& h) {
    VerifyReport rep;
    const Context& ctx = h.ctx;
    int n = h.datum.rank;
    auto push = [&](const std::string& name, bool ok, const std::string& residue) {
        rep.checks.push_back(CheckResult{name, ok, ok ? "" : residue});
    };
    auto idx = [](int i, int j) {
        return "[" + std::to_string(i) + "," + std::to_string(j) + "]";
    };

    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            ToralScalar qij = ToralScalar::q_power(ctx->P.at(i, j));
            ToralScalar qji_inv = ToralScalar::q_power(ExponentPoly() - ctx->P.at(j, i));
            push("comm.KE" + idx(i, j),
                 h.K(i) * h.E(j) * h.K_inv(i) == qij * h.E(j),
                 "K-E commutation misses the multiparameter");
            push("comm.LE" + idx(i, j),
                 h.L(i) * h.E(j) * h.L_inv(i) == qji_inv * h.E(j),
                 "L-E commutation misses the multiparameter");
            ToralScalar qij_inv = ToralScalar::q_power(ExponentPoly() - ctx->P.at(i, j));
            ToralScalar qji = ToralScalar::q_power(ctx->P.at(j, i));
            push("comm.KF" + idx(i, j),
                 h.K(i) * h.F(j) * h.K_inv(i) == qij_inv * h.F(j),
                 "K-F commutation misses the multiparameter");
            push("comm.LF" + idx(i, j),
                 h.L(i) * h.F(j) * h.L_inv(i) == qji * h.F(j),
                 "L-F commutation misses the multiparameter");
        }

    // Lattice commutativity and inverses.
    bool lattice = true;
    for (int i = 1; i <= n && lattice; ++i)
        for (int j = 1; j <= n && lattice; ++j)
            lattice = h.K(i) * h.L(j) == h.L(j) * h.K(i) &&
                      h.K(i) * h.K(j) == h.K(j) * h.K(i) &&
                      h.L(i) * h.L(j) == h.L(j) * h.L(i) &&
                      h.K(i) * h.K_inv(i) == AlgebraElement::one(ctx) &&
                      h.L(i) * h.L_inv(i) == AlgebraElement::one(ctx);
    push("comm.lattice", lattice, "K/L lattice fails to be a commutative group");

    // Cross relation shape of the presentation.
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            AlgebraElement want = q_supercommutator(h.E(i), h.F(j), ToralScalar(Rat(1)));
            if (i == j) {
                Rat d = h.datum.d_at(i);
                ToralScalar coeff(ExpSum(Rat(1)),
                                  UniLaurent::q_power(d) - UniLaurent::q_power(-d));
                want -= coeff * (h.K(i) - h.L(i));
            }
            const AlgebraElement* got = h.relations.find("cross" + idx(i, j));
            push("cross" + idx(i, j), got != nullptr && *got == want,
                 "cross relation differs from the presentation");
        }

    // Hopf tables on generators.
    for (int i = 1; i <= n; ++i) {
        std::string si = std::to_string(i);
        push("hopf.coK[" + si + "]",
             coproduct(h.K(i)) == TensorElement::from_slots({h.K(i), h.K(i)}),
             "K is not group-like");
        push("hopf.coL[" + si + "]",
             coproduct(h.L(i)) == TensorElement::from_slots({h.L(i), h.L(i)}),
             "L is not group-like");
        push("hopf.coE[" + si + "]",
             coproduct(h.E(i)) ==
                 TensorElement::from_slots({h.E(i), AlgebraElement::one(ctx)}) +
                     TensorElement::from_slots({h.K(i), h.E(i)}),
             "coproduct of E misses the table");
        push("hopf.coF[" + si + "]",
             coproduct(h.F(i)) ==
                 TensorElement::from_slots({h.F(i), h.L(i)}) +
                     TensorElement::from_slots({AlgebraElement::one(ctx), h.F(i)}),
             "coproduct of F misses the table");
        push("hopf.counit[" + si + "]",
             counit(h.K(i)) == ToralScalar(Rat(1)) &&
                 counit(h.L(i)) == ToralScalar(Rat(1)) && counit(h.E(i)).is_zero() &&
                 counit(h.F(i)).is_zero(),
             "counit table mismatch");
        push("hopf.antipode[" + si + "]",
             antipode(h.K(i)) == h.K_inv(i) && antipode(h.L(i)) == h.L_inv(i) &&
                 antipode(h.E(i)) == -ToralScalar(Rat(1)) * (h.K_inv(i) * h.E(i)) &&
                 antipode(h.F(i)) == -ToralScalar(Rat(1)) * (h.F(i) * h.L_inv(i)),
             "antipode table mismatch");
    }

    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

// ---------------------------------------------------------------------------
// Twist integrality: when a toral twist keeps the deformed coproduct
// inside the K/L lattice.
// ---------------------------------------------------------------------------

struct IntegralityWitness {
    std::string block; // which of the four matrix products failed
    int row = 0, col = 0;
    Rat value;
};

struct IntegralityResult {
    bool ok = true;
    std::optional<IntegralityWitness> witness;
};

namespace detail {

inline bool is_minimal_coroot_basis(const Realization& R) {
    int n = R.n();
    if (R.t != 2 * n) return false;
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < 2 * n; ++g) {
            ExponentPoly cp = g == i ? ExponentPoly(Rat(1)) : ExponentPoly();
            ExponentPoly cm = g == n + i ? ExponentPoly(Rat(1)) : ExponentPoly();
            if (!(R.cplus[i][g] == cp) || !(R.cminus[i][g] == cm)) return false;
        }
    return true;
}

// Matrix entries live on the q-exponent line (multiples of the unit
// atom); the integrality conditions apply to those rational multiples.
inline Rat even_integer_entry(const ExponentPoly& e) {
    if (!e.is_unit_line())
        throw UnboundAtom("integrality entry is not numeric: " + e.str());
    return e.unit_coefficient();
}

} // namespace detail

// Checks the four block conditions P^T Phi_+^eta in 2 M_n(Z) and
// P Phi_-^eta in 2 M_n(Z) for a twist on a realization whose toral
// basis is exactly the coroots (positive ones first).  All entries of
// the products must be even integers; the witness names the first
// offending product entry.
inline IntegralityResult integrality_check(const TwistData& twist, const Realization& R) {
    twist.validate();
    if (!detail::is_minimal_coroot_basis(R))
        throw NotMinimalBasis("integrality check needs the coroot basis realization");
    int n = R.n();
    if (twist.size() != 2 * n)
        throw SizeMismatch("twist size differs from realization rank");

    IntegralityResult res;
    // block(eps, eta) at (i, j) = phi[eps block + i][eta block + j].
    auto cond = [&](bool plus_block, int eta, const std::string& name) {
        int off_eps = plus_block ? 0 : n;
        int off_eta = eta == 0 ? 0 : n;
        for (int l = 0; l < n && res.ok; ++l)
            for (int j = 0; j < n && res.ok; ++j) {
                ExponentPoly sum;
                for (int i = 0; i < n; ++i) {
                    // alpha_l(T_i^+) = p_{il};  alpha_l(T_i^-) = p_{li}.
                    const ExponentPoly& a =
                        plus_block ? R.P.entries[i][l] : R.P.entries[l][i];
                    sum += a * twist.phi[off_eps + i][off_eta + j];
                }
                Rat v = detail::even_integer_entry(sum);
                if (denominator(v) != 1 || numerator(v) % 2 != 0) {
                    res.ok = false;
                    res.witness = IntegralityWitness{name, l + 1, j + 1, v};
                }
            }
    };
    cond(true, 0, "P^T*Phi_+^+");
    cond(true, 1, "P^T*Phi_+^-");
    cond(false, 0, "P*Phi_-^+");
    cond(false, 1, "P*Phi_-^-");
    return res;
}

// ---------------------------------------------------------------------------
// Composition of multiparameters by a group 2-cocycle on the K/L
// lattice.
// ---------------------------------------------------------------------------

// The cocycle is a bicharacter exponent matrix on the 2n lattice
// generators (K_1..K_n, L_1..L_n).  It must be antisymmetric and must
// vanish against the central products K_i L_i^{-1}; since
// K_i L_i^{-1} = e^{h (T_i^+ + T_i^-)}, that means row(K_i) = row(L_i)
// for every i.  The composed multiparameter shifts the exponents by
// the K-against-K block.
inline PolyMultiparam compose_multiparam(const PolyMultiparam& q, const PolyMatrix& qhat) {
    int n = q.n();
    if (static_cast<int>(qhat.size()) != 2 * n)
        throw SizeMismatch("cocycle exponent matrix must act on the 2n lattice generators");
    detail::require_antisymmetric(qhat, "lattice cocycle");
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < 2 * n; ++g)
            if (!(qhat[i][g] - qhat[n + i][g]).is_zero())
                throw Gamma0Violation("cocycle does not vanish on the central products");

    PolyMultiparam out = q;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.exponents.entries[i][j] += qhat[i][j];
    out.validate();
    return out;
}

// Solves base * qhat = target in exponents, extending the n x n
// difference to the full lattice so that the central products stay in
// the radical.
inline PolyMatrix solve_compose(const PolyMultiparam& base, const PolyMultiparam& target) {
    int n = base.n();
    if (target.n() != n) throw SizeMismatch("multiparameter sizes differ");
    PolyMatrix diff(n, std::vector<ExponentPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            diff[i][j] = target.exponents.entries[i][j] - base.exponents.entries[i][j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(diff[i][j] + diff[j][i]).is_zero())
                throw SymmetricPartMismatch(
                    "multiparameters have different symmetric parts");
    PolyMatrix qhat(2 * n, std::vector<ExponentPoly>(2 * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            qhat[i][j] = diff[i][j];
            qhat[i][n + j] = diff[i][j];
            qhat[n + i][j] = diff[i][j];
            qhat[n + i][n + j] = diff[i][j];
        }
    return qhat;
}

} // namespace mpq
