// Deformation calculus on multiparameter matrices and realizations:
// the twist action (which moves coroots) and the 2-cocycle action
// (which moves roots), together with the inverse solvers.
#pragma once

#include "realization.hpp"

namespace mpq {

namespace detail {

inline void require_antisymmetric(const PolyMatrix& m, const char* what) {
    int t = static_cast<int>(m.size());
    for (int i = 0; i < t; ++i) {
        if (static_cast<int>(m[i].size()) != t)
            throw SizeMismatch(std::string(what) + " matrix is not square");
        for (int j = 0; j < t; ++j)
            if (m[i][j] + m[j][i] != ExponentPoly())
                throw NotAntisymmetric(std::string(what) + " matrix fails X^T = -X");
    }
}

inline PolyMatrix poly_product(const PolyMatrix& a, const PolyMatrix& b) {
    return from_frac(to_frac(a) * to_frac(b));
}

inline PolyMatrix poly_transpose(const PolyMatrix& a) {
    return from_frac(to_frac(a).transpose());
}

} // namespace detail

struct TwistData {
    PolyMatrix phi; // t x t antisymmetric

    int size() const { return static_cast<int>(phi.size()); }
    void validate() const { detail::require_antisymmetric(phi, "twist"); }

    static TwistData zero(int t) {
        return TwistData{PolyMatrix(t, std::vector<ExponentPoly>(t))};
    }
    // Fully symbolic antisymmetric matrix with atoms `prefix_{g,k}`.
    static TwistData symbolic(int t, const std::string& prefix = "phi") {
        TwistData d = zero(t);
        for (int g = 0; g < t; ++g)
            for (int k = g + 1; k < t; ++k) {
                ExponentPoly a = ExponentPoly::atom(named_atom(
                    prefix + "_{" + std::to_string(g + 1) + "," + std::to_string(k + 1) + "}"));
                d.phi[g][k] = a;
                d.phi[k][g] = ExponentPoly() - a;
            }
        return d;
    }

    TwistData operator+(const TwistData& o) const {
        if (size() != o.size()) throw SizeMismatch("twist sum size mismatch");
        TwistData r = *this;
        for (int g = 0; g < size(); ++g)
            for (int k = 0; k < size(); ++k) r.phi[g][k] += o.phi[g][k];
        return r;
    }
};

struct CocycleData {
    PolyMatrix chi; // t x t antisymmetric, vanishing against the S_i rows

    int size() const { return static_cast<int>(chi.size()); }

    void validate(const Realization& R) const {
        detail::require_antisymmetric(chi, "cocycle");
        if (size() != R.t) throw SizeMismatch("cocycle size differs from realization rank");
        FracMat S = to_frac(R.s_matrix());
        if (!(S * to_frac(chi)).is_zero())
            throw NotAltS("cocycle does not vanish on the symmetrized coroots");
    }

    // The induced n x n matrix on positive coroots: chi(T_i^+, T_j^+).
    PolyMatrix induced(const Realization& R) const {
        FracMat Cp = to_frac(R.cplus);
        return from_frac(Cp * to_frac(chi) * Cp.transpose());
    }

    // chi evaluated on two coordinate vectors.
    ExponentPoly pair(const std::vector<ExponentPoly>& x,
                      const std::vector<ExponentPoly>& y) const {
        ExponentPoly out;
        for (int g = 0; g < size(); ++g)
            for (int h = 0; h < size(); ++h) out += x[g] * chi[g][h] * y[h];
        return out;
    }

    static CocycleData zero(int t) {
        return CocycleData{PolyMatrix(t, std::vector<ExponentPoly>(t))};
    }

    CocycleData operator+(const CocycleData& o) const {
        if (size() != o.size()) throw SizeMismatch("cocycle sum size mismatch");
        CocycleData r = *this;
        for (int g = 0; g < size(); ++g)
            for (int k = 0; k < size(); ++k) r.chi[g][k] += o.chi[g][k];
        return r;
    }
};

// Twist: P_Phi = P - A Phi A^T; coroots move by the Phi-pairing with the
// roots, the roots stay fixed.
inline std::pair<MultiparamMatrix, Realization> twist_deform(const MultiparamMatrix& P,
                                                             const Realization& R,
                                                             const TwistData& twist) {
    twist.validate();
    if (twist.size() != R.t) throw SizeMismatch("twist size differs from realization rank");
    FracMat A = to_frac(R.root);
    FracMat Phi = to_frac(twist.phi);
    FracMat correction = A * Phi; // row l, column k: -sum_g alpha_l(H_g) phi_kg

    MultiparamMatrix P_phi;
    P_phi.entries = from_frac(to_frac(P.entries) - correction * A.transpose());

    Realization out = R;
    out.P = P_phi;
    PolyMatrix corr = from_frac(correction);
    for (int i = 0; i < R.n(); ++i)
        for (int g = 0; g < R.t; ++g) {
            out.cplus[i][g] -= corr[i][g];
            out.cminus[i][g] += corr[i][g];
        }
    out.validate();
    return {P_phi, out};
}

// 2-cocycle: P_(chi) = P + chi(T^+, T^+); roots move by the chi-pairing
// with the coroots, the coroots stay fixed.
inline std::pair<MultiparamMatrix, Realization> cocycle_deform(const MultiparamMatrix& P,
                                                               const Realization& R,
                                                               const CocycleData& cocycle) {
    cocycle.validate(R);
    FracMat Cp = to_frac(R.cplus);
    FracMat X = to_frac(cocycle.chi);
    MultiparamMatrix P_chi;
    P_chi.entries = from_frac(to_frac(P.entries) + Cp * X * Cp.transpose());

    Realization out = R;
    out.P = P_chi;
    // alpha_i^(chi)(H_g) = alpha_i(H_g) + chi(H_g, T_i^+)  (= -(C+ X)_{ig})
    PolyMatrix shift = from_frac(Cp * X);
    for (int i = 0; i < R.n(); ++i)
        for (int g = 0; g < R.t; ++g) out.root[i][g] -= shift[i][g];
    out.validate();
    return {P_chi, out};
}

// Finds Phi with A Phi A^T = P - P' through a right inverse of the root
// matrix (leftmost-pivot elimination).
inline TwistData solve_twist(const MultiparamMatrix& P, const MultiparamMatrix& Pprime,
                             const Realization& R) {
    if (!(P.symmetric_part() == Pprime.symmetric_part()))
        throw SymmetricPartMismatch("twist equivalence requires equal symmetric parts");
    if (!classify(R).straight)
        throw NotStraight("twist solver requires a straight realization");
    auto B = to_frac(R.root).right_inverse();
    if (!B) throw NotStraight("root matrix has no right inverse");
    FracMat delta = to_frac(P.entries) - to_frac(Pprime.entries);
    TwistData out{from_frac(*B * delta * B->transpose())};
    out.validate();
    return out;
}

// Finds chi in Alt^S with P_(chi) = P': the values on positive coroots
// are P' - P, propagated by chi(T_i^-, -) = -chi(T_i^+, -) and extended
// by zero on the pivoting-chosen complement of the coroot span.
inline CocycleData solve_cocycle(const MultiparamMatrix& P, const MultiparamMatrix& Pprime,
                                 const Realization& R) {
    if (!(P.symmetric_part() == Pprime.symmetric_part()))
        throw SymmetricPartMismatch("cocycle equivalence requires equal symmetric parts");
    if (!classify(R).split)
        throw NotSplit("cocycle solver requires a split realization");
    int n = R.n(), t = R.t;
    FracMat stacked = FracMat::stack(to_frac(R.cplus), to_frac(R.cminus));
    FracMat probe = stacked;
    std::vector<int> pivots = probe.rref();
    std::vector<bool> is_pivot(t, false);
    for (int c : pivots) is_pivot[c] = true;
    // Basis-change matrix G: coroots first, then the identity complement.
    FracMat G(t, t);
    for (int r = 0; r < 2 * n; ++r)
        for (int c = 0; c < t; ++c) G.at(r, c) = stacked.at(r, c);
    int row = 2 * n;
    for (int c = 0; c < t; ++c)
        if (!is_pivot[c]) G.at(row++, c) = PolyFrac(1);
    auto Ginv = G.transpose().solve_left(FracMat::identity(t).transpose());
    if (!Ginv) throw NotSplit("coroot basis completion failed");
    // Ginv satisfies Ginv^T * G^T = I, i.e. G * Ginv = I (columns of Ginv
    // are the coordinates of the new basis).  We need H = G^{-1}.
    FracMat H = Ginv->transpose();
    FracMat delta = to_frac(Pprime.entries) - to_frac(P.entries);
    FracMat XB(t, t);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            XB.at(i, j) = delta.at(i, j);
            XB.at(i, n + j) = PolyFrac(0) - delta.at(i, j);
            XB.at(n + i, j) = PolyFrac(0) - delta.at(i, j);
            XB.at(n + i, n + j) = delta.at(i, j);
        }
    FracMat X = H * XB * H.transpose();
    CocycleData out{from_frac(X)};
    out.validate(R);
    return out;
}

} // namespace mpq
