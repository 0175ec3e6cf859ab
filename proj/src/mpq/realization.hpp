// Realizations of multiparameter matrices: a Cartan space h of rank t
// carrying roots alpha_i (rows of the root matrix) and coroot pairs
// T_i^+/T_i^- (rows of the coroot coordinate matrices), such that
// alpha_j(T_i^+) = p_ij and alpha_j(T_i^-) = p_ji.  Includes the
// classification predicates, deterministic constructors, lifts,
// morphisms, and kernels.
#pragma once

#include "cartan.hpp"
#include "linalg.hpp"

#include <optional>
#include <vector>

namespace mpq {

struct Realization {
    CartanSuperDatum datum;
    MultiparamMatrix P;    // the realized matrix (n x n)
    int t = 0;             // rank of h
    PolyMatrix root;       // n x t, alpha_i(H_g)
    PolyMatrix cplus;      // n x t, T_i^+ coordinates
    PolyMatrix cminus;     // n x t, T_i^- coordinates

    int n() const { return datum.rank; }

    // alpha_j evaluated on the toral element with coordinate vector v.
    ExponentPoly alpha(int j, const std::vector<ExponentPoly>& v) const {
        ExponentPoly out;
        for (int g = 0; g < t; ++g) out += root[j - 1][g] * v[g];
        return out;
    }
    const std::vector<ExponentPoly>& tplus(int i) const { return cplus[i - 1]; }
    const std::vector<ExponentPoly>& tminus(int i) const { return cminus[i - 1]; }
    std::vector<ExponentPoly> s_row(int i) const {
        std::vector<ExponentPoly> r(t);
        for (int g = 0; g < t; ++g)
            r[g] = Rat(1, 2) * (cplus[i - 1][g] + cminus[i - 1][g]);
        return r;
    }
    std::vector<ExponentPoly> lambda_row(int i) const {
        std::vector<ExponentPoly> r(t);
        for (int g = 0; g < t; ++g)
            r[g] = Rat(1, 2) * (cplus[i - 1][g] - cminus[i - 1][g]);
        return r;
    }
    PolyMatrix s_matrix() const {
        PolyMatrix s(n());
        for (int i = 1; i <= n(); ++i) s[i - 1] = s_row(i);
        return s;
    }

    // Structural invariants: the coroot/root pairings reproduce P and
    // P^T, and the S_i rows stay independent after killing non-unit
    // atoms.
    void validate() const {
        if (static_cast<int>(root.size()) != n() || static_cast<int>(cplus.size()) != n() ||
            static_cast<int>(cminus.size()) != n() || P.size() != n())
            throw RankMismatch("realization blocks disagree with the datum rank");
        FracMat A = to_frac(root), Cp = to_frac(cplus), Cm = to_frac(cminus);
        FracMat Pm = to_frac(P.entries);
        if (!(Cp * A.transpose() == Pm))
            throw InvariantViolation("coroot/root pairing does not reproduce P");
        if (!(Cm * A.transpose() == Pm.transpose()))
            throw InvariantViolation("coroot/root pairing does not reproduce P^T");
        if (to_frac_killed(s_matrix()).rank() != n())
            throw InvariantViolation("symmetrized coroots are dependent mod parameters");
    }
};

struct RealizationFlags {
    bool straight = false;
    bool split = false;
    bool small = false;
    bool minimal = false;
    bool operator==(const RealizationFlags&) const = default;
};

inline RealizationFlags classify(const Realization& R) {
    RealizationFlags f;
    int n = R.n();
    f.straight = to_frac_killed(R.root).rank() == n;
    FracMat stacked = FracMat::stack(to_frac(R.cplus), to_frac(R.cminus));
    FracMat stacked_killed =
        FracMat::stack(to_frac_killed(R.cplus), to_frac_killed(R.cminus));
    f.split = stacked_killed.rank() == 2 * n;
    f.small = stacked.rank() == to_frac(R.s_matrix()).rank();
    f.minimal = stacked.rank() == R.t;
    return f;
}

enum class RealizationFlavor { straight_split, straight_small, split_minimal };

inline Realization build_realization(const MultiparamMatrix& P, const CartanSuperDatum& datum,
                                     RealizationFlavor flavor, int t) {
    if (!check_cartan_type(P, datum))
        throw NotCartanType("matrix is not of Cartan type for the given datum");
    int n = datum.rank;
    FracMat Ps = to_frac(standard_matrix(datum).entries);
    int s = Ps.rank();

    Realization R;
    R.datum = datum;
    R.P = P;
    R.t = t;
    auto zeros = [&](int rows) { return PolyMatrix(rows, std::vector<ExponentPoly>(t)); };

    switch (flavor) {
        case RealizationFlavor::straight_split: {
            if (t < 3 * n - s)
                throw RankTooSmall("straight split construction needs rank >= 3n - rk(P_s)");
            // alpha_i = the i-th coordinate; T_i^+ reads off the rows of P,
            // T_i^- the rows of P^T plus fresh completion vectors.
            R.root = zeros(n);
            for (int i = 0; i < n; ++i) R.root[i][i] = ExponentPoly(Rat(1));
            R.cplus = zeros(n);
            R.cminus = zeros(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    R.cplus[i][j] = P.entries[i][j];
                    R.cminus[i][j] = P.entries[j][i];
                }
            for (int i = 0; i < n; ++i) R.cminus[i][n + i] = ExponentPoly(Rat(1));
            break;
        }
        case RealizationFlavor::straight_small: {
            if (t < 2 * n - s)
                throw RankTooSmall("straight small construction needs rank >= 2n - rk(P_s)");
            MultiparamMatrix Pa = P.antisymmetric_part();
            FracMat stacked = FracMat::stack(Ps, to_frac(Pa.entries));
            if (stacked.rank() != s)
                throw SmallObstruction(
                    "antisymmetric part leaves the row space of the symmetric part");
            // S_i = H_i; roots read off P_s on that block, completed to
            // independence at the non-pivot rows of P_s.
            R.root = zeros(n);
            MultiparamMatrix PsPoly = standard_matrix(datum);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) R.root[i][j] = PsPoly.entries[i][j];
            FracMat ps_copy = Ps;
            std::vector<int> pivots = ps_copy.rref();
            std::vector<bool> pivot_row(n, false);
            // P_s is symmetric: pivot columns index an independent row set.
            for (int c : pivots) pivot_row[c] = true;
            int next = n;
            for (int i = 0; i < n; ++i)
                if (!pivot_row[i]) R.root[i][next++] = ExponentPoly(Rat(1));
            // Lambda rows solve W * P_s = P_a inside the S-span.
            auto W = Ps.solve_left(to_frac(Pa.entries));
            if (!W) throw SmallObstruction("antisymmetric part is not expressible");
            R.cplus = zeros(n);
            R.cminus = zeros(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    ExponentPoly w = W->at(i, j).to_poly();
                    ExponentPoly delta = (i == j) ? ExponentPoly(Rat(1)) : ExponentPoly();
                    R.cplus[i][j] = delta + w;
                    R.cminus[i][j] = delta - w;
                }
            break;
        }
        case RealizationFlavor::split_minimal: {
            if (t != 2 * n)
                throw RankTooSmall("split minimal construction uses the coroot basis: rank = 2n");
            // Basis = the coroots themselves; roots pair against them by P.
            R.cplus = zeros(n);
            R.cminus = zeros(n);
            for (int i = 0; i < n; ++i) {
                R.cplus[i][i] = ExponentPoly(Rat(1));
                R.cminus[i][n + i] = ExponentPoly(Rat(1));
            }
            R.root = zeros(n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    R.root[j][i] = P.entries[i][j];      // alpha_j(T_i^+) = p_ij
                    R.root[j][n + i] = P.entries[j][i];  // alpha_j(T_i^-) = p_ji
                }
            break;
        }
    }
    R.validate();
    return R;
}

struct RealizationMorphism {
    Realization source;
    Realization target;
    PolyMatrix map;               // t_target x t_source, phi(x) = map * x
    std::vector<int> sigma;       // permutation of {1..n}, sigma[i-1]

    void validate() const {
        int n = source.n();
        if (target.n() != n) throw NotAMorphism("rank mismatch between realizations");
        if (static_cast<int>(map.size()) != target.t ||
            (target.t > 0 && static_cast<int>(map[0].size()) != source.t))
            throw NotAMorphism("morphism matrix has the wrong shape");
        FracMat F = to_frac(map);
        FracMat Cp_src = to_frac(source.cplus), Cm_src = to_frac(source.cminus);
        FracMat A_src = to_frac(source.root), A_tgt = to_frac(target.root);
        // phi(T_i^+-) = T_{sigma(i)}^+- :  C_src * F^T = sigma-permuted C_tgt
        FracMat lhs_p = Cp_src * F.transpose();
        FracMat lhs_m = Cm_src * F.transpose();
        for (int i = 0; i < n; ++i) {
            int si = sigma[i] - 1;
            for (int g = 0; g < target.t; ++g) {
                if (!(lhs_p.at(i, g) == PolyFrac(target.cplus[si][g])))
                    throw NotAMorphism("positive coroots are not matched");
                if (!(lhs_m.at(i, g) == PolyFrac(target.cminus[si][g])))
                    throw NotAMorphism("negative coroots are not matched");
            }
        }
        // pullback of target roots: alpha_tgt_{sigma(i)} o phi = alpha_src_i
        for (int i = 0; i < n; ++i) {
            int si = sigma[i] - 1;
            for (int g = 0; g < source.t; ++g) {
                PolyFrac acc(0);
                for (int h = 0; h < target.t; ++h)
                    acc += PolyFrac(target.root[si][h]) * F.at(h, g);
                if (!(acc == PolyFrac(source.root[i][g])))
                    throw NotAMorphism("root pullback fails");
            }
        }
    }
};

// Kernel basis of a realization morphism (columns), with the structural
// guarantee that every kernel vector kills all source roots.
inline FracMat morphism_kernel(const RealizationMorphism& phi) {
    phi.validate();
    FracMat F = to_frac(phi.map);
    FracMat K = F.kernel();
    FracMat A = to_frac(phi.source.root);
    FracMat pairing = A * K;
    if (!pairing.is_zero())
        throw InvariantViolation("kernel vector not annihilated by the source roots");
    return K;
}

enum class LiftMode { split, straight };

inline std::pair<Realization, RealizationMorphism> lift(const Realization& R, LiftMode mode) {
    int n = R.n();
    Realization hat = R;
    std::vector<int> id_perm(n);
    for (int i = 0; i < n; ++i) id_perm[i] = i + 1;

    if (mode == LiftMode::split) {
        // Find the coroot rows that are dependent mod parameters and give
        // each one a fresh central direction (the roots extend by zero, so
        // the realization property and straightness are untouched).
        PolyMatrix stacked = R.cplus;
        stacked.insert(stacked.end(), R.cminus.begin(), R.cminus.end());
        std::vector<int> dependent;
        PolyMatrix kept;
        for (int r = 0; r < 2 * n; ++r) {
            kept.push_back(stacked[r]);
            FracMat killed = to_frac_killed(kept);
            if (killed.rank() < static_cast<int>(kept.size())) {
                dependent.push_back(r);
                kept.pop_back();
            }
        }
        int extra = static_cast<int>(dependent.size());
        hat.t = R.t + extra;
        auto widen = [&](PolyMatrix& m) {
            for (auto& row : m) row.resize(hat.t);
        };
        widen(hat.root);
        widen(hat.cplus);
        widen(hat.cminus);
        for (int k = 0; k < extra; ++k) {
            int r = dependent[k];
            if (r < n) hat.cplus[r][R.t + k] = ExponentPoly(Rat(1));
            else hat.cminus[r - n][R.t + k] = ExponentPoly(Rat(1));
        }
        hat.validate();
        RealizationMorphism pi;
        pi.source = hat;
        pi.target = R;
        pi.sigma = id_perm;
        pi.map.assign(R.t, std::vector<ExponentPoly>(hat.t));
        for (int g = 0; g < R.t; ++g) pi.map[g][g] = ExponentPoly(Rat(1));
        pi.validate();
        return {hat, pi};
    }

    // Straight lift: adjoin a rank-n summand with alpha_hat_i(e_j) = delta_ij
    // and keep the coroots.
    hat.t = R.t + n;
    for (auto& row : hat.cplus) row.resize(hat.t);
    for (auto& row : hat.cminus) row.resize(hat.t);
    for (int i = 0; i < n; ++i) {
        hat.root[i].resize(hat.t);
        hat.root[i][R.t + i] = ExponentPoly(Rat(1));
    }
    hat.validate();

    RealizationMorphism pi;
    pi.source = hat;
    pi.target = R;
    pi.sigma = id_perm;
    pi.map.assign(R.t, std::vector<ExponentPoly>(hat.t));
    for (int g = 0; g < R.t; ++g) pi.map[g][g] = ExponentPoly(Rat(1));
    // A strict morphism needs the adjoined directions to land on dual
    // vectors of the original roots; when those exist (roots of full row
    // rank over the fraction field) we use them, otherwise we return the
    // plain projection (which drops the root-pullback property).
    auto dual = to_frac(R.root).right_inverse();
    if (dual) {
        for (int g = 0; g < R.t; ++g)
            for (int j = 0; j < n; ++j) pi.map[g][R.t + j] = dual->at(g, j).to_poly();
        pi.validate();
    }
    return {hat, pi};
}

// The Kac-style symmetrized companion: same roots, coroots S_i, matrix P_s.
inline Realization symmetrized_realization(const Realization& R) {
    if (!classify(R).straight)
        throw NotStraight("symmetrized companion requires a straight realization");
    Realization out = R;
    out.P = R.P.symmetric_part();
    out.cplus = R.s_matrix();
    out.cminus = out.cplus;
    out.validate();
    return out;
}

} // namespace mpq
