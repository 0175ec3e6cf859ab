// Generator-level Lie superbialgebra calculus: the classical-limit
// layer of the quantum algebra.  Elements live in tensor powers (arity
// <= 3) of the span of the generators E_i, F_i, H_g with exact
// polynomial coefficients; brackets and cobrackets are given by closed
// tables, and deformations (toral twists of the cobracket, toral
// 2-cocycle deformations of the bracket) act on those tables.  The
// semiclassical limit extracts the cobracket from the first-order jet
// of the coproduct and checks it against the tables.
#pragma once

#include "hopf.hpp"

namespace mpq {

// ---------------------------------------------------------------------------
// Basis symbols and tensors.
// ---------------------------------------------------------------------------

struct LieGen {
    enum Kind { E, F, H } kind;
    int idx; // 1-based: generator index for E/F, toral coordinate for H

    friend bool operator==(const LieGen& a, const LieGen& b) {
        return a.kind == b.kind && a.idx == b.idx;
    }
    friend bool operator<(const LieGen& a, const LieGen& b) {
        return std::tie(a.kind, a.idx) < std::tie(b.kind, b.idx);
    }
    std::string str() const {
        static const char* names[] = {"E", "F", "H"};
        return std::string(names[kind]) + std::to_string(idx);
    }
};

inline int gen_parity(const Context& ctx, const LieGen& g) {
    return g.kind == LieGen::H ? 0 : ctx->datum.p(g.idx);
}

class LieTensor {
public:
    Context ctx;
    int arity = 1;
    std::map<std::vector<LieGen>, ExponentPoly> terms;

    LieTensor() = default;
    LieTensor(Context c, int k) : ctx(std::move(c)), arity(k) {
        if (arity < 1 || arity > 3) throw DegreeMismatch("tensor arity must be 1..3");
    }

    static LieTensor zero(Context c, int k) { return LieTensor(std::move(c), k); }
    static LieTensor basis(Context c, const LieGen& g,
                           const ExponentPoly& coeff = ExponentPoly(Rat(1))) {
        LieTensor e(std::move(c), 1);
        int bound = g.kind == LieGen::H ? e.ctx->t : e.ctx->n();
        if (g.idx < 1 || g.idx > bound) throw OutOfRange("generator index out of range");
        e.add_term({g}, coeff);
        return e;
    }
    // Toral element with the given H-coordinates.
    static LieTensor toral(Context c, const std::vector<ExponentPoly>& v) {
        LieTensor e(std::move(c), 1);
        if (static_cast<int>(v.size()) != e.ctx->t)
            throw SizeMismatch("toral coordinate vector has wrong length");
        for (int g = 0; g < e.ctx->t; ++g) e.add_term({LieGen{LieGen::H, g + 1}}, v[g]);
        return e;
    }
    // Pure tensor of arity-1 factors (no signs: this is placement, not
    // multiplication).
    static LieTensor from_slots(const std::vector<LieTensor>& slots) {
        if (slots.empty() || slots.size() > 3)
            throw DegreeMismatch("tensor arity must be 1..3");
        LieTensor e(slots[0].ctx, static_cast<int>(slots.size()));
        std::vector<LieGen> key;
        std::function<void(std::size_t, ExponentPoly)> rec = [&](std::size_t s,
                                                                 ExponentPoly c) {
            if (s == slots.size()) {
                e.add_term(key, c);
                return;
            }
            if (slots[s].arity != 1) throw DegreeMismatch("tensor factors must have arity 1");
            for (const auto& [k, sc] : slots[s].terms) {
                key.push_back(k[0]);
                rec(s + 1, c * sc);
                key.pop_back();
            }
        };
        rec(0, ExponentPoly(Rat(1)));
        return e;
    }

    bool is_zero() const { return terms.empty(); }

    void add_term(const std::vector<LieGen>& k, const ExponentPoly& c) {
        if (c.is_zero()) return;
        if (static_cast<int>(k.size()) != arity) throw DegreeMismatch("key arity mismatch");
        auto it = terms.find(k);
        if (it == terms.end()) {
            terms.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    LieTensor& operator+=(const LieTensor& o) {
        if (arity != o.arity) throw DegreeMismatch("tensor arity mismatch");
        for (const auto& [k, c] : o.terms) add_term(k, c);
        return *this;
    }
    LieTensor& operator-=(const LieTensor& o) {
        if (arity != o.arity) throw DegreeMismatch("tensor arity mismatch");
        for (const auto& [k, c] : o.terms) add_term(k, -c);
        return *this;
    }
    friend LieTensor operator+(LieTensor a, const LieTensor& b) { return a += b; }
    friend LieTensor operator-(LieTensor a, const LieTensor& b) { return a -= b; }
    friend LieTensor operator*(const ExponentPoly& c, const LieTensor& a) {
        LieTensor r(a.ctx, a.arity);
        for (const auto& [k, v] : a.terms) r.add_term(k, c * v);
        return r;
    }
    friend LieTensor operator*(const Rat& c, const LieTensor& a) {
        return ExponentPoly(c) * a;
    }
    friend bool operator==(const LieTensor& a, const LieTensor& b) {
        return a.arity == b.arity && a.terms == b.terms;
    }
    friend bool operator!=(const LieTensor& a, const LieTensor& b) { return !(a == b); }

    std::string str() const {
        if (terms.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : terms) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")";
            for (const auto& g : k) s += "*" + g.str();
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Symmetric-group operators with Koszul signs.
// ---------------------------------------------------------------------------

// Applies the slot permutation perm (image positions, 0-based: slot i
// of the input lands in slot perm[i]) with the Koszul sign of moving
// graded factors past each other; `alt` additionally multiplies by the
// sign of the permutation.
inline LieTensor permute_slots(const LieTensor& x, const std::vector<int>& perm,
                               bool alt = false) {
    if (static_cast<int>(perm.size()) != x.arity)
        throw DegreeMismatch("permutation length differs from tensor arity");
    LieTensor r(x.ctx, x.arity);
    int inv = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    for (const auto& [k, c] : x.terms) {
        // Koszul sign: one factor of (-1)^{|a||b|} per inverted pair of
        // odd factors.
        int sign = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j])
                    sign += gen_parity(x.ctx, k[i]) * gen_parity(x.ctx, k[j]);
        if (alt) sign += inv;
        std::vector<LieGen> nk(k.size(), LieGen{LieGen::H, 1});
        for (std::size_t i = 0; i < perm.size(); ++i) nk[perm[i]] = k[i];
        r.add_term(nk, (sign & 1) ? -c : c);
    }
    return r;
}

inline LieTensor braiding(const LieTensor& x) {
    if (x.arity != 2) throw DegreeMismatch("braiding needs arity 2");
    return permute_slots(x, {1, 0});
}
inline LieTensor alt2(const LieTensor& x) {
    if (x.arity != 2) throw DegreeMismatch("alt2 needs arity 2");
    return x + permute_slots(x, {1, 0}, /*alt=*/true);
}
inline LieTensor alt3(const LieTensor& x) {
    if (x.arity != 3) throw DegreeMismatch("alt3 needs arity 3");
    LieTensor r(x.ctx, 3);
    static const std::vector<std::vector<int>> s3 = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                     {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : s3) r += permute_slots(x, p, /*alt=*/true);
    return r;
}
// Symmetrizer of the alternating subgroup: id + (123) + (321).
inline LieTensor sym_a3(const LieTensor& x) {
    if (x.arity != 3) throw DegreeMismatch("sym_a3 needs arity 3");
    return x + permute_slots(x, {1, 2, 0}) + permute_slots(x, {2, 0, 1});
}

// ---------------------------------------------------------------------------
// The generator-span Lie superbialgebra data: bracket and cobracket
// tables over a fixed realization.
// ---------------------------------------------------------------------------

struct MpLSbAData {
    CartanSuperDatum datum;
    MultiparamMatrix P;
    Context ctx;
    PolyMatrix act;      // n x t: [H_g, E_j] = act[j-1][g-1] E_j, F with minus
    PolyMatrix co_plus;  // n x t: delta(E_i) = 2 (sum co_plus[i-1][g] H_{g+1}) ^ E_i
    PolyMatrix co_minus; // n x t: delta(F_i) = 2 (sum co_minus[i-1][g] H_{g+1}) ^ F_i

    static MpLSbAData standard(const CartanSuperDatum& d, const MultiparamMatrix& P,
                               const Realization& R) {
        if (!check_cartan_type(P, d))
            throw NotCartanType("matrix is not of Cartan type for the given datum");
        if (!(R.P == P)) throw DatumMismatch("realization does not realize the given matrix");
        Context ctx = std::make_shared<Realization>(R);
        return MpLSbAData{d, P, ctx, ctx->root, ctx->cplus, ctx->cminus};
    }

    // Tabled Lie bracket on basis symbols.  Pairs outside the table
    // (same-letter pairs on connected nodes) are opaque and refused.
    LieTensor bracket(const LieGen& a, const LieGen& b) const {
        auto zero = LieTensor::zero(ctx, 1);
        if (a.kind == LieGen::H && b.kind == LieGen::H) return zero;
        if (a.kind == LieGen::H) {
            ExponentPoly c = act[b.idx - 1][a.idx - 1];
            if (b.kind == LieGen::F) c = -c;
            return LieTensor::basis(ctx, b, c);
        }
        if (b.kind == LieGen::H) {
            int sgn = 0; // |H| = 0, plain antisymmetry
            LieTensor r = bracket(b, a);
            return (sgn & 1) ? r : ExponentPoly(Rat(-1)) * r;
        }
        if (a.kind != b.kind) {
            const LieGen& e = a.kind == LieGen::E ? a : b;
            const LieGen& f = a.kind == LieGen::E ? b : a;
            LieTensor r = zero;
            if (e.idx == f.idx) {
                // [E_i, F_i] = (T_i^+ + T_i^-) / (2 d_i)
                std::vector<ExponentPoly> v(ctx->t);
                Rat inv = Rat(1) / (Rat(2) * datum.d_at(e.idx));
                for (int g = 0; g < ctx->t; ++g)
                    v[g] = inv * (ctx->cplus[e.idx - 1][g] + ctx->cminus[e.idx - 1][g]);
                r = LieTensor::toral(ctx, v);
            }
            if (a.kind == LieGen::E) return r;
            int sgn = gen_parity(ctx, a) * gen_parity(ctx, b);
            return (sgn & 1) ? r : ExponentPoly(Rat(-1)) * r;
        }
        // Same-letter pair: zero on disconnected nodes, opaque otherwise.
        if (a.idx == b.idx || datum.a(a.idx, b.idx) != 0)
            throw UnsupportedMixedTerm("bracket outside the tabled generator span: [" +
                                       a.str() + "," + b.str() + "]");
        return zero;
    }

    // Bilinear extension to arity-1 elements.
    LieTensor bracket(const LieTensor& x, const LieTensor& y) const {
        if (x.arity != 1 || y.arity != 1) throw DegreeMismatch("bracket needs arity-1 inputs");
        LieTensor r = LieTensor::zero(ctx, 1);
        for (const auto& [ka, ca] : x.terms)
            for (const auto& [kb, cb] : y.terms) r += (ca * cb) * bracket(ka[0], kb[0]);
        return r;
    }

    // Cobracket on basis symbols, as a plain tensor (the wedge written
    // out): delta(E_i) = 2 T_i^+ ^ E_i = T_i^+ (x) E_i - E_i (x) T_i^+.
    LieTensor cobracket(const LieGen& g) const {
        LieTensor r = LieTensor::zero(ctx, 2);
        if (g.kind == LieGen::H) return r;
        const PolyMatrix& co = g.kind == LieGen::E ? co_plus : co_minus;
        for (int h = 0; h < ctx->t; ++h) {
            const ExponentPoly& c = co[g.idx - 1][h];
            if (c.is_zero()) continue;
            LieGen hg{LieGen::H, h + 1};
            r.add_term({hg, g}, c);
            r.add_term({g, hg}, -c);
        }
        return r;
    }
    LieTensor cobracket(const LieTensor& x) const {
        if (x.arity != 1) throw DegreeMismatch("cobracket needs an arity-1 input");
        LieTensor r = LieTensor::zero(ctx, 2);
        for (const auto& [k, c] : x.terms) r += c * cobracket(k[0]);
        return r;
    }

    // Applies the cobracket to one slot of a tensor (the map is even,
    // so no Koszul signs arise).
    LieTensor cobracket_slot(const LieTensor& x, int slot) const {
        if (slot < 0 || slot >= x.arity) throw OutOfRange("slot out of range");
        if (x.arity + 1 > 3) throw DegreeMismatch("resulting arity exceeds 3");
        LieTensor r(ctx, x.arity + 1);
        for (const auto& [k, c] : x.terms) {
            LieTensor d = cobracket(k[slot]);
            for (const auto& [dk, dc] : d.terms) {
                std::vector<LieGen> nk;
                for (int i = 0; i < slot; ++i) nk.push_back(k[i]);
                nk.push_back(dk[0]);
                nk.push_back(dk[1]);
                for (int i = slot + 1; i < x.arity; ++i) nk.push_back(k[i]);
                r.add_term(nk, c * dc);
            }
        }
        return r;
    }

    // Adjoint action of an arity-1 element on a tensor, with Koszul
    // signs: x.(y_1 (x) ... (x) y_n) = sum_i (-1)^{|x| sum_{k<i} |y_k|}
    // y_1 (x) ... (x) [x, y_i] (x) ... (x) y_n.
    LieTensor adjoint(const LieTensor& x, const LieTensor& y) const {
        if (x.arity != 1) throw DegreeMismatch("adjoint actor must have arity 1");
        LieTensor r(ctx, y.arity);
        for (const auto& [kx, cx] : x.terms) {
            int px = gen_parity(ctx, kx[0]);
            for (const auto& [ky, cy] : y.terms)
                for (int i = 0; i < y.arity; ++i) {
                    int below = 0;
                    for (int k = 0; k < i; ++k) below += gen_parity(ctx, ky[k]);
                    LieTensor br = bracket(kx[0], ky[i]);
                    for (const auto& [bk, bc] : br.terms) {
                        std::vector<LieGen> nk = ky;
                        nk[i] = bk[0];
                        ExponentPoly c = cx * cy * bc;
                        if ((px * below) & 1) c = -c;
                        r.add_term(nk, c);
                    }
                }
        }
        return r;
    }

    // The mixed super bracket [[r, s]] of two arity-2 tensors (lands in
    // arity 3); every constituent bracket must be tabled.
    LieTensor double_bracket(const LieTensor& r, const LieTensor& s) const {
        if (r.arity != 2 || s.arity != 2) throw DegreeMismatch("double bracket needs arity 2");
        LieTensor out(ctx, 3);
        for (const auto& [kr, cr] : r.terms)
            for (const auto& [ks, cs] : s.terms) {
                int sgn = gen_parity(ctx, ks[0]) * gen_parity(ctx, kr[1]);
                ExponentPoly c = cr * cs;
                ExponentPoly cneg = ((sgn & 1) ? -c : c);
                // [r1,s1] (x) r2 (x) s2
                for (const auto& [bk, bc] : bracket(kr[0], ks[0]).terms)
                    out.add_term({bk[0], kr[1], ks[1]}, cneg * bc);
                // r1 (x) [r2,s1] (x) s2
                for (const auto& [bk, bc] : bracket(kr[1], ks[0]).terms)
                    out.add_term({kr[0], bk[0], ks[1]}, c * bc);
                // r1 (x) s1 (x) [r2,s2]
                for (const auto& [bk, bc] : bracket(kr[1], ks[1]).terms)
                    out.add_term({kr[0], ks[0], bk[0]}, cneg * bc);
            }
        return out;
    }

    // All generators, for per-generator checks.
    std::vector<LieGen> generators() const {
        std::vector<LieGen> gs;
        for (int i = 1; i <= ctx->n(); ++i) {
            gs.push_back(LieGen{LieGen::E, i});
            gs.push_back(LieGen{LieGen::F, i});
        }
        for (int g = 1; g <= ctx->t; ++g) gs.push_back(LieGen{LieGen::H, g});
        return gs;
    }
};

// ---------------------------------------------------------------------------
// Toral twist of the cobracket.
// ---------------------------------------------------------------------------

// Deforms the cobracket by the toral twist j = sum theta_{gk} H_g (x)
// H_k: computes delta'(x) = delta(x) - x.j on every generator, checks
// the twist conditions at generator level, extracts the new coroot
// table from the computed cobrackets, and re-derives the multiparameter
// matrix from the new pairing.
inline MpLSbAData twist_cobracket(const PolyMatrix& theta, const MpLSbAData& data) {
    int t = data.ctx->t;
    if (static_cast<int>(theta.size()) != t)
        throw SizeMismatch("twist size differs from realization rank");
    for (int g = 0; g < t; ++g)
        for (int k = 0; k < t; ++k)
            if (!(theta[g][k] + theta[k][g]).is_zero())
                throw NotAntisymmetric("toral twist matrix must be antisymmetric");

    LieTensor j(data.ctx, 2);
    for (int g = 0; g < t; ++g)
        for (int k = 0; k < t; ++k)
            j.add_term({LieGen{LieGen::H, g + 1}, LieGen{LieGen::H, k + 1}}, theta[g][k]);

    // Twist conditions at generator level: x.((id+sigma)(j)) = 0 and
    // x.(Sym_{A3}((id (x) delta)(j)) - [[j, j]]) = 0.
    LieTensor sym_part = j + braiding(j);
    LieTensor cond2 = sym_a3(data.cobracket_slot(j, 1)) - data.double_bracket(j, j);
    for (const LieGen& g : data.generators()) {
        LieTensor x = LieTensor::basis(data.ctx, g);
        if (!data.adjoint(x, sym_part).is_zero())
            throw ConditionFailure("first twist condition fails on " + g.str());
        if (!data.adjoint(x, cond2).is_zero())
            throw ConditionFailure("second twist condition fails on " + g.str());
    }

    MpLSbAData out = data;
    auto extract = [&](const LieGen& g, const LieTensor& d) {
        // d must have the shape sum_h v_h (H_h (x) g - g (x) H_h);
        // read off v from the H (x) g part and confirm the rest.
        std::vector<ExponentPoly> v(t);
        for (const auto& [k, c] : d.terms)
            if (k[0].kind == LieGen::H && k[1] == g) v[k[0].idx - 1] = c;
        LieTensor expect(data.ctx, 2);
        for (int h = 0; h < t; ++h) {
            if (v[h].is_zero()) continue;
            expect.add_term({LieGen{LieGen::H, h + 1}, g}, v[h]);
            expect.add_term({g, LieGen{LieGen::H, h + 1}}, -v[h]);
        }
        if (!(expect == d))
            throw ConditionFailure("twisted cobracket of " + g.str() +
                                   " is not of toral-wedge form");
        return v;
    };
    for (int i = 1; i <= data.ctx->n(); ++i) {
        LieGen e{LieGen::E, i}, f{LieGen::F, i};
        LieTensor de = data.cobracket(e) -
                       data.adjoint(LieTensor::basis(data.ctx, e), j);
        LieTensor df = data.cobracket(f) -
                       data.adjoint(LieTensor::basis(data.ctx, f), j);
        out.co_plus[i - 1] = extract(e, de);
        out.co_minus[i - 1] = extract(f, df);
    }
    // Toral generators stay primitive: delta'(H) = 0 - H.j = 0.
    for (int g = 1; g <= t; ++g) {
        LieTensor dh = data.adjoint(
            LieTensor::basis(data.ctx, LieGen{LieGen::H, g}), j);
        if (!dh.is_zero())
            throw ConditionFailure("twisted cobracket does not vanish on torals");
    }
    // Re-derive the multiparameter matrix from the moved coroots:
    // p'_{ij} = alpha_j(T'^+_i).
    for (int i = 0; i < data.ctx->n(); ++i)
        for (int jx = 0; jx < data.ctx->n(); ++jx) {
            ExponentPoly e;
            for (int g = 0; g < t; ++g) e += out.co_plus[i][g] * data.ctx->root[jx][g];
            out.P.entries[i][jx] = e;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Toral 2-cocycle deformation of the bracket.
// ---------------------------------------------------------------------------

namespace detail {

// Projection to the toral coordinates (the triangular-decomposition
// projection at generator level: letters die, torals survive).
inline std::vector<ExponentPoly> pi_h(const Context& ctx, const LieTensor& x) {
    std::vector<ExponentPoly> v(ctx->t);
    for (const auto& [k, c] : x.terms)
        if (k[0].kind == LieGen::H) v[k[0].idx - 1] += c;
    return v;
}

} // namespace detail

// Deforms the bracket by the toral 2-cocycle gamma: computes
// [x,y]_gamma = [x,y] - x_[1] gamma(x_[2], y) - (-1)^{|x||y_[1]|}
// y_[1] gamma(x, y_[2]) on all tabled generator pairs, checks the
// resulting table shape, and returns the data with the moved root
// table and matrix.
inline MpLSbAData cocycle_bracket(const CocycleData& gamma, const MpLSbAData& data) {
    gamma.validate(*data.ctx);
    const Context& ctx = data.ctx;

    auto chi_g = [&](const LieTensor& x, const LieTensor& y) {
        return gamma.pair(detail::pi_h(ctx, x), detail::pi_h(ctx, y));
    };
    auto slot = [&](const Context& c, const LieGen& g) { return LieTensor::basis(c, g); };
    auto deformed = [&](const LieGen& a, const LieGen& b) {
        LieTensor x = slot(ctx, a), y = slot(ctx, b);
        LieTensor r = data.bracket(x, y);
        // Sweedler legs of the (tensor-form) cobrackets.
        LieTensor dx = data.cobracket(a), dy = data.cobracket(b);
        int pa = gen_parity(ctx, a);
        for (const auto& [k, c] : dx.terms) {
            LieTensor leg1 = LieTensor::basis(ctx, k[0], c);
            LieTensor leg2 = LieTensor::basis(ctx, k[1]);
            r -= chi_g(leg2, y) * leg1;
        }
        for (const auto& [k, c] : dy.terms) {
            int sgn = pa * gen_parity(ctx, k[0]);
            LieTensor leg1 = LieTensor::basis(ctx, k[0], c);
            LieTensor leg2 = LieTensor::basis(ctx, k[1]);
            ExponentPoly cc = chi_g(x, leg2);
            r -= ((sgn & 1) ? -cc : cc) * leg1;
        }
        return r;
    };

    MpLSbAData out = data;
    // [T, T'] and [E_i, F_j] stay as tabled; [H_g, E_j] moves to the
    // deformed root pairing, [H_g, F_j] to its negative.
    for (int g = 1; g <= ctx->t; ++g) {
        for (int h = 1; h <= ctx->t; ++h)
            if (!deformed(LieGen{LieGen::H, g}, LieGen{LieGen::H, h}).is_zero())
                throw ConditionFailure("deformed toral bracket is nonzero");
        for (int jx = 1; jx <= ctx->n(); ++jx) {
            LieTensor de = deformed(LieGen{LieGen::H, g}, LieGen{LieGen::E, jx});
            LieTensor df = deformed(LieGen{LieGen::H, g}, LieGen{LieGen::F, jx});
            ExponentPoly ce, cf;
            for (const auto& [k, c] : de.terms) {
                if (!(k[0] == LieGen{LieGen::E, jx}))
                    throw ConditionFailure("deformed toral action leaves the letter line");
                ce = c;
            }
            for (const auto& [k, c] : df.terms) {
                if (!(k[0] == LieGen{LieGen::F, jx}))
                    throw ConditionFailure("deformed toral action leaves the letter line");
                cf = c;
            }
            if (!(ce + cf).is_zero())
                throw ConditionFailure("deformed E/F toral actions are not opposite");
            out.act[jx - 1][g - 1] = ce;
        }
    }
    for (int i = 1; i <= ctx->n(); ++i)
        for (int jx = 1; jx <= ctx->n(); ++jx) {
            LieTensor want = data.bracket(LieGen{LieGen::E, i}, LieGen{LieGen::F, jx});
            if (!(deformed(LieGen{LieGen::E, i}, LieGen{LieGen::F, jx}) == want))
                throw ConditionFailure("cross bracket moved under the cocycle");
        }
    // Re-derive the matrix from the moved roots: p'_{ij} = alpha'_j(T_i^+).
    for (int i = 0; i < ctx->n(); ++i)
        for (int jx = 0; jx < ctx->n(); ++jx) {
            ExponentPoly e;
            for (int g = 0; g < ctx->t; ++g) e += ctx->cplus[i][g] * out.act[jx][g];
            out.P.entries[i][jx] = e;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Semiclassical limit: first-order jet of (Delta - Delta^op).
// ---------------------------------------------------------------------------

namespace detail {

// Rational value of a coefficient that must be constant (no q-powers,
// no parameters).  Anything else means the expression fails to be an
// order-1 jet in the implemented sense.
inline Rat jet_constant(const ToralScalar& c) {
    Rat num(0);
    for (const auto& [x, cf] : c.num().terms()) {
        if (!x.is_zero() || !cf.is_constant())
            throw JetDivergence("non-constant coefficient in jet: " + c.str());
        num = cf.constant_value();
    }
    const auto& den = c.den().terms();
    if (den.size() != 1 || den.begin()->first != 0)
        throw JetDivergence("non-constant denominator in jet: " + c.str());
    return num / den.begin()->second;
}

// A slot at a fixed jet order: toral monomial + word (the group-like
// exponent has been expanded away).
struct JetSym {
    HMonomial toral;
    Word word;
    friend bool operator<(const JetSym& a, const JetSym& b) {
        return std::tie(a.toral, a.word) < std::tie(b.toral, b.word);
    }
    friend bool operator==(const JetSym& a, const JetSym& b) {
        return a.toral == b.toral && a.word == b.word;
    }
};

inline LieGen jet_to_gen(const JetSym& s) {
    if (s.toral.empty() && s.word.size() == 1)
        return LieGen{s.word[0].isE ? LieGen::E : LieGen::F, s.word[0].idx};
    if (s.word.empty() && s.toral.size() == 1 && s.toral.begin()->second == 1)
        return LieGen{LieGen::H, s.toral.begin()->first + 1};
    throw JetDivergence("jet slot outside the generator span");
}

} // namespace detail

// First-order jet of an arity-2 tensor under e^{hbar lambda} -> 1 +
// hbar lambda: the order-0 part must cancel, and the order-1 part must
// land in the generator span of each slot.  Throws JetDivergence
// otherwise.
inline LieTensor semiclassical_jet(const TensorElement& x, const Context& lie_ctx) {
    if (x.arity != 2) throw DegreeMismatch("jet extraction needs arity 2");
    using detail::JetSym;
    std::map<std::pair<JetSym, JetSym>, Rat> order0;
    std::map<std::pair<JetSym, JetSym>, ExponentPoly> order1;
    auto add0 = [&](const JetSym& a, const JetSym& b, const Rat& c) {
        if (c == 0) return;
        auto& slot = order0[{a, b}];
        slot += c;
        if (slot == 0) order0.erase({a, b});
    };
    auto add1 = [&](const JetSym& a, const JetSym& b, const ExponentPoly& c) {
        if (c.is_zero()) return;
        auto& slot = order1[{a, b}];
        slot += c;
        if (slot.is_zero()) order1.erase({a, b});
    };
    for (const auto& [keys, c] : x.terms) {
        Rat rc = detail::jet_constant(c);
        JetSym s0{keys[0].toral, keys[0].word};
        JetSym s1{keys[1].toral, keys[1].word};
        add0(s0, s1, rc);
        // One lambda insertion in either slot.
        for (int side = 0; side < 2; ++side) {
            const GroupExponent& lam = keys[side].grouplike;
            const JetSym& base = side == 0 ? s0 : s1;
            const JetSym& other = side == 0 ? s1 : s0;
            for (int g = 0; g < static_cast<int>(lam.size()); ++g) {
                if (lam[g].is_zero()) continue;
                JetSym up = base;
                up.toral[g] += 1;
                if (side == 0)
                    add1(up, other, rc * lam[g]);
                else
                    add1(other, up, rc * lam[g]);
            }
        }
    }
    if (!order0.empty())
        throw JetDivergence("order-0 part of the jet does not cancel");
    LieTensor r(lie_ctx, 2);
    for (const auto& [k, c] : order1)
        r.add_term({detail::jet_to_gen(k.first), detail::jet_to_gen(k.second)}, c);
    return r;
}

// The Koszul-flipped coproduct.
inline TensorElement coproduct_op(const AlgebraElement& x, const CoproductRules& rules) {
    TensorElement d = coproduct(x, rules);
    TensorElement r(d.ctx, 2);
    for (const auto& [keys, c] : d.terms) {
        int sgn = detail::key_parity(d.ctx, keys[0]) * detail::key_parity(d.ctx, keys[1]);
        r.add_term({keys[1], keys[0]}, (sgn & 1) ? -c : c);
    }
    return r;
}

// Extracts the Lie superbialgebra from the quantum layer: computes the
// jet of (Delta - Delta^op) on every generator and checks it against
// the closed cobracket tables.
inline MpLSbAData semiclassical_limit(const CartanSuperDatum& datum,
                                      const MultiparamMatrix& P, const Realization& R) {
    MpLSbAData data = MpLSbAData::standard(datum, P, R);
    Context ctx = data.ctx;
    CoproductRules rules = CoproductRules::standard(ctx);
    for (const LieGen& g : data.generators()) {
        AlgebraElement x = g.kind == LieGen::E   ? AlgebraElement::E(ctx, g.idx)
                           : g.kind == LieGen::F ? AlgebraElement::F(ctx, g.idx)
                                                 : AlgebraElement::H(ctx, g.idx);
        TensorElement defect = coproduct(x, rules) - coproduct_op(x, rules);
        LieTensor got = semiclassical_jet(defect, ctx);
        if (!(got == data.cobracket(g)))
            throw VerificationFailure("semiclassical cobracket of " + g.str() +
                                      " disagrees with the table");
    }
    return data;
}

// ---------------------------------------------------------------------------
// Deformation / semiclassical-limit commutation squares.
// ---------------------------------------------------------------------------

namespace detail {

inline void push_check(VerifyReport& rep, const std::string& name, bool ok,
                       const std::string& residue) {
    rep.checks.push_back(CheckResult{name, ok, ok ? "" : residue});
}

} // namespace detail

inline void require_commuted(const VerifyReport& rep) {
    if (!rep.all_ok())
        throw CommutationFailure("commutation square fails: " + rep.failure_summary());
}

// Twist square: deforming the quantum data and reducing mod hbar must
// agree with reducing first and twisting the cobracket; moreover the
// jet of the twisted coproduct must reproduce the twisted tables.
inline VerifyReport commute_check(const TwistData& twist, const CartanSuperDatum& datum,
                                  const MultiparamMatrix& P, const Realization& R) {
    VerifyReport rep;
    auto [P_q, R_q] = twist_deform(P, R, twist);
    MpLSbAData base = MpLSbAData::standard(datum, P, R);
    MpLSbAData lie = twist_cobracket(twist.phi, base);

    detail::push_check(rep, "matrix", lie.P == P_q,
                       "deformed matrices disagree between the two routes");
    detail::push_check(rep, "coroots",
                       lie.co_plus == R_q.cplus && lie.co_minus == R_q.cminus,
                       "deformed coroot tables disagree");
    detail::push_check(rep, "roots", lie.act == R_q.root, "root table moved under a twist");

    // Cobracket route: jet of the twisted coproduct on each generator.
    bool ok = true;
    std::string residue;
    try {
        Context ctx = base.ctx;
        HopfTwist tw = HopfTwist::make(twist, ctx);
        CoproductRules rules = twisted_coproduct_rules(tw);
        for (const LieGen& g : base.generators()) {
            AlgebraElement x = g.kind == LieGen::E   ? AlgebraElement::E(ctx, g.idx)
                               : g.kind == LieGen::F ? AlgebraElement::F(ctx, g.idx)
                                                     : AlgebraElement::H(ctx, g.idx);
            TensorElement defect = coproduct(x, rules) - coproduct_op(x, rules);
            if (!(semiclassical_jet(defect, ctx) == lie.cobracket(g))) {
                ok = false;
                residue = "twisted-coproduct jet of " + g.str() + " misses the table";
                break;
            }
        }
    } catch (const Error& e) {
        ok = false;
        residue = e.what();
    }
    detail::push_check(rep, "cobracket", ok, residue);
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

// Cocycle square: the product side moves, the coproduct side does not.
inline VerifyReport commute_check(const CocycleData& cocycle, const CartanSuperDatum& datum,
                                  const MultiparamMatrix& P, const Realization& R) {
    VerifyReport rep;
    auto [P_q, R_q] = cocycle_deform(P, R, cocycle);
    MpLSbAData base = MpLSbAData::standard(datum, P, R);
    MpLSbAData lie = cocycle_bracket(cocycle, base);

    detail::push_check(rep, "matrix", lie.P == P_q,
                       "deformed matrices disagree between the two routes");
    detail::push_check(rep, "roots", lie.act == R_q.root, "deformed root tables disagree");
    detail::push_check(rep, "coroots",
                       lie.co_plus == R_q.cplus && lie.co_minus == R_q.cminus,
                       "coroot table moved under a cocycle");
    // The coproduct is untouched by a cocycle, so both cobracket routes
    // must land on the undeformed tables.
    bool ok = true;
    std::string residue;
    try {
        MpLSbAData sem = semiclassical_limit(datum, P, R);
        ok = sem.co_plus == lie.co_plus && sem.co_minus == lie.co_minus;
        if (!ok) residue = "cobracket tables disagree";
    } catch (const Error& e) {
        ok = false;
        residue = e.what();
    }
    detail::push_check(rep, "cobracket", ok, residue);
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

// ---------------------------------------------------------------------------
// Structure verification: co-Jacobi, wedge image, 1-cocycle condition.
// ---------------------------------------------------------------------------

inline VerifyReport verify_lie(const MpLSbAData& data) {
    VerifyReport rep;
    const Context& ctx = data.ctx;

    for (const LieGen& g : data.generators()) {
        LieTensor d = data.cobracket(g);
        detail::push_check(rep, "wedge[" + g.str() + "]",
                           (d + braiding(d)).is_zero(), "cobracket image leaves the wedge");
        detail::push_check(rep, "cojacobi[" + g.str() + "]",
                           sym_a3(data.cobracket_slot(d, 1)).is_zero(),
                           "co-Jacobi fails");
    }

    // 1-cocycle condition on all tabled pairs.
    auto one_cocycle = [&](const LieGen& a, const LieGen& b) {
        LieTensor xa = LieTensor::basis(ctx, a), xb = LieTensor::basis(ctx, b);
        LieTensor lhs = data.cobracket(data.bracket(xa, xb));
        LieTensor rhs = data.adjoint(xa, data.cobracket(b)) -
                        ((gen_parity(ctx, a) * gen_parity(ctx, b)) & 1
                             ? ExponentPoly(Rat(-1))
                             : ExponentPoly(Rat(1))) *
                            data.adjoint(xb, data.cobracket(a));
        return lhs == rhs;
    };
    for (int g = 1; g <= ctx->t; ++g) {
        for (int h = g; h <= ctx->t; ++h)
            detail::push_check(rep, "cocycle1[H" + std::to_string(g) + ",H" +
                                        std::to_string(h) + "]",
                               one_cocycle(LieGen{LieGen::H, g}, LieGen{LieGen::H, h}),
                               "1-cocycle condition fails");
        for (int i = 1; i <= ctx->n(); ++i) {
            detail::push_check(rep, "cocycle1[H" + std::to_string(g) + ",E" +
                                        std::to_string(i) + "]",
                               one_cocycle(LieGen{LieGen::H, g}, LieGen{LieGen::E, i}),
                               "1-cocycle condition fails");
            detail::push_check(rep, "cocycle1[H" + std::to_string(g) + ",F" +
                                        std::to_string(i) + "]",
                               one_cocycle(LieGen{LieGen::H, g}, LieGen{LieGen::F, i}),
                               "1-cocycle condition fails");
        }
    }
    for (int i = 1; i <= ctx->n(); ++i)
        for (int j = 1; j <= ctx->n(); ++j)
            detail::push_check(rep, "cocycle1[E" + std::to_string(i) + ",F" +
                                        std::to_string(j) + "]",
                               one_cocycle(LieGen{LieGen::E, i}, LieGen{LieGen::F, j}),
                               "1-cocycle condition fails");

    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

} // namespace mpq
