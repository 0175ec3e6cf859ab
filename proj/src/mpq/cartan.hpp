// The rank-n Cartan catalogue: integer Cartan matrices with parities,
// minimal half-integer symmetrizers, and the sign tables attached to
// each diagram type, plus the generic multiparameter matrices of
// Cartan type built on top of them.
#pragma once

#include "errors.hpp"
#include "exppoly.hpp"
#include "scalars.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mpq {

enum class TypeTag { A, B1, B2, C, D1, D2, F4, G3 };

inline std::string type_name(TypeTag t) {
    switch (t) {
        case TypeTag::A: return "A";
        case TypeTag::B1: return "B1";
        case TypeTag::B2: return "B2";
        case TypeTag::C: return "C";
        case TypeTag::D1: return "D1";
        case TypeTag::D2: return "D2";
        case TypeTag::F4: return "F4";
        case TypeTag::G3: return "G3";
    }
    return "?";
}

inline std::optional<TypeTag> parse_type(const std::string& s) {
    if (s == "A") return TypeTag::A;
    if (s == "B1") return TypeTag::B1;
    if (s == "B2") return TypeTag::B2;
    if (s == "C") return TypeTag::C;
    if (s == "D1") return TypeTag::D1;
    if (s == "D2") return TypeTag::D2;
    if (s == "F4") return TypeTag::F4;
    if (s == "G3") return TypeTag::G3;
    return std::nullopt;
}

using IntMatrix = std::vector<std::vector<long>>;
using PolyMatrix = std::vector<std::vector<ExponentPoly>>;

struct CartanSuperDatum {
    TypeTag type;
    int rank = 0;
    IntMatrix A;                 // Cartan matrix, node-label indexed
    std::vector<int> parity;     // 0 even / 1 odd, per node
    std::vector<Rat> d;          // minimal symmetrizer, d_i in (1/2)Z \ {0}
    std::vector<long> epsilon;   // sign table (large values for F4/G3)
    std::vector<int> diagram_order; // node labels in diagram-line order

    long a(int i, int j) const { return A[i - 1][j - 1]; } // 1-based
    Rat d_at(int i) const { return d[i - 1]; }
    int p(int i) const { return parity[i - 1]; }
    long eps(int i) const { return epsilon[i - 1]; }

    // nu_i = q^{eps_i}
    ToralScalar nu(int i) const { return ToralScalar::q_rat(Rat(eps(i))); }
    // q_i = q^{d_i}
    ToralScalar q_i(int i) const { return ToralScalar::q_rat(d_at(i)); }

    bool operator==(const CartanSuperDatum& o) const {
        return type == o.type && rank == o.rank && A == o.A && parity == o.parity &&
               d == o.d && epsilon == o.epsilon;
    }
};

// The surviving off-diagonal parameter atoms are p_{i,j} with i < j; the
// other entries are eliminated through the Cartan-type constraint
// p_{ij} + p_{ji} = 2 d_i a_{ij}.
inline ExponentPoly p_entry(const CartanSuperDatum& datum, int i, int j) {
    if (i == j) return ExponentPoly::unit(Rat(2) * datum.d_at(i));
    if (i < j) return ExponentPoly::atom(p_atom(i, j));
    return ExponentPoly::unit(Rat(2) * datum.d_at(i) * Rat(datum.a(i, j))) -
           ExponentPoly::atom(p_atom(j, i));
}

struct MultiparamMatrix {
    PolyMatrix entries;

    int size() const { return static_cast<int>(entries.size()); }
    const ExponentPoly& at(int i, int j) const { return entries[i - 1][j - 1]; } // 1-based

    MultiparamMatrix transpose() const {
        int n = size();
        MultiparamMatrix t;
        t.entries.assign(n, std::vector<ExponentPoly>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.entries[j][i] = entries[i][j];
        return t;
    }
    MultiparamMatrix symmetric_part() const { return combine(transpose(), Rat(1, 2), Rat(1, 2)); }
    MultiparamMatrix antisymmetric_part() const {
        return combine(transpose(), Rat(1, 2), Rat(-1, 2));
    }
    bool operator==(const MultiparamMatrix& o) const { return entries == o.entries; }

private:
    MultiparamMatrix combine(const MultiparamMatrix& o, const Rat& ca, const Rat& cb) const {
        int n = size();
        MultiparamMatrix r;
        r.entries.assign(n, std::vector<ExponentPoly>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r.entries[i][j] = ca * entries[i][j] + cb * o.entries[i][j];
        return r;
    }
};

namespace detail {

// Minimal positive scale s such that s*w_i lies in (1/2)Z for all i and
// s*w_i*a_ij is integral for all i,j; the base weights w solve the
// symmetry constraints d_i a_ij = d_j a_ji along diagram edges.
inline std::vector<Rat> minimal_symmetrizer(const IntMatrix& A) {
    int n = static_cast<int>(A.size());
    std::vector<Rat> w(n, Rat(0));
    std::vector<bool> seen(n, false);
    w[0] = Rat(1);
    seen[0] = true;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (i == j || A[i][j] == 0) continue;
            Rat wj = w[i] * Rat(A[i][j]) / Rat(A[j][i]);
            if (!seen[j]) {
                w[j] = wj;
                seen[j] = true;
                stack.push_back(j);
            } else if (w[j] != wj) {
                throw InvariantViolation("Cartan matrix admits no symmetrizer");
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i]) throw InvariantViolation("disconnected Cartan diagram");
    // Each divisibility constraint "s*x integral" restricts s to the
    // subgroup (q/p)Z for x = p/q; intersect them all.
    auto rational_lcm = [](const Rat& a, const Rat& b) {
        if (a == 0) return b;
        if (b == 0) return a;
        Int ln = lcm(Int(numerator(a)), Int(numerator(b)));
        Int gd = gcd(Int(denominator(a)), Int(denominator(b)));
        return Rat(ln, gd);
    };
    auto reciprocal = [](Rat x) {
        if (x < 0) x = -x;
        return Rat(Int(denominator(x)), Int(numerator(x)));
    };
    Rat step(0);
    for (int i = 0; i < n; ++i) {
        step = rational_lcm(step, reciprocal(Rat(2) * w[i]));
        for (int j = 0; j < n; ++j) {
            Rat x = w[i] * Rat(A[i][j]);
            if (x != 0) step = rational_lcm(step, reciprocal(x));
        }
    }
    std::vector<Rat> out(n);
    for (int i = 0; i < n; ++i) out[i] = step * w[i];
    // Normalize so at least one weight is integral (only the isolated
    // rank-1 node is otherwise free to shrink to 1/2).
    bool has_integer = false;
    for (const Rat& x : out)
        if (denominator(x) == 1) { has_integer = true; break; }
    if (!has_integer)
        for (Rat& x : out) x *= 2;
    return out;
}

} // namespace detail

// Builds the Cartan super-datum for one catalogue entry.  grey_nodes
// selects the odd parity for nodes whose colour is a free choice;
// epsilon may be empty (type default) or a full +-1 vector for the
// types that leave the signs free.
inline CartanSuperDatum build_datum(TypeTag type, int n,
                                    std::vector<long> epsilon = {},
                                    std::set<int> grey_nodes = {}) {
    CartanSuperDatum datum;
    datum.type = type;
    datum.rank = n;

    auto chain = [&](IntMatrix& A, int upto) {
        for (int i = 0; i + 1 < upto; ++i) {
            A[i][i + 1] = -1;
            A[i + 1][i] = -1;
        }
    };
    IntMatrix A(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) A[i][i] = 2;

    std::set<int> free_nodes;   // nodes whose colour may be chosen
    std::set<int> forced_grey;  // nodes drawn grey (odd) by the diagram
    datum.diagram_order.resize(n);
    for (int i = 0; i < n; ++i) datum.diagram_order[i] = i + 1;

    switch (type) {
        case TypeTag::A: {
            if (n < 1) throw InvalidRank("type A needs rank >= 1");
            chain(A, n);
            for (int i = 1; i <= n; ++i) free_nodes.insert(i);
            break;
        }
        case TypeTag::B1:
        case TypeTag::B2: {
            if (n < 2) throw InvalidRank("type B needs rank >= 2");
            chain(A, n);
            A[n - 2][n - 1] = -1;
            A[n - 1][n - 2] = -2;
            for (int i = 1; i <= n - 1; ++i) free_nodes.insert(i);
            if (type == TypeTag::B2) forced_grey.insert(n); // black end node
            break;
        }
        case TypeTag::C: {
            if (n < 2) throw InvalidRank("type C needs rank >= 2");
            chain(A, n);
            A[n - 2][n - 1] = -2;
            A[n - 1][n - 2] = -1;
            for (int i = 1; i <= n - 1; ++i) free_nodes.insert(i);
            break;
        }
        case TypeTag::D1:
        case TypeTag::D2: {
            if (n < 3) throw InvalidRank("type D needs rank >= 3");
            chain(A, n - 1);
            A[n - 3][n - 1] = -1; // node n hangs off node n-2
            A[n - 1][n - 3] = -1;
            for (int i = 1; i <= n - 2; ++i) free_nodes.insert(i);
            if (type == TypeTag::D2) {
                // The two fork nodes are odd and joined by a symmetric
                // double bond.
                A[n - 2][n - 1] = -2;
                A[n - 1][n - 2] = -2;
                forced_grey.insert(n - 1);
                forced_grey.insert(n);
            } else {
                A[n - 2][n - 1] = 0;
                A[n - 1][n - 2] = 0;
            }
            break;
        }
        case TypeTag::F4: {
            if (n != 4) throw InvalidRank("type F4 forces rank 4");
            // Diagram line order 1 - 4 = 3 - 2 (arrow toward node 3).
            datum.diagram_order = {1, 4, 3, 2};
            A[0][3] = -1; A[3][0] = -1;
            A[2][3] = -2; A[3][2] = -1;
            A[2][1] = -1; A[1][2] = -1;
            forced_grey.insert(2);
            break;
        }
        case TypeTag::G3: {
            if (n != 3) throw InvalidRank("type G3 forces rank 3");
            // Diagram line order 1 - 3 == 2 (triple bond, arrow toward 3).
            datum.diagram_order = {1, 3, 2};
            A[0][2] = -1; A[2][0] = -1;
            A[2][1] = -3; A[1][2] = -1;
            forced_grey.insert(1);
            break;
        }
    }
    datum.A = A;

    // Parity: forced colours first, then the free grey choices.
    datum.parity.assign(n, 0);
    for (int i : forced_grey) datum.parity[i - 1] = 1;
    for (int i : grey_nodes) {
        if (i < 1 || i > n) throw InvalidRank("grey node index out of range");
        if (!free_nodes.count(i))
            throw InvalidEpsilon("node " + std::to_string(i) +
                                 " has a fixed colour in type " + type_name(type));
        datum.parity[i - 1] = 1;
    }

    // Sign table.
    if (type == TypeTag::F4) {
        datum.epsilon = {6, -2, -2, -2};
        if (!epsilon.empty() && epsilon != datum.epsilon)
            throw InvalidEpsilon("type F4 fixes the sign table (6,-2,-2,-2)");
    } else if (type == TypeTag::G3) {
        datum.epsilon = {-2, 2, 6};
        if (!epsilon.empty() && epsilon != datum.epsilon)
            throw InvalidEpsilon("type G3 fixes the sign table (-2,2,6)");
    } else {
        if (epsilon.empty()) {
            datum.epsilon.assign(n, 1);
            if (type == TypeTag::D2) datum.epsilon[n - 1] = -1;
        } else {
            if (static_cast<int>(epsilon.size()) != n)
                throw InvalidEpsilon("sign table must have one entry per node");
            for (long e : epsilon)
                if (e != 1 && e != -1) throw InvalidEpsilon("signs must be +-1");
            if (type == TypeTag::D1 && epsilon[n - 1] != epsilon[n - 2])
                throw InvalidEpsilon("the two fork signs must agree for this type");
            if (type == TypeTag::D2 && epsilon[n - 1] != -epsilon[n - 2])
                throw InvalidEpsilon("the two fork signs must differ for this type");
            datum.epsilon = epsilon;
        }
    }

    datum.d = detail::minimal_symmetrizer(A);
    return datum;
}

// P_A = D*A with concrete unit-line entries.
inline MultiparamMatrix standard_matrix(const CartanSuperDatum& datum) {
    int n = datum.rank;
    MultiparamMatrix m;
    m.entries.assign(n, std::vector<ExponentPoly>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            m.entries[i - 1][j - 1] = ExponentPoly::unit(datum.d_at(i) * Rat(datum.a(i, j)));
    return m;
}

// The fully generic multiparameter matrix of Cartan type: free atoms
// above the diagonal, eliminated entries below.
inline MultiparamMatrix generic_matrix(const CartanSuperDatum& datum) {
    int n = datum.rank;
    MultiparamMatrix m;
    m.entries.assign(n, std::vector<ExponentPoly>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m.entries[i - 1][j - 1] = p_entry(datum, i, j);
    return m;
}

// True iff P + P^T = 2 D A identically in the exponent algebra.
inline bool check_cartan_type(const MultiparamMatrix& P, const CartanSuperDatum& datum) {
    if (P.size() != datum.rank)
        throw RankMismatch("matrix size " + std::to_string(P.size()) +
                           " vs datum rank " + std::to_string(datum.rank));
    for (int i = 1; i <= datum.rank; ++i)
        for (int j = 1; j <= datum.rank; ++j) {
            ExponentPoly lhs = P.at(i, j) + P.at(j, i);
            ExponentPoly rhs = ExponentPoly::unit(Rat(2) * datum.d_at(i) * Rat(datum.a(i, j)));
            if (lhs != rhs) return false;
        }
    return true;
}

// The catalogue entries exercised by the verification suites.
struct CatalogueEntry {
    TypeTag type;
    int rank;
    std::string label;
};

inline std::vector<CatalogueEntry> desk_catalogue() {
    return {
        {TypeTag::A, 2, "A2"},   {TypeTag::A, 3, "A3"},  {TypeTag::B1, 2, "B2(I)"},
        {TypeTag::B2, 3, "B3(II)"}, {TypeTag::C, 3, "C3"}, {TypeTag::D1, 4, "D4(I)"},
        {TypeTag::D2, 4, "D4(II)"}, {TypeTag::F4, 4, "F4"}, {TypeTag::G3, 3, "G3"},
    };
}

} // namespace mpq
