// Commutative Laurent polynomials with rational coefficients over
// interned atoms.  These model exponents of formal exponentials (the
// "x" in q^x) as well as coefficient polynomials.  Canonical form:
// monomials sorted, no zero coefficients, no zero exponents inside a
// monomial.
#pragma once

#include "atoms.hpp"
#include "rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpq {

// A monomial is a sorted (atom -> nonzero integer exponent) map.
using Monomial = std::map<AtomId, long>;

class ExponentPoly {
public:
    using Terms = std::map<Monomial, Rat>;

    ExponentPoly() = default;
    /*implicit*/ ExponentPoly(const Rat& c) {
        if (c != 0) terms_[Monomial{}] = c;
    }
    /*implicit*/ ExponentPoly(long c) : ExponentPoly(Rat(c)) {}

    static ExponentPoly atom(AtomId a, const Rat& coeff = Rat(1)) {
        ExponentPoly p;
        if (coeff != 0) p.terms_[Monomial{{a, 1}}] = coeff;
        return p;
    }
    static ExponentPoly unit(const Rat& coeff = Rat(1)) {
        return atom(unit_atom(), coeff);
    }
    static ExponentPoly monomial(Monomial m, const Rat& coeff) {
        ExponentPoly p;
        if (coeff != 0) {
            for (auto it = m.begin(); it != m.end();)
                it = (it->second == 0) ? m.erase(it) : std::next(it);
            p.terms_[std::move(m)] = coeff;
        }
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        if (!is_constant()) throw std::logic_error("not a constant polynomial");
        return terms_.begin()->second;
    }

    // Coefficient of a given monomial (zero if absent).
    Rat coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // True if the polynomial is r*unit for some rational r (or zero).
    bool is_unit_line() const {
        if (terms_.empty()) return true;
        if (terms_.size() != 1) return false;
        const Monomial& m = terms_.begin()->first;
        return m.size() == 1 && m.begin()->first == unit_atom() && m.begin()->second == 1;
    }
    // The r with this == r*unit; requires is_unit_line().
    Rat unit_coefficient() const {
        if (terms_.empty()) return Rat(0);
        if (!is_unit_line()) throw std::logic_error("polynomial is not on the unit line");
        return terms_.begin()->second;
    }

    std::set<AtomId> atoms() const {
        std::set<AtomId> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [a, e] : m) out.insert(a);
        return out;
    }

    ExponentPoly& operator+=(const ExponentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    ExponentPoly& operator-=(const ExponentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend ExponentPoly operator+(ExponentPoly a, const ExponentPoly& b) { return a += b; }
    friend ExponentPoly operator-(ExponentPoly a, const ExponentPoly& b) { return a -= b; }
    friend ExponentPoly operator-(const ExponentPoly& a) {
        ExponentPoly r;
        for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }
    friend ExponentPoly operator*(const ExponentPoly& a, const ExponentPoly& b) {
        ExponentPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (const auto& [atom, e] : mb) {
                    long& slot = m[atom];
                    slot += e;
                    if (slot == 0) m.erase(atom);
                }
                r.add_term(m, ca * cb);
            }
        return r;
    }
    ExponentPoly& operator*=(const ExponentPoly& o) { return *this = *this * o; }
    friend ExponentPoly operator*(const Rat& c, const ExponentPoly& a) {
        ExponentPoly r;
        if (c != 0)
            for (const auto& [m, cc] : a.terms_) r.terms_[m] = c * cc;
        return r;
    }

    friend bool operator==(const ExponentPoly& a, const ExponentPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ExponentPoly& a, const ExponentPoly& b) {
        return !(a == b);
    }
    friend bool operator<(const ExponentPoly& a, const ExponentPoly& b) {
        return a.terms_ < b.terms_;
    }

    ExponentPoly pow(long e) const {
        if (e < 0) {
            if (terms_.size() != 1) throw std::domain_error("negative power of a non-monomial");
            const auto& [m, c] = *terms_.begin();
            Monomial inv;
            for (const auto& [a, k] : m) inv[a] = -k;
            ExponentPoly base = monomial(inv, Rat(1) / c);
            return base.pow(-e);
        }
        ExponentPoly r(Rat(1)), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    // Substitutes a polynomial for an atom.  The atom must occur with
    // nonnegative exponents unless the replacement is an invertible
    // monomial.
    ExponentPoly substitute(AtomId a, const ExponentPoly& value) const {
        ExponentPoly out;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(a);
            if (it == m.end()) {
                out.add_term(m, c);
                continue;
            }
            Monomial rest = m;
            long e = it->second;
            rest.erase(a);
            out += monomial(rest, c) * value.pow(e);
        }
        return out;
    }

    // Evaluates every atom (including negative powers) at a rational value.
    // Throws std::out_of_range naming the first unbound atom.
    Rat evaluate(const std::map<AtomId, Rat>& values) const {
        Rat total(0);
        for (const auto& [m, c] : terms_) {
            Rat prod = c;
            for (const auto& [a, e] : m) {
                auto it = values.find(a);
                if (it == values.end())
                    throw std::out_of_range("unbound atom: " + AtomTable::name(a));
                if (it->second == 0 && e < 0)
                    throw std::domain_error("negative power of zero for atom " +
                                            AtomTable::name(a));
                Rat base = it->second;
                Rat powv(1);
                for (long k = 0; k < (e < 0 ? -e : e); ++k) powv *= base;
                prod *= (e < 0) ? Rat(1) / powv : powv;
            }
            total += prod;
        }
        return total;
    }

    // Drops every monomial containing an atom other than unit.  Used by
    // the classification predicates, which work modulo the non-unit
    // parameters with unit kept transcendental.
    ExponentPoly unit_part() const {
        ExponentPoly out;
        for (const auto& [m, c] : terms_) {
            bool pure = true;
            for (const auto& [a, e] : m)
                if (a != unit_atom()) { pure = false; break; }
            if (pure) out.add_term(m, c);
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rat ac = c < 0 ? Rat(-c) : c;
            if (!first) s += (c < 0) ? " - " : " + ";
            else if (c < 0) s += "-";
            first = false;
            std::string mono;
            for (const auto& [a, e] : m) {
                if (!mono.empty()) mono += "*";
                mono += AtomTable::name(a);
                if (e != 1) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) s += to_string(ac);
            else if (ac == 1) s += mono;
            else s += to_string(ac) + "*" + mono;
        }
        return s;
    }

private:
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

} // namespace mpq
