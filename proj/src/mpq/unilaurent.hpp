// Univariate Laurent polynomials in q with rational exponents and
// rational coefficients: finite sums sum_r c_r * q^r with r in Q.
// These are the only denominators the ground scalars admit, so exact
// reduction boils down to univariate gcd after clearing exponent
// denominators.
#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace mpq {

class UniLaurent {
public:
    using Terms = std::map<Rat, Rat>; // exponent -> coefficient

    UniLaurent() = default;
    /*implicit*/ UniLaurent(const Rat& c) {
        if (c != 0) terms_[Rat(0)] = c;
    }
    /*implicit*/ UniLaurent(long c) : UniLaurent(Rat(c)) {}

    static UniLaurent q_power(const Rat& r, const Rat& coeff = Rat(1)) {
        UniLaurent p;
        if (coeff != 0) p.terms_[r] = coeff;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == 0 &&
               terms_.begin()->second == 1;
    }
    bool is_monomial() const { return terms_.size() == 1; }

    Rat min_exponent() const { return terms_.begin()->first; }
    Rat max_exponent() const { return terms_.rbegin()->first; }
    Rat leading_coefficient() const { return terms_.rbegin()->second; }

    UniLaurent& operator+=(const UniLaurent& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    UniLaurent& operator-=(const UniLaurent& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend UniLaurent operator+(UniLaurent a, const UniLaurent& b) { return a += b; }
    friend UniLaurent operator-(UniLaurent a, const UniLaurent& b) { return a -= b; }
    friend UniLaurent operator-(const UniLaurent& a) {
        UniLaurent r;
        for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
        return r;
    }
    friend UniLaurent operator*(const UniLaurent& a, const UniLaurent& b) {
        UniLaurent r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    UniLaurent& operator*=(const UniLaurent& o) { return *this = *this * o; }

    friend bool operator==(const UniLaurent& a, const UniLaurent& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const UniLaurent& a, const UniLaurent& b) { return !(a == b); }

    // Exact division; throws DivisionByZero / InvariantViolation when the
    // division does not come out exactly.
    friend UniLaurent divide_exact(const UniLaurent& a, const UniLaurent& b) {
        if (b.is_zero()) throw DivisionByZero("exact division by zero Laurent polynomial");
        if (a.is_zero()) return UniLaurent();
        auto [r, q] = divmod(a, b);
        if (!r.is_zero())
            throw InvariantViolation("inexact Laurent division");
        return q;
    }

    // Remainder/quotient of polynomial division after aligning both
    // operands to nonnegative integer exponents in a common root of q.
    // Returns {remainder, quotient} in the original exponent scale.
    friend std::pair<UniLaurent, UniLaurent> divmod(const UniLaurent& a, const UniLaurent& b) {
        if (b.is_zero()) throw DivisionByZero("divmod by zero Laurent polynomial");
        if (a.is_zero()) return {UniLaurent(), UniLaurent()};
        Int N = common_exponent_denominator({&a, &b});
        Rat shift_a = a.min_exponent(), shift_b = b.min_exponent();
        std::vector<Rat> ca = a.dense_coeffs(N, shift_a);
        std::vector<Rat> cb = b.dense_coeffs(N, shift_b);
        // Long division of ca by cb over Q[t], t = q^{1/N}.
        std::vector<Rat> quot(ca.size() >= cb.size() ? ca.size() - cb.size() + 1 : 0, Rat(0));
        std::vector<Rat> rem = ca;
        while (rem.size() >= cb.size() && !all_zero(rem)) {
            size_t top = rem.size();
            while (top > 0 && rem[top - 1] == 0) --top;
            if (top < cb.size()) break;
            Rat factor = rem[top - 1] / cb.back();
            size_t offset = top - cb.size();
            quot[offset] = factor;
            for (size_t k = 0; k < cb.size(); ++k) rem[offset + k] -= factor * cb[k];
            rem.resize(top - 1);
        }
        UniLaurent remainder = from_dense(rem, N, shift_a);
        UniLaurent quotient = from_dense(quot, N, shift_a - shift_b);
        return {remainder, quotient};
    }

    // Monic gcd, normalized to minimal exponent zero.
    friend UniLaurent gcd(UniLaurent a, UniLaurent b) {
        if (a.is_zero()) return b.normalized_unitless();
        if (b.is_zero()) return a.normalized_unitless();
        a = a.normalized_unitless();
        b = b.normalized_unitless();
        while (!b.is_zero()) {
            UniLaurent r = divmod(a, b).first;
            a = b;
            b = r.is_zero() ? UniLaurent() : r.normalized_unitless();
        }
        return a.normalized_unitless();
    }

    // Divides by leading coefficient and shifts the minimal exponent to 0.
    UniLaurent normalized_unitless() const {
        if (is_zero()) return *this;
        UniLaurent r;
        Rat shift = min_exponent();
        Rat lead = leading_coefficient();
        for (const auto& [e, c] : terms_) r.terms_[e - shift] = c / lead;
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat ac = c < 0 ? Rat(-c) : c;
            if (!first) s += (c < 0) ? " - " : " + ";
            else if (c < 0) s += "-";
            first = false;
            if (e == 0) s += to_string(ac);
            else {
                if (ac != 1) s += to_string(ac) + "*";
                s += "q^" + (denominator(e) == 1 ? numerator(e).str()
                                                 : "(" + to_string(e) + ")");
            }
        }
        return s;
    }

private:
    void add_term(const Rat& e, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static bool all_zero(const std::vector<Rat>& v) {
        for (const auto& c : v)
            if (c != 0) return false;
        return true;
    }

    static Int common_exponent_denominator(std::initializer_list<const UniLaurent*> ps) {
        Int N = 1;
        for (const UniLaurent* p : ps)
            for (const auto& [e, c] : p->terms_) N = lcm(N, denominator(e));
        return N;
    }

    // Coefficient vector of (this / q^shift) as a polynomial in q^{1/N}.
    std::vector<Rat> dense_coeffs(const Int& N, const Rat& shift) const {
        std::vector<Rat> out;
        for (const auto& [e, c] : terms_) {
            Rat scaled = (e - shift) * Rat(N);
            Int idx = numerator(scaled);
            if (denominator(scaled) != 1 || idx < 0)
                throw InvariantViolation("exponent alignment failed in Laurent division");
            size_t i = static_cast<size_t>(idx);
            if (out.size() <= i) out.resize(i + 1, Rat(0));
            out[i] = c;
        }
        return out;
    }

    static UniLaurent from_dense(const std::vector<Rat>& v, const Int& N, const Rat& shift) {
        UniLaurent p;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) p.terms_[Rat(Int(i), N) + shift] = v[i];
        return p;
    }

    Terms terms_;
};

} // namespace mpq
