// Ground scalars: exact elements of the group ring of formal
// exponentials q^x over the exponent-polynomial algebra, localized at
// the line of plain q-Laurent denominators.
//
// A scalar is num/den where num is a finite sum of terms c * q^x
// (c and x exponent polynomials) and den is a q-Laurent polynomial
// with rational coefficients.  Fractions are reduced by dividing out
// the univariate gcd of den with the q-content of num, and den is
// normalized to leading coefficient 1 with minimal exponent 0.
#pragma once

#include "errors.hpp"
#include "exppoly.hpp"
#include "unilaurent.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mpq {

// Finite sum of c * q^x, keyed by the exponent x.
class ExpSum {
public:
    using Terms = std::map<ExponentPoly, ExponentPoly>; // x -> c

    ExpSum() = default;
    /*implicit*/ ExpSum(const Rat& c) {
        if (c != 0) terms_[ExponentPoly()] = ExponentPoly(c);
    }
    /*implicit*/ ExpSum(long c) : ExpSum(Rat(c)) {}

    static ExpSum term(const ExponentPoly& coeff, const ExponentPoly& exponent) {
        ExpSum s;
        if (!coeff.is_zero()) s.terms_[exponent] = coeff;
        return s;
    }
    static ExpSum q_power(const ExponentPoly& exponent) {
        return term(ExponentPoly(Rat(1)), exponent);
    }
    static ExpSum from_laurent(const UniLaurent& p) {
        ExpSum s;
        for (const auto& [e, c] : p.terms())
            s.terms_[ExponentPoly::unit(e)] = ExponentPoly(c);
        return s;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ExpSum& operator+=(const ExpSum& o) {
        for (const auto& [x, c] : o.terms_) add_term(x, c);
        return *this;
    }
    ExpSum& operator-=(const ExpSum& o) {
        for (const auto& [x, c] : o.terms_) add_term(x, -c);
        return *this;
    }
    friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }
    friend ExpSum operator-(ExpSum a, const ExpSum& b) { return a -= b; }
    friend ExpSum operator-(const ExpSum& a) {
        ExpSum r;
        for (const auto& [x, c] : a.terms_) r.terms_[x] = -c;
        return r;
    }
    friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
        ExpSum r;
        for (const auto& [xa, ca] : a.terms_)
            for (const auto& [xb, cb] : b.terms_) r.add_term(xa + xb, ca * cb);
        return r;
    }
    ExpSum& operator*=(const ExpSum& o) { return *this = *this * o; }

    friend bool operator==(const ExpSum& a, const ExpSum& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ExpSum& a, const ExpSum& b) { return !(a == b); }
    friend bool operator<(const ExpSum& a, const ExpSum& b) { return a.terms_ < b.terms_; }

    // True when the sum is a rational-coefficient Laurent polynomial in q
    // alone: all exponents on the unit line, all coefficients constant.
    bool is_unit_line() const {
        for (const auto& [x, c] : terms_)
            if (!x.is_unit_line() || !c.is_constant()) return false;
        return true;
    }
    UniLaurent to_laurent() const {
        UniLaurent p;
        for (const auto& [x, c] : terms_) {
            if (!x.is_unit_line() || !c.is_constant())
                throw DivisionByNonUnit("scalar term off the q-line: (" + c.str() +
                                        ")*q^(" + x.str() + ")");
            p += UniLaurent::q_power(x.unit_coefficient(), c.constant_value());
        }
        return p;
    }

    std::set<AtomId> atoms() const {
        std::set<AtomId> out;
        for (const auto& [x, c] : terms_) {
            auto ax = x.atoms();
            out.insert(ax.begin(), ax.end());
            auto ac = c.atoms();
            out.insert(ac.begin(), ac.end());
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [x, c] : terms_) {
            if (!s.empty()) s += " + ";
            if (x.is_zero()) s += "(" + c.str() + ")";
            else s += "(" + c.str() + ")*q^(" + x.str() + ")";
        }
        return s;
    }

private:
    void add_term(const ExponentPoly& x, const ExponentPoly& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(x, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Terms terms_;
};

class ToralScalar {
public:
    ToralScalar() : den_(Rat(1)) {}
    /*implicit*/ ToralScalar(const Rat& c) : num_(c), den_(Rat(1)) {}
    /*implicit*/ ToralScalar(long c) : num_(Rat(c)), den_(Rat(1)) {}
    /*implicit*/ ToralScalar(ExpSum num) : num_(std::move(num)), den_(Rat(1)) {
        reduce();
    }
    ToralScalar(ExpSum num, UniLaurent den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero("zero denominator");
        reduce();
    }

    static ToralScalar q_power(const ExponentPoly& exponent) {
        return ToralScalar(ExpSum::q_power(exponent));
    }
    // q^r for rational r (i.e. exponent r*unit).
    static ToralScalar q_rat(const Rat& r) { return q_power(ExponentPoly::unit(r)); }
    static ToralScalar term(const ExponentPoly& coeff, const ExponentPoly& exponent) {
        return ToralScalar(ExpSum::term(coeff, exponent));
    }
    static ToralScalar from_laurent(const UniLaurent& p) {
        return ToralScalar(ExpSum::from_laurent(p));
    }

    const ExpSum& num() const { return num_; }
    const UniLaurent& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return *this == ToralScalar(Rat(1)); }

    ToralScalar& operator+=(const ToralScalar& o) {
        num_ = num_ * ExpSum::from_laurent(o.den_) + o.num_ * ExpSum::from_laurent(den_);
        den_ = den_ * o.den_;
        reduce();
        return *this;
    }
    ToralScalar& operator-=(const ToralScalar& o) { return *this += -o; }
    ToralScalar& operator*=(const ToralScalar& o) {
        num_ = num_ * o.num_;
        den_ = den_ * o.den_;
        reduce();
        return *this;
    }
    friend ToralScalar operator+(ToralScalar a, const ToralScalar& b) { return a += b; }
    friend ToralScalar operator-(ToralScalar a, const ToralScalar& b) { return a -= b; }
    friend ToralScalar operator*(ToralScalar a, const ToralScalar& b) { return a *= b; }
    friend ToralScalar operator-(const ToralScalar& a) {
        ToralScalar r = a;
        r.num_ = -r.num_;
        return r;
    }

    // Division: the divisor's numerator must be a plain q-Laurent polynomial.
    friend ToralScalar operator/(const ToralScalar& a, const ToralScalar& b) {
        return a * b.inverse();
    }
    ToralScalar& operator/=(const ToralScalar& o) { return *this = *this / o; }

    ToralScalar inverse() const {
        if (num_.is_zero()) throw DivisionByZero("inverse of zero scalar");
        UniLaurent new_den = num_.to_laurent(); // throws DivisionByNonUnit otherwise
        return ToralScalar(ExpSum::from_laurent(den_), new_den);
    }

    friend bool operator==(const ToralScalar& a, const ToralScalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const ToralScalar& a, const ToralScalar& b) { return !(a == b); }
    friend bool operator<(const ToralScalar& a, const ToralScalar& b) {
        if (a.num_ < b.num_) return true;
        if (b.num_ < a.num_) return false;
        return a.den_.terms() < b.den_.terms();
    }

    bool is_unit_line() const { return num_.is_unit_line(); }
    // The value as a plain q-Laurent polynomial; requires den == 1.
    UniLaurent to_laurent() const {
        if (!den_.is_one())
            throw DivisionByNonUnit("scalar has a nontrivial denominator: " + str());
        return num_.to_laurent();
    }

    std::set<AtomId> atoms() const { return num_.atoms(); }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

private:
    // Splits x = r*unit + y with y free of the pure-unit monomial.
    static std::pair<Rat, ExponentPoly> split_unit(const ExponentPoly& x) {
        Monomial unit_mono{{unit_atom(), 1}};
        Rat r = x.coefficient(unit_mono);
        ExponentPoly rest = x - ExponentPoly::unit(r);
        return {r, rest};
    }

    void reduce() {
        if (num_.is_zero()) {
            den_ = UniLaurent(Rat(1));
            return;
        }
        // Group the numerator into q-Laurent packets keyed by the
        // (coefficient monomial, off-line exponent part) tag.
        using Tag = std::pair<Monomial, ExponentPoly>;
        std::map<Tag, UniLaurent> packets;
        for (const auto& [x, c] : num_.terms()) {
            auto [r, y] = split_unit(x);
            for (const auto& [m, coeff] : c.terms())
                packets[{m, y}] += UniLaurent::q_power(r, coeff);
        }
        UniLaurent content;
        for (const auto& [tag, g] : packets) content = gcd(content, g);
        UniLaurent common = gcd(content, den_);
        if (!common.is_one() && !common.is_zero()) {
            std::map<Tag, UniLaurent> reduced;
            for (const auto& [tag, g] : packets) reduced[tag] = divide_exact(g, common);
            packets = std::move(reduced);
            den_ = divide_exact(den_, common);
        }
        // Normalize the denominator: minimal exponent 0, leading coeff 1.
        UniLaurent scale =
            UniLaurent::q_power(den_.min_exponent(), den_.leading_coefficient());
        if (!scale.is_one()) {
            den_ = divide_exact(den_, scale);
            std::map<Tag, UniLaurent> rescaled;
            for (const auto& [tag, g] : packets) rescaled[tag] = divide_exact(g, scale);
            packets = std::move(rescaled);
        }
        // Reassemble the numerator in canonical grouped form.
        ExpSum out;
        for (const auto& [tag, g] : packets) {
            const auto& [m, y] = tag;
            for (const auto& [r, coeff] : g.terms())
                out += ExpSum::term(ExponentPoly::monomial(m, coeff),
                                    y + ExponentPoly::unit(r));
        }
        num_ = std::move(out);
    }

    ExpSum num_;
    UniLaurent den_;
};

enum class ScalarOp { add, mul, div, neg, inv };

inline ToralScalar scalar_arith(const ToralScalar& a, const ToralScalar& b, ScalarOp op) {
    switch (op) {
        case ScalarOp::add: return a + b;
        case ScalarOp::mul: return a * b;
        case ScalarOp::div: return a / b;
        case ScalarOp::neg: return -a;
        case ScalarOp::inv: return a.inverse();
    }
    throw OutOfRange("unknown scalar operation");
}

// Symmetric Gaussian binomial [n k] in the variable q^d, via the
// recurrence [n k] = q^{-k}[n-1 k] + q^{n-k}[n-1 k-1] (exponents scaled
// by d).  Always a Laurent polynomial: no denominator survives.
inline ToralScalar q_binomial(long n, long k, const Rat& d) {
    if (n < 0 || k < 0 || k > n)
        throw OutOfRange("q_binomial requires 0 <= k <= n");
    std::vector<UniLaurent> row{UniLaurent(Rat(1))}; // row for n' = 0
    for (long m = 1; m <= n; ++m) {
        std::vector<UniLaurent> next(std::min(m, k) + 1);
        for (long j = 0; j <= std::min(m, k); ++j) {
            UniLaurent v;
            if (j <= m - 1 && j < static_cast<long>(row.size()))
                v += UniLaurent::q_power(Rat(-j) * d) * row[j];
            if (j >= 1 && j - 1 < static_cast<long>(row.size()))
                v += UniLaurent::q_power(Rat(m - j) * d) * row[j - 1];
            next[j] = v;
        }
        row = std::move(next);
    }
    return ToralScalar::from_laurent(row.at(k));
}

// The symmetric q-integer [n] in the variable q^d.
inline ToralScalar q_integer(long n, const Rat& d = Rat(1)) {
    UniLaurent p;
    for (long j = 0; j < n; ++j) p += UniLaurent::q_power(Rat(n - 1 - 2 * j) * d);
    return ToralScalar::from_laurent(p);
}

// Substitutes rational values for every non-unit atom of the scalar.
// In exponent position an atom-free value r stands for the exponent
// r*unit (so q^{p} at p = 3 becomes q^3); in coefficient position the
// unit atom survives as a transcendental.
inline ToralScalar specialize(const ToralScalar& s, const std::map<AtomId, Rat>& assignment) {
    auto specialize_sum = [&](const ExpSum& sum) {
        ExpSum out;
        for (const auto& [x, c] : sum.terms()) {
            ExponentPoly coeff = c;
            for (AtomId a : c.atoms()) {
                if (a == unit_atom()) continue;
                auto it = assignment.find(a);
                if (it == assignment.end())
                    throw UnboundAtom("no value for atom " + AtomTable::name(a));
                coeff = coeff.substitute(a, ExponentPoly(it->second));
            }
            std::map<AtomId, Rat> values = assignment;
            values[unit_atom()] = Rat(1);
            Rat r;
            try {
                r = x.evaluate(values);
            } catch (const std::out_of_range& e) {
                throw UnboundAtom(e.what());
            }
            out += ExpSum::term(coeff, ExponentPoly::unit(r));
        }
        return out;
    };
    return ToralScalar(specialize_sum(s.num()), s.den());
}

} // namespace mpq
