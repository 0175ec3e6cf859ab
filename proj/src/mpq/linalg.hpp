// Exact linear algebra over fraction fields of polynomial rings.
//
// PolyFrac is the fraction field of the exponent-polynomial algebra,
// lightly normalized (shared monomial factors and a scalar) so that
// Gaussian elimination stays small at desk scale.  Mat<F> is a dense
// matrix over any exact field with the usual rank/solve/kernel tools.
#pragma once

#include "errors.hpp"
#include "exppoly.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace mpq {

class PolyFrac {
public:
    PolyFrac() : num_(), den_(Rat(1)) {}
    /*implicit*/ PolyFrac(long v) : num_(Rat(v)), den_(Rat(1)) {}
    /*implicit*/ PolyFrac(const Rat& v) : num_(v), den_(Rat(1)) {}
    /*implicit*/ PolyFrac(ExponentPoly n) : num_(std::move(n)), den_(Rat(1)) {}
    PolyFrac(ExponentPoly n, ExponentPoly d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw DivisionByZero("zero denominator in polynomial fraction");
        simplify();
    }

    const ExponentPoly& num() const { return num_; }
    const ExponentPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
        return PolyFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) {
        return PolyFrac(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
        return PolyFrac(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend PolyFrac operator/(const PolyFrac& a, const PolyFrac& b) {
        if (b.is_zero()) throw DivisionByZero("division by zero polynomial fraction");
        return PolyFrac(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend PolyFrac operator-(const PolyFrac& a) { return PolyFrac(ExponentPoly() - a.num_, a.den_); }
    PolyFrac& operator+=(const PolyFrac& o) { return *this = *this + o; }
    PolyFrac& operator-=(const PolyFrac& o) { return *this = *this - o; }
    PolyFrac& operator*=(const PolyFrac& o) { return *this = *this * o; }
    PolyFrac& operator/=(const PolyFrac& o) { return *this = *this / o; }

    friend bool operator==(const PolyFrac& a, const PolyFrac& b) {
        return (a.num_ * b.den_) == (b.num_ * a.den_);
    }
    friend bool operator!=(const PolyFrac& a, const PolyFrac& b) { return !(a == b); }

    // The value as a polynomial; requires an (effectively) constant
    // denominator after normalization.
    ExponentPoly to_poly() const {
        if (den_.is_constant()) {
            Rat c = den_.constant_value();
            return Rat(1) / c * num_;
        }
        if (den_.terms().size() == 1) {
            // Monomial denominator: fold it into Laurent exponents.
            const auto& [m, c] = *den_.terms().begin();
            Monomial inv;
            for (const auto& [a, e] : m) inv[a] = -e;
            return num_ * ExponentPoly::monomial(inv, Rat(1) / c);
        }
        throw InvariantViolation("fraction is not representable as a Laurent polynomial: (" +
                                 num_.str() + ")/(" + den_.str() + ")");
    }

    std::string str() const {
        if (den_ == ExponentPoly(Rat(1))) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    void simplify() {
        if (num_.is_zero()) {
            den_ = ExponentPoly(Rat(1));
            return;
        }
        // Strip the shared monomial content (per-atom minimum exponents
        // across every monomial of both numerator and denominator).
        Monomial content;
        bool first = true;
        auto accumulate = [&](const ExponentPoly& p) {
            for (const auto& [m, c] : p.terms()) {
                if (first) {
                    content = m;
                    first = false;
                    continue;
                }
                for (auto it = content.begin(); it != content.end();) {
                    auto found = m.find(it->first);
                    long e = (found == m.end()) ? 0 : found->second;
                    it->second = std::min(it->second, e);
                    it = (it->second == 0) ? content.erase(it) : std::next(it);
                }
            }
        };
        accumulate(num_);
        accumulate(den_);
        if (!content.empty()) {
            Monomial inv;
            for (const auto& [a, e] : content) inv[a] = -e;
            ExponentPoly factor = ExponentPoly::monomial(inv, Rat(1));
            num_ = num_ * factor;
            den_ = den_ * factor;
        }
        // Scale the denominator's first canonical coefficient to 1.
        Rat lead = den_.terms().begin()->second;
        if (lead != 1) {
            num_ = Rat(1) / lead * num_;
            den_ = Rat(1) / lead * den_;
        }
    }

    ExponentPoly num_;
    ExponentPoly den_;
};

template <typename F>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows, std::vector<F>(cols, F(0))) {}
    explicit Mat(std::vector<std::vector<F>> data)
        : rows_(static_cast<int>(data.size())),
          cols_(data.empty() ? 0 : static_cast<int>(data[0].size())),
          data_(std::move(data)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.data_[i][i] = F(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    F& at(int i, int j) { return data_[i][j]; }
    const F& at(int i, int j) const { return data_[i][j]; }
    const std::vector<std::vector<F>>& data() const { return data_; }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.data_[j][i] = data_[i][j];
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw SizeMismatch("matrix product shape mismatch");
        Mat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.data_[i][k].is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    r.data_[i][j] += a.data_[i][k] * b.data_[k][j];
            }
        return r;
    }
    friend Mat operator+(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw SizeMismatch("matrix sum shape mismatch");
        Mat r = a;
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.data_[i][j] += b.data_[i][j];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw SizeMismatch("matrix difference shape mismatch");
        Mat r = a;
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.data_[i][j] -= b.data_[i][j];
        return r;
    }
    friend bool operator==(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j)
                if (!(a.data_[i][j] == b.data_[i][j])) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& row : data_)
            for (const auto& v : row)
                if (!v.is_zero()) return false;
        return true;
    }

    // Vertical stack.
    static Mat stack(const Mat& top, const Mat& bottom) {
        if (top.cols_ != bottom.cols_) throw SizeMismatch("stack width mismatch");
        Mat r(top.rows_ + bottom.rows_, top.cols_);
        r.data_ = top.data_;
        r.data_.insert(r.data_.end(), bottom.data_.begin(), bottom.data_.end());
        return r;
    }

    // In-place reduced row echelon form with leftmost pivots.
    // Returns the pivot column per pivot row.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int row = 0;
        for (int col = 0; col < cols_ && row < rows_; ++col) {
            int sel = -1;
            for (int i = row; i < rows_; ++i)
                if (!data_[i][col].is_zero()) { sel = i; break; }
            if (sel < 0) continue;
            std::swap(data_[sel], data_[row]);
            F inv = F(1) / data_[row][col];
            for (int j = col; j < cols_; ++j) data_[row][j] = data_[row][j] * inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == row || data_[i][col].is_zero()) continue;
                F factor = data_[i][col];
                for (int j = col; j < cols_; ++j)
                    data_[i][j] -= factor * data_[row][j];
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    int rank() const {
        Mat copy = *this;
        return static_cast<int>(copy.rref().size());
    }

    // Basis of the right kernel {v : A v = 0} as matrix columns.
    Mat kernel() const {
        Mat r = *this;
        std::vector<int> pivots = r.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int c : pivots) is_pivot[c] = true;
        int free_count = cols_ - static_cast<int>(pivots.size());
        Mat basis(cols_, free_count);
        int idx = 0;
        for (int c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            basis.data_[c][idx] = F(1);
            for (size_t p = 0; p < pivots.size(); ++p)
                basis.data_[pivots[p]][idx] = F(0) - r.data_[p][c];
            ++idx;
        }
        return basis;
    }

    // Solves X * A = B row-wise (i.e. finds row-space coordinates of B);
    // returns nullopt when some row of B is outside the row space of A.
    std::optional<Mat> solve_left(const Mat& B) const {
        const Mat& A = *this;
        if (B.cols_ != A.cols_) throw SizeMismatch("solve_left width mismatch");
        // Row-reduce [A | I] to express echelon rows in terms of A's rows.
        Mat aug(A.rows_, A.cols_ + A.rows_);
        for (int i = 0; i < A.rows_; ++i) {
            for (int j = 0; j < A.cols_; ++j) aug.data_[i][j] = A.data_[i][j];
            aug.data_[i][A.cols_ + i] = F(1);
        }
        int row = 0;
        std::vector<int> pivots;
        for (int col = 0; col < A.cols_ && row < A.rows_; ++col) {
            int sel = -1;
            for (int i = row; i < A.rows_; ++i)
                if (!aug.data_[i][col].is_zero()) { sel = i; break; }
            if (sel < 0) continue;
            std::swap(aug.data_[sel], aug.data_[row]);
            F inv = F(1) / aug.data_[row][col];
            for (int j = 0; j < aug.cols_; ++j) aug.data_[row][j] = aug.data_[row][j] * inv;
            for (int i = 0; i < A.rows_; ++i) {
                if (i == row || aug.data_[i][col].is_zero()) continue;
                F factor = aug.data_[i][col];
                for (int j = 0; j < aug.cols_; ++j)
                    aug.data_[i][j] -= factor * aug.data_[row][j];
            }
            pivots.push_back(col);
            ++row;
        }
        // Express each row of B against the echelon rows.
        Mat X(B.rows_, A.rows_);
        for (int r = 0; r < B.rows_; ++r) {
            std::vector<F> residual(B.data_[r]);
            std::vector<F> combo(A.rows_, F(0));
            for (size_t p = 0; p < pivots.size(); ++p) {
                F c = residual[pivots[p]];
                if (c.is_zero()) continue;
                for (int j = 0; j < A.cols_; ++j) residual[j] -= c * aug.data_[p][j];
                for (int j = 0; j < A.rows_; ++j)
                    combo[j] += c * aug.data_[p][A.cols_ + j];
            }
            for (const F& v : residual)
                if (!v.is_zero()) return std::nullopt;
            X.data_[r] = std::move(combo);
        }
        return X;
    }

    // A right inverse B with A * B = I (requires full row rank).
    std::optional<Mat> right_inverse() const {
        auto X = transpose().solve_left(identity(rows_).transpose());
        // transpose().solve_left(I): Y * A^T = I  =>  A * Y^T = I.
        if (!X) return std::nullopt;
        return X->transpose();
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::vector<F>> data_;
};

using FracMat = Mat<PolyFrac>;

inline FracMat to_frac(const std::vector<std::vector<ExponentPoly>>& m) {
    FracMat r(static_cast<int>(m.size()), m.empty() ? 0 : static_cast<int>(m[0].size()));
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) = PolyFrac(m[i][j]);
    return r;
}

// Reduction killing every non-unit atom (the mod-h view with unit kept
// transcendental).
inline FracMat to_frac_killed(const std::vector<std::vector<ExponentPoly>>& m) {
    FracMat r(static_cast<int>(m.size()), m.empty() ? 0 : static_cast<int>(m[0].size()));
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) = PolyFrac(m[i][j].unit_part());
    return r;
}

inline std::vector<std::vector<ExponentPoly>> from_frac(const FracMat& m) {
    std::vector<std::vector<ExponentPoly>> r(m.rows(), std::vector<ExponentPoly>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r[i][j] = m.at(i, j).to_poly();
    return r;
}

} // namespace mpq
