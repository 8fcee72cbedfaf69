#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iomanip>
#include <sstream>
#include <vector>

#include "tsfloor/util.hpp"

namespace tsfloor {

/// Dense row-major matrix. Sizes here are tiny (state-space models are
/// m_s <= 64), so no sparse machinery is needed.
template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, fill) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static Mat from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        Mat m(static_cast<int>(rows.size()), rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
        int i = 0;
        for (const auto& r : rows) {
            assert(static_cast<int>(r.size()) == m.cols_);
            int j = 0;
            for (const T& v : r) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const {
        assert(cols_ == o.rows_);
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T a = (*this)(i, k);
                if (a == T{}) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Mat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        Mat r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        assert(static_cast<int>(v.size()) == cols_);
        std::vector<T> r(rows_, T{});
        for (int i = 0; i < rows_; ++i) {
            T acc{};
            for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
            r[i] = acc;
        }
        return r;
    }

    template <class U>
    Mat<U> cast() const {
        Mat<U> r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = static_cast<U>((*this)(i, j));
        return r;
    }

    /// Dense text grid, one row per line, matching the paper-style dumps.
    std::string to_text() const {
        std::ostringstream os;
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                if (j) os << ' ';
                os << (*this)(i, j);
            }
            os << '\n';
        }
        return os.str();
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IMat = Mat<long long>;
using DMat = Mat<double>;
using DVec = std::vector<double>;

inline DVec operator*(const DVec& v, const DMat& m) {  // row vector times matrix
    assert(static_cast<int>(v.size()) == m.rows());
    DVec r(m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        const double a = v[i];
        if (a == 0.0) continue;
        for (int j = 0; j < m.cols(); ++j) r[j] += a * m(i, j);
    }
    return r;
}

inline double dot(const DVec& a, const DVec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const DVec& v) { return std::sqrt(dot(v, v)); }

inline void normalize2(DVec& v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

}  // namespace tsfloor
