#pragma once
// Sparse exact matrices keyed by (row, col). Stored entries are always
// nonzero; dimensions are fixed at construction and checked by every
// operation.

#include "ring.hpp"

#include <map>
#include <vector>

namespace ainfty {

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <ring R>
using Vec = std::vector<typename R::Elem>;

template <ring R>
class Matrix {
public:
    using Elem = typename R::Elem;

    Matrix() : ring_(), rows_(0), cols_(0) {}
    Matrix(R ring, int rows, int cols) : ring_(std::move(ring)), rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    }

    static Matrix identity(R ring, int n) {
        Matrix m(ring, n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, ring.one());
        return m;
    }

    const R& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_zero() const { return entries_.empty(); }

    Elem get(int i, int j) const {
        check_index(i, j);
        auto it = entries_.find({i, j});
        return it == entries_.end() ? ring_.zero() : it->second;
    }
    void set(int i, int j, Elem v) {
        check_index(i, j);
        if (ring_.is_zero(v)) entries_.erase({i, j});
        else entries_[{i, j}] = std::move(v);
    }
    void add_to(int i, int j, const Elem& v) { set(i, j, ring_.add(get(i, j), v)); }

    const std::map<std::pair<int, int>, Elem>& entries() const { return entries_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (const auto& [ij, v] : o.entries_) out.add_to(ij.first, ij.second, v);
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (const auto& [ij, v] : o.entries_) out.add_to(ij.first, ij.second, ring_.neg(v));
        return out;
    }
    Matrix operator-() const {
        Matrix out(ring_, rows_, cols_);
        for (const auto& [ij, v] : entries_) out.set(ij.first, ij.second, ring_.neg(v));
        return out;
    }
    Matrix scaled(const Elem& c) const {
        Matrix out(ring_, rows_, cols_);
        for (const auto& [ij, v] : entries_) out.set(ij.first, ij.second, ring_.mul(c, v));
        return out;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_)
            throw DimensionError("matrix product shape mismatch");
        Matrix out(ring_, rows_, o.cols_);
        // group o's entries by row for the sparse product
        std::vector<std::vector<std::pair<int, const Elem*>>> byrow(o.rows_);
        for (const auto& [ij, v] : o.entries_) byrow[ij.first].push_back({ij.second, &v});
        for (const auto& [ij, v] : entries_)
            for (const auto& [k, w] : byrow[ij.second])
                out.add_to(ij.first, k, ring_.mul(v, *w));
        return out;
    }

    Vec<R> apply(const Vec<R>& x) const {
        if ((int)x.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
        Vec<R> out(rows_, ring_.zero());
        for (const auto& [ij, v] : entries_)
            out[ij.first] = ring_.add(out[ij.first], ring_.mul(v, x[ij.second]));
        return out;
    }

    Matrix transposed() const {
        Matrix out(ring_, cols_, rows_);
        for (const auto& [ij, v] : entries_) out.set(ij.second, ij.first, v);
        return out;
    }

    Vec<R> col(int j) const {
        Vec<R> out(rows_, ring_.zero());
        for (int i = 0; i < rows_; ++i) out[i] = get(i, j);
        return out;
    }
    void set_col(int j, const Vec<R>& v) {
        if ((int)v.size() != rows_) throw DimensionError("column length mismatch");
        for (int i = 0; i < rows_; ++i) set(i, j, v[i]);
    }

    // columns of `o` appended on the right
    Matrix hcat(const Matrix& o) const {
        if (rows_ != o.rows_) throw DimensionError("hcat row mismatch");
        Matrix out(ring_, rows_, cols_ + o.cols_);
        out.entries_ = entries_;
        for (const auto& [ij, v] : o.entries_) out.set(ij.first, ij.second + cols_, v);
        return out;
    }

    Matrix cols_slice(int j0, int j1) const {
        if (j0 < 0 || j1 < j0 || j1 > cols_) throw DimensionError("bad column slice");
        Matrix out(ring_, rows_, j1 - j0);
        for (const auto& [ij, v] : entries_)
            if (ij.second >= j0 && ij.second < j1) out.set(ij.first, ij.second - j0, v);
        return out;
    }

    Matrix rows_slice(int i0, int i1) const {
        if (i0 < 0 || i1 < i0 || i1 > rows_) throw DimensionError("bad row slice");
        Matrix out(ring_, i1 - i0, cols_);
        for (const auto& [ij, v] : entries_)
            if (ij.first >= i0 && ij.first < i1) out.set(ij.first - i0, ij.second, v);
        return out;
    }

    // drop columns that are entirely zero
    Matrix without_zero_cols() const {
        std::vector<bool> nz(cols_, false);
        for (const auto& [ij, v] : entries_) nz[ij.second] = true;
        std::vector<int> remap(cols_, -1);
        int k = 0;
        for (int j = 0; j < cols_; ++j)
            if (nz[j]) remap[j] = k++;
        Matrix out(ring_, rows_, k);
        for (const auto& [ij, v] : entries_) out.set(ij.first, remap[ij.second], v);
        return out;
    }

private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw DimensionError("matrix index out of range");
    }
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionError("matrix shape mismatch");
    }

    R ring_;
    int rows_, cols_;
    std::map<std::pair<int, int>, Elem> entries_;
};

template <ring R>
Matrix<R> from_dense(R ring, const std::vector<std::vector<long long>>& rows) {
    int m = (int)rows.size();
    int n = m == 0 ? 0 : (int)rows[0].size();
    Matrix<R> out(ring, m, n);
    for (int i = 0; i < m; ++i) {
        if ((int)rows[i].size() != n) throw DimensionError("ragged dense matrix");
        for (int j = 0; j < n; ++j) out.set(i, j, ring.from_int(rows[i][j]));
    }
    return out;
}

template <ring R>
Vec<R> vec_from(R ring, const std::vector<long long>& v) {
    Vec<R> out;
    out.reserve(v.size());
    for (long long x : v) out.push_back(ring.from_int(x));
    return out;
}

template <ring R>
Vec<R> zero_vec(const R& ring, int n) { return Vec<R>(n, ring.zero()); }

template <ring R>
bool vec_is_zero(const R& ring, const Vec<R>& v) {
    for (const auto& x : v)
        if (!ring.is_zero(x)) return false;
    return true;
}

template <ring R>
Vec<R> vec_add(const R& ring, const Vec<R>& a, const Vec<R>& b) {
    if (a.size() != b.size()) throw DimensionError("vector sum shape mismatch");
    Vec<R> out(a.size(), ring.zero());
    for (size_t i = 0; i < a.size(); ++i) out[i] = ring.add(a[i], b[i]);
    return out;
}

template <ring R>
Vec<R> vec_sub(const R& ring, const Vec<R>& a, const Vec<R>& b) {
    if (a.size() != b.size()) throw DimensionError("vector difference shape mismatch");
    Vec<R> out(a.size(), ring.zero());
    for (size_t i = 0; i < a.size(); ++i) out[i] = ring.sub(a[i], b[i]);
    return out;
}

template <ring R>
Vec<R> vec_scale(const R& ring, const typename R::Elem& c, const Vec<R>& a) {
    Vec<R> out(a.size(), ring.zero());
    for (size_t i = 0; i < a.size(); ++i) out[i] = ring.mul(c, a[i]);
    return out;
}

} // namespace ainfty
