#pragma once
// Exact linear algebra over the supported base rings.
//
// The workhorse is a canonical column form of the column span:
//   Z    -> column Hermite form (unimodular transform tracked)
//   Q,Fp -> reduced column echelon (invertible transform tracked)
//   Z/m  -> column Howell form (no transform; solves go through a Z-lift)
// Everything downstream (solving, kernels, canonical coset representatives)
// is built on these forms, with fixed pivoting order so results are
// deterministic for a fixed input.

#include "matrix.hpp"

#include <algorithm>
#include <optional>

namespace ainfty {

struct UnsupportedRing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <ring R>
struct ColForm {
    Matrix<R> H;                            // canonical form, zero columns dropped
    std::optional<Matrix<R>> V;             // M*V = [H | 0], V invertible (absent for Z/m)
    std::vector<std::pair<int, int>> pivots; // (row, col) staircase, rows increasing
};

namespace detail {

// unit u mod m with u*a = gcd(a,m) mod m  (a != 0 mod m)
inline Int unit_lifting(const Int& a, const Int& m) {
    Int h = boost::multiprecision::gcd(a, m);
    Int c = m / h;
    if (c == 1) return 1;
    auto [g, x, y] = xgcd(fmod(a / h, c), c);
    (void)g; (void)y;
    Int u = fmod(x, c);
    while (boost::multiprecision::gcd(u, m) != 1) u += c;
    return fmod(u, m);
}

template <ring R>
void col_axpy(Matrix<R>& M, int dst, const typename R::Elem& q, int src) {
    // col_dst -= q * col_src
    const R& ring = M.ring();
    for (int i = 0; i < M.rows(); ++i) {
        auto v = M.get(i, src);
        if (!ring.is_zero(v)) M.add_to(i, dst, ring.neg(ring.mul(q, v)));
    }
}

template <ring R>
void col_swap(Matrix<R>& M, int a, int b) {
    if (a == b) return;
    auto ca = M.col(a), cb = M.col(b);
    M.set_col(a, cb);
    M.set_col(b, ca);
}

template <ring R>
void col_scale(Matrix<R>& M, int c, const typename R::Elem& u) {
    const R& ring = M.ring();
    for (int i = 0; i < M.rows(); ++i) M.set(i, c, ring.mul(u, M.get(i, c)));
}

// det-1 transform on two columns: (c0, c1) <- (x c0 + y c1, -(b/g) c0 + (a/g) c1)
// where a, b sit in the working row and x a + y b = g.
template <ring R>
void col_gcd_combine(Matrix<R>& M, std::optional<Matrix<R>>& V, int row, int c0, int c1) {
    const R& ring = M.ring();
    Int a, b;
    if constexpr (R::kind == RingKind::Integers || R::kind == RingKind::IntegersMod) {
        a = M.get(row, c0);
        b = M.get(row, c1);
    }
    auto [g, x, y] = xgcd(a, b);
    Int ag = a / g, bg = b / g;
    auto combine = [&](Matrix<R>& W) {
        auto u = W.col(c0), v = W.col(c1);
        Vec<R> nu(u.size(), ring.zero()), nv(u.size(), ring.zero());
        for (size_t i = 0; i < u.size(); ++i) {
            if constexpr (R::kind == RingKind::IntegersMod) {
                nu[i] = ring.reduce(x * u[i] + y * v[i]);
                nv[i] = ring.reduce(ag * v[i] - bg * u[i]);
            } else {
                nu[i] = x * u[i] + y * v[i];
                nv[i] = ag * v[i] - bg * u[i];
            }
        }
        W.set_col(c0, nu);
        W.set_col(c1, nv);
    };
    combine(M);
    if (V) combine(*V);
}

} // namespace detail

// Canonical column form of the span of M's columns.
template <ring R>
ColForm<R> column_form(const Matrix<R>& M) {
    const R& ring = M.ring();
    Matrix<R> H = M;
    std::optional<Matrix<R>> V;
    if constexpr (R::kind != RingKind::IntegersMod)
        V = Matrix<R>::identity(ring, M.cols());

    std::vector<std::pair<int, int>> pivots;
    int next = 0;

    if constexpr (R::kind == RingKind::IntegersMod) {
        // Howell: annihilator columns are appended as extra working columns.
        std::vector<Vec<R>> extra;
        const Int& m = ring.modulus();
        for (int r = 0; r < H.rows(); ++r) {
            // fold pending annihilator columns whose top nonzero reached row r
            for (size_t k = 0; k < extra.size();) {
                bool above = false;
                for (int i = 0; i < r; ++i)
                    if (!ring.is_zero(extra[k][i])) { above = true; break; }
                if (above) { ++k; continue; }
                if (vec_is_zero(ring, extra[k])) { extra.erase(extra.begin() + k); continue; }
                Matrix<R> H2(ring, H.rows(), H.cols() + 1);
                for (const auto& [ij, v] : H.entries()) H2.set(ij.first, ij.second, v);
                H2.set_col(H.cols(), extra[k]);
                H = H2;
                extra.erase(extra.begin() + k);
            }
            int lead = -1;
            for (int j = next; j < H.cols(); ++j) {
                if (ring.is_zero(H.get(r, j))) continue;
                if (lead < 0) { lead = j; continue; }
                detail::col_gcd_combine(H, V, r, lead, j);
            }
            if (lead < 0) continue;
            detail::col_swap(H, next, lead);
            Int a = H.get(r, next);
            Int u = detail::unit_lifting(a, m);
            detail::col_scale(H, next, ring.reduce(u));
            Int h = H.get(r, next);
            // annihilator of the pivot stays in the span: (m/h) * column
            Int ann = m / boost::multiprecision::gcd(h, m);
            if (ann != 1) {
                Vec<R> acol(H.rows(), ring.zero());
                for (int i = 0; i < H.rows(); ++i) acol[i] = ring.mul(ring.reduce(ann), H.get(i, next));
                extra.push_back(std::move(acol));
            }
            for (int j = 0; j < next; ++j) {
                Int q = fdiv(H.get(r, j), h);
                if (q != 0) detail::col_axpy(H, j, ring.reduce(q), next);
            }
            pivots.push_back({r, next});
            ++next;
        }
    } else {
        for (int r = 0; r < H.rows(); ++r) {
            int lead = -1;
            for (int j = next; j < H.cols(); ++j) {
                if (ring.is_zero(H.get(r, j))) continue;
                if (lead < 0) { lead = j; continue; }
                if constexpr (R::kind == RingKind::Integers) {
                    detail::col_gcd_combine(H, V, r, lead, j);
                } else {
                    // field: eliminate outright
                    auto q = ring.mul(H.get(r, j), ring.inv(H.get(r, lead)));
                    detail::col_axpy(H, j, q, lead);
                    if (V) detail::col_axpy(*V, j, q, lead);
                }
            }
            if (lead < 0) continue;
            detail::col_swap(H, next, lead);
            if (V) detail::col_swap(*V, next, lead);
            if constexpr (R::kind == RingKind::Integers) {
                if (H.get(r, next) < 0) {
                    detail::col_scale(H, next, ring.from_int(-1));
                    if (V) detail::col_scale(*V, next, ring.from_int(-1));
                }
            } else {
                auto u = ring.inv(H.get(r, next));
                detail::col_scale(H, next, u);
                if (V) detail::col_scale(*V, next, u);
            }
            auto h = H.get(r, next);
            for (int j = 0; j < next; ++j) {
                typename R::Elem q;
                if constexpr (R::kind == RingKind::Integers) q = fdiv(H.get(r, j), h);
                else q = H.get(r, j);
                if (!ring.is_zero(q)) {
                    detail::col_axpy(H, j, q, next);
                    if (V) detail::col_axpy(*V, j, q, next);
                }
            }
            pivots.push_back({r, next});
            ++next;
        }
    }

    // V is the full transform; its trailing columns span the kernel
    return ColForm<R>{H.cols_slice(0, next), std::move(V), std::move(pivots)};
}

// Canonical representative of v modulo the span captured by `form`.
template <ring R>
Vec<R> reduce_by_form(const ColForm<R>& form, Vec<R> v) {
    const R& ring = form.H.ring();
    for (const auto& [r, c] : form.pivots) {
        auto h = form.H.get(r, c);
        typename R::Elem q;
        if constexpr (R::kind == RingKind::Integers || R::kind == RingKind::IntegersMod)
            q = fdiv(v[r], h);
        else
            q = ring.mul(v[r], ring.inv(h));
        if (ring.is_zero(q)) continue;
        for (int i = 0; i < form.H.rows(); ++i) {
            auto w = form.H.get(i, c);
            if (!ring.is_zero(w)) v[i] = ring.sub(v[i], ring.mul(q, w));
        }
        if constexpr (R::kind == RingKind::IntegersMod) v[r] = ring.reduce(v[r]);
    }
    return v;
}

// Solve form.H * y = b on the staircase (deterministic; non-pivot y = 0).
template <ring R>
std::optional<Vec<R>> solve_on_form(const ColForm<R>& form, Vec<R> b) {
    const R& ring = form.H.ring();
    Vec<R> y(form.H.cols(), ring.zero());
    size_t next_pivot = 0;
    for (int r = 0; r < form.H.rows(); ++r) {
        if (next_pivot < form.pivots.size() && form.pivots[next_pivot].first == r) {
            int c = form.pivots[next_pivot].second;
            auto q = ring.try_div(b[r], form.H.get(r, c));
            if (!q) return std::nullopt;
            y[c] = *q;
            if (!ring.is_zero(*q))
                for (int i = r; i < form.H.rows(); ++i)
                    b[i] = ring.sub(b[i], ring.mul(*q, form.H.get(i, c)));
            ++next_pivot;
        } else if (!ring.is_zero(b[r])) {
            return std::nullopt;
        }
    }
    return y;
}

namespace detail {

template <ring R>
Matrix<R> lift_to_integers(const Matrix<R>& M, IntegerRing Z) {
    Matrix<IntegerRing> out(Z, M.rows(), M.cols());
    for (const auto& [ij, v] : M.entries()) out.set(ij.first, ij.second, v);
    return out;
}

} // namespace detail

// Columns generate ker M over the ring; over Z and fields they are a basis.
template <ring R>
Matrix<R> kernel_basis(const Matrix<R>& M) {
    const R& ring = M.ring();
    if constexpr (R::kind == RingKind::IntegersMod) {
        IntegerRing Z;
        Matrix<IntegerRing> A(Z, M.rows(), M.cols() + M.rows());
        for (const auto& [ij, v] : M.entries()) A.set(ij.first, ij.second, v);
        for (int i = 0; i < M.rows(); ++i) A.set(i, M.cols() + i, ring.modulus());
        auto K = kernel_basis(A);
        Matrix<R> gens(ring, M.cols(), K.cols());
        for (int j = 0; j < K.cols(); ++j)
            for (int i = 0; i < M.cols(); ++i) gens.set(i, j, ring.reduce(K.get(i, j)));
        gens = gens.without_zero_cols();
        // canonicalize the generating set
        return column_form(gens).H;
    } else {
        auto form = column_form(M);
        int rank = (int)form.pivots.size();
        return form.V->cols_slice(rank, form.V->cols());
    }
}

// One exact solution of M x = b if any exists (deterministic).
template <ring R>
std::optional<Vec<R>> solve_linear(const Matrix<R>& M, const Vec<R>& b) {
    if ((int)b.size() != M.rows()) throw DimensionError("solve_linear shape mismatch");
    const R& ring = M.ring();
    if constexpr (R::kind == RingKind::IntegersMod) {
        IntegerRing Z;
        Matrix<IntegerRing> A(Z, M.rows(), M.cols() + M.rows());
        for (const auto& [ij, v] : M.entries()) A.set(ij.first, ij.second, v);
        for (int i = 0; i < M.rows(); ++i) A.set(i, M.cols() + i, ring.modulus());
        Vec<IntegerRing> bz(b.begin(), b.end());
        auto x = solve_linear(A, bz);
        if (!x) return std::nullopt;
        Vec<R> out(M.cols(), ring.zero());
        for (int i = 0; i < M.cols(); ++i) out[i] = ring.reduce((*x)[i]);
        return out;
    } else {
        auto form = column_form(M);
        auto y = solve_on_form(form, b);
        if (!y) return std::nullopt;
        // pad y with zeros for the dropped zero columns, then x = V y
        Vec<R> yfull(form.V->cols(), ring.zero());
        for (int i = 0; i < form.H.cols(); ++i) yfull[i] = (*y)[i];
        return form.V->apply(yfull);
    }
}

template <ring R>
bool in_span(const Matrix<R>& M, const Vec<R>& v) {
    return solve_linear(M, v).has_value();
}

// Canonical column form as a public operation (Howell over Z/m, Hermite
// over Z, reduced echelon over fields).
template <ring R>
Matrix<R> howell_form(const Matrix<R>& M) { return column_form(M).H; }

template <ring R>
struct Smith {
    Matrix<R> U, S, V; // U*M*V = S, S diagonal with d1 | d2 | ...
};

// Smith normal form over Z; over a field S is the 0/1 rank form.
template <ring R>
Smith<R> smith_normal_form(const Matrix<R>& M) {
    static_assert(R::kind != RingKind::IntegersMod,
                  "smith_normal_form is not defined over Z/m; use howell_form");
    const R& ring = M.ring();
    Matrix<R> S = M;
    Matrix<R> U = Matrix<R>::identity(ring, M.rows());
    Matrix<R> V = Matrix<R>::identity(ring, M.cols());

    auto row_axpy = [&](Matrix<R>& W, int dst, const typename R::Elem& q, int src) {
        for (int j = 0; j < W.cols(); ++j) {
            auto v = W.get(src, j);
            if (!ring.is_zero(v)) W.add_to(dst, j, ring.neg(ring.mul(q, v)));
        }
    };
    auto row_swap = [&](Matrix<R>& W, int a, int b) {
        if (a == b) return;
        for (int j = 0; j < W.cols(); ++j) {
            auto va = W.get(a, j), vb = W.get(b, j);
            W.set(a, j, vb);
            W.set(b, j, va);
        }
    };

    int t = 0;
    int bound = std::min(M.rows(), M.cols());
    while (t < bound) {
        // deterministic pivot: minimal "size" nonzero entry in S[t.., t..]
        int pi = -1, pj = -1;
        for (const auto& [ij, v] : S.entries()) {
            if (ij.first < t || ij.second < t) continue;
            if (pi < 0) { pi = ij.first; pj = ij.second; continue; }
            bool better;
            if constexpr (R::kind == RingKind::Integers)
                better = boost::multiprecision::abs(v) < boost::multiprecision::abs(S.get(pi, pj));
            else
                better = false;
            if (better) { pi = ij.first; pj = ij.second; }
        }
        if (pi < 0) break;
        row_swap(S, t, pi);
        row_swap(U, t, pi);
        detail::col_swap(S, t, pj);
        detail::col_swap(V, t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < S.rows(); ++i) {
                auto v = S.get(i, t);
                if (ring.is_zero(v)) continue;
                typename R::Elem q;
                if constexpr (R::kind == RingKind::Integers) q = fdiv(v, S.get(t, t));
                else q = ring.mul(v, ring.inv(S.get(t, t)));
                row_axpy(S, i, q, t);
                row_axpy(U, i, q, t);
                if (!ring.is_zero(S.get(i, t))) {
                    // remainder became the smaller pivot
                    row_swap(S, t, i);
                    row_swap(U, t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < S.cols(); ++j) {
                auto v = S.get(t, j);
                if (ring.is_zero(v)) continue;
                typename R::Elem q;
                if constexpr (R::kind == RingKind::Integers) q = fdiv(v, S.get(t, t));
                else q = ring.mul(v, ring.inv(S.get(t, t)));
                detail::col_axpy(S, j, q, t);
                detail::col_axpy(V, j, q, t);
                if (!ring.is_zero(S.get(t, j))) {
                    detail::col_swap(S, t, j);
                    detail::col_swap(V, t, j);
                    clean = false;
                }
            }
        }

        if constexpr (R::kind == RingKind::Integers) {
            // divisibility sweep: pivot must divide every remaining entry
            bool redo = false;
            for (const auto& [ij, v] : S.entries()) {
                if (ij.first <= t || ij.second <= t) continue;
                if (v % S.get(t, t) != 0) {
                    // fold that row into row t and redo the pivot
                    for (int j = 0; j < S.cols(); ++j) S.add_to(t, j, S.get(ij.first, j));
                    for (int j = 0; j < U.cols(); ++j) U.add_to(t, j, U.get(ij.first, j));
                    redo = true;
                    break;
                }
            }
            if (redo) continue;
            if (S.get(t, t) < 0) {
                detail::col_scale(S, t, ring.from_int(-1));
                detail::col_scale(V, t, ring.from_int(-1));
            }
        } else {
            auto u = ring.inv(S.get(t, t));
            detail::col_scale(S, t, u);
            detail::col_scale(V, t, u);
        }
        ++t;
    }
    return {U, S, V};
}

// Fraction-free determinant (used by tests to certify unimodularity).
template <ring R>
typename R::Elem determinant(const Matrix<R>& M) {
    if (M.rows() != M.cols()) throw DimensionError("determinant of non-square matrix");
    const R& ring = M.ring();
    int n = M.rows();
    if (n == 0) return ring.one();
    if constexpr (R::kind == RingKind::Integers) {
        // Bareiss
        std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = M.get(i, j);
        Int prev = 1, sign = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (a[k][k] == 0) {
                int s = -1;
                for (int i = k + 1; i < n; ++i)
                    if (a[i][k] != 0) { s = i; break; }
                if (s < 0) return Int(0);
                std::swap(a[k], a[s]);
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j)
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            prev = a[k][k];
        }
        return sign * a[n - 1][n - 1];
    } else {
        // expansion via echelon with division
        Matrix<R> A = M;
        auto det = ring.one();
        for (int k = 0; k < n; ++k) {
            int p = -1;
            for (int i = k; i < n; ++i)
                if (!ring.is_zero(A.get(i, k))) { p = i; break; }
            if (p < 0) return ring.zero();
            if (p != k) {
                for (int j = 0; j < n; ++j) {
                    auto va = A.get(k, j), vb = A.get(p, j);
                    A.set(k, j, vb);
                    A.set(p, j, va);
                }
                det = ring.neg(det);
            }
            det = ring.mul(det, A.get(k, k));
            auto inv = ring.inv(A.get(k, k));
            for (int i = k + 1; i < n; ++i) {
                auto q = ring.mul(A.get(i, k), inv);
                if (ring.is_zero(q)) continue;
                for (int j = k; j < n; ++j)
                    A.set(i, j, ring.sub(A.get(i, j), ring.mul(q, A.get(k, j))));
            }
        }
        return det;
    }
}

} // namespace ainfty
