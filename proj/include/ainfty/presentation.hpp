#pragma once
// Finitely presented modules: a generator count plus a relation matrix whose
// columns span the relations. The cached canonical column form of the
// relations makes fp_reduce a canonical coset representative, and it is
// computed eagerly so values are freely shareable.

#include "linalg.hpp"

namespace ainfty {

template <ring R>
class Presentation {
public:
    Presentation(R ring, int gens)
        : ring_(ring), gens_(gens), rels_(ring, gens, 0), form_{Matrix<R>(ring, gens, 0), {}, {}} {}
    Presentation(R ring, int gens, const Matrix<R>& rels)
        : ring_(ring), gens_(gens), rels_(ring, gens, 0), form_{Matrix<R>(ring, gens, 0), {}, {}} {
        if (rels.rows() != gens) throw DimensionError("relations row count != generator count");
        auto f = column_form(rels);
        rels_ = f.H;
        form_ = std::move(f);
    }

    const R& ring() const { return ring_; }
    int gens() const { return gens_; }
    const Matrix<R>& rels() const { return rels_; }
    bool is_free() const { return rels_.cols() == 0; }
    bool is_zero_module() const {
        // every generator reduces to zero
        for (int i = 0; i < gens_; ++i) {
            Vec<R> e = zero_vec(ring_, gens_);
            e[i] = ring_.one();
            if (!vec_is_zero(ring_, reduce(e))) return false;
        }
        return true;
    }

    Vec<R> reduce(const Vec<R>& v) const {
        if ((int)v.size() != gens_) throw DimensionError("fp_reduce length mismatch");
        Vec<R> w = v;
        if constexpr (R::kind == RingKind::IntegersMod || R::kind == RingKind::PrimeField)
            for (auto& x : w) x = ring_.reduce(x);
        return reduce_by_form(form_, std::move(w));
    }
    bool is_zero_elem(const Vec<R>& v) const { return vec_is_zero(ring_, reduce(v)); }
    bool elems_equal(const Vec<R>& a, const Vec<R>& b) const {
        return vec_is_zero(ring_, reduce(vec_sub(ring_, a, b)));
    }

    bool operator==(const Presentation& o) const {
        return gens_ == o.gens_ && rels_ == o.rels_;
    }

private:
    R ring_;
    int gens_;
    Matrix<R> rels_;
    ColForm<R> form_;
};

template <ring R>
Vec<R> fp_reduce(const Presentation<R>& p, const Vec<R>& v) { return p.reduce(v); }

// Solve M x = b in the f.p. module coker(rels), i.e. modulo the relation span.
template <ring R>
std::optional<Vec<R>> solve_mod(const Matrix<R>& M, const Matrix<R>& rels, const Vec<R>& b) {
    auto sol = solve_linear(M.hcat(rels), b);
    if (!sol) return std::nullopt;
    return Vec<R>(sol->begin(), sol->begin() + M.cols());
}

// Generators of { x : M x = 0 in coker(rels) }.
template <ring R>
Matrix<R> kernel_mod(const Matrix<R>& M, const Matrix<R>& rels) {
    auto K = kernel_basis(M.hcat(rels));
    return K.rows_slice(0, M.cols()).without_zero_cols();
}

// Present (span(num) + span(den)) / span(den) inside the free module k^g:
// generators are the columns of num, relations are the coordinates of
// span-den elements and syzygies. Ambient relations go into den.
template <ring R>
Presentation<R> present_subquotient(const Matrix<R>& num, const Matrix<R>& den) {
    if (num.rows() != den.rows()) throw DimensionError("subquotient ambient mismatch");
    auto rels = kernel_mod(num, den);
    return Presentation<R>(num.ring(), num.cols(), rels);
}

// Coordinates of ambient vector v with respect to the subquotient generators
// (v must lie in span(num) + span(den)).
template <ring R>
std::optional<Vec<R>> subquotient_coords(const Matrix<R>& num, const Matrix<R>& den, const Vec<R>& v) {
    return solve_mod(num, den, v);
}

template <ring R>
Presentation<R> direct_sum(const std::vector<Presentation<R>>& parts, R ring) {
    int gens = 0, rels = 0;
    for (const auto& p : parts) { gens += p.gens(); rels += p.rels().cols(); }
    Matrix<R> big(ring, gens, rels);
    int goff = 0, roff = 0;
    for (const auto& p : parts) {
        for (const auto& [ij, v] : p.rels().entries())
            big.set(goff + ij.first, roff + ij.second, v);
        goff += p.gens();
        roff += p.rels().cols();
    }
    return Presentation<R>(ring, gens, big);
}

} // namespace ainfty
