#pragma once
// Elements of hhc^{l}(A,B) = Hom((Pi A)^{(x)l}, Pi B): towers of multilinear
// maps stored per (tensor degree, source multidegree). Source and target are
// the *suspended* complexes; all degrees appearing here are suspended
// degrees, and every Koszul sign is computed at evaluation time from those
// degrees. The l = 0 slot (an element of the target) is allowed, for module
// towers.

#include "graded.hpp"

namespace ainfty {

template <ring R>
class MultiMap {
public:
    MultiMap(CxPtr<R> source, CxPtr<R> target, int degree, int lmin, int lmax)
        : source_(std::move(source)), target_(std::move(target)), degree_(degree), lmin_(lmin), lmax_(lmax) {
        if (lmin < 0 || lmax < lmin) throw DimensionError("bad tensor range");
    }

    const CxPtr<R>& source() const { return source_; }
    const CxPtr<R>& target() const { return target_; }
    const R& ring() const { return source_->ring(); }
    int degree() const { return degree_; }
    int lmin() const { return lmin_; }
    int lmax() const { return lmax_; }

    int target_degree_of(const std::vector<int>& md) const {
        int s = degree_;
        for (int d : md) s += d;
        return s;
    }

    bool md_in_window(const std::vector<int>& md) const {
        for (int d : md)
            if (!source_->window().contains(d)) return false;
        return target_->window().contains(target_degree_of(md));
    }
    void check_md(int l, const std::vector<int>& md) const {
        if (l < lmin_ || l > lmax_)
            throw DimensionError("tensor degree " + std::to_string(l) + " outside range [" +
                                 std::to_string(lmin_) + ", " + std::to_string(lmax_) + "]");
        if ((int)md.size() != l) throw DimensionError("multidegree length != tensor degree");
        for (int d : md) source_->module().check_window(d);
        target_->module().check_window(target_degree_of(md));
    }

    int source_dim(const std::vector<int>& md) const {
        int n = 1;
        for (int d : md) n *= source_->dim(d);
        return n;
    }

    // component matrix: rows = target generators at the forced degree,
    // columns = basis tuples of the multidegree in mixed-radix order
    Matrix<R> component(int l, const std::vector<int>& md) const {
        check_md(l, md);
        auto lit = comps_.find(l);
        if (lit != comps_.end()) {
            auto it = lit->second.find(md);
            if (it != lit->second.end()) return it->second;
        }
        return Matrix<R>(ring(), target_->dim(target_degree_of(md)), source_dim(md));
    }

    void set_component(int l, const std::vector<int>& md, const Matrix<R>& m) {
        check_md(l, md);
        int td = target_degree_of(md);
        if (m.rows() != target_->dim(td) || m.cols() != source_dim(md))
            throw DimensionError("component shape mismatch");
        auto pres = target_->pres(td);
        Matrix<R> red(ring(), m.rows(), m.cols());
        for (int j = 0; j < m.cols(); ++j) red.set_col(j, pres.reduce(m.col(j)));
        if (red.is_zero()) {
            auto lit = comps_.find(l);
            if (lit != comps_.end()) lit->second.erase(md);
        } else {
            comps_[l].insert_or_assign(md, std::move(red));
        }
    }

    static int tuple_rank(const CxPtr<R>& src, const std::vector<int>& md, const std::vector<int>& tuple) {
        int r = 0;
        for (size_t i = 0; i < md.size(); ++i) r = r * src->dim(md[i]) + tuple[i];
        return r;
    }

    Vec<R> eval(int l, const std::vector<int>& md, const std::vector<int>& tuple) const {
        auto m = component(l, md);
        return m.col(tuple_rank(source_, md, tuple));
    }
    // l = 0 slot: the element of the target in degree `degree()`
    Vec<R> eval_slot0() const {
        auto m = component(0, {});
        return m.col(0);
    }
    void set_slot0(const Vec<R>& v) {
        Matrix<R> m(ring(), (int)v.size(), 1);
        m.set_col(0, v);
        set_component(0, {}, m);
    }

    const std::map<int, std::map<std::vector<int>, Matrix<R>>>& components() const { return comps_; }

    bool is_zero() const {
        for (const auto& [l, per] : comps_)
            for (const auto& [md, m] : per)
                if (!m.is_zero()) return false;
        return true;
    }

    bool compatible(const MultiMap& o) const {
        return source_ == o.source_ && target_ == o.target_ && degree_ == o.degree_;
    }

    MultiMap operator+(const MultiMap& o) const {
        if (!compatible(o) ) throw DimensionError("multimap sum shape mismatch");
        MultiMap out(source_, target_, degree_, std::min(lmin_, o.lmin_), std::max(lmax_, o.lmax_));
        for (const auto& [l, per] : comps_)
            for (const auto& [md, m] : per) out.set_component(l, md, m);
        for (const auto& [l, per] : o.comps_)
            for (const auto& [md, m] : per) out.set_component(l, md, out.component(l, md) + m);
        return out;
    }
    MultiMap operator-(const MultiMap& o) const { return *this + (-o); }
    MultiMap operator-() const {
        MultiMap out(source_, target_, degree_, lmin_, lmax_);
        for (const auto& [l, per] : comps_)
            for (const auto& [md, m] : per) out.set_component(l, md, -m);
        return out;
    }
    MultiMap scaled(const typename R::Elem& c) const {
        MultiMap out(source_, target_, degree_, lmin_, lmax_);
        for (const auto& [l, per] : comps_)
            for (const auto& [md, m] : per) out.set_component(l, md, m.scaled(c));
        return out;
    }

    bool operator==(const MultiMap& o) const {
        if (!compatible(o)) return false;
        return (*this - o).is_zero();
    }

    // truncation pi^{[lmin, lmax]}
    MultiMap pi_range(int lo, int hi) const {
        MultiMap out(source_, target_, degree_, lo, hi);
        for (const auto& [l, per] : comps_) {
            if (l < lo || l > hi) continue;
            for (const auto& [md, m] : per) out.set_component(l, md, m);
        }
        return out;
    }
    MultiMap pi_leq(int n) const { return pi_range(std::min(lmin_, n), n); }
    MultiMap pi_at(int n) const { return pi_range(n, n); }

    // first nonzero component, for witnesses
    std::string first_nonzero_description() const {
        for (const auto& [l, per] : comps_)
            for (const auto& [md, m] : per)
                if (!m.is_zero()) {
                    std::string s = "l=" + std::to_string(l) + " md=(";
                    for (size_t i = 0; i < md.size(); ++i)
                        s += (i ? "," : "") + std::to_string(md[i]);
                    s += ")";
                    for (const auto& [ij, v] : m.entries()) {
                        s += " entry(" + std::to_string(ij.first) + "," + std::to_string(ij.second) +
                             ")=" + m.ring().to_string(v);
                        break;
                    }
                    return s;
                }
        return "zero";
    }

private:
    CxPtr<R> source_, target_;
    int degree_;
    int lmin_, lmax_;
    std::map<int, std::map<std::vector<int>, Matrix<R>>> comps_;
};

// all multidegrees of length l over the support of the suspended complex,
// restricted to its window, in lexicographic order
template <ring R>
std::vector<std::vector<int>> enumerate_multidegrees(const CxPtr<R>& src, int l) {
    std::vector<int> supp;
    for (int d : src->support())
        if (src->window().contains(d)) supp.push_back(d);
    std::vector<std::vector<int>> out;
    std::vector<int> md(l);
    std::function<void(int)> rec = [&](int i) {
        if (i == l) { out.push_back(md); return; }
        for (int d : supp) {
            md[i] = d;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

namespace detail {

// A block row for composite products: `arity` source slots fed to map `f`
// (or kept as identity when f == nullptr).
template <ring R>
struct Block {
    const MultiMap<R>* f = nullptr; // identity slot when null
    int arity = 1;
};

// Apply outer o (f_1 (x) ... (x) f_j) to the basis tensor (md, tuple), where
// the f_k are given by blocks partitioning the slots. Returns the value in
// outer's target. Koszul rule: parity += deg(f_k) * (source degrees left of
// block k).
template <ring R>
Vec<R> block_apply(const MultiMap<R>& outer, const std::vector<Block<R>>& blocks,
                   const std::vector<int>& md, const std::vector<int>& tuple) {
    const R& ring = outer.ring();
    long long parity = 0;
    {
        int pos = 0;
        long long left = 0;
        for (const auto& b : blocks) {
            int fdeg = b.f ? b.f->degree() : 0;
            parity += (long long)fdeg * left;
            for (int i = 0; i < b.arity; ++i) left += md[pos + i];
            pos += b.arity;
        }
    }

    // evaluate blocks; identity blocks stay as (degree, index) singletons
    struct Val {
        int deg;
        bool basis;            // identity block: single basis element
        int index;             // when basis
        Vec<R> vec;            // when evaluated
    };
    std::vector<Val> vals;
    {
        int pos = 0;
        for (const auto& b : blocks) {
            if (!b.f) {
                for (int i = 0; i < b.arity; ++i)
                    vals.push_back({md[pos + i], true, tuple[pos + i], {}});
            } else {
                std::vector<int> bmd(md.begin() + pos, md.begin() + pos + b.arity);
                std::vector<int> btuple(tuple.begin() + pos, tuple.begin() + pos + b.arity);
                int e = b.f->target_degree_of(bmd);
                Val v{e, false, 0, b.f->eval(b.arity, bmd, btuple)};
                vals.push_back(std::move(v));
            }
            pos += b.arity;
        }
    }

    // expand evaluated slots linearly and feed tuples to the outer map
    int outl = (int)vals.size();
    std::vector<int> omd(outl);
    for (int i = 0; i < outl; ++i) omd[i] = vals[i].deg;
    int out_deg = outer.degree();
    for (int d : omd) out_deg += d;
    Vec<R> result = zero_vec(ring, outer.target()->dim(out_deg));

    std::vector<int> idx(outl, 0);
    std::function<void(int, typename R::Elem)> rec = [&](int i, typename R::Elem c) {
        if (ring.is_zero(c)) return;
        if (i == outl) {
            auto v = outer.eval(outl, omd, idx);
            for (size_t k = 0; k < v.size(); ++k)
                if (!ring.is_zero(v[k])) result[k] = ring.add(result[k], ring.mul(c, v[k]));
            return;
        }
        if (vals[i].basis) {
            idx[i] = vals[i].index;
            rec(i + 1, c);
        } else {
            for (size_t k = 0; k < vals[i].vec.size(); ++k) {
                if (ring.is_zero(vals[i].vec[k])) continue;
                idx[i] = (int)k;
                rec(i + 1, ring.mul(c, vals[i].vec[k]));
            }
        }
    };
    rec(0, ring.from_int(sign_of(parity)));
    return result;
}

// compositions of l into j parts, each within [amin, amax]
inline void compositions(int l, int j, int amin, int amax,
                         const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> parts(j);
    std::function<void(int, int)> rec = [&](int k, int rest) {
        if (k == j) {
            if (rest == 0) emit(parts);
            return;
        }
        int lo = std::max(amin, rest - amax * (j - k - 1));
        int hi = std::min(amax, rest - amin * (j - k - 1));
        for (int a = lo; a <= hi; ++a) {
            parts[k] = a;
            rec(k + 1, rest - a);
        }
    };
    if (j >= 1) rec(0, l);
}

} // namespace detail

// enumerate storable components of a product result; the callback returns
// the column for each basis tensor
template <ring R>
MultiMap<R> build_componentwise(
    CxPtr<R> source, CxPtr<R> target, int degree, int lmin, int lmax,
    const std::function<Vec<R>(int, const std::vector<int>&, const std::vector<int>&)>& col) {
    MultiMap<R> out(source, target, degree, lmin, lmax);
    const R& ring = source->ring();
    for (int l = std::max(lmin, 0); l <= lmax; ++l) {
        if (l == 0) continue; // slot-0 results are set by callers directly
        for (const auto& md : enumerate_multidegrees(source, l)) {
            int td = degree;
            for (int d : md) td += d;
            if (!target->window().contains(td)) continue; // unknown: left unstored
            int rows = target->dim(td);
            if (rows == 0) continue;
            int cols = out.source_dim(md);
            Matrix<R> m(ring, rows, cols);
            std::vector<int> tuple(l, 0);
            for (int c = 0; c < cols; ++c) {
                int r = c;
                for (int i = l - 1; i >= 0; --i) {
                    tuple[i] = r % source->dim(md[i]);
                    r /= source->dim(md[i]);
                }
                m.set_col(c, col(l, md, tuple));
            }
            out.set_component(l, md, m);
        }
    }
    return out;
}

// Gerstenhaber product (mu o nu)^l = sum mu^i (1^j (x) nu^{l-i+1} (x) 1^{i-j-1}),
// for mu in hhc(A,B), nu in hhc(A,A).
template <ring R>
MultiMap<R> gerstenhaber(const MultiMap<R>& mu, const MultiMap<R>& nu, int lcap = -1) {
    if (nu.source() != mu.source() || nu.target() != mu.source())
        throw SpecViolation("gerstenhaber: nu must be an endomorphism tower of mu's source");
    const R& ring = mu.ring();
    int lmin = std::max(1, std::max(1, mu.lmin()) + std::max(1, nu.lmin()) - 1);
    int lmax = mu.lmax() + nu.lmax() - 1;
    if (lcap >= 0) lmax = std::min(lmax, lcap);
    int rdeg = mu.degree() + nu.degree();
    auto col = [&](int l, const std::vector<int>& md, const std::vector<int>& tuple) {
        int total = rdeg;
        for (int d : md) total += d;
        Vec<R> acc = zero_vec(ring, mu.target()->dim(total));
        for (int i = std::max(1, mu.lmin()); i <= std::min(l, mu.lmax()); ++i) {
            int li = l - i + 1;
            if (li < std::max(1, nu.lmin()) || li > nu.lmax()) continue;
            for (int j = 0; j + 1 <= i; ++j) {
                std::vector<detail::Block<R>> blocks;
                if (j > 0) blocks.push_back({nullptr, j});
                blocks.push_back({&nu, li});
                if (i - j - 1 > 0) blocks.push_back({nullptr, i - j - 1});
                acc = vec_add(ring, acc, detail::block_apply(mu, blocks, md, tuple));
            }
        }
        return acc;
    };
    return build_componentwise(mu.source(), mu.target(), rdeg, lmin, lmax, col);
}

// wrap the differential of a suspended complex as the tensor-degree-1 tower
template <ring R>
MultiMap<R> diff_tower(const CxPtr<R>& C) {
    MultiMap<R> out(C, C, -1, 1, 1);
    for (int d : C->support()) {
        if (!C->window().contains(d) || !C->window().contains(d - 1)) continue;
        auto m = C->diff(d);
        if (!m.is_zero()) out.set_component(1, {d}, m);
    }
    return out;
}

// block composition (outer . inner)^l = sum_j outer^j (inner^{i_1} (x) ... (x) inner^{i_j}).
// inner must have degree 0 so the result is homogeneous. With outer = nu in
// hhc(B,B)_{-1} this is the *-product; with outer of degree 0 it is
// composition of morphisms.
template <ring R>
MultiMap<R> block_compose(const MultiMap<R>& outer, const MultiMap<R>& inner, int lcap = -1) {
    if (inner.target() != outer.source())
        throw SpecViolation("block_compose: inner target must be outer source");
    if (inner.degree() != 0) throw SpecViolation("block_compose: inner tower must have degree 0");
    const R& ring = outer.ring();
    int imin = std::max(1, inner.lmin());
    int lmin = std::max(1, outer.lmin()) * imin;
    int lmax = inner.lmax() * outer.lmax();
    if (lcap >= 0) lmax = std::min(lmax, lcap);
    auto col = [&](int l, const std::vector<int>& md, const std::vector<int>& tuple) {
        int total = outer.degree();
        for (int d : md) total += d;
        Vec<R> acc = zero_vec(ring, outer.target()->dim(total));
        for (int j = std::max(1, outer.lmin()); j <= std::min(outer.lmax(), l / imin); ++j) {
            detail::compositions(l, j, imin, inner.lmax(), [&](const std::vector<int>& parts) {
                std::vector<detail::Block<R>> blocks;
                for (int p : parts) blocks.push_back({&inner, p});
                acc = vec_add(ring, acc, detail::block_apply(outer, blocks, md, tuple));
            });
        }
        return acc;
    };
    return build_componentwise(inner.source(), outer.target(), outer.degree(), lmin, lmax, col);
}

// the *-product of nu in hhc(B,B)_{-1} and alpha in hhc(A,B)_0
template <ring R>
MultiMap<R> star(const MultiMap<R>& nu, const MultiMap<R>& alpha, int lcap = -1) {
    if (nu.degree() != -1) throw SpecViolation("star: nu must have degree -1");
    return block_compose(nu, alpha, lcap);
}

// composition of morphism towers (degree 0)
template <ring R>
MultiMap<R> compose_morphisms(const MultiMap<R>& outer, const MultiMap<R>& inner, int lcap = -1) {
    return block_compose(outer, inner, lcap);
}

// homotopy *-product (nu (*) r)^l = sum nu^i (alpha^{j_1} (x) ... (x) r^{j_k} (x) ... (x) beta^{j_i})
// with respect to alpha, beta of degree 0.
template <ring R>
MultiMap<R> homotopy_star(const MultiMap<R>& nu, const MultiMap<R>& r, const MultiMap<R>& alpha,
                          const MultiMap<R>& beta, int lcap = -1) {
    if (alpha.degree() != 0 || beta.degree() != 0)
        throw SpecViolation("homotopy_star: flanking morphisms must have degree 0");
    if (r.target() != nu.source() || alpha.target() != nu.source() || beta.target() != nu.source())
        throw SpecViolation("homotopy_star: towers must land in nu's source");
    const R& ring = nu.ring();
    int rmin = std::max(1, r.lmin());
    int lmin = rmin;
    int lmax = std::max({alpha.lmax(), beta.lmax(), r.lmax()}) * nu.lmax();
    if (lcap >= 0) lmax = std::min(lmax, lcap);
    int rdeg = nu.degree() + r.degree();
    auto col = [&](int l, const std::vector<int>& md, const std::vector<int>& tuple) {
        int total = rdeg;
        for (int d : md) total += d;
        Vec<R> acc = zero_vec(ring, nu.target()->dim(total));
        int amin = std::max(1, alpha.lmin());
        int bmin = std::max(1, beta.lmin());
        for (int i = std::max(1, nu.lmin()); i <= nu.lmax(); ++i) {
            for (int k = 1; k <= i; ++k) {
                // parts: k-1 alpha blocks, the r block, i-k beta blocks
                int minlen = (k - 1) * amin + rmin + (i - k) * bmin;
                if (minlen > l) continue;
                detail::compositions(l, i, 1, l, [&](const std::vector<int>& parts) {
                    std::vector<detail::Block<R>> blocks;
                    for (int p = 0; p < i; ++p) {
                        const MultiMap<R>* f = (p < k - 1) ? &alpha : (p == k - 1 ? &r : &beta);
                        int plen = parts[p];
                        int flo = (p == k - 1) ? rmin : (p < k - 1 ? amin : bmin);
                        int fhi = (p == k - 1) ? r.lmax() : (p < k - 1 ? alpha.lmax() : beta.lmax());
                        if (plen < flo || plen > fhi) { blocks.clear(); return; }
                        blocks.push_back({f, plen});
                    }
                    if ((int)blocks.size() != i) return;
                    acc = vec_add(ring, acc, detail::block_apply(nu, blocks, md, tuple));
                });
            }
        }
        return acc;
    };
    return build_componentwise(r.source(), nu.target(), rdeg, lmin, lmax, col);
}

// post-composition with the target differential, componentwise
template <ring R>
MultiMap<R> post_compose_diff(const MultiMap<R>& x) {
    MultiMap<R> out(x.source(), x.target(), x.degree() - 1, x.lmin(), x.lmax());
    for (const auto& [l, per] : x.components()) {
        for (const auto& [md, m] : per) {
            int td = x.target_degree_of(md);
            if (!x.target()->window().contains(td - 1)) continue;
            auto dm = x.target()->diff(td) * m;
            if (!dm.is_zero()) out.set_component(l, md, dm);
        }
    }
    return out;
}

// the Hom-complex differential d(x) = nu^1_B x - (-1)^{|x|} x o nu^1_A on
// towers; restricts to the subcomplex differential when x is supported on a
// sub-source (the projected differential is built into that source complex)
template <ring R>
MultiMap<R> hhc_diff(const MultiMap<R>& x) {
    auto term1 = post_compose_diff(x);
    auto term2 = gerstenhaber(x, diff_tower(x.source()), x.lmax());
    int s = -sign_of(x.degree());
    return term1 + term2.scaled(x.ring().from_int(s));
}

} // namespace ainfty
