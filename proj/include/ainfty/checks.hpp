#pragma once
// A_n-structure, morphism and homotopy checkers, plus the module-side
// machinery: the endomorphism dg-algebra, the star product on module
// towers, and the module identity checkers. Everything is an exact
// evaluation of the defining identity on all basis tensors in window; the
// first counterexample is reported.

#include "hom.hpp"
#include "unital.hpp"

namespace ainfty {

// structure towers carry nu^1 explicitly; it must agree with the complex
template <ring R>
Verdict l1_matches_complex(const MultiMap<R>& nu) {
    if (nu.pi_at(1) == diff_tower(nu.source())) return {true, ""};
    return {false, "nu^1 differs from the differential of the suspended complex"};
}

// (nu o nu)^{<= n} = 0
template <ring R>
Verdict check_an_algebra(const MultiMap<R>& nu, int n) {
    auto t = nu.pi_leq(n);
    auto g = gerstenhaber(t, t, n);
    if (g.is_zero()) return {true, ""};
    return {false, "Stasheff identity fails at " + g.first_nonzero_description()};
}

// pi^{<= n}(nu_B * alpha - alpha o nu_A) = 0
template <ring R>
Verdict check_an_morphism(const MultiMap<R>& alpha, const MultiMap<R>& nuA, const MultiMap<R>& nuB,
                          int n) {
    auto a = alpha.pi_leq(n);
    auto lhs = star(nuB.pi_leq(n), a, n);
    auto rhs = gerstenhaber(a, nuA.pi_leq(n), n);
    auto d = lhs - rhs;
    if (d.is_zero()) return {true, ""};
    return {false, "morphism identity fails at " + d.first_nonzero_description()};
}

// alpha - beta = pi^{<= n}(nu_B (*) r + r o nu_A).
// The sign of the r o nu_A term is fixed by requiring that extending r by
// r^{n+1} is equivalent to d(r^{n+1}) = obs(r^{<= n}) in the Hom-complex
// differential; with |r| = 1 that forces the plus sign.
template <ring R>
Verdict check_an_homotopy(const MultiMap<R>& r, const MultiMap<R>& alpha, const MultiMap<R>& beta,
                          const MultiMap<R>& nuA, const MultiMap<R>& nuB, int n) {
    auto rr = r.pi_leq(n);
    auto hs = homotopy_star(nuB.pi_leq(n + 1), rr, alpha.pi_leq(n), beta.pi_leq(n), n);
    auto rg = gerstenhaber(rr, nuA.pi_leq(n + 1), n);
    auto d = (alpha.pi_leq(n) - beta.pi_leq(n)) - (hs + rg);
    if (d.is_zero()) return {true, ""};
    return {false, "homotopy identity fails at " + d.first_nonzero_description()};
}

// post-composition with a degree-0 chain map: q o x, i.e. hhc(A, q)
template <ring R>
MultiMap<R> postcompose_strict(const ChainMap<R>& q, const MultiMap<R>& x) {
    if (q.source != x.target()) throw SpecViolation("postcompose_strict: shape mismatch");
    MultiMap<R> out(x.source(), q.target, x.degree(), x.lmin(), x.lmax());
    for (const auto& [l, per] : x.components())
        for (const auto& [md, m] : per) {
            int td = x.target_degree_of(md);
            if (!q.target->window().contains(td)) continue;
            auto qm = q.at(td) * m;
            if (!qm.is_zero()) out.set_component(l, md, qm);
        }
    return out;
}

// pre-composition with the tensor powers of a degree-0 chain map:
// x o q^{(x) l}, i.e. hhc(q, B)
template <ring R>
MultiMap<R> precompose_strict(const MultiMap<R>& x, const ChainMap<R>& q, int lcap = -1) {
    if (q.degree != 0) throw SpecViolation("precompose_strict expects a degree-0 map");
    if (q.target != x.source()) throw SpecViolation("precompose_strict: shape mismatch");
    const R& ring = x.ring();
    int lmax = lcap >= 0 ? std::min(lcap, x.lmax()) : x.lmax();
    auto col = [&](int l, const std::vector<int>& md, const std::vector<int>& tuple) {
        int total = x.degree();
        for (int d : md) total += d;
        Vec<R> acc = zero_vec(ring, x.target()->dim(total));
        // expand q(tuple_i) linearly; q has degree 0, so no Koszul signs
        std::vector<Vec<R>> imgs;
        for (int i = 0; i < l; ++i) {
            Vec<R> e = zero_vec(ring, q.source->dim(md[i]));
            e[tuple[i]] = ring.one();
            imgs.push_back(q.apply(md[i], e));
        }
        std::vector<int> idx(l, 0);
        std::function<void(int, typename R::Elem)> rec = [&](int i, typename R::Elem c) {
            if (ring.is_zero(c)) return;
            if (i == l) {
                auto v = x.eval(l, md, idx);
                for (size_t k = 0; k < v.size(); ++k)
                    if (!ring.is_zero(v[k])) acc[k] = ring.add(acc[k], ring.mul(c, v[k]));
                return;
            }
            for (size_t k = 0; k < imgs[i].size(); ++k) {
                if (ring.is_zero(imgs[i][k])) continue;
                idx[i] = (int)k;
                rec(i + 1, ring.mul(c, imgs[i][k]));
            }
        };
        rec(0, ring.one());
        return acc;
    };
    return build_componentwise(q.source, x.target(), x.degree(), std::max(1, x.lmin()), lmax, col);
}

// q is a strict morphism iff q nu_A^i = nu_B^i q^{(x)i} for all i <= n
template <ring R>
Verdict strict_morphism_square(const ChainMap<R>& q, const MultiMap<R>& nuA, const MultiMap<R>& nuB,
                               int n) {
    auto lhs = postcompose_strict(q, nuA.pi_leq(n));
    auto rhs = precompose_strict(nuB.pi_leq(n), q, n);
    auto d = lhs - rhs;
    if (d.is_zero()) return {true, ""};
    return {false, "strict square fails at " + d.first_nonzero_description()};
}

// ---------------------------------------------------------------------------
// dg-algebras and endomorphism algebras as towers

// nu^2 from a bilinear multiplication on a complex concentrated anywhere:
// nu^2 [[a]|[b]] = -(-1)^{|[a]|} [a b], nu^1 the suspended differential.
// `mult` maps (unsuspended degrees i, j, basis a, b) to coordinates in
// degree i + j of the unsuspended module.
template <ring R>
MultiMap<R> dg_algebra_structure(
    const CxPtr<R>& B, const CxPtr<R>& SB,
    const std::function<Vec<R>(int, int, int, int)>& mult) {
    const R& ring = SB->ring();
    MultiMap<R> nu(SB, SB, -1, 1, 2);
    auto d1 = diff_tower(SB);
    for (const auto& [l, per] : d1.components())
        for (const auto& [md, m] : per) nu.set_component(l, md, m);
    for (int d1 : SB->support())
        for (int d2 : SB->support()) {
            std::vector<int> md{d1, d2};
            if (!nu.md_in_window(md)) continue;
            int td = d1 + d2 - 1;
            int rows = SB->dim(td);
            if (rows == 0) continue;
            Matrix<R> m(ring, rows, SB->dim(d1) * SB->dim(d2));
            int sgn = sign_of(d1 + 1);
            for (int a = 0; a < SB->dim(d1); ++a)
                for (int b = 0; b < SB->dim(d2); ++b) {
                    auto v = mult(d1 - 1, d2 - 1, a, b);
                    v = B->reduce(td - 1, v);
                    for (int i = 0; i < rows; ++i)
                        if (!ring.is_zero(v[i]))
                            m.set(i, a * SB->dim(d2) + b, ring.mul(ring.from_int(sgn), v[i]));
                }
            if (!m.is_zero()) nu.set_component(2, md, m);
        }
    return nu;
}

// bundle for a Hom complex and its suspension
template <ring R>
struct HomCtx {
    HomPtr<R> hom;
    CxPtr<R> Pi;
};

template <ring R>
HomCtx<R> hom_ctx(const CxPtr<R>& M, const CxPtr<R>& N) {
    auto h = hom_complex(M, N);
    return {h, suspend(h->complex())};
}

// (End M, nu_End): nu^1 = -s delta_Hom s^{-1} (the suspended differential),
// nu^2 [[f]|[g]] = -(-1)^{|[f]|} [f o g]
template <ring R>
MultiMap<R> nu_end(const HomCtx<R>& endM) {
    const R& ring = endM.Pi->ring();
    MultiMap<R> nu(endM.Pi, endM.Pi, -1, 1, 2);
    auto d1 = diff_tower(endM.Pi);
    for (const auto& [l, per] : d1.components())
        for (const auto& [md, m] : per) nu.set_component(l, md, m);
    for (int d1 : endM.Pi->support())
        for (int d2 : endM.Pi->support()) {
            std::vector<int> md{d1, d2};
            if (!nu.md_in_window(md)) continue;
            int td = d1 + d2 - 1;
            int rows = endM.Pi->dim(td);
            if (rows == 0) continue;
            Matrix<R> m(ring, rows, endM.Pi->dim(d1) * endM.Pi->dim(d2));
            int sgn = sign_of(d1 + 1);
            for (int a = 0; a < endM.Pi->dim(d1); ++a) {
                Vec<R> ea = zero_vec(ring, endM.Pi->dim(d1));
                ea[a] = ring.one();
                for (int b = 0; b < endM.Pi->dim(d2); ++b) {
                    Vec<R> eb = zero_vec(ring, endM.Pi->dim(d2));
                    eb[b] = ring.one();
                    auto comp = hom_compose(*endM.hom, d1 - 1, ea, *endM.hom, d2 - 1, eb, *endM.hom);
                    for (int i = 0; i < rows; ++i)
                        if (!ring.is_zero(comp[i]))
                            m.set(i, a * endM.Pi->dim(d2) + b, ring.mul(ring.from_int(sgn), comp[i]));
                }
            }
            if (!m.is_zero()) nu.set_component(2, md, m);
        }
    return nu;
}

// ---------------------------------------------------------------------------
// the star product on module towers:
// (a (*) b)^n = s gamma (s^{-1} (x) s^{-1}) sum_j a^j (x) b^{n-j}

template <ring R>
MultiMap<R> module_star(const MultiMap<R>& a, const HomCtx<R>& NP, const MultiMap<R>& b,
                        const HomCtx<R>& MN, const HomCtx<R>& MP, int lcap = -1) {
    if (a.target() != NP.Pi || b.target() != MN.Pi) throw SpecViolation("module_star: target mismatch");
    if (a.source() != b.source()) throw SpecViolation("module_star: shared source required");
    const R& ring = a.ring();
    int rdeg = a.degree() + b.degree() - 1;
    int lmin = a.lmin() + b.lmin();
    int lmax = lcap >= 0 ? lcap : a.lmax() + b.lmax();

    auto term = [&](int j, const std::vector<int>& md, const std::vector<int>& tuple,
                    Vec<R>& acc) {
        int n = (int)md.size();
        if (j < a.lmin() || j > a.lmax()) return;
        if (n - j < b.lmin() || n - j > b.lmax()) return;
        std::vector<int> lmd(md.begin(), md.begin() + j), rmd(md.begin() + j, md.end());
        std::vector<int> ltup(tuple.begin(), tuple.begin() + j), rtup(tuple.begin() + j, tuple.end());
        long long leftsum = 0;
        for (int d : lmd) leftsum += d;
        Vec<R> u = (j == 0) ? a.eval_slot0() : a.eval(j, lmd, ltup);
        Vec<R> v = (n - j == 0) ? b.eval_slot0() : b.eval(n - j, rmd, rtup);
        int du = (int)leftsum + a.degree();
        int dv = b.degree();
        for (int d : rmd) dv += d;
        // Koszul: |b| past the left inputs, then |s^{-1}| past u
        long long parity = (long long)b.degree() * leftsum + du;
        auto comp = hom_compose(*NP.hom, du - 1, u, *MN.hom, dv - 1, v, *MP.hom);
        if (vec_is_zero(ring, comp)) return;
        auto c = ring.from_int(sign_of(parity));
        for (size_t i = 0; i < comp.size(); ++i)
            if (!ring.is_zero(comp[i])) acc[i] = ring.add(acc[i], ring.mul(c, comp[i]));
    };

    MultiMap<R> out(a.source(), MP.Pi, rdeg, std::max(0, lmin), lmax);
    // slot 0
    if (lmin <= 0 && a.lmin() == 0 && b.lmin() == 0) {
        auto u = a.eval_slot0();
        auto v = b.eval_slot0();
        int du = a.degree(), dv = b.degree();
        long long parity = du;
        auto comp = hom_compose(*NP.hom, du - 1, u, *MN.hom, dv - 1, v, *MP.hom);
        if (!vec_is_zero(ring, comp)) {
            auto c = ring.from_int(sign_of(parity));
            Vec<R> w(comp.size(), ring.zero());
            for (size_t i = 0; i < comp.size(); ++i) w[i] = ring.mul(c, comp[i]);
            out.set_slot0(w);
        }
    }
    auto built = build_componentwise<R>(
        a.source(), MP.Pi, rdeg, std::max(1, lmin), lmax,
        [&](int n, const std::vector<int>& md, const std::vector<int>& tuple) {
            int total = rdeg;
            for (int d : md) total += d;
            Vec<R> acc = zero_vec(ring, MP.Pi->dim(total));
            for (int j = 0; j <= n; ++j) term(j, md, tuple, acc);
            return acc;
        });
    for (const auto& [l, per] : built.components())
        for (const auto& [md, m] : per) out.set_component(l, md, m);
    return out;
}

// strictly unital module tower over (A, 1): p^1[1] = [id_M], higher unit
// slots killed; p^0 is the suspended differential of M
template <ring R>
struct ModuleTower {
    MultiMap<R> p;   // hhcu^{<= n-1}(A, End M)_0, slot 0 = [delta_M]
    HomCtx<R> endM;
    int level; // n: verified as an A_n-module
};

// p^0 must be the class of the differential of M in Pi End M
template <ring R>
Vec<R> suspended_differential_coords(const HomCtx<R>& endM, const CxPtr<R>& M) {
    MapFamily<R> fam;
    fam.degree = -1;
    for (int i : M->support()) {
        if (!M->window().contains(i) || !M->window().contains(i - 1)) continue;
        auto d = M->diff(i);
        if (!d.is_zero()) fam.mats.insert_or_assign(i, d);
    }
    return endM.hom->coordinatize(-1, fam);
}

template <ring R>
Verdict check_module_structure(const MultiMap<R>& p, const HomCtx<R>& endM, const CxPtr<R>& M,
                               const MultiMap<R>& nu, int n) {
    const R& ring = p.ring();
    // p^0 is the differential of M, suspended
    auto want = suspended_differential_coords(endM, M);
    auto p0 = p.eval_slot0();
    if (!endM.Pi->pres(0).elems_equal(p0, want))
        return {false, "p^0 is not the suspended differential of M"};
    if (n <= 1) return {true, ""};
    auto nuEnd = nu_end(endM);
    return check_an_morphism(p.pi_range(1, std::max(1, n - 1)), nu.pi_leq(n - 1), nuEnd, n - 1);
}

// p_N (*) f + (f^{>=1}) o nu + f (*) p_M = 0, in tensor degrees <= n-1
template <ring R>
MultiMap<R> module_morphism_defect(const MultiMap<R>& f, const MultiMap<R>& pM, const MultiMap<R>& pN,
                                   const HomCtx<R>& endM, const HomCtx<R>& endN, const HomCtx<R>& homMN,
                                   const MultiMap<R>& nu, int cap) {
    auto t1 = module_star(pN.pi_leq(cap), endN, f.pi_leq(cap), homMN, homMN, cap);
    auto t3 = module_star(f.pi_leq(cap), homMN, pM.pi_leq(cap), endM, homMN, cap);
    auto t2 = gerstenhaber(f.pi_range(1, std::max(1, cap)), nu.pi_leq(cap + 1), cap);
    return (t1 + t3 + t2).pi_range(0, cap);
}

template <ring R>
Verdict check_module_morphism(const MultiMap<R>& f, const MultiMap<R>& pM, const MultiMap<R>& pN,
                              const HomCtx<R>& endM, const HomCtx<R>& endN, const HomCtx<R>& homMN,
                              const MultiMap<R>& nu, int n) {
    auto d = module_morphism_defect(f, pM, pN, endM, endN, homMN, nu, n - 1);
    if (d.is_zero()) return {true, ""};
    return {false, "module morphism identity fails at " + d.first_nonzero_description()};
}

// f - g = r o nu^{<= n-1} + p_N (*) r + r (*) p_M
template <ring R>
Verdict check_module_homotopy(const MultiMap<R>& r, const MultiMap<R>& f, const MultiMap<R>& g,
                              const MultiMap<R>& pM, const MultiMap<R>& pN, const HomCtx<R>& endM,
                              const HomCtx<R>& endN, const HomCtx<R>& homMN, const MultiMap<R>& nu,
                              int n) {
    int cap = n - 1;
    auto t1 = module_star(pN.pi_leq(cap), endN, r.pi_leq(cap), homMN, homMN, cap);
    auto t2 = module_star(r.pi_leq(cap), homMN, pM.pi_leq(cap), endM, homMN, cap);
    auto t3 = gerstenhaber(r.pi_range(1, std::max(1, cap)), nu.pi_leq(cap + 1), cap);
    auto d = (f.pi_leq(cap) - g.pi_leq(cap)) - (t1 + t2 + t3).pi_range(0, cap);
    if (d.is_zero()) return {true, ""};
    return {false, "module homotopy identity fails at " + d.first_nonzero_description()};
}

// composition of module morphisms is the star product
template <ring R>
MultiMap<R> compose_module_morphisms(const MultiMap<R>& f2, const HomCtx<R>& NP, const MultiMap<R>& f1,
                                     const HomCtx<R>& MN, const HomCtx<R>& MP, int lcap = -1) {
    return module_star(f2, NP, f1, MN, MP, lcap);
}

// the identity morphism of a module: slot 0 only, the class of id_M
template <ring R>
MultiMap<R> identity_module_morphism(const CxPtr<R>& SA, const HomCtx<R>& endM) {
    MultiMap<R> f(SA, endM.Pi, 1, 0, 0);
    f.set_slot0(endM.hom->identity_coords());
    return f;
}

// restriction of a module tower along a strict algebra morphism q : A -> B
// (components pre-composed with q^{(x) l}; slot 0 is unchanged)
template <ring R>
MultiMap<R> pullback_module_tower(const MultiMap<R>& p, const ChainMap<R>& q) {
    auto hi = precompose_strict(p.pi_range(1, p.lmax()), q);
    MultiMap<R> out(q.source, p.target(), p.degree(), std::min(p.lmin(), hi.lmin()), hi.lmax());
    if (p.lmin() == 0) out.set_slot0(p.eval_slot0());
    for (const auto& [l, per] : hi.components())
        for (const auto& [md, m] : per) out.set_component(l, md, m);
    return out;
}

} // namespace ainfty
