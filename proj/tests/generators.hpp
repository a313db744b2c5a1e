#pragma once
// Shared deterministic random generators for the test suites.

#include <ainfty/checks.hpp>
#include <ainfty/coalgebra.hpp>
#include <ainfty/graded.hpp>
#include <ainfty/matrix.hpp>

#include <random>
#include <set>

namespace ainfty::testgen {

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    // uniform in [lo, hi], portable (no distribution objects)
    long long range(long long lo, long long hi) {
        return lo + (long long)(eng_() % (uint64_t)(hi - lo + 1));
    }
    uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

template <ring R>
Matrix<R> random_matrix(R ring, Rng& rng, int rows, int cols, int max_abs = 4, int fill_pct = 70) {
    Matrix<R> m(ring, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (rng.range(0, 99) < fill_pct)
                m.set(i, j, ring.from_int(rng.range(-max_abs, max_abs)));
    return m;
}

template <ring R>
Vec<R> random_vec(R ring, Rng& rng, int n, int max_abs = 4) {
    Vec<R> v(n, ring.zero());
    for (int i = 0; i < n; ++i) v[i] = ring.from_int(rng.range(-max_abs, max_abs));
    return v;
}

// Random free complex: disks and spheres (d*d = 0 by construction), then a
// change of basis by elementary shears per degree.
template <ring R>
CxPtr<R> random_complex(R ring, Rng& rng, int lo, int hi, int max_rank = 2) {
    std::map<int, int> dims;
    for (int d = lo; d <= hi; ++d) dims[d] = (int)rng.range(0, max_rank);
    std::map<int, Matrix<R>> diff;
    std::map<int, std::set<int>> forced_zero; // disk bottoms
    for (int d = hi; d > lo; --d) {
        if (dims[d] == 0 || dims[d - 1] == 0) continue;
        Matrix<R> m(ring, dims[d - 1], dims[d]);
        std::set<int> used;
        for (int j = 0; j < dims[d]; ++j) {
            if (forced_zero[d].count(j)) continue;
            if (rng.range(0, 2) == 0) continue; // sphere
            int y = -1;
            for (int i = 0; i < dims[d - 1]; ++i)
                if (!used.count(i)) { y = i; break; }
            if (y < 0) break;
            used.insert(y);
            forced_zero[d - 1].insert(y);
            long long c = rng.range(1, 3);
            m.set(y, j, ring.from_int(c));
        }
        if (!m.is_zero()) diff[d] = std::move(m);
    }
    // conjugate by shears: diff[d] <- Pinv_{d-1} diff[d] P_d done pairwise
    for (int t = 0; t < 2 * (hi - lo); ++t) {
        int d = (int)rng.range(lo, hi);
        int n = dims[d];
        if (n < 2) continue;
        int i = (int)rng.range(0, n - 1), j = (int)rng.range(0, n - 1);
        if (i == j) continue;
        auto P = Matrix<R>::identity(ring, n);
        auto Pinv = Matrix<R>::identity(ring, n);
        auto c = ring.from_int(rng.range(-2, 2));
        P.set(i, j, c);
        Pinv.set(i, j, ring.neg(c));
        if (diff.count(d)) diff[d] = diff[d] * P;
        if (diff.count(d + 1)) diff[d + 1] = Pinv * diff[d + 1];
    }
    GradedModule<R> mod(ring);
    for (int d = lo; d <= hi; ++d)
        if (dims[d] > 0) mod.set_free_component(d, dims[d]);
    return make_complex(std::move(mod), std::move(diff), "Rnd");
}

template <ring R>
MultiMap<R> random_tower(R ring, Rng& rng, const CxPtr<R>& SA, const CxPtr<R>& SB, int degree,
                         int lmin, int lmax, int max_abs = 2, int fill = 50) {
    MultiMap<R> x(SA, SB, degree, lmin, lmax);
    for (int l = std::max(1, lmin); l <= lmax; ++l) {
        for (const auto& md : enumerate_multidegrees(SA, l)) {
            if (!x.md_in_window(md)) continue;
            int rows = SB->dim(x.target_degree_of(md));
            if (rows == 0) continue;
            x.set_component(l, md, random_matrix(ring, rng, rows, x.source_dim(md), max_abs, fill));
        }
    }
    return x;
}

// invert a morphism tower with phi^1 = identity: psi with phi . psi = id
template <ring R>
MultiMap<R> invert_tower(const MultiMap<R>& phi, int n) {
    auto psi = identity_tower(phi.source());
    psi = psi.pi_range(1, 1);
    for (int k = 2; k <= n; ++k) {
        MultiMap<R> ext(phi.source(), phi.source(), 0, 1, k);
        for (const auto& [l, per] : psi.components())
            for (const auto& [md, m] : per) ext.set_component(l, md, m);
        auto comp = -compose_morphisms(phi.pi_leq(k), ext, k).pi_at(k);
        MultiMap<R> next(phi.source(), phi.source(), 0, 1, k);
        for (const auto& [l, per] : psi.components())
            for (const auto& [md, m] : per) next.set_component(l, md, m);
        for (const auto& [l, per] : comp.components())
            for (const auto& [md, m] : per) next.set_component(l, md, m);
        psi = next;
    }
    return psi;
}

// gauge transform: given a structure nu on V and an invertible tower phi
// (phi^1 = id), produce the transported structure nu' with
// Phi^{-1}(nu') = Psi^{-1}(phi)^{-1} Phi^{-1}(nu) Psi^{-1}(phi), so that phi
// is a morphism (V, nu') -> (V, nu). Outputs are re-validated by callers.
template <ring R>
MultiMap<R> gauge_transform(const MultiMap<R>& nu, const MultiMap<R>& phi, int n) {
    auto L = power_layouts(nu.source(), n);
    auto idt = identity_tower(nu.source());
    auto F = psi_inverse(phi.pi_leq(n), L, L);
    auto Finv = psi_inverse(invert_tower(phi, n), L, L);
    auto D = phi_inverse(nu.pi_leq(n), idt, idt, L, L);
    auto Dp = blockmap_compose(blockmap_compose(Finv, D, L, L, L), F, L, L, L);
    return pi1_tower(Dp, L, L);
}

// a random valid A_n-structure with nonzero higher products: the
// endomorphism dg-algebra of a random complex, gauge-transformed
template <ring R>
struct GaugedAlgebra {
    HomCtx<R> endC;
    MultiMap<R> nu;      // dg structure on Pi End C
    MultiMap<R> nu_tw;   // transported structure
    MultiMap<R> phi;     // morphism (End C, nu_tw) -> (End C, nu)
};

template <ring R>
GaugedAlgebra<R> random_gauged_algebra(R ring, Rng& rng, int n, int lo = 0, int hi = 1,
                                       int max_rank = 1) {
    for (;;) {
        auto C = random_complex(ring, rng, lo, hi, max_rank);
        if (C->support().empty()) continue;
        auto endC = hom_ctx(C, C);
        if (endC.Pi->support().size() < 2) continue;
        auto nu = nu_end(endC);
        auto phi = identity_tower(endC.Pi);
        {
            auto hi_part = random_tower(ring, rng, endC.Pi, endC.Pi, 0, 2, n, 1, 35);
            MultiMap<R> full(endC.Pi, endC.Pi, 0, 1, n);
            for (const auto& [l, per] : phi.components())
                for (const auto& [md, m] : per) full.set_component(l, md, m);
            for (const auto& [l, per] : hi_part.components())
                for (const auto& [md, m] : per) full.set_component(l, md, m);
            phi = full;
        }
        auto nu_tw = gauge_transform(nu, phi, n + 2);
        return {endC, nu, nu_tw, phi};
    }
}

} // namespace ainfty::testgen
