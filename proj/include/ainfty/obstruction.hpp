#pragma once
// Obstruction classes for extending A_n-objects one level, with the cycle
// property asserted eagerly at construction: d(obs) = 0 is the system's
// only global sign oracle, so a failure aborts with a diagnostic dump of
// the offending basis tensor.
//
// Sign conventions: the homotopy identity is alpha - beta =
// pi^{<= n}(nu_B (*) r + r o nu_A). The plus sign on the Gerstenhaber term
// (the paper displays a minus) is forced by the extension criterion
// d(r^{n+1}) = obs(r^{<= n}) with |r| = 1 in the Hom-complex differential,
// and the cycle assertions below confirm it.

#include "checks.hpp"

namespace ainfty {

enum class ObsKind {
    AlgebraStructure, // degree -2, tensor degree n+1
    AlgebraMorphism,  // degree -1, tensor degree n+1
    AlgebraHomotopy,  // degree  0, tensor degree n+1
    ModuleStructure,  // degree -1, tensor degree n
    ModuleMorphism,   // degree  0, tensor degree n
    ModuleHomotopy    // degree  1, tensor degree n
};

struct ObstructionDiagnostic : SpecViolation {
    using SpecViolation::SpecViolation;
};

template <ring R>
struct Obstruction {
    MultiMap<R> value; // concentrated in a single tensor degree
    ObsKind kind;
    int tensor_degree;
};

template <ring R>
Obstruction<R> make_obstruction(MultiMap<R> value, ObsKind kind, int tensor_degree,
                                const char* what) {
    auto dv = hhc_diff(value);
    if (!dv.is_zero())
        throw ObstructionDiagnostic(std::string("obstruction of ") + what +
                                    " is not a cycle; sign fault at " +
                                    dv.first_nonzero_description());
    return {std::move(value), kind, tensor_degree};
}

// obs(nu^{<= n}) = -(nu^{<= n} o nu^{<= n})^{= n+1}
template <ring R>
Obstruction<R> obs_algebra(const MultiMap<R>& nu, int n) {
    auto pre = check_an_algebra(nu, n);
    if (!pre.ok) throw SpecViolation("obs_algebra: input is not an A_n-structure: " + pre.detail);
    auto t = nu.pi_leq(n);
    auto value = (-gerstenhaber(t, t, n + 1)).pi_at(n + 1);
    return make_obstruction(std::move(value), ObsKind::AlgebraStructure, n + 1, "A_n-structure");
}

// obs(alpha^{<= n}) = -pi^{n+1}(nu_B^{<= n+1} * alpha^{<= n} - alpha^{<= n} o nu_A^{<= n+1})
template <ring R>
Obstruction<R> obs_morphism(const MultiMap<R>& alpha, const MultiMap<R>& nuA, const MultiMap<R>& nuB,
                            int n) {
    auto preA = check_an_algebra(nuA, n + 1);
    if (!preA.ok) throw SpecViolation("obs_morphism: nu_A is not an A_{n+1}-structure: " + preA.detail);
    auto preB = check_an_algebra(nuB, n + 1);
    if (!preB.ok) throw SpecViolation("obs_morphism: nu_B is not an A_{n+1}-structure: " + preB.detail);
    auto pre = check_an_morphism(alpha, nuA, nuB, n);
    if (!pre.ok) throw SpecViolation("obs_morphism: input is not an A_n-morphism: " + pre.detail);
    auto a = alpha.pi_leq(n);
    auto value =
        (-(star(nuB.pi_leq(n + 1), a, n + 1) - gerstenhaber(a, nuA.pi_leq(n + 1), n + 1))).pi_at(n + 1);
    return make_obstruction(std::move(value), ObsKind::AlgebraMorphism, n + 1, "A_n-morphism");
}

// obs(r^{<= n}) = alpha^{n+1} - beta^{n+1}
//                 - pi^{n+1}(nu_B^{<= n+1} (*) r^{<= n} + r^{<= n} o nu_A^{<= n+1})
template <ring R>
Obstruction<R> obs_homotopy(const MultiMap<R>& r, const MultiMap<R>& alpha, const MultiMap<R>& beta,
                            const MultiMap<R>& nuA, const MultiMap<R>& nuB, int n) {
    auto preA = check_an_morphism(alpha, nuA, nuB, n + 1);
    if (!preA.ok) throw SpecViolation("obs_homotopy: alpha is not an A_{n+1}-morphism: " + preA.detail);
    auto preB = check_an_morphism(beta, nuA, nuB, n + 1);
    if (!preB.ok) throw SpecViolation("obs_homotopy: beta is not an A_{n+1}-morphism: " + preB.detail);
    if (n >= 1) {
        auto pre = check_an_homotopy(r, alpha, beta, nuA, nuB, n);
        if (!pre.ok) throw SpecViolation("obs_homotopy: r is not an A_n-homotopy: " + pre.detail);
    }
    auto rr = r.pi_leq(std::max(1, n));
    auto hs = homotopy_star(nuB.pi_leq(n + 1), rr, alpha.pi_leq(n), beta.pi_leq(n), n + 1);
    auto rg = gerstenhaber(rr, nuA.pi_leq(n + 1), n + 1);
    auto value = ((alpha.pi_leq(n + 1) - beta.pi_leq(n + 1)) - (hs + rg)).pi_at(n + 1);
    return make_obstruction(std::move(value), ObsKind::AlgebraHomotopy, n + 1, "A_n-homotopy");
}

// obs(p^{<= n-1}) = -pi^n(nu_End^{<= n} * p^{<= n-1} - p^{<= n-1} o nu^{<= n}):
// the morphism obstruction of p^{>= 1} : A -> End M at level n-1
template <ring R>
Obstruction<R> obs_module(const MultiMap<R>& p, const HomCtx<R>& endM, const CxPtr<R>& M,
                          const MultiMap<R>& nu, int n) {
    auto pre = check_module_structure(p, endM, M, nu, n);
    if (!pre.ok) throw SpecViolation("obs_module: input is not an A_n-module: " + pre.detail);
    auto nuEnd = nu_end(endM);
    auto hi = p.pi_range(1, std::max(1, n - 1));
    auto value =
        (-(star(nuEnd.pi_leq(n), hi, n) - gerstenhaber(hi, nu.pi_leq(n), n))).pi_at(n);
    auto obs = make_obstruction(std::move(value), ObsKind::ModuleStructure, n, "A_n-module structure");
    return obs;
}

// obs(f^{<= n-1}) = -pi^n(p_N^{<= n} (*) f^{<= n-1} + f^{1 <= i <= n-1} o nu^{<= n}
//                         + f^{<= n-1} (*) p_M^{<= n})
template <ring R>
Obstruction<R> obs_module_morphism(const MultiMap<R>& f, const MultiMap<R>& pM, const MultiMap<R>& pN,
                                   const HomCtx<R>& endM, const HomCtx<R>& endN, const HomCtx<R>& homMN,
                                   const MultiMap<R>& nu, int n) {
    auto pre = check_module_morphism(f, pM, pN, endM, endN, homMN, nu, n);
    if (!pre.ok)
        throw SpecViolation("obs_module_morphism: input is not an A_n-module morphism: " + pre.detail);
    auto value = (-module_morphism_defect(f, pM, pN, endM, endN, homMN, nu, n)).pi_at(n);
    return make_obstruction(std::move(value), ObsKind::ModuleMorphism, n, "A_n-module morphism");
}

// obs(r^{<= n-1}) = f^n - g^n - pi^n(p_N^{<= n} (*) r + r o nu^{<= n} + r (*) p_M^{<= n})
template <ring R>
Obstruction<R> obs_module_homotopy(const MultiMap<R>& r, const MultiMap<R>& f, const MultiMap<R>& g,
                                   const MultiMap<R>& pM, const MultiMap<R>& pN, const HomCtx<R>& endM,
                                   const HomCtx<R>& endN, const HomCtx<R>& homMN, const MultiMap<R>& nu,
                                   int n) {
    if (n >= 2) {
        auto pre = check_module_homotopy(r, f, g, pM, pN, endM, endN, homMN, nu, n);
        if (!pre.ok)
            throw SpecViolation("obs_module_homotopy: input is not an A_n-module homotopy: " + pre.detail);
    }
    auto t1 = module_star(pN.pi_leq(n), endN, r.pi_leq(n - 1), homMN, homMN, n);
    auto t2 = module_star(r.pi_leq(n - 1), homMN, pM.pi_leq(n), endM, homMN, n);
    auto t3 = gerstenhaber(r.pi_range(1, std::max(1, n - 1)), nu.pi_leq(n + 1), n);
    auto value = ((f.pi_leq(n) - g.pi_leq(n)) - (t1 + t2 + t3)).pi_at(n);
    return make_obstruction(std::move(value), ObsKind::ModuleHomotopy, n, "A_n-module homotopy");
}

// Strictly unital variant: the full obstruction must vanish on every unit
// slot; the restriction to Abar-tensors is returned for the subcomplex
// solves. A nonvanishing unit slot signals a sign fault upstream.
template <ring R>
Obstruction<R> strictly_unital_restrict(Obstruction<R> obs, const BarComplex<R>& bc) {
    auto v = unit_slots_vanish(obs.value, bc.unit);
    if (!v.ok)
        throw ObstructionDiagnostic("strictly unital obstruction has a nonvanishing unit slot: " +
                                    v.detail);
    Obstruction<R> out{restrict_tower(obs.value, bc), obs.kind, obs.tensor_degree};
    // the restricted class is still a cycle for the projected differential
    auto dv = hhc_diff(out.value);
    if (!dv.is_zero())
        throw ObstructionDiagnostic("restricted obstruction is not a cycle in the Abar subcomplex");
    return out;
}

} // namespace ainfty
