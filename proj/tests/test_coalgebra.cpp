#include <catch2/catch_amalgamated.hpp>

#include <ainfty/coalgebra.hpp>

#include "generators.hpp"

using namespace ainfty;
using testgen::Rng;

namespace {

template <ring R>
MultiMap<R> random_tower(R ring, Rng& rng, const CxPtr<R>& SA, const CxPtr<R>& SB, int degree,
                         int lmin, int lmax, int max_abs = 2) {
    MultiMap<R> x(SA, SB, degree, lmin, lmax);
    for (int l = std::max(1, lmin); l <= lmax; ++l) {
        for (const auto& md : enumerate_multidegrees(SA, l)) {
            if (!x.md_in_window(md)) continue;
            int rows = SB->dim(x.target_degree_of(md));
            if (rows == 0) continue;
            x.set_component(l, md, testgen::random_matrix(ring, rng, rows, x.source_dim(md), max_abs, 50));
        }
    }
    return x;
}

} // namespace

TEST_CASE("psi_inverse: pinned examples") {
    IntegerRing Z;
    Rng rng(3);
    auto A = testgen::random_complex(Z, rng, 0, 2, 2);
    auto SA = suspend(A);
    auto L = power_layouts(SA, 3);
    SECTION("strict identity gives the identity morphism") {
        auto idt = identity_tower(SA);
        auto F = psi_inverse(idt, L, L);
        for (int k = 1; k <= 3; ++k)
            for (const auto& [s, dim] : L.at(k).total_dim) {
                for (int j = 1; j <= 3; ++j) {
                    auto m = F.block(L, L, k, j, s);
                    if (j == k) REQUIRE(m == Matrix<IntegerRing>::identity(Z, dim));
                    else REQUIRE(m.is_zero());
                }
            }
        REQUIRE(is_coalgebra_morphism(F, L, L).ok);
    }
    SECTION("alpha concentrated in tensor degree 1 gives diagonal blocks") {
        auto alpha = random_tower(Z, rng, SA, SA, 0, 1, 1);
        auto F = psi_inverse(alpha, L, L);
        for (int k = 1; k <= 3; ++k)
            for (int j = 1; j <= 3; ++j)
                if (j != k)
                    for (const auto& [s, dim] : L.at(k).total_dim)
                        REQUIRE(F.block(L, L, k, j, s).is_zero());
        REQUIRE(is_coalgebra_morphism(F, L, L).ok);
    }
    SECTION("random alpha produces a coalgebra morphism, exactly") {
        for (int t = 0; t < 5; ++t) {
            auto B = testgen::random_complex(Z, rng, 0, 2, 2);
            auto SB = suspend(B);
            auto LB = power_layouts(SB, 3);
            auto alpha = random_tower(Z, rng, SA, SB, 0, 1, 3);
            auto F = psi_inverse(alpha, L, LB);
            REQUIRE(is_coalgebra_morphism(F, L, LB).ok);
        }
    }
}

TEST_CASE("phi_inverse: pinned examples") {
    IntegerRing Z;
    Rng rng(17);
    auto A = testgen::random_complex(Z, rng, 0, 2, 2);
    auto SA = suspend(A);
    auto L = power_layouts(SA, 3);
    auto idt = identity_tower(SA);
    SECTION("alpha = beta = identity, r in tensor degree 1: sum of insertions") {
        auto r = random_tower(Z, rng, SA, SA, -1, 1, 1);
        auto D = phi_inverse(r, idt, idt, L, L);
        // block (k -> k): sum_j 1^{(x)a} (x) r^1 (x) 1^{(x)b}; against koszul_apply
        for (int k = 1; k <= 3; ++k) {
            for (const auto& [s, dim] : L.at(k).total_dim) {
                auto got = D.block(L, L, k, k, s);
                Matrix<IntegerRing> want(Z, L.at(k).dim(s - 1), dim);
                for (const auto& blk : L.at(k).blocks_at(s)) {
                    for (int t = 0; t < blk.size; ++t) {
                        auto tuple = TensorLayout<IntegerRing>::tuple_unrank(blk, t);
                        Vec<IntegerRing> acc = zero_vec(Z, L.at(k).dim(s - 1));
                        for (int pos = 0; pos < k; ++pos) {
                            std::vector<GradedMapSlot<IntegerRing>> slots;
                            for (int q = 0; q < k; ++q) {
                                GradedMapSlot<IntegerRing> sl;
                                if (q == pos) {
                                    sl.degree = -1;
                                    sl.at = [&r, &SA](int sd) {
                                        Matrix<IntegerRing> m(IntegerRing{}, SA->dim(sd - 1), SA->dim(sd));
                                        auto c = r.component(1, {sd});
                                        return c;
                                    };
                                } else {
                                    sl.is_identity = true;
                                }
                                slots.push_back(std::move(sl));
                            }
                            acc = vec_add(Z, acc,
                                          koszul_apply(L.at(k), L.at(k), slots, blk.multidegree, tuple));
                        }
                        for (int i = 0; i < (int)acc.size(); ++i)
                            if (acc[i] != 0) REQUIRE(got.get(i, blk.offset + t) == acc[i]);
                        for (int i = 0; i < (int)acc.size(); ++i)
                            REQUIRE(got.get(i, blk.offset + t) == acc[i]);
                    }
                }
            }
        }
        REQUIRE(is_coderivation(D, psi_inverse(idt, L, L), psi_inverse(idt, L, L), L, L).ok);
    }
    SECTION("r = 0 gives 0") {
        MultiMap<IntegerRing> r(SA, SA, -1, 1, 3);
        auto D = phi_inverse(r, idt, idt, L, L);
        REQUIRE(D.blocks.empty());
    }
    SECTION("random instances satisfy the coderivation rule exactly") {
        for (int t = 0; t < 5; ++t) {
            auto B = testgen::random_complex(Z, rng, 0, 2, 2);
            auto SB = suspend(B);
            auto LB = power_layouts(SB, 3);
            auto alpha = random_tower(Z, rng, SA, SB, 0, 1, 3);
            auto beta = random_tower(Z, rng, SA, SB, 0, 1, 3);
            auto r = random_tower(Z, rng, SA, SB, 1, 1, 3);
            auto D = phi_inverse(r, alpha, beta, L, LB);
            auto Am = psi_inverse(alpha, L, LB);
            auto Bm = psi_inverse(beta, L, LB);
            REQUIRE(is_coderivation(D, Am, Bm, L, LB).ok);
        }
    }
}

TEST_CASE("round trip: pi_1 of the inverse recovers the tower") {
    IntegerRing Z;
    Rng rng(29);
    auto A = testgen::random_complex(Z, rng, 0, 2, 2);
    auto SA = suspend(A);
    auto L = power_layouts(SA, 4);
    auto alpha = random_tower(Z, rng, SA, SA, 0, 1, 4);
    auto F = psi_inverse(alpha, L, L);
    for (int k = 1; k <= 4; ++k)
        for (const auto& [s, dim] : L.at(k).total_dim) {
            auto blk1 = F.block(L, L, k, 1, s);
            // power-1 target layout coincides with SA
            for (const auto& blk : L.at(k).blocks_at(s))
                for (int t = 0; t < blk.size; ++t) {
                    auto tuple = TensorLayout<IntegerRing>::tuple_unrank(blk, t);
                    auto v = alpha.eval(k, blk.multidegree, tuple);
                    REQUIRE(blk1.col(blk.offset + t) == v);
                }
        }
}

TEST_CASE("oracle identities hold on random towers") {
    Rng rng(31);
    auto run = [&](auto ring, int trials) {
        for (int t = 0; t < trials; ++t) {
            auto A = testgen::random_complex(ring, rng, 0, 2, 2);
            auto B = testgen::random_complex(ring, rng, 0, 2, 2);
            auto SA = suspend(A), SB = suspend(B);
            auto mu = random_tower(ring, rng, SA, SB, (int)rng.range(-1, 1), 1, 3);
            auto nuA = random_tower(ring, rng, SA, SA, -1, 1, 3);
            auto nuB = random_tower(ring, rng, SB, SB, -1, 1, 3);
            auto alpha = random_tower(ring, rng, SA, SB, 0, 1, 3);
            auto beta = random_tower(ring, rng, SA, SB, 0, 1, 3);
            auto r = random_tower(ring, rng, SA, SB, 1, 1, 3);
            auto rep = oracle_identities(mu, nuA, nuB, alpha, beta, r, 3);
            REQUIRE(rep.gerstenhaber_ok);
            REQUIRE(rep.star_ok);
            REQUIRE(rep.homotopy_star_ok);
        }
    };
    run(IntegerRing{}, 4);
    run(ModularRing{8}, 4);
    run(PrimeField{5}, 3);
}

TEST_CASE("oracle identities: all-zero and tensor-degree-1 edge cases") {
    IntegerRing Z;
    Rng rng(37);
    auto A = testgen::random_complex(Z, rng, 0, 2, 2);
    auto SA = suspend(A);
    SECTION("all-zero towers") {
        MultiMap<IntegerRing> z(SA, SA, -1, 1, 3), z0(SA, SA, 0, 1, 3), z1(SA, SA, 1, 1, 3);
        MultiMap<IntegerRing> zm(SA, SA, 0, 1, 3);
        auto rep = oracle_identities(zm, z, z, z0, z0, z1, 3);
        REQUIRE(rep.all_ok());
    }
    SECTION("tensor-degree-1 towers reduce to plain composition") {
        auto mu = random_tower(Z, rng, SA, SA, 0, 1, 1);
        auto nu = random_tower(Z, rng, SA, SA, -1, 1, 1);
        auto alpha = random_tower(Z, rng, SA, SA, 0, 1, 1);
        auto r = random_tower(Z, rng, SA, SA, 1, 1, 1);
        auto rep = oracle_identities(mu, nu, nu, alpha, alpha, r, 3);
        REQUIRE(rep.all_ok());
    }
}
