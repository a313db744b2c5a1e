#include <catch2/catch_amalgamated.hpp>

#include <ainfty/presentation.hpp>

#include <functional>

#include "generators.hpp"

using namespace ainfty;
using testgen::Rng;

namespace {

// Independent oracle for Smith invariant factors over Z: determinantal
// divisors, d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors.
std::vector<Int> invariant_factors_oracle(const Matrix<IntegerRing>& M) {
    int n = std::min(M.rows(), M.cols());
    std::vector<Int> D(n + 1, 0);
    D[0] = 1;
    // enumerate k-subsets of rows/cols
    auto subsets = [](int total, int k) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur(k);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == k) { out.push_back(cur); return; }
            for (int i = start; i <= total - (k - depth); ++i) {
                cur[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        return out;
    };
    auto minor_det = [&](const std::vector<int>& rs, const std::vector<int>& cs) {
        int k = (int)rs.size();
        Matrix<IntegerRing> sub(M.ring(), k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub.set(i, j, M.get(rs[i], cs[j]));
        return determinant(sub);
    };
    for (int k = 1; k <= n; ++k) {
        Int g = 0;
        for (const auto& rs : subsets(M.rows(), k))
            for (const auto& cs : subsets(M.cols(), k))
                g = boost::multiprecision::gcd(g, minor_det(rs, cs));
        D[k] = g;
        if (g == 0) break;
    }
    std::vector<Int> inv;
    for (int k = 1; k <= n; ++k) {
        if (D[k] == 0) break;
        inv.push_back(D[k] / D[k - 1]);
    }
    return inv;
}

template <ring R>
void check_smith_reconstruction(R ring, Rng& rng, int trials) {
    for (int t = 0; t < trials; ++t) {
        int rows = (int)rng.range(1, 5), cols = (int)rng.range(1, 5);
        auto M = testgen::random_matrix(ring, rng, rows, cols);
        auto [U, S, V] = smith_normal_form(M);
        REQUIRE(U * M * V == S);
        if constexpr (R::kind == RingKind::Integers) {
            auto du = determinant(U), dv = determinant(V);
            REQUIRE((du == 1 || du == -1));
            REQUIRE((dv == 1 || dv == -1));
        } else {
            REQUIRE(!ring.is_zero(determinant(U)));
            REQUIRE(!ring.is_zero(determinant(V)));
        }
        // S diagonal with divisibility chain
        for (const auto& [ij, v] : S.entries()) REQUIRE(ij.first == ij.second);
        for (int i = 0; i + 1 < std::min(S.rows(), S.cols()); ++i) {
            auto a = S.get(i, i), b = S.get(i + 1, i + 1);
            if (!ring.is_zero(b)) {
                REQUIRE(!ring.is_zero(a));
                REQUIRE(ring.try_div(b, a).has_value());
            }
        }
    }
}

} // namespace

TEST_CASE("smith normal form: pinned examples over Z") {
    IntegerRing Z;
    SECTION("diag(2,3) has invariants (1,6)") {
        auto M = from_dense(Z, {{2, 0}, {0, 3}});
        auto [U, S, V] = smith_normal_form(M);
        REQUIRE(U * M * V == S);
        REQUIRE(S.get(0, 0) == 1);
        REQUIRE(S.get(1, 1) == 6);
    }
    SECTION("zero matrix") {
        Matrix<IntegerRing> M(Z, 2, 3);
        auto [U, S, V] = smith_normal_form(M);
        REQUIRE(S.is_zero());
        REQUIRE(U == Matrix<IntegerRing>::identity(Z, 2));
        REQUIRE(V == Matrix<IntegerRing>::identity(Z, 3));
    }
    SECTION("[[4,2],[2,2]] -> diag(2,2), cross-checked by determinantal divisors") {
        auto M = from_dense(Z, {{4, 2}, {2, 2}});
        auto inv = invariant_factors_oracle(M);
        REQUIRE(inv == std::vector<Int>{2, 2});
        auto [U, S, V] = smith_normal_form(M);
        REQUIRE(U * M * V == S);
        REQUIRE(S.get(0, 0) == 2);
        REQUIRE(S.get(1, 1) == 2);
    }
}

TEST_CASE("smith normal form: random reconstruction per ring") {
    Rng rng(20240811);
    check_smith_reconstruction(IntegerRing{}, rng, 40);
    check_smith_reconstruction(RationalField{}, rng, 25);
    check_smith_reconstruction(PrimeField{5}, rng, 25);
}

TEST_CASE("smith invariants match determinantal divisor oracle on random Z matrices") {
    IntegerRing Z;
    Rng rng(7);
    for (int t = 0; t < 25; ++t) {
        auto M = testgen::random_matrix(Z, rng, (int)rng.range(1, 4), (int)rng.range(1, 4), 5);
        auto [U, S, V] = smith_normal_form(M);
        auto inv = invariant_factors_oracle(M);
        std::vector<Int> diag;
        for (int i = 0; i < std::min(S.rows(), S.cols()); ++i)
            if (S.get(i, i) != 0) diag.push_back(S.get(i, i));
        REQUIRE(diag == inv);
    }
}

TEST_CASE("solve_linear: pinned examples") {
    IntegerRing Z;
    SECTION("diag(2) x = (2)") {
        auto M = from_dense(Z, {{2}});
        auto x = solve_linear(M, vec_from(Z, {2}));
        REQUIRE(x.has_value());
        REQUIRE((*x)[0] == 1);
    }
    SECTION("diag(2) x = (1) has no solution over Z") {
        auto M = from_dense(Z, {{2}});
        REQUIRE(!solve_linear(M, vec_from(Z, {1})).has_value());
    }
    SECTION("[[2,4]] x = (6), verified by substitution") {
        auto M = from_dense(Z, {{2, 4}});
        auto x = solve_linear(M, vec_from(Z, {6}));
        REQUIRE(x.has_value());
        REQUIRE(M.apply(*x) == vec_from(Z, {6}));
    }
}

namespace {

// brute-force solvability oracle over Z with bounded coefficients
bool brute_solvable(const Matrix<IntegerRing>& M, const Vec<IntegerRing>& b, int bound) {
    int n = M.cols();
    std::vector<Int> x(n, -bound);
    while (true) {
        Vec<IntegerRing> xv(x.begin(), x.end());
        if (M.apply(xv) == b) return true;
        int i = 0;
        while (i < n && x[i] == bound) { x[i] = -bound; ++i; }
        if (i == n) return false;
        ++x[i];
    }
}

template <ring R>
bool brute_solvable_mod(const Matrix<R>& M, const Vec<R>& b) {
    // exhaustive over the finite ring; only for tiny matrices
    const R& ring = M.ring();
    long long m = (long long)ring.modulus();
    int n = M.cols();
    std::vector<long long> x(n, 0);
    while (true) {
        Vec<R> xv(n, ring.zero());
        for (int i = 0; i < n; ++i) xv[i] = ring.from_int(x[i]);
        auto got = M.apply(xv);
        bool ok = true;
        for (size_t i = 0; i < got.size(); ++i)
            if (!ring.eq(got[i], b[i])) { ok = false; break; }
        if (ok) return true;
        int i = 0;
        while (i < n && x[i] == m - 1) { x[i] = 0; ++i; }
        if (i == n) return false;
        ++x[i];
    }
}

} // namespace

TEST_CASE("solve_linear: random soundness and completeness") {
    Rng rng(99);
    IntegerRing Z;
    for (int t = 0; t < 60; ++t) {
        int rows = (int)rng.range(1, 3), cols = (int)rng.range(1, 3);
        auto M = testgen::random_matrix(Z, rng, rows, cols, 3);
        auto b = testgen::random_vec(Z, rng, rows, 4);
        auto x = solve_linear(M, b);
        if (x) {
            REQUIRE(M.apply(*x) == b);
        } else {
            REQUIRE(!brute_solvable(M, b, 12));
        }
    }
    ModularRing Z8(8);
    for (int t = 0; t < 60; ++t) {
        int rows = (int)rng.range(1, 3), cols = (int)rng.range(1, 3);
        auto M = testgen::random_matrix(Z8, rng, rows, cols, 7);
        auto b = testgen::random_vec(Z8, rng, rows, 7);
        for (auto& v : b) v = Z8.reduce(v);
        auto x = solve_linear(M, b);
        if (x) {
            auto got = M.apply(*x);
            for (size_t i = 0; i < got.size(); ++i) REQUIRE(Z8.eq(got[i], b[i]));
        } else {
            REQUIRE(!brute_solvable_mod(M, b));
        }
    }
}

TEST_CASE("solve_linear is deterministic") {
    IntegerRing Z;
    auto M = from_dense(Z, {{2, 4, 6}, {0, 2, 2}});
    auto b = vec_from(Z, {6, 2});
    auto x1 = solve_linear(M, b);
    auto x2 = solve_linear(M, b);
    REQUIRE(x1.has_value());
    REQUIRE(*x1 == *x2);
}

TEST_CASE("kernel_basis: pinned examples") {
    IntegerRing Z;
    SECTION("identity has empty kernel") {
        auto K = kernel_basis(Matrix<IntegerRing>::identity(Z, 3));
        REQUIRE(K.cols() == 0);
    }
    SECTION("zero 1x2 matrix has 2 basis columns") {
        Matrix<IntegerRing> M(Z, 1, 2);
        auto K = kernel_basis(M);
        REQUIRE(K.cols() == 2);
        REQUIRE((M * K).is_zero());
    }
    SECTION("[[2,-2]] has kernel spanned by (1,1)") {
        auto M = from_dense(Z, {{2, -2}});
        auto K = kernel_basis(M);
        REQUIRE((M * K).is_zero());
        // oracle: enumerate small integer kernel vectors, check each in span(K)
        for (long long a = -4; a <= 4; ++a)
            for (long long b = -4; b <= 4; ++b) {
                if (2 * a - 2 * b != 0) continue;
                auto v = vec_from(Z, {a, b});
                REQUIRE(solve_linear(K, v).has_value());
            }
        REQUIRE(K.cols() == 1);
    }
}

TEST_CASE("kernel_basis: soundness and completeness on random instances") {
    Rng rng(1234);
    IntegerRing Z;
    ModularRing Z8(8);
    ModularRing Z12(12);
    for (int t = 0; t < 40; ++t) {
        auto M = testgen::random_matrix(Z, rng, (int)rng.range(1, 3), (int)rng.range(1, 3), 3);
        auto K = kernel_basis(M);
        REQUIRE((M * K).is_zero());
        // completeness for bounded vectors
        int n = M.cols();
        std::vector<Int> x(n, -3);
        while (true) {
            Vec<IntegerRing> xv(x.begin(), x.end());
            if (vec_is_zero(Z, M.apply(xv))) REQUIRE(solve_linear(K, xv).has_value());
            int i = 0;
            while (i < n && x[i] == 3) { x[i] = -3; ++i; }
            if (i == n) break;
            ++x[i];
        }
    }
    auto mod_kernel_complete = [&](auto ring) {
        for (int t = 0; t < 25; ++t) {
            auto M = testgen::random_matrix(ring, rng, (int)rng.range(1, 2), (int)rng.range(1, 2), 7);
            auto K = kernel_basis(M);
            auto MK = M * K;
            for (const auto& [ij, v] : MK.entries()) REQUIRE(ring.is_zero(v));
            long long m = (long long)ring.modulus();
            int n = M.cols();
            std::vector<long long> x(n, 0);
            while (true) {
                Vec<decltype(ring)> xv(n, ring.zero());
                for (int i = 0; i < n; ++i) xv[i] = ring.from_int(x[i]);
                if (vec_is_zero(ring, M.apply(xv))) REQUIRE(solve_linear(K, xv).has_value());
                int i = 0;
                while (i < n && x[i] == m - 1) { x[i] = 0; ++i; }
                if (i == n) break;
                ++x[i];
            }
        }
    };
    mod_kernel_complete(Z8);
    mod_kernel_complete(Z12);
}

TEST_CASE("howell form is canonical and idempotent") {
    Rng rng(555);
    ModularRing Z8(8);
    for (int t = 0; t < 40; ++t) {
        auto M = testgen::random_matrix(Z8, rng, (int)rng.range(1, 3), (int)rng.range(1, 4), 7);
        auto H = howell_form(M);
        REQUIRE(howell_form(H) == H);
        // span preserved: every original column reduces to zero by H
        auto form = column_form(H);
        for (int j = 0; j < M.cols(); ++j) {
            auto r = reduce_by_form(form, M.col(j));
            for (auto& v : r) v = Z8.reduce(v);
            REQUIRE(vec_is_zero(Z8, r));
        }
        // and vice versa: every H column is in the span of M (Z-lift solve)
        for (int j = 0; j < H.cols(); ++j)
            REQUIRE(solve_linear(M, H.col(j)).has_value());
    }
}

TEST_CASE("fp_reduce: pinned examples") {
    IntegerRing Z;
    SECTION("Z/4 presented on one generator") {
        Presentation<IntegerRing> P(Z, 1, from_dense(Z, {{4}}));
        REQUIRE(P.reduce(vec_from(Z, {5})) == vec_from(Z, {1}));
    }
    SECTION("free presentation leaves vectors unchanged") {
        Presentation<IntegerRing> P(Z, 3);
        auto v = vec_from(Z, {7, -2, 0});
        REQUIRE(P.reduce(v) == v);
    }
    SECTION("two generators with relation (2,2)") {
        Presentation<IntegerRing> P(Z, 2, from_dense(Z, {{2}, {2}}));
        // (3,1) - (1,-1) = (2,2) lies in the relation span, so canonical
        // representatives agree; membership is itself certified by solve.
        REQUIRE(solve_linear(P.rels(), vec_from(Z, {2, 2})).has_value());
        REQUIRE(P.reduce(vec_from(Z, {3, 1})) == P.reduce(vec_from(Z, {1, -1})));
    }
}

TEST_CASE("fp_reduce is idempotent and constant on cosets") {
    Rng rng(31337);
    auto coset_check = [&](auto ring) {
        for (int t = 0; t < 30; ++t) {
            int gens = (int)rng.range(1, 3);
            auto rels = testgen::random_matrix(ring, rng, gens, (int)rng.range(0, 3), 4);
            Presentation<decltype(ring)> P(ring, gens, rels);
            auto v = testgen::random_vec(ring, rng, gens, 6);
            auto r = P.reduce(v);
            REQUIRE(P.reduce(r) == r);
            // shifting by a random relation combination does not change the rep
            auto w = v;
            for (int j = 0; j < P.rels().cols(); ++j) {
                auto c = ring.from_int(rng.range(-2, 2));
                for (int i = 0; i < gens; ++i)
                    w[i] = ring.add(w[i], ring.mul(c, P.rels().get(i, j)));
            }
            REQUIRE(P.reduce(w) == r);
        }
    };
    coset_check(IntegerRing{});
    coset_check(ModularRing{8});
    coset_check(ModularRing{12});
    coset_check(PrimeField{5});
    coset_check(RationalField{});
}

TEST_CASE("presentation normalization is idempotent") {
    Rng rng(11);
    auto check = [&](auto ring) {
        for (int t = 0; t < 20; ++t) {
            int gens = (int)rng.range(1, 3);
            auto rels = testgen::random_matrix(ring, rng, gens, (int)rng.range(1, 3), 5);
            Presentation<decltype(ring)> P(ring, gens, rels);
            Presentation<decltype(ring)> Q(ring, gens, P.rels());
            REQUIRE(P == Q);
        }
    };
    check(IntegerRing{});
    check(ModularRing{8});
    check(PrimeField{7});
}

TEST_CASE("subquotient presentation") {
    IntegerRing Z;
    // span{(2,0),(0,2)} / span{(4,0),(0,2)}  ~=  Z/2 + 0
    auto num = from_dense(Z, {{2, 0}, {0, 2}});
    auto den = from_dense(Z, {{4, 0}, {0, 2}});
    auto P = present_subquotient(num, den);
    REQUIRE(P.gens() == 2);
    REQUIRE(P.is_zero_elem(subquotient_coords(num, den, vec_from(Z, {4, 0})).value()));
    REQUIRE(!P.is_zero_elem(subquotient_coords(num, den, vec_from(Z, {2, 0})).value()));
    // the class of (2,0) has order exactly 2
    auto c = subquotient_coords(num, den, vec_from(Z, {2, 0})).value();
    REQUIRE(P.is_zero_elem(vec_scale(Z, Z.from_int(2), c)));
}
