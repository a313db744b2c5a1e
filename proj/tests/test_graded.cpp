#include <catch2/catch_amalgamated.hpp>

#include <ainfty/graded.hpp>

#include "generators.hpp"

using namespace ainfty;
using testgen::Rng;

namespace {

// 0 -> Z --4--> Z -> 0 in degrees 1, 0
CxPtr<IntegerRing> z4_resolution_complex() {
    IntegerRing Z;
    GradedModule<IntegerRing> mod(Z);
    mod.set_free_component(0, 1, {"1"});
    mod.set_free_component(1, 1, {"e"});
    std::map<int, Matrix<IntegerRing>> diff;
    diff[1] = from_dense(Z, {{4}});
    return make_complex(std::move(mod), std::move(diff), "A");
}

CxPtr<IntegerRing> zero_complex() {
    IntegerRing Z;
    return make_complex(GradedModule<IntegerRing>(Z), {}, "0");
}

} // namespace

TEST_CASE("suspension shifts degrees and negates the differential") {
    auto A = z4_resolution_complex();
    auto PA = suspend(A);
    REQUIRE(PA->dim(1) == 1);
    REQUIRE(PA->dim(2) == 1);
    REQUIRE(PA->diff(2).get(0, 0) == -4);
    REQUIRE(PA->label(1, 0) == "1");

    auto Z0 = suspend(zero_complex());
    REQUIRE(Z0->support().empty());

    auto PPA = suspend(suspend(A));
    REQUIRE(PPA->diff(3).get(0, 0) == 4);
}

TEST_CASE("tensor complex differential carries Koszul signs") {
    auto A = z4_resolution_complex();
    auto PA = suspend(A);
    auto [T, layout] = tensor_complex<IntegerRing>({PA, PA});
    // degree 4 basis: [e|e]; degree 3: [1|e], [e|1]
    REQUIRE(T->dim(4) == 1);
    REQUIRE(T->dim(3) == 2);
    auto d4 = T->diff(4);
    // d[e|e] = (d e)|e + (-1)^{|e|} e|(d e) = -4 [1|e] - 4 [e|1]
    const auto* b13 = layout.find_block(3, {1, 2});
    const auto* b31 = layout.find_block(3, {2, 1});
    REQUIRE(b13 != nullptr);
    REQUIRE(b31 != nullptr);
    REQUIRE(d4.get(b13->offset, 0) == -4);
    REQUIRE(d4.get(b31->offset, 0) == -4);

    SECTION("tensor with a zero complex is zero") {
        auto [TZ, lz] = tensor_complex<IntegerRing>({PA, zero_complex()});
        REQUIRE(TZ->support().empty());
    }
    SECTION("single factor tensor is the identity operation") {
        auto [T1, l1] = tensor_complex<IntegerRing>({PA});
        REQUIRE(T1->dim(1) == PA->dim(1));
        REQUIRE(T1->dim(2) == PA->dim(2));
        REQUIRE(T1->diff(2) == PA->diff(2));
    }
}

TEST_CASE("tensor complexes satisfy d*d = 0 on random complexes") {
    Rng rng(42);
    auto check = [&](auto ring) {
        for (int t = 0; t < 6; ++t) {
            auto C = testgen::random_complex(ring, rng, 0, 3);
            auto D = testgen::random_complex(ring, rng, 0, 2);
            // tensor_complex construction revalidates d*d = 0 exactly
            auto [T, layout] = tensor_complex<decltype(ring)>({C, D});
            REQUIRE(T != nullptr);
            auto [T3, l3] = tensor_complex<decltype(ring)>({C, D, C});
            REQUIRE(T3 != nullptr);
        }
    };
    check(IntegerRing{});
    check(ModularRing{8});
    check(PrimeField{5});
}

TEST_CASE("koszul_apply sign rules") {
    IntegerRing Z;
    auto A = z4_resolution_complex();
    auto PA = suspend(A);
    auto [T2, layout] = tensor_complex<IntegerRing>({PA, PA});

    // (1 (x) d) [e|e] = (-1)^{|d| |[e]|} [e|d e] with |[e]| = 2 even, so no
    // sign: [e| -4*1] = -4 [e|1]
    GradedMapSlot<IntegerRing> idslot;
    idslot.is_identity = true;
    GradedMapSlot<IntegerRing> dslot;
    dslot.degree = -1;
    dslot.at = [PA](int sd) { return PA->diff(sd); };
    auto v = koszul_apply(layout, layout, {idslot, dslot}, {2, 2}, {0, 0});
    const auto* b31 = layout.find_block(3, {2, 1});
    REQUIRE(v[b31->offset] == -4);

    // map in the left slot sees no element degrees to its left: no sign
    auto v2 = koszul_apply(layout, layout, {dslot, idslot}, {2, 2}, {0, 0});
    const auto* b13 = layout.find_block(3, {1, 2});
    REQUIRE(v2[b13->offset] == -4);
}

TEST_CASE("koszul composite rule (f(x)g)(h(x)k) = (-1)^{|g||h|} (fh (x) gk)") {
    IntegerRing Z;
    GradedModule<IntegerRing> mod(Z);
    mod.set_free_component(0, 1);
    mod.set_free_component(1, 1);
    mod.set_free_component(2, 1);
    auto C = make_complex(std::move(mod), {}, "V");
    auto [T, layout] = tensor_complex<IntegerRing>({C, C});

    auto mkslot = [&](long long c, int deg) {
        GradedMapSlot<IntegerRing> s;
        s.degree = deg;
        s.at = [c, deg, C](int sd) {
            Matrix<IntegerRing> m(IntegerRing{}, C->dim(sd + deg), C->dim(sd));
            if (m.rows() && m.cols()) m.set(0, 0, Int(c));
            return m;
        };
        return s;
    };
    auto f = mkslot(2, 1), g = mkslot(3, 1), h = mkslot(5, 1), k = mkslot(7, 1);
    auto fh = mkslot(10, 2), gk = mkslot(21, 2);

    // two-step route on [x0|x0]
    auto mid = koszul_apply(layout, layout, {h, k}, {0, 0}, {0, 0});
    const auto* bmid = layout.find_block(2, {1, 1});
    REQUIRE(mid[bmid->offset] == 35); // |k| odd but left degree 0: no sign
    auto top = koszul_apply(layout, layout, {f, g}, {1, 1}, {0, 0});
    const auto* btop = layout.find_block(4, {2, 2});
    REQUIRE(top[btop->offset] == -6); // sign (-1)^{|g| * 1}
    Int lhs = mid[bmid->offset] * top[btop->offset];

    // one-step route with the expected Koszul sign (-1)^{|g||h|} = -1
    auto rhs = koszul_apply(layout, layout, {fh, gk}, {0, 0}, {0, 0});
    REQUIRE(rhs[btop->offset] == 210);
    REQUIRE(lhs == -rhs[btop->offset]);
}

TEST_CASE("homology: pinned examples") {
    IntegerRing Z;
    SECTION("0 -> Z -4-> Z -> 0 has H_0 = Z/4, H_1 = 0") {
        auto A = z4_resolution_complex();
        auto H = homology(A, Window{-1, 2});
        auto H0 = H.at(0);
        REQUIRE(!H0.is_zero_module());
        Vec<IntegerRing> g = zero_vec(Z, H0.gens());
        g[0] = Z.one();
        int order = 0;
        for (int k = 1; k <= 8; ++k)
            if (H0.is_zero_elem(vec_scale(Z, Int(k), g))) { order = k; break; }
        REQUIRE(order == 4);
        REQUIRE(H.at(1).is_zero_module());
    }
    SECTION("exact complex has vanishing interior homology") {
        GradedModule<IntegerRing> mod(Z);
        mod.set_free_component(0, 1);
        mod.set_free_component(1, 1);
        std::map<int, Matrix<IntegerRing>> diff;
        diff[1] = from_dense(Z, {{1}});
        auto C = make_complex(std::move(mod), std::move(diff), "exact");
        auto H = homology(C, Window{-1, 2});
        for (auto& [d, h] : H) REQUIRE(h.is_zero_module());
    }
    SECTION("zero differential: H_n = C_n") {
        GradedModule<IntegerRing> mod(Z);
        mod.set_free_component(0, 2);
        mod.set_free_component(1, 3);
        auto C = make_complex(std::move(mod), {}, "zd");
        auto H = homology(C, Window{0, 1});
        REQUIRE(H.at(0).rels().cols() == 0);
        REQUIRE(H.at(0).gens() == 2);
        REQUIRE(H.at(1).rels().cols() == 0);
        REQUIRE(H.at(1).gens() == 3);
    }
}

TEST_CASE("complex construction validates d*d = 0") {
    IntegerRing Z;
    GradedModule<IntegerRing> mod(Z);
    mod.set_free_component(0, 1);
    mod.set_free_component(1, 1);
    mod.set_free_component(2, 1);
    std::map<int, Matrix<IntegerRing>> diff;
    diff[1] = from_dense(Z, {{2}});
    diff[2] = from_dense(Z, {{3}});
    REQUIRE_THROWS_AS(make_complex(std::move(mod), std::move(diff)), SpecViolation);
}

TEST_CASE("window discipline") {
    IntegerRing Z;
    GradedModule<IntegerRing> mod(Z, Window{0, 3});
    mod.set_free_component(0, 1);
    auto C = make_complex(std::move(mod), {}, "W");
    REQUIRE_THROWS_AS(C->dim(4), WindowError);
    REQUIRE_THROWS_AS(C->dim(-1), WindowError);
    REQUIRE(C->dim(2) == 0);
    // homology at the upper edge needs the differential from above
    REQUIRE_THROWS_AS(homology_at(*C, 3), WindowError);
}

TEST_CASE("cone of an isomorphism is acyclic") {
    IntegerRing Z;
    auto A = z4_resolution_complex();
    ChainMap<IntegerRing> id{A, A, 0, {}};
    id.comps[0] = Matrix<IntegerRing>::identity(Z, 1);
    id.comps[1] = Matrix<IntegerRing>::identity(Z, 1);
    auto cn = cone(id);
    for (int n = 0; n <= 2; ++n) REQUIRE(homology_vanishes_at(*cn, n));
}

TEST_CASE("is_surjective_quasi_iso") {
    IntegerRing Z;
    auto A = z4_resolution_complex();
    SECTION("identity map") {
        ChainMap<IntegerRing> id{A, A, 0, {}};
        id.comps[0] = Matrix<IntegerRing>::identity(Z, 1);
        id.comps[1] = Matrix<IntegerRing>::identity(Z, 1);
        REQUIRE(is_surjective_quasi_iso(id, Window{-2, 4}).ok);
    }
    SECTION("resolution of Z/4") {
        GradedModule<IntegerRing> mod(Z);
        mod.set_component(0, Presentation<IntegerRing>(Z, 1, from_dense(Z, {{4}})), {"b"});
        auto B = make_complex(std::move(mod), {}, "Z/4");
        ChainMap<IntegerRing> q{A, B, 0, {}};
        q.comps[0] = Matrix<IntegerRing>::identity(Z, 1);
        auto w = is_surjective_quasi_iso(q, Window{-2, 4});
        REQUIRE(w.ok);
        REQUIRE(is_chain_map(q, Window{-2, 4}).ok);
    }
    SECTION("zero map onto nonzero target fails surjectivity") {
        GradedModule<IntegerRing> mod(Z);
        mod.set_component(0, Presentation<IntegerRing>(Z, 1, from_dense(Z, {{4}})), {"b"});
        auto B = make_complex(std::move(mod), {}, "Z/4");
        ChainMap<IntegerRing> q{A, B, 0, {}};
        auto w = is_surjective_quasi_iso(q, Window{-2, 4});
        REQUIRE(!w.ok);
        REQUIRE(w.reason.find("not surjective") != std::string::npos);
    }
}

TEST_CASE("suspension map s is a degree-1 cycle in the Hom complex") {
    IntegerRing Z;
    auto A = z4_resolution_complex();
    auto PA = suspend(A);
    ChainMap<IntegerRing> s{A, PA, 1, {}};
    s.comps[0] = Matrix<IntegerRing>::identity(Z, 1);
    s.comps[1] = Matrix<IntegerRing>::identity(Z, 1);
    REQUIRE(is_chain_map(s, Window{-1, 3}).ok);
}
