#pragma once
// Split units and strictly unital towers. The unit is a designated basis
// element of the suspended complex in suspended degree 1; Abar is the
// literal span of the other basis labels, with the projected differential.
// mu_su and g_su carry exactly the unit laws, so every strictly unital
// tower decomposes as (Abar-supported part) + trivial part.

#include "multimap.hpp"

namespace ainfty {

struct UnitData {
    int degree = 1; // suspended degree of [1]
    int index = 0;  // basis index within that degree
};

template <ring R>
struct BarComplex {
    CxPtr<R> full;
    CxPtr<R> bar;
    UnitData unit;
    std::map<int, std::vector<int>> inj; // bar index -> full index, per degree
};

template <ring R>
BarComplex<R> bar_complex(const CxPtr<R>& SA, UnitData unit) {
    if (!SA->degreewise_free()) throw SpecViolation("bar_complex: source must be degreewise free");
    const R& ring = SA->ring();
    BarComplex<R> out;
    out.full = SA;
    out.unit = unit;
    GradedModule<R> mod(ring, SA->window());
    for (int d : SA->support()) {
        std::vector<int> keep;
        std::vector<std::string> labels;
        for (int i = 0; i < SA->dim(d); ++i) {
            if (d == unit.degree && i == unit.index) continue;
            keep.push_back(i);
            labels.push_back(SA->label(d, i));
        }
        out.inj[d] = keep;
        if (!keep.empty()) mod.set_free_component(d, (int)keep.size(), std::move(labels));
    }
    std::map<int, Matrix<R>> diff;
    for (int d : SA->support()) {
        if (!SA->window().contains(d) || !SA->window().contains(d - 1)) continue;
        auto m = SA->diff(d);
        const auto& src = out.inj.count(d) ? out.inj.at(d) : std::vector<int>{};
        const auto& dst = out.inj.count(d - 1) ? out.inj.at(d - 1) : std::vector<int>{};
        if (src.empty() || dst.empty()) continue;
        Matrix<R> pm(ring, (int)dst.size(), (int)src.size());
        for (size_t j = 0; j < src.size(); ++j)
            for (size_t i = 0; i < dst.size(); ++i) pm.set((int)i, (int)j, m.get(dst[i], src[j]));
        if (!pm.is_zero()) diff.insert_or_assign(d, std::move(pm));
    }
    out.bar = make_complex(std::move(mod), std::move(diff), SA->name() + "bar");
    return out;
}

// extend a tower defined on Abar-tensors by zero on every unit slot
template <ring R>
MultiMap<R> extend_tower(const MultiMap<R>& x, const BarComplex<R>& bc) {
    if (x.source() != bc.bar) throw SpecViolation("extend_tower: source is not the bar complex");
    const R& ring = x.ring();
    MultiMap<R> out(bc.full, x.target(), x.degree(), x.lmin(), x.lmax());
    for (const auto& [l, per] : x.components()) {
        if (l == 0) {
            for (const auto& [md, m] : per) out.set_component(0, md, m);
            continue;
        }
        for (const auto& [md, m] : per) {
            Matrix<R> big(ring, m.rows(), [&] {
                int n = 1;
                for (int d : md) n *= bc.full->dim(d);
                return n;
            }());
            int cols = m.cols();
            for (int c = 0; c < cols; ++c) {
                // bar tuple -> full tuple
                int r = c, rank = 0;
                std::vector<int> tup(l);
                for (int i = l - 1; i >= 0; --i) {
                    tup[i] = r % bc.bar->dim(md[i]);
                    r /= bc.bar->dim(md[i]);
                }
                for (int i = 0; i < l; ++i) rank = rank * bc.full->dim(md[i]) + bc.inj.at(md[i])[tup[i]];
                for (int i = 0; i < m.rows(); ++i) big.set(i, rank, m.get(i, c));
            }
            out.set_component(l, md, big);
        }
    }
    return out;
}

// restrict a tower on the full source to Abar-tensors
template <ring R>
MultiMap<R> restrict_tower(const MultiMap<R>& x, const BarComplex<R>& bc) {
    if (x.source() != bc.full) throw SpecViolation("restrict_tower: source mismatch");
    const R& ring = x.ring();
    MultiMap<R> out(bc.bar, x.target(), x.degree(), x.lmin(), x.lmax());
    for (const auto& [l, per] : x.components()) {
        if (l == 0) {
            for (const auto& [md, m] : per) out.set_component(0, md, m);
            continue;
        }
        for (const auto& [md, m] : per) {
            bool possible = true;
            int cols = 1;
            for (int d : md) {
                auto it = bc.inj.find(d);
                if (it == bc.inj.end() || it->second.empty()) { possible = false; break; }
                cols *= (int)it->second.size();
            }
            if (!possible) continue;
            Matrix<R> sub(ring, m.rows(), cols);
            for (int c = 0; c < cols; ++c) {
                int r = c, rank = 0;
                std::vector<int> tup(l);
                for (int i = l - 1; i >= 0; --i) {
                    tup[i] = r % (int)bc.inj.at(md[i]).size();
                    r /= (int)bc.inj.at(md[i]).size();
                }
                for (int i = 0; i < l; ++i) rank = rank * bc.full->dim(md[i]) + bc.inj.at(md[i])[tup[i]];
                sub.set_col(c, m.col(rank));
            }
            out.set_component(l, md, sub);
        }
    }
    return out;
}

// does any component act nontrivially on a tensor containing the unit?
template <ring R>
Verdict unit_slots_vanish(const MultiMap<R>& x, UnitData unit) {
    for (const auto& [l, per] : x.components()) {
        if (l == 0) continue;
        for (const auto& [md, m] : per) {
            for (int c = 0; c < m.cols(); ++c) {
                int r = c;
                std::vector<int> tup(l);
                for (int i = l - 1; i >= 0; --i) {
                    tup[i] = r % x.source()->dim(md[i]);
                    r /= x.source()->dim(md[i]);
                }
                bool has_unit = false;
                for (int i = 0; i < l; ++i)
                    if (md[i] == unit.degree && tup[i] == unit.index) has_unit = true;
                if (!has_unit) continue;
                if (!vec_is_zero(x.ring(), m.col(c)))
                    return {false, "unit slot is not annihilated at l=" + std::to_string(l)};
            }
        }
    }
    return {true, ""};
}

// the trivial strictly unital structure: mu_su^2 [1|a] = [a],
// mu_su^2 [a|1] = (-1)^{|a|} [a], zero on Abar (x) Abar
template <ring R>
MultiMap<R> mu_su(const CxPtr<R>& SA, UnitData unit) {
    const R& ring = SA->ring();
    MultiMap<R> out(SA, SA, -1, 2, 2);
    for (int d2 : SA->support()) {
        // [1|a]
        std::vector<int> md{unit.degree, d2};
        if (out.md_in_window(md)) {
            int rows = SA->dim(d2);
            Matrix<R> m(ring, rows, SA->dim(unit.degree) * SA->dim(d2));
            for (int t = 0; t < rows; ++t)
                m.set(t, unit.index * SA->dim(d2) + t, ring.one());
            if (d2 == unit.degree) {
                // add [a|1] on the same component; [1|1] -> [1] is already set
                int sgn = sign_of(d2 - 1);
                for (int s = 0; s < rows; ++s) {
                    if (s == unit.index) continue;
                    m.add_to(s, s * SA->dim(d2) + unit.index, ring.from_int(sgn));
                }
            }
            out.set_component(2, md, m);
        }
        // [a|1] with a in a different degree
        if (d2 != unit.degree) {
            std::vector<int> md2{d2, unit.degree};
            if (out.md_in_window(md2)) {
                int rows = SA->dim(d2);
                Matrix<R> m(ring, rows, SA->dim(d2) * SA->dim(unit.degree));
                int sgn = sign_of(d2 - 1); // (-1)^{|a|} with |a| = d2 - 1
                for (int s = 0; s < rows; ++s)
                    m.set(s, s * SA->dim(unit.degree) + unit.index, ring.from_int(sgn));
                out.set_component(2, md2, m);
            }
        }
    }
    return out;
}

// the trivial strictly unital morphism: g_su[1_A] = [1_B], zero on Abar
template <ring R>
MultiMap<R> g_su(const CxPtr<R>& SA, UnitData unitA, const CxPtr<R>& SB, const Vec<R>& unitB_coords) {
    const R& ring = SA->ring();
    MultiMap<R> out(SA, SB, 0, 1, 1);
    std::vector<int> md{unitA.degree};
    Matrix<R> m(ring, SB->dim(unitA.degree), SA->dim(unitA.degree));
    if ((int)unitB_coords.size() != SB->dim(unitA.degree))
        throw DimensionError("unit element coordinate length mismatch");
    for (int i = 0; i < (int)unitB_coords.size(); ++i) m.set(i, unitA.index, unitB_coords[i]);
    out.set_component(1, md, m);
    return out;
}

enum class StrictRole { Structure, Morphism, Homotopy };

// checks the strict unit equations exactly on every basis element in window
template <ring R>
Verdict is_strictly_unital(const MultiMap<R>& x, UnitData unit, StrictRole role,
                           const Vec<R>* unit_target = nullptr) {
    const R& ring = x.ring();
    auto SA = x.source();
    if (role == StrictRole::Homotopy) return unit_slots_vanish(x, unit);

    if (role == StrictRole::Morphism) {
        if (!unit_target) throw SpecViolation("morphism unital check needs the target unit element");
        auto v = x.eval(1, {unit.degree}, {unit.index});
        auto want = x.target()->reduce(unit.degree, *unit_target);
        if (!vec_is_zero(ring, vec_sub(ring, x.target()->reduce(unit.degree, v), want)))
            return {false, "alpha^1[1] != 1"};
        // all higher components must kill unit slots
        auto hi = x.pi_range(std::min(2, x.lmax()), x.lmax());
        if (x.lmax() >= 2) {
            auto r = unit_slots_vanish(hi, unit);
            if (!r.ok) return r;
        }
        return {true, ""};
    }

    // structure: nu^2[1|a] = [a] = (-1)^{|a|} nu^2[a|1], nu^k kills unit slots, k != 2
    auto msu = mu_su(SA, unit);
    auto two = x.pi_at(2) - msu;
    auto r2 = unit_slots_vanish(two, unit);
    if (!r2.ok) return {false, "nu^2 violates the unit law: " + r2.detail};
    for (int l = std::max(1, x.lmin()); l <= x.lmax(); ++l) {
        if (l == 2) continue;
        auto rl = unit_slots_vanish(x.pi_at(l), unit);
        if (!rl.ok) return {false, "nu^" + std::to_string(l) + " does not kill unit slots"};
    }
    return {true, ""};
}

// nu = mu + mu_su with mu supported on Abar; exact and unique
template <ring R>
std::pair<MultiMap<R>, MultiMap<R>> split_decompose(const MultiMap<R>& nu, const BarComplex<R>& bc) {
    auto su = is_strictly_unital(nu, bc.unit, StrictRole::Structure);
    if (!su.ok) throw SpecViolation("split_decompose: input is not strictly unital: " + su.detail);
    auto msu = mu_su(nu.source(), bc.unit);
    auto diff = nu - msu;
    auto mu = restrict_tower(diff, bc);
    // recombination must reproduce nu exactly
    auto back = extend_tower(mu, bc) + msu;
    if (!(back == nu)) throw SpecViolation("split_decompose: recombination mismatch");
    return {mu, msu};
}

// morphism version: alpha = beta + g_su with beta supported on Abar
template <ring R>
std::pair<MultiMap<R>, MultiMap<R>> split_decompose_morphism(const MultiMap<R>& alpha,
                                                             const BarComplex<R>& bc,
                                                             const Vec<R>& unitB_coords) {
    auto su = is_strictly_unital(alpha, bc.unit, StrictRole::Morphism, &unitB_coords);
    if (!su.ok) throw SpecViolation("split_decompose_morphism: not strictly unital: " + su.detail);
    auto gsu = g_su(alpha.source(), bc.unit, alpha.target(), unitB_coords);
    auto beta = restrict_tower(alpha - gsu, bc);
    auto back = extend_tower(beta, bc) + gsu;
    if (!(back == alpha)) throw SpecViolation("split_decompose_morphism: recombination mismatch");
    return {beta, gsu};
}

} // namespace ainfty
