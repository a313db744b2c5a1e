#pragma once
// Hom complexes between presented complexes.
//
// Hom(M,N)_d = prod_i Hom(M_i, N_{i+d}) is materialized as a presented
// module per degree: an ambient free module of matrix families, the
// submodule of families that descend to the quotients (generators), and the
// relations inherited from N. Elements travel as coordinate vectors; the
// realize / coordinatize pair converts to and from honest matrix families,
// which is what composition and the Hom differential act on.

#include "graded.hpp"

namespace ainfty {

// a degree-d map family: per source degree i, a matrix M_i -> N_{i+d}
template <ring R>
struct MapFamily {
    int degree = 0;
    std::map<int, Matrix<R>> mats;
};

template <ring R>
class HomComplex {
public:
    HomComplex(CxPtr<R> source, CxPtr<R> target) : source_(source), target_(target) {
        if (!source->window().unbounded_below() || !source->window().unbounded_above())
            throw WindowError("hom_complex: source must be fully known");
        const R& ring = source->ring();
        auto supp = source->support();
        Window w;
        if (!supp.empty()) {
            const auto& tw = target->window();
            w.lo = tw.unbounded_below() ? WIN_MIN : tw.lo - supp.front();
            w.hi = tw.unbounded_above() ? WIN_MAX : tw.hi - supp.back();
        }
        win_ = w;

        GradedModule<R> mod(ring, w);
        std::set<int> degs;
        for (int i : supp)
            for (int j : target->support()) {
                if (w.contains(j - i)) degs.insert(j - i);
            }
        for (int d : degs) build_degree(d, mod);

        // Hom differential: delta(f) = d_N f - (-1)^d f d_M
        std::map<int, Matrix<R>> diff;
        for (int d : degs) {
            if (!w.contains(d - 1)) continue;
            int rows = 0;
            {
                auto it = data_.find(d - 1);
                rows = it == data_.end() ? 0 : it->second.pres->gens();
            }
            auto it = data_.find(d);
            if (it == data_.end()) continue;
            int cols = it->second.pres->gens();
            if (rows == 0 || cols == 0) continue;
            Matrix<R> m(ring, rows, cols);
            for (int j = 0; j < cols; ++j) {
                auto fam = realize_raw(d, unit_coords(ring, cols, j));
                auto dfam = hom_differential(fam);
                m.set_col(j, coordinatize(d - 1, dfam));
            }
            if (!m.is_zero()) diff.insert_or_assign(d, std::move(m));
        }
        complex_ = make_complex(std::move(mod), std::move(diff),
                                "Hom(" + source->name() + ", " + target->name() + ")");
    }

    const CxPtr<R>& source() const { return source_; }
    const CxPtr<R>& target() const { return target_; }
    const CxPtr<R>& complex() const { return complex_; }
    const Window& window() const { return win_; }

    int dim(int d) const { return complex_->dim(d); }

    MapFamily<R> realize(int d, const Vec<R>& coords) const { return realize_raw(d, coords); }

    // coordinates of a map family (must descend to the quotients)
    Vec<R> coordinatize(int d, const MapFamily<R>& fam) const {
        if (complex_) complex_->module().check_window(d);
        else if (!win_.contains(d)) throw WindowError("Hom degree outside window");
        auto it = data_.find(d);
        if (it == data_.end()) {
            for (const auto& [i, m] : fam.mats)
                if (!m.is_zero()) throw SpecViolation("nonzero family in zero Hom component");
            return {};
        }
        const auto& dd = it->second;
        auto flat = flatten(d, fam);
        auto coords = subquotient_coords(dd.num, dd.den, flat);
        if (!coords)
            throw SpecViolation("map family is not a homomorphism (does not respect relations)");
        return dd.pres->reduce(*coords);
    }

    // delta_Hom(f) = d_N f - (-1)^{|f|} f d_M on honest families
    MapFamily<R> hom_differential(const MapFamily<R>& fam) const {
        const R& ring = source_->ring();
        MapFamily<R> out;
        out.degree = fam.degree - 1;
        int sgn = sign_of(fam.degree);
        for (int i : source_->support()) {
            int rows = target_->dim(i + fam.degree - 1);
            int cols = source_->dim(i);
            if (rows == 0 || cols == 0) continue;
            Matrix<R> m(ring, rows, cols);
            if (auto it = fam.mats.find(i); it != fam.mats.end())
                m = m + target_->diff(i + fam.degree) * it->second;
            if (auto it = fam.mats.find(i - 1); it != fam.mats.end()) {
                auto t = it->second * source_->diff(i);
                m = (sgn == 1) ? m - t : m + t;
            }
            if (!m.is_zero()) out.mats.insert_or_assign(i, std::move(m));
        }
        return out;
    }

    Vec<R> identity_coords() const {
        if (source_ != target_ && source_->support() != target_->support())
            throw SpecViolation("identity requested on Hom between different complexes");
        MapFamily<R> fam;
        fam.degree = 0;
        for (int i : source_->support())
            fam.mats.insert_or_assign(i, Matrix<R>::identity(source_->ring(), source_->dim(i)));
        return coordinatize(0, fam);
    }

private:
    struct DegData {
        // ambient slots: (source degree i, source gens, target gens, offset)
        struct Slot {
            int i, gm, gn, offset;
        };
        std::vector<Slot> slots;
        int ambient = 0;
        Matrix<R> num, den;
        std::optional<Presentation<R>> pres;
    };

    static Vec<R> unit_coords(const R& ring, int n, int j) {
        Vec<R> v(n, ring.zero());
        v[j] = ring.one();
        return v;
    }

    void build_degree(int d, GradedModule<R>& mod) {
        const R& ring = source_->ring();
        DegData dd;
        int off = 0;
        for (int i : source_->support()) {
            int gm = source_->dim(i);
            int gn = target_->dim(i + d);
            if (gm == 0 || gn == 0) continue;
            dd.slots.push_back({i, gm, gn, off});
            off += gm * gn;
        }
        dd.ambient = off;
        if (off == 0) return;

        // constraint matrix: X |-> (X_i * RM_i) per source relation column,
        // valued modulo the relations of N
        int crows = 0;
        std::vector<std::tuple<int, Matrix<R>, int>> cblocks; // (slot idx, RM_i, row offset)
        for (size_t s = 0; s < dd.slots.size(); ++s) {
            auto rm = source_->pres(dd.slots[s].i).rels();
            if (rm.cols() == 0) continue;
            cblocks.push_back({(int)s, rm, crows});
            crows += dd.slots[s].gn * rm.cols();
        }
        Matrix<R> C(ring, crows, off);
        Matrix<R> crels(ring, crows, 0);
        {
            int rc = 0;
            for (auto& [sidx, rm, roff] : cblocks) {
                const auto& sl = dd.slots[sidx];
                auto rn = target_->pres(sl.i + d).rels();
                rc += rn.cols() * rm.cols();
                for (int r = 0; r < rm.cols(); ++r)
                    for (int s = 0; s < sl.gm; ++s) {
                        auto v = rm.get(s, r);
                        if (ring.is_zero(v)) continue;
                        for (int t = 0; t < sl.gn; ++t)
                            C.add_to(roff + r * sl.gn + t, sl.offset + s * sl.gn + t, v);
                    }
            }
            crels = Matrix<R>(ring, crows, rc);
            int cc = 0;
            for (auto& [sidx, rm, roff] : cblocks) {
                const auto& sl = dd.slots[sidx];
                auto rn = target_->pres(sl.i + d).rels();
                for (int r = 0; r < rm.cols(); ++r)
                    for (int j = 0; j < rn.cols(); ++j) {
                        for (int t = 0; t < sl.gn; ++t)
                            crels.set(roff + r * sl.gn + t, cc, rn.get(t, j));
                        ++cc;
                    }
            }
        }
        dd.num = crows == 0 ? Matrix<R>::identity(ring, off) : kernel_mod(C, crels);

        // denominator: families with columns in the relation span of N
        int dcols = 0;
        for (const auto& sl : dd.slots) dcols += sl.gm * target_->pres(sl.i + d).rels().cols();
        dd.den = Matrix<R>(ring, off, dcols);
        {
            int c = 0;
            for (const auto& sl : dd.slots) {
                auto rn = target_->pres(sl.i + d).rels();
                for (int s = 0; s < sl.gm; ++s)
                    for (int j = 0; j < rn.cols(); ++j) {
                        for (int t = 0; t < sl.gn; ++t)
                            dd.den.set(sl.offset + s * sl.gn + t, c, rn.get(t, j));
                        ++c;
                    }
            }
        }
        dd.pres = present_subquotient(dd.num, dd.den);
        if (dd.pres->gens() > 0) {
            std::vector<std::string> labels;
            for (int j = 0; j < dd.pres->gens(); ++j)
                labels.push_back("h" + std::to_string(d) + "." + std::to_string(j));
            mod.set_component(d, *dd.pres, std::move(labels));
        }
        data_.emplace(d, std::move(dd));
    }

    Vec<R> flatten(int d, const MapFamily<R>& fam) const {
        const R& ring = source_->ring();
        auto it = data_.find(d);
        const auto& dd = it->second;
        Vec<R> flat(dd.ambient, ring.zero());
        for (const auto& sl : dd.slots) {
            auto mit = fam.mats.find(sl.i);
            if (mit == fam.mats.end()) continue;
            const auto& m = mit->second;
            if (m.rows() != sl.gn || m.cols() != sl.gm)
                throw DimensionError("map family block shape mismatch");
            for (const auto& [ij, v] : m.entries()) flat[sl.offset + ij.second * sl.gn + ij.first] = v;
        }
        // blocks of fam at degrees without a slot must be zero maps
        for (const auto& [i, m] : fam.mats) {
            bool have = false;
            for (const auto& sl : dd.slots)
                if (sl.i == i) have = true;
            if (!have) {
                for (int j = 0; j < m.cols(); ++j)
                    if (!target_->pres(i + d).is_zero_elem(m.col(j)))
                        throw SpecViolation("family has a nonzero block outside the Hom layout");
            }
        }
        return flat;
    }

    MapFamily<R> realize_raw(int d, const Vec<R>& coords) const {
        if (complex_) complex_->module().check_window(d);
        else if (!win_.contains(d)) throw WindowError("Hom degree outside window");
        const R& ring = source_->ring();
        MapFamily<R> out;
        out.degree = d;
        auto it = data_.find(d);
        if (it == data_.end()) return out;
        const auto& dd = it->second;
        if ((int)coords.size() != dd.pres->gens()) throw DimensionError("hom coords length mismatch");
        auto flat = dd.num.apply(coords);
        for (const auto& sl : dd.slots) {
            Matrix<R> m(ring, sl.gn, sl.gm);
            for (int s = 0; s < sl.gm; ++s)
                for (int t = 0; t < sl.gn; ++t) m.set(t, s, flat[sl.offset + s * sl.gn + t]);
            if (!m.is_zero()) out.mats.insert_or_assign(sl.i, std::move(m));
        }
        return out;
    }

    CxPtr<R> source_, target_;
    CxPtr<R> complex_;
    Window win_;
    std::map<int, DegData> data_;
};

template <ring R>
using HomPtr = std::shared_ptr<const HomComplex<R>>;

template <ring R>
HomPtr<R> hom_complex(const CxPtr<R>& M, const CxPtr<R>& N) {
    return std::make_shared<const HomComplex<R>>(M, N);
}

template <ring R>
HomPtr<R> end_complex(const CxPtr<R>& M) { return hom_complex(M, M); }

// composition Hom(N,P)_a (x) Hom(M,N)_b -> Hom(M,P)_{a+b} in coordinates
template <ring R>
Vec<R> hom_compose(const HomComplex<R>& NP, int a, const Vec<R>& f, const HomComplex<R>& MN, int b,
                   const Vec<R>& g, const HomComplex<R>& MP) {
    auto F = NP.realize(a, f);
    auto G = MN.realize(b, g);
    MapFamily<R> out;
    out.degree = a + b;
    const R& ring = MP.source()->ring();
    for (int i : MP.source()->support()) {
        auto git = G.mats.find(i);
        if (git == G.mats.end()) continue;
        auto fit = F.mats.find(i + b);
        if (fit == F.mats.end()) continue;
        auto m = fit->second * git->second;
        if (!m.is_zero()) out.mats.insert_or_assign(i, std::move(m));
    }
    return MP.coordinatize(a + b, out);
}

// post-composition f_* : Hom(P, A) -> Hom(P, B) for a degree-0 chain map f
template <ring R>
ChainMap<R> hom_push(const HomComplex<R>& PA, const HomComplex<R>& PB, const ChainMap<R>& f) {
    if (f.degree != 0) throw SpecViolation("hom_push expects a degree-0 map");
    const R& ring = f.source->ring();
    ChainMap<R> out{PA.complex(), PB.complex(), 0, {}};
    Window w = PA.complex()->window().meet(PB.complex()->window());
    for (int d : PA.complex()->support()) {
        if (!w.contains(d)) continue;
        int rows = PB.complex()->dim(d), cols = PA.complex()->dim(d);
        if (rows == 0 || cols == 0) continue;
        Matrix<R> m(ring, rows, cols);
        for (int j = 0; j < cols; ++j) {
            Vec<R> e = zero_vec(ring, cols);
            e[j] = ring.one();
            auto fam = PA.realize(d, e);
            MapFamily<R> pushed;
            pushed.degree = d;
            for (const auto& [i, blk] : fam.mats) {
                auto comp = f.at(i + d) * blk;
                if (!comp.is_zero()) pushed.mats.insert_or_assign(i, std::move(comp));
            }
            m.set_col(j, PB.coordinatize(d, pushed));
        }
        if (!m.is_zero()) out.comps.insert_or_assign(d, std::move(m));
    }
    return out;
}

// pre-composition f^* : Hom(B, P) -> Hom(A, P) for a degree-0 chain map f : A -> B
template <ring R>
ChainMap<R> hom_pull(const HomComplex<R>& BP, const HomComplex<R>& AP, const ChainMap<R>& f) {
    if (f.degree != 0) throw SpecViolation("hom_pull expects a degree-0 map");
    const R& ring = f.source->ring();
    ChainMap<R> out{BP.complex(), AP.complex(), 0, {}};
    Window w = BP.complex()->window().meet(AP.complex()->window());
    for (int d : BP.complex()->support()) {
        if (!w.contains(d)) continue;
        int rows = AP.complex()->dim(d), cols = BP.complex()->dim(d);
        if (rows == 0 || cols == 0) continue;
        Matrix<R> m(ring, rows, cols);
        for (int j = 0; j < cols; ++j) {
            Vec<R> e = zero_vec(ring, cols);
            e[j] = ring.one();
            auto fam = BP.realize(d, e);
            MapFamily<R> pulled;
            pulled.degree = d;
            for (int i : AP.source()->support()) {
                auto bit = fam.mats.find(i);
                if (bit == fam.mats.end()) continue;
                auto comp = bit->second * f.at(i);
                if (!comp.is_zero()) pulled.mats.insert_or_assign(i, std::move(comp));
            }
            m.set_col(j, AP.coordinatize(d, pulled));
        }
        if (!m.is_zero()) out.comps.insert_or_assign(d, std::move(m));
    }
    return out;
}

} // namespace ainfty
