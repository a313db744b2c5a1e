#pragma once
// Surjective semiprojective (degreewise-free, bounded-below) resolutions and
// the two lifting primitives the transfer proofs use: preimages along a
// surjective quasi-isomorphism, and boundary solves inside its kernel.
// Every solve result is verified by substitution before it is returned.

#include "obstruction.hpp"

#include <numeric>
#include <random>

namespace ainfty {

struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <ring R>
struct FreeResolution {
    CxPtr<R> A;          // degreewise free, bounded below
    ChainMap<R> q;       // A -> target, surjective quasi-iso on the window
    int unit_degree = 0; // position of the designated lift of 1 (if requested)
    int unit_index = -1;
    Window window;       // degrees on which exactness is certified
    bool complete = false;
};

// Build A degreewise: generators covering the target (surjectivity), cycle
// lifts (homology surjectivity), and homology killers (injectivity). The
// generator set is pruned at each step against the boundaries already
// present, so module targets get their minimal-at-each-step resolutions.
template <ring R>
FreeResolution<R> free_resolution(const CxPtr<R>& B, int depth,
                                  std::optional<std::pair<int, int>> unit_request = {}) {
    const R& ring = B->ring();
    if (!B->window().unbounded_below())
        throw HypothesisError("free_resolution: target must be known below");
    auto bsupp = B->support();
    int lo = bsupp.empty() ? 0 : bsupp.front();
    if (depth < 1) throw HypothesisError("free_resolution: depth must be >= 1");

    FreeResolution<R> out{nullptr, ChainMap<R>{}, 0, -1, Window{WIN_MIN, depth}, false};
    std::map<int, int> adim;
    std::map<int, Matrix<R>> diff;  // d_n : A_n -> A_{n-1}
    std::map<int, Matrix<R>> qmat;  // q_n : A_n -> B_n
    std::map<int, std::vector<std::string>> labels;
    std::map<int, Matrix<R>> cycles; // kernel basis of d_n (columns)

    auto bpres = [&](int n) { return B->window().contains(n) ? B->pres(n) : Presentation<R>(ring, 0); };
    auto bdiff = [&](int n) {
        if (B->window().contains(n) && B->window().contains(n - 1)) return B->diff(n);
        return Matrix<R>(ring, bpres(n - 1).gens(), bpres(n).gens());
    };

    int stop_at = depth + 1;
    for (int n = lo; n <= depth + 1; ++n) {
        int gb = bpres(n).gens();
        auto rels_b = bpres(n).rels();
        auto rels_prev = bpres(n - 1).rels();
        int aprev = n > lo ? adim[n - 1] : 0;
        const Matrix<R>* K = n > lo ? &cycles.at(n - 1) : nullptr;
        Matrix<R> qK = (n > lo && K->cols() > 0) ? qmat.at(n - 1) * (*K)
                                                 : Matrix<R>(ring, bpres(n - 1).gens(), n > lo ? K->cols() : 0);

        std::vector<Vec<R>> dcols, qcols;
        std::vector<std::string> lab;

        // generator covers: one free generator per target generator
        for (int i = 0; i < gb; ++i) {
            Vec<R> db = bdiff(n).col(i);
            Vec<R> x = zero_vec(ring, aprev);
            if (n > lo && !vec_is_zero(ring, db)) {
                // d(e_i) = K y with q(K y) = delta(g_i)
                auto y = solve_mod(qK, rels_prev, db);
                if (!y) throw HypothesisError("free_resolution: cycle lift failed at degree " +
                                              std::to_string(n));
                x = K->apply(*y);
            }
            dcols.push_back(std::move(x));
            qcols.push_back([&] {
                Vec<R> e = zero_vec(ring, gb);
                e[i] = ring.one();
                return e;
            }());
            lab.push_back(B->label(n, i));
        }

        // homology killers: cycles downstairs whose image bounds must bound
        if (n > lo && K->cols() > 0) {
            // solutions of q(K y) = delta(u) modulo target relations
            Matrix<R> big = qK.hcat(-bdiff(n)).hcat(-rels_prev);
            auto ker = kernel_basis(big);
            Matrix<R> span(ring, aprev, 0);
            {
                // boundaries already present: d of the generator covers
                Matrix<R> dsofar(ring, aprev, (int)dcols.size());
                for (int j = 0; j < (int)dcols.size(); ++j) dsofar.set_col(j, dcols[j]);
                span = dsofar;
            }
            for (int j = 0; j < ker.cols(); ++j) {
                Vec<R> y(K->cols(), ring.zero());
                for (int i = 0; i < K->cols(); ++i) y[i] = ker.get(i, j);
                auto w = K->apply(y);
                if (vec_is_zero(ring, w)) continue;
                if (solve_linear(span, w)) continue; // already a boundary
                // q(f) = u with delta(u) = q(w)
                Vec<R> u(gb, ring.zero());
                for (int i = 0; i < gb; ++i) u[i] = ker.get(K->cols() + i, j);
                dcols.push_back(w);
                qcols.push_back(u);
                lab.push_back("s" + std::to_string(n) + "." + std::to_string((int)dcols.size() - 1));
                Matrix<R> span2(ring, aprev, span.cols() + 1);
                for (const auto& [ij, v] : span.entries()) span2.set(ij.first, ij.second, v);
                span2.set_col(span.cols(), w);
                span = std::move(span2);
            }
        }

        // cycle covers: generators of Z_n(B) not yet hit by cycles upstairs
        {
            auto zb = kernel_mod(bdiff(n), rels_prev);
            if (zb.cols() > 0) {
                // cycles of the stage built so far
                Matrix<R> dn(ring, aprev, (int)dcols.size());
                for (int j = 0; j < (int)dcols.size(); ++j) dn.set_col(j, dcols[j]);
                auto kn = kernel_basis(dn);
                Matrix<R> qn(ring, gb, (int)qcols.size());
                for (int j = 0; j < (int)qcols.size(); ++j) qn.set_col(j, qcols[j]);
                Matrix<R> qcyc = qn * kn;
                for (int j = 0; j < zb.cols(); ++j) {
                    auto z = zb.col(j);
                    if (solve_mod(qcyc, rels_b, z)) continue;
                    dcols.push_back(zero_vec(ring, aprev));
                    qcols.push_back(z);
                    lab.push_back("z" + std::to_string(n) + "." + std::to_string((int)dcols.size() - 1));
                    qcyc = qcyc.hcat([&] {
                        Matrix<R> zc(ring, gb, 1);
                        zc.set_col(0, z);
                        return zc;
                    }());
                }
            }
        }

        int an = (int)dcols.size();
        if (n == depth + 1) {
            if (an == 0) out.complete = true;
            stop_at = depth;
            break;
        }
        adim[n] = an;
        labels[n] = std::move(lab);
        if (an > 0) {
            Matrix<R> dn(ring, aprev, an), qn(ring, gb, an);
            for (int j = 0; j < an; ++j) {
                dn.set_col(j, dcols[j]);
                qn.set_col(j, qcols[j]);
            }
            if (n > lo && !dn.is_zero()) diff.insert_or_assign(n, dn);
            qmat.insert_or_assign(n, qn);
            cycles.insert_or_assign(n, kernel_basis(dn.rows() ? dn : Matrix<R>(ring, 0, an)));
        } else {
            qmat.insert_or_assign(n, Matrix<R>(ring, gb, 0));
            cycles.insert_or_assign(n, Matrix<R>(ring, 0, 0));
        }
        if (n == lo) cycles.insert_or_assign(n, Matrix<R>::identity(ring, an));
    }

    Window win{WIN_MIN, out.complete ? WIN_MAX : stop_at};
    GradedModule<R> mod(ring, win);
    for (const auto& [d, nn] : adim)
        if (nn > 0) mod.set_free_component(d, nn, labels[d]);
    auto A = make_complex(std::move(mod), std::move(diff), "A");
    ChainMap<R> q{A, B, 0, qmat};
    out.A = A;
    out.q = std::move(q);
    out.window = win;

    if (unit_request) {
        auto [ud, ui] = *unit_request;
        if (!B->window().contains(ud) || ui < 0 || ui >= bpres(ud).gens())
            throw HypothesisError("free_resolution: unit generator out of range");
        if (!vec_is_zero(ring, bdiff(ud).col(ui)))
            throw HypothesisError("free_resolution: unit of the target has nonzero differential");
        out.unit_degree = ud;
        out.unit_index = ui; // generator covers precede everything else
        // d(1) = 0 and q(1) = 1 must hold on the nose
        if (!vec_is_zero(ring, out.A->diff(ud).col(ui)))
            throw HypothesisError("free_resolution: unit lift has nonzero differential");
    }
    return out;
}

// P semiprojective iff bounded below (known zero below the support) and
// degreewise free. A window truncated from below cannot be certified.
template <ring R>
Verdict is_semiprojective_witness(const CxPtr<R>& C) {
    if (!C->window().unbounded_below())
        return {false, "unbounded below: components under degree " + std::to_string(C->window().lo) +
                           " are not known to vanish"};
    for (const auto& [d, p] : C->module().components())
        if (!p.is_free() && !p.is_zero_module())
            return {false, "component at degree " + std::to_string(d) + " is not free"};
    return {true, ""};
}

// ---------------------------------------------------------------------------
// Flat coordinates on hhc^{l}(Xbar, Y) = Hom((Pi Xbar)^{(x)l}, Y) per
// homological degree, the obstruction-complex differential as a matrix, and
// the postcomposition map phi = Hom(T, w).

template <ring R>
class LiftContext {
public:
    // T: the tensor power layout of the source; w : Y -> Z a surjective
    // quasi-isomorphism of suspended presented complexes.
    LiftContext(TensorLayout<R> T, CxPtr<R> Tcx, ChainMap<R> w, bool verify_hypotheses = true)
        : T_(std::move(T)), Tcx_(std::move(Tcx)), w_(std::move(w)) {
        if (verify_hypotheses) {
            auto cm = is_chain_map(w_, Window{WIN_MIN, WIN_MAX});
            if (!cm.ok) throw HypothesisError("lift context: w is not a chain map: " + cm.detail);
            auto sq = is_surjective_quasi_iso(w_, Window{WIN_MIN, WIN_MAX});
            if (!sq.ok) throw HypothesisError("lift context: " + sq.reason);
        }
    }

    const CxPtr<R>& Y() const { return w_.source; }
    const CxPtr<R>& Z() const { return w_.target; }
    const TensorLayout<R>& T() const { return T_; }
    int arity() const { return (int)T_.factors.size(); }

    struct FlatLayout {
        // per (source degree s): offset of the (tensor x Y-gen) block
        std::vector<std::tuple<int, int, int>> blocks; // (s, tdim, ydim), offsets cumulative
        int dim = 0;
    };

    FlatLayout layout(const CxPtr<R>& Y, int j) const {
        FlatLayout fl;
        for (const auto& [s, tdim] : T_.total_dim) {
            if (tdim == 0) continue;
            if (!Y->window().contains(s + j)) continue;
            int ydim = Y->dim(s + j);
            if (ydim == 0) continue;
            fl.blocks.push_back({s, tdim, ydim});
            fl.dim += tdim * ydim;
        }
        return fl;
    }

    Vec<R> flatten(const CxPtr<R>& Y, int j, const MultiMap<R>& x) const {
        const R& ring = Y->ring();
        auto fl = layout(Y, j);
        Vec<R> out(fl.dim, ring.zero());
        int off = 0;
        for (const auto& [s, tdim, ydim] : fl.blocks) {
            for (const auto& blk : T_.blocks_at(s)) {
                auto m = x.component(arity(), blk.multidegree);
                for (const auto& [ij, v] : m.entries())
                    out[off + (blk.offset + ij.second) * ydim + ij.first] = v;
            }
            off += tdim * ydim;
        }
        return out;
    }

    MultiMap<R> unflatten(const CxPtr<R>& Y, int j, const Vec<R>& v) const {
        const R& ring = Y->ring();
        MultiMap<R> x(T_.factors.at(0), Y, j, arity(), arity());
        auto fl = layout(Y, j);
        int off = 0;
        for (const auto& [s, tdim, ydim] : fl.blocks) {
            for (const auto& blk : T_.blocks_at(s)) {
                Matrix<R> m(ring, ydim, blk.size);
                for (int t = 0; t < blk.size; ++t)
                    for (int i = 0; i < ydim; ++i) {
                        auto c = v[off + (blk.offset + t) * ydim + i];
                        if (!ring.is_zero(c)) m.set(i, t, c);
                    }
                if (!m.is_zero()) x.set_component(arity(), blk.multidegree, m);
            }
            off += tdim * ydim;
        }
        return x;
    }

    // blockdiagonal relations of Y at the flat layout
    Matrix<R> rels(const CxPtr<R>& Y, int j) const {
        const R& ring = Y->ring();
        auto fl = layout(Y, j);
        int cols = 0;
        for (const auto& [s, tdim, ydim] : fl.blocks) cols += tdim * Y->pres(s + j).rels().cols();
        Matrix<R> out(ring, fl.dim, cols);
        int off = 0, c = 0;
        for (const auto& [s, tdim, ydim] : fl.blocks) {
            auto r = Y->pres(s + j).rels();
            for (int t = 0; t < tdim; ++t)
                for (int k = 0; k < r.cols(); ++k) {
                    for (int i = 0; i < ydim; ++i) out.set(off + t * ydim + i, c, r.get(i, k));
                    ++c;
                }
            off += tdim * ydim;
        }
        return out;
    }

    // the Hom-complex differential as a matrix C_j -> C_{j-1}:
    // d(x) = delta_Y x - (-1)^j x delta_T
    Matrix<R> dmat(const CxPtr<R>& Y, int j) const {
        const R& ring = Y->ring();
        auto src = layout(Y, j), dst = layout(Y, j - 1);
        Matrix<R> D(ring, dst.dim, src.dim);
        int sgn = -sign_of(j);
        auto dst_off = [&](int s) -> std::pair<int, int> {
            int off = 0;
            for (const auto& [ds, tdim, ydim] : dst.blocks) {
                if (ds == s) return {off, ydim};
                off += tdim * ydim;
            }
            return {-1, 0};
        };
        int soff = 0;
        for (const auto& [s, tdim, ydim] : src.blocks) {
            // term 1: delta_Y postcomposition, same tensor degree s
            auto [doff, dydim] = dst_off(s);
            if (doff >= 0 && Y->window().contains(s + j - 1)) {
                auto dy = Y->diff(s + j);
                for (int t = 0; t < tdim; ++t)
                    for (const auto& [ij, v] : dy.entries())
                        D.add_to(doff + t * dydim + ij.first, soff + t * ydim + ij.second, v);
            }
            // term 2: x-components at tensor degree s feed d(x)-components at
            // tensor degree s+1 through the tensor differential; the Y-degree
            // (s + j) is the same on both sides
            auto [d2off, d2ydim] = dst_off(s + 1);
            if (d2off >= 0 && Tcx_->window().contains(s + 1) && Tcx_->window().contains(s)) {
                auto dt = Tcx_->diff(s + 1); // T_{s+1} -> T_s
                for (const auto& [ij, v] : dt.entries()) {
                    // ij.first: tensor index at s, ij.second: tensor index at s+1
                    for (int i = 0; i < ydim; ++i)
                        D.add_to(d2off + ij.second * d2ydim + i, soff + ij.first * ydim + i,
                                 ring.mul(ring.from_int(sgn), v));
                }
            }
            soff += tdim * ydim;
        }
        return D;
    }

    // phi = Hom(T, w) : Hom(T, Y)_j -> Hom(T, Z)_j as a matrix
    Matrix<R> phimat(int j) const {
        const R& ring = w_.source->ring();
        auto src = layout(w_.source, j), dst = layout(w_.target, j);
        Matrix<R> P(ring, dst.dim, src.dim);
        int soff = 0;
        for (const auto& [s, tdim, ydim] : src.blocks) {
            int doff = 0;
            for (const auto& [ds, dtdim, dzdim] : dst.blocks) {
                if (ds == s) {
                    auto wm = w_.at(s + j);
                    for (int t = 0; t < tdim; ++t)
                        for (const auto& [ij, v] : wm.entries())
                            P.add_to(doff + t * dzdim + ij.first, soff + t * ydim + ij.second, v);
                }
                doff += dtdim * dzdim;
            }
            soff += tdim * ydim;
        }
        return P;
    }

    MultiMap<R> apply_phi(const MultiMap<R>& x) const { return postcompose_strict(w_, x); }

    // exact preimage of z under phi; deterministic, or seeded with a kernel
    // perturbation when seed is provided
    MultiMap<R> lift_preimage(const MultiMap<R>& z, std::optional<uint64_t> seed = {}) const {
        const R& ring = w_.source->ring();
        int j = z.degree();
        auto flatz = flatten(w_.target, j, z);
        auto P = phimat(j);
        auto RZ = rels(w_.target, j);
        auto y = solve_mod(P, RZ, flatz);
        if (!y) throw HypothesisError("lift_preimage: component not in the image (window too small?)");
        if (seed) {
            auto K = kernel_mod(P, RZ);
            if (K.cols() > 0) {
                std::mt19937_64 eng(*seed);
                Vec<R> r(K.cols(), ring.zero());
                for (int i = 0; i < K.cols(); ++i)
                    r[i] = ring.from_int((long long)(eng() % 5) - 2);
                *y = vec_add(ring, *y, K.apply(r));
            }
        }
        auto out = unflatten(w_.source, j, *y);
        // verify by substitution
        auto back = apply_phi(out);
        if (!(back - z).is_zero()) throw SpecViolation("lift_preimage: verification failed");
        return out;
    }

    // x in ker(phi) with d(x) = c, for c a cycle in ker(phi)
    MultiMap<R> kernel_boundary_solve(const MultiMap<R>& c, std::optional<uint64_t> seed = {}) const {
        const R& ring = w_.source->ring();
        int j = c.degree() + 1;
        if (!apply_phi(c).is_zero())
            throw SpecViolation("kernel_boundary_solve: c is not in ker(phi)");
        if (!hhc_diff(c).is_zero()) throw SpecViolation("kernel_boundary_solve: c is not a cycle");
        auto P = phimat(j);
        auto RZ = rels(w_.target, j);
        auto K = kernel_mod(P, RZ);
        auto D = dmat(w_.source, j);
        auto RY = rels(w_.source, j - 1);
        auto flatc = flatten(w_.source, j - 1, c);
        auto DK = D * K;
        auto y = solve_mod(DK, RY, flatc);
        if (!y)
            throw HypothesisError(
                "kernel_boundary_solve: no solution in the window (enlarge the resolution depth)");
        if (seed) {
            auto K2 = kernel_mod(DK, RY);
            if (K2.cols() > 0) {
                std::mt19937_64 eng(*seed);
                Vec<R> r(K2.cols(), ring.zero());
                for (int i = 0; i < K2.cols(); ++i)
                    r[i] = ring.from_int((long long)(eng() % 5) - 2);
                *y = vec_add(ring, *y, K2.apply(r));
            }
        }
        auto x = unflatten(w_.source, j, K.apply(*y));
        if (!apply_phi(x).is_zero()) throw SpecViolation("kernel_boundary_solve: result leaves ker(phi)");
        if (!(hhc_diff(x) - c).is_zero())
            throw SpecViolation("kernel_boundary_solve: verification failed");
        return x;
    }

    // x in the full complex with d(x) = c; on failure, reports the homology
    // witness instead of aborting
    std::pair<std::optional<MultiMap<R>>, std::string> boundary_solve(const MultiMap<R>& c) const {
        int j = c.degree() + 1;
        auto D = dmat(w_.source, j);
        auto RY = rels(w_.source, j - 1);
        auto flatc = flatten(w_.source, j - 1, c);
        auto y = solve_mod(D, RY, flatc);
        if (!y) {
            return {std::nullopt, "homology witness: the cycle " + c.first_nonzero_description() +
                                      " is not a boundary in homological degree " + std::to_string(j - 1)};
        }
        auto x = unflatten(w_.source, j, *y);
        if (!(hhc_diff(x) - c).is_zero()) throw SpecViolation("boundary_solve: verification failed");
        return {x, ""};
    }

    // H_{j}(ker phi) = 0, verified computationally
    Verdict kernel_acyclic_at(int j) const {
        auto P = [&](int jj) { return phimat(jj); };
        auto K = kernel_mod(P(j), rels(w_.target, j));
        auto Kup = kernel_mod(P(j + 1), rels(w_.target, j + 1));
        auto D = dmat(w_.source, j);
        auto Dup = dmat(w_.source, j + 1);
        auto RY = rels(w_.source, j - 1);
        // cycles in ker at j: K y with D K y = 0 mod RY
        auto cyc = kernel_mod(D * K, RY);
        Matrix<R> zgens = K * cyc;
        // boundaries from ker at j+1, plus the relation span of Y at j
        Matrix<R> bgens = (Dup * Kup).hcat(rels(w_.source, j));
        for (int c = 0; c < zgens.cols(); ++c) {
            if (!solve_linear(bgens, zgens.col(c)))
                return {false, "ker(phi) has homology in degree " + std::to_string(j)};
        }
        return {true, ""};
    }

private:
    TensorLayout<R> T_;
    CxPtr<R> Tcx_;
    ChainMap<R> w_;
};

// lift context for hhc^{l}(Xbar, w) with w : Y -> Z
template <ring R>
LiftContext<R> build_lift_context(const CxPtr<R>& Xbar, int l, const ChainMap<R>& w,
                                  bool verify = true) {
    auto [Tcx, layout] = tensor_complex(std::vector<CxPtr<R>>((size_t)l, Xbar));
    return LiftContext<R>(std::move(layout), Tcx, w, verify);
}

} // namespace ainfty
