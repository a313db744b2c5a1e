#pragma once
// The truncated tensor coalgebra picture, implemented independently of the
// hhc products as block matrices between tensor powers. Used as a
// cross-check oracle: coalgebra morphisms Psi^{-1}(alpha), coderivations
// Phi^{-1}(r), and the product identities
//   (mu o nu)^{<= n} = mu Phi_n^{-1}(nu)
//   (nu * alpha)^{<= n} = nu Psi_n^{-1}(alpha)
//   nu (*) r = nu (Phi_n^{alpha,beta})^{-1}(r).
//
// The coderivation rule implemented is Delta R = (A (x) R + R (x) B) Delta
// with A = Psi^{-1}(alpha), B = Psi^{-1}(beta): the side convention is
// forced by requiring the inverse formula (alpha-blocks left of r,
// beta-blocks right) to produce coderivations.

#include "multimap.hpp"

namespace ainfty {

template <ring R>
struct PowerLayouts {
    CxPtr<R> V;
    int n = 0;
    std::vector<TensorLayout<R>> pows; // pows[i-1] = layout of V^{(x)i}

    const TensorLayout<R>& at(int i) const { return pows.at(i - 1); }
};

template <ring R>
PowerLayouts<R> power_layouts(const CxPtr<R>& V, int n) {
    PowerLayouts<R> out;
    out.V = V;
    out.n = n;
    for (int i = 1; i <= n; ++i)
        out.pows.push_back(tensor_layout(std::vector<CxPtr<R>>(i, V)));
    return out;
}

// element of T^{<= n}(V) homogeneous of a fixed degree
template <ring R>
struct BlockVec {
    int degree = 0;
    std::map<int, Vec<R>> parts; // power -> coords in the power layout at `degree`
};

// graded block map T^{<= n}(V) -> T^{<= n}(W)
template <ring R>
struct BlockMap {
    int degree = 0;
    // (source power, target power) -> per source degree matrix
    std::map<std::pair<int, int>, std::map<int, Matrix<R>>> blocks;

    Matrix<R> block(const PowerLayouts<R>& src, const PowerLayouts<R>& dst, int i, int j, int s) const {
        auto it = blocks.find({i, j});
        if (it != blocks.end()) {
            auto jt = it->second.find(s);
            if (jt != it->second.end()) return jt->second;
        }
        return Matrix<R>(src.V->ring(), dst.at(j).dim(s + degree), src.at(i).dim(s));
    }
};

namespace detail {

// apply a tensor product of towers (parts[k] applied to arity[k] slots) to
// a basis tensor, landing in the product-power layout of the targets
template <ring R>
Vec<R> towers_tensor_apply(const std::vector<const MultiMap<R>*>& fs, const std::vector<int>& arity,
                           const TensorLayout<R>& dst, const std::vector<int>& md,
                           const std::vector<int>& tuple) {
    const R& ring = fs.at(0)->ring();
    long long parity = 0;
    {
        int pos = 0;
        long long left = 0;
        for (size_t k = 0; k < fs.size(); ++k) {
            parity += (long long)fs[k]->degree() * left;
            for (int i = 0; i < arity[k]; ++i) left += md[pos + i];
            pos += arity[k];
        }
    }
    struct Term {
        typename R::Elem c;
        std::vector<int> idx;
        std::vector<int> degs;
    };
    std::vector<Term> terms;
    terms.push_back({ring.from_int(sign_of(parity)), {}, {}});
    {
        int pos = 0;
        for (size_t k = 0; k < fs.size(); ++k) {
            std::vector<int> bmd(md.begin() + pos, md.begin() + pos + arity[k]);
            std::vector<int> btuple(tuple.begin() + pos, tuple.begin() + pos + arity[k]);
            int e = fs[k]->target_degree_of(bmd);
            auto v = fs[k]->eval(arity[k], bmd, btuple);
            std::vector<Term> next;
            for (auto& t : terms)
                for (size_t q = 0; q < v.size(); ++q) {
                    if (ring.is_zero(v[q])) continue;
                    Term nt = t;
                    nt.c = ring.mul(nt.c, v[q]);
                    nt.idx.push_back((int)q);
                    nt.degs.push_back(e);
                    next.push_back(std::move(nt));
                }
            terms = std::move(next);
            pos += arity[k];
        }
    }
    int out_deg = 0;
    for (int d : md) out_deg += d;
    for (const auto* f : fs) out_deg += f->degree();
    Vec<R> result = zero_vec(ring, dst.dim(out_deg));
    for (const auto& t : terms) {
        const auto* blk = dst.find_block(out_deg, t.degs);
        if (!blk) throw SpecViolation("towers_tensor_apply: block missing in target layout");
        int r = TensorLayout<R>::tuple_rank(*blk, t.idx);
        result[blk->offset + r] = ring.add(result[blk->offset + r], t.c);
    }
    return result;
}

} // namespace detail

// pi_j Psi^{-1}(alpha)|_{(Pi A)^{(x)k}} = sum alpha^{i_1} (x) ... (x) alpha^{i_j}
template <ring R>
BlockMap<R> psi_inverse(const MultiMap<R>& alpha, const PowerLayouts<R>& src,
                        const PowerLayouts<R>& dst) {
    if (alpha.degree() != 0) throw SpecViolation("psi_inverse: alpha must have degree 0");
    const R& ring = alpha.ring();
    BlockMap<R> F;
    F.degree = 0;
    int amin = std::max(1, alpha.lmin());
    for (int k = 1; k <= src.n; ++k) {
        const auto& L = src.at(k);
        for (int j = 1; j <= std::min(dst.n, k / amin); ++j) {
            std::map<int, Matrix<R>> per;
            detail::compositions(k, j, amin, alpha.lmax(), [&](const std::vector<int>& parts) {
                std::vector<const MultiMap<R>*> fs(j, &alpha);
                for (const auto& [s, blocks] : L.blocks) {
                    for (const auto& blk : blocks) {
                        for (int t = 0; t < blk.size; ++t) {
                            auto tuple = TensorLayout<R>::tuple_unrank(blk, t);
                            auto v = detail::towers_tensor_apply(fs, parts, dst.at(j), blk.multidegree, tuple);
                            if (vec_is_zero(ring, v)) continue;
                            auto it = per.find(s);
                            if (it == per.end())
                                it = per.emplace(s, Matrix<R>(ring, (int)v.size(), L.dim(s))).first;
                            for (int i = 0; i < (int)v.size(); ++i)
                                if (!ring.is_zero(v[i])) it->second.add_to(i, blk.offset + t, v[i]);
                        }
                    }
                }
            });
            for (auto& [s, m] : per)
                if (!m.is_zero()) F.blocks[{k, j}].insert_or_assign(s, std::move(m));
        }
    }
    return F;
}

// pi_j (Phi^{alpha,beta})^{-1}(r)|_{(Pi A)^{(x)k}} =
//   sum alpha^{i_1} (x) ... (x) r^{i_m} (x) ... (x) beta^{i_j}
template <ring R>
BlockMap<R> phi_inverse(const MultiMap<R>& r, const MultiMap<R>& alpha, const MultiMap<R>& beta,
                        const PowerLayouts<R>& src, const PowerLayouts<R>& dst) {
    if (alpha.degree() != 0 || beta.degree() != 0)
        throw SpecViolation("phi_inverse: flanking morphisms must have degree 0");
    const R& ring = r.ring();
    BlockMap<R> F;
    F.degree = r.degree();
    int amin = std::max(1, alpha.lmin());
    int bmin = std::max(1, beta.lmin());
    int rmin = std::max(1, r.lmin());
    for (int k = 1; k <= src.n; ++k) {
        const auto& L = src.at(k);
        for (int j = 1; j <= dst.n; ++j) {
            std::map<int, Matrix<R>> per;
            for (int m = 1; m <= j; ++m) {
                detail::compositions(k, j, 1, k, [&](const std::vector<int>& parts) {
                    std::vector<const MultiMap<R>*> fs;
                    for (int p = 0; p < j; ++p) {
                        const MultiMap<R>* f = (p < m - 1) ? &alpha : (p == m - 1 ? &r : &beta);
                        int lo = (p == m - 1) ? rmin : (p < m - 1 ? amin : bmin);
                        int hi = (p == m - 1) ? r.lmax() : (p < m - 1 ? alpha.lmax() : beta.lmax());
                        if (parts[p] < lo || parts[p] > hi) { fs.clear(); return; }
                        fs.push_back(f);
                    }
                    for (const auto& [s, blocks] : L.blocks) {
                        for (const auto& blk : blocks) {
                            for (int t = 0; t < blk.size; ++t) {
                                auto tuple = TensorLayout<R>::tuple_unrank(blk, t);
                                auto v = detail::towers_tensor_apply(fs, parts, dst.at(j), blk.multidegree, tuple);
                                if (vec_is_zero(ring, v)) continue;
                                auto it = per.find(s);
                                if (it == per.end())
                                    it = per.emplace(s, Matrix<R>(ring, (int)v.size(), L.dim(s))).first;
                                for (int i = 0; i < (int)v.size(); ++i)
                                    if (!ring.is_zero(v[i])) it->second.add_to(i, blk.offset + t, v[i]);
                            }
                        }
                    }
                });
            }
            for (auto& [s, m] : per)
                if (!m.is_zero()) F.blocks[{k, j}].insert_or_assign(s, std::move(m));
        }
    }
    return F;
}

// apply a block map to a basis tensor of the k-th power
template <ring R>
BlockVec<R> blockmap_apply(const BlockMap<R>& F, const PowerLayouts<R>& src,
                           const PowerLayouts<R>& dst, int k, int s, int flat) {
    BlockVec<R> out;
    out.degree = s + F.degree;
    for (int j = 1; j <= dst.n; ++j) {
        auto m = F.block(src, dst, k, j, s);
        if (m.rows() == 0) continue;
        auto v = m.col(flat);
        if (!vec_is_zero(src.V->ring(), v)) out.parts[j] = std::move(v);
    }
    return out;
}

// comultiplication splits of a basis tensor: (prefix, suffix) pairs
struct SplitRef {
    int j1, off1, j2, off2;
};

// Delta F = (F (x) G)-style pairings evaluated on basis tensors. Returns,
// for a basis tensor x of power k, the coefficient of each
// (power j1 basis, power j2 basis) pair under sum over splits of
// (F(x_1) (x) G(x_2)) with the Koszul sign (-1)^{|G| deg(x_1)}. Keys carry
// the degree of the left part so pair indices are unambiguous.
template <ring R>
using PairDecomp = std::map<std::tuple<int, int, int>, Matrix<R>>;

template <ring R>
PairDecomp<R> pair_through_splits(
    const BlockMap<R>& F, const BlockMap<R>& G, const PowerLayouts<R>& src,
    const PowerLayouts<R>& dst, int k, int s, int flat) {
    const R& ring = src.V->ring();
    PairDecomp<R> out;
    // unrank the basis tensor
    const typename TensorLayout<R>::Block* blk = nullptr;
    int local = flat;
    for (const auto& b : src.at(k).blocks_at(s)) {
        if (local < b.size + b.offset && local >= b.offset) { blk = &b; break; }
    }
    if (!blk) throw SpecViolation("pair_through_splits: basis index out of range");
    auto tuple = TensorLayout<R>::tuple_unrank(*blk, flat - blk->offset);
    const auto& md = blk->multidegree;
    for (int cut = 1; cut < k; ++cut) {
        std::vector<int> md1(md.begin(), md.begin() + cut), md2(md.begin() + cut, md.end());
        std::vector<int> t1(tuple.begin(), tuple.begin() + cut), t2(tuple.begin() + cut, tuple.end());
        int s1 = 0, s2 = 0;
        for (int d : md1) s1 += d;
        for (int d : md2) s2 += d;
        const auto* b1 = src.at(cut).find_block(s1, md1);
        const auto* b2 = src.at(k - cut).find_block(s2, md2);
        if (!b1 || !b2) throw SpecViolation("pair_through_splits: split block missing");
        int f1 = b1->offset + TensorLayout<R>::tuple_rank(*b1, t1);
        int f2 = b2->offset + TensorLayout<R>::tuple_rank(*b2, t2);
        auto Fx = blockmap_apply(F, src, dst, cut, s1, f1);
        auto Gx = blockmap_apply(G, src, dst, k - cut, s2, f2);
        int sgn = sign_of((long long)G.degree * s1);
        for (const auto& [j1, v1] : Fx.parts)
            for (const auto& [j2, v2] : Gx.parts) {
                auto key = std::make_tuple(j1, j2, Fx.degree);
                auto it = out.find(key);
                if (it == out.end())
                    it = out.emplace(key, Matrix<R>(ring, (int)v1.size() * (int)v2.size(), 1)).first;
                for (size_t a = 0; a < v1.size(); ++a) {
                    if (ring.is_zero(v1[a])) continue;
                    for (size_t b = 0; b < v2.size(); ++b) {
                        if (ring.is_zero(v2[b])) continue;
                        auto c = ring.mul(ring.from_int(sgn), ring.mul(v1[a], v2[b]));
                        it->second.add_to((int)(a * v2.size() + b), 0, c);
                    }
                }
            }
    }
    return out;
}

// Delta of a block vector: for each power-j part, split each basis tensor
template <ring R>
PairDecomp<R> comult_of_blockvec(const BlockVec<R>& x, const PowerLayouts<R>& L) {
    const R& ring = L.V->ring();
    PairDecomp<R> out;
    for (const auto& [j, v] : x.parts) {
        if (j < 2) continue;
        for (const auto& blk : L.at(j).blocks_at(x.degree)) {
            for (int t = 0; t < blk.size; ++t) {
                auto c = v[blk.offset + t];
                if (ring.is_zero(c)) continue;
                auto tuple = TensorLayout<R>::tuple_unrank(blk, t);
                const auto& md = blk.multidegree;
                for (int cut = 1; cut < j; ++cut) {
                    std::vector<int> md1(md.begin(), md.begin() + cut), md2(md.begin() + cut, md.end());
                    std::vector<int> t1(tuple.begin(), tuple.begin() + cut),
                        t2(tuple.begin() + cut, tuple.end());
                    int s1 = 0, s2 = 0;
                    for (int d : md1) s1 += d;
                    for (int d : md2) s2 += d;
                    const auto* b1 = L.at(cut).find_block(s1, md1);
                    const auto* b2 = L.at(j - cut).find_block(s2, md2);
                    if (!b1 || !b2) throw SpecViolation("comult: split block missing");
                    int f1 = b1->offset + TensorLayout<R>::tuple_rank(*b1, t1);
                    int f2 = b2->offset + TensorLayout<R>::tuple_rank(*b2, t2);
                    auto key = std::make_tuple(cut, j - cut, s1);
                    auto it = out.find(key);
                    if (it == out.end())
                        it = out.emplace(key, Matrix<R>(ring,
                                                        L.at(cut).dim(s1) * L.at(j - cut).dim(s2), 1))
                                 .first;
                    // the pair index convention matches pair_through_splits
                    it->second.add_to(f1 * L.at(j - cut).dim(s2) + f2, 0, c);
                }
            }
        }
    }
    return out;
}

// Delta_D F = (F (x) F) Delta_C, checked exactly on every basis tensor
template <ring R>
Verdict is_coalgebra_morphism(const BlockMap<R>& F, const PowerLayouts<R>& src,
                              const PowerLayouts<R>& dst) {
    const R& ring = src.V->ring();
    for (int k = 1; k <= src.n; ++k) {
        for (const auto& [s, dim] : src.at(k).total_dim) {
            for (int flat = 0; flat < dim; ++flat) {
                auto lhs = comult_of_blockvec(blockmap_apply(F, src, dst, k, s, flat), dst);
                auto rhs = pair_through_splits(F, F, src, dst, k, s, flat);
                // compare sparse maps
                for (const auto& [key, m] : lhs) {
                    auto it = rhs.find(key);
                    auto diff = it == rhs.end() ? m : m - it->second;
                    if (!diff.is_zero())
                        return {false, "coassociativity fails on power " + std::to_string(k)};
                }
                for (const auto& [key, m] : rhs) {
                    if (lhs.count(key)) continue;
                    if (!m.is_zero())
                        return {false, "coassociativity fails on power " + std::to_string(k)};
                }
            }
        }
    }
    return {true, ""};
}

// Delta_D R = (A (x) R + R (x) B) Delta_C for A = Psi^{-1}(alpha), B = Psi^{-1}(beta)
template <ring R>
Verdict is_coderivation(const BlockMap<R>& Rm, const BlockMap<R>& A, const BlockMap<R>& B,
                        const PowerLayouts<R>& src, const PowerLayouts<R>& dst) {
    const R& ring = src.V->ring();
    for (int k = 1; k <= src.n; ++k) {
        for (const auto& [s, dim] : src.at(k).total_dim) {
            for (int flat = 0; flat < dim; ++flat) {
                auto lhs = comult_of_blockvec(blockmap_apply(Rm, src, dst, k, s, flat), dst);
                auto t1 = pair_through_splits(A, Rm, src, dst, k, s, flat);
                auto t2 = pair_through_splits(Rm, B, src, dst, k, s, flat);
                auto rhs = t1;
                for (const auto& [key, m] : t2) {
                    auto it = rhs.find(key);
                    if (it == rhs.end()) rhs.emplace(key, m);
                    else it->second = it->second + m;
                }
                for (const auto& [key, m] : lhs) {
                    auto it = rhs.find(key);
                    auto diff = it == rhs.end() ? m : m - it->second;
                    if (!diff.is_zero())
                        return {false, "coderivation rule fails on power " + std::to_string(k)};
                }
                for (const auto& [key, m] : rhs) {
                    if (lhs.count(key)) continue;
                    if (!m.is_zero())
                        return {false, "coderivation rule fails on power " + std::to_string(k)};
                }
            }
        }
    }
    return {true, ""};
}

// composite mu . F as an hhc tower: (mu F)^k = sum_j mu^j pi_j F|_{power k}
template <ring R>
MultiMap<R> tower_after_blockmap(const MultiMap<R>& mu, const BlockMap<R>& F,
                                 const PowerLayouts<R>& src, const PowerLayouts<R>& dst) {
    const R& ring = mu.ring();
    MultiMap<R> out(src.V, mu.target(), mu.degree() + F.degree, 1, src.n);
    auto col = [&](int k, const std::vector<int>& md, const std::vector<int>& tuple) {
        int s = 0;
        for (int d : md) s += d;
        int total = s + F.degree + mu.degree();
        Vec<R> acc = zero_vec(ring, mu.target()->dim(total));
        const auto* blk = src.at(k).find_block(s, md);
        if (!blk) return acc;
        int flat = blk->offset + TensorLayout<R>::tuple_rank(*blk, tuple);
        auto Fx = blockmap_apply(F, src, dst, k, s, flat);
        for (const auto& [j, v] : Fx.parts) {
            if (j < std::max(1, mu.lmin()) || j > mu.lmax()) continue;
            for (const auto& jb : dst.at(j).blocks_at(Fx.degree)) {
                for (int t = 0; t < jb.size; ++t) {
                    auto c = v[jb.offset + t];
                    if (ring.is_zero(c)) continue;
                    auto tup = TensorLayout<R>::tuple_unrank(jb, t);
                    auto w = mu.eval(j, jb.multidegree, tup);
                    for (size_t i = 0; i < w.size(); ++i)
                        if (!ring.is_zero(w[i])) acc[i] = ring.add(acc[i], ring.mul(c, w[i]));
                }
            }
        }
        return acc;
    };
    return build_componentwise(src.V, mu.target(), mu.degree() + F.degree, 1, src.n, col);
}

// composite of block maps: (G . F), source powers of F, target powers of G
template <ring R>
BlockMap<R> blockmap_compose(const BlockMap<R>& G, const BlockMap<R>& F, const PowerLayouts<R>& src,
                             const PowerLayouts<R>& mid, const PowerLayouts<R>& dst) {
    BlockMap<R> out;
    out.degree = F.degree + G.degree;
    for (const auto& [ik, per] : F.blocks) {
        auto [i, k] = ik;
        for (const auto& [s, mF] : per) {
            for (int j = 1; j <= dst.n; ++j) {
                auto mG = G.block(mid, dst, k, j, s + F.degree);
                if (mG.rows() == 0 || mG.cols() == 0) continue;
                auto prod = mG * mF;
                if (prod.is_zero()) continue;
                auto& slot = out.blocks[{i, j}];
                auto it = slot.find(s);
                if (it == slot.end()) slot.emplace(s, std::move(prod));
                else it->second = it->second + prod;
            }
        }
    }
    return out;
}

// extract the power-1 blocks of a block map as an hhc tower
template <ring R>
MultiMap<R> pi1_tower(const BlockMap<R>& F, const PowerLayouts<R>& src, const PowerLayouts<R>& dst) {
    MultiMap<R> out(src.V, dst.V, F.degree, 1, src.n);
    for (int k = 1; k <= src.n; ++k) {
        for (const auto& [s, dim] : src.at(k).total_dim) {
            auto m = F.block(src, dst, k, 1, s);
            if (m.is_zero()) continue;
            for (const auto& blk : src.at(k).blocks_at(s)) {
                Matrix<R> sub = m.cols_slice(blk.offset, blk.offset + blk.size);
                if (!sub.is_zero()) out.set_component(k, blk.multidegree, sub);
            }
        }
    }
    return out;
}

// identity tower in tensor degree 1, for Phi_n = Phi_n^{1,1}
template <ring R>
MultiMap<R> identity_tower(const CxPtr<R>& V) {
    MultiMap<R> idt(V, V, 0, 1, 1);
    for (int d : V->support())
        idt.set_component(1, {d}, Matrix<R>::identity(V->ring(), V->dim(d)));
    return idt;
}

struct OracleReport {
    bool gerstenhaber_ok = false;
    bool star_ok = false;
    bool homotopy_star_ok = false;
    std::string detail;
    bool all_ok() const { return gerstenhaber_ok && star_ok && homotopy_star_ok; }
};

// Lemma-level identities, each side computed independently:
// mu in hhc(A,B), nuA in hhc(A,A); nuB in hhc(B,B); alpha, beta, r : A -> B
template <ring R>
OracleReport oracle_identities(const MultiMap<R>& mu, const MultiMap<R>& nuA, const MultiMap<R>& nuB,
                               const MultiMap<R>& alpha, const MultiMap<R>& beta, const MultiMap<R>& r,
                               int n) {
    OracleReport rep;
    auto LA = power_layouts(nuA.source(), n);
    auto LB = power_layouts(nuB.source(), n);
    // 1. (mu o nuA)^{<= n} = mu Phi_n^{-1}(nuA)
    {
        auto idt = identity_tower(nuA.source());
        auto D = phi_inverse(nuA.pi_leq(n), idt, idt, LA, LA);
        auto lhs = gerstenhaber(mu.pi_leq(n), nuA.pi_leq(n), n);
        auto rhs = tower_after_blockmap(mu.pi_leq(n), D, LA, LA);
        rep.gerstenhaber_ok = (lhs - rhs).is_zero();
        if (!rep.gerstenhaber_ok) rep.detail += "[gerstenhaber route mismatch]";
    }
    // 2. (nu_B * alpha)^{<= n} = nu_B Psi_n^{-1}(alpha)
    {
        auto F = psi_inverse(alpha.pi_leq(n), LA, LB);
        auto lhs = star(nuB, alpha.pi_leq(n), n);
        auto rhs = tower_after_blockmap(nuB.pi_leq(n), F, LA, LB);
        rep.star_ok = (lhs - rhs).is_zero();
        if (!rep.star_ok) rep.detail += "[star route mismatch]";
    }
    // 3. (nu_B (*) r)^{<= n} = nu_B (Phi_n^{alpha,beta})^{-1}(r)
    {
        auto F = phi_inverse(r.pi_leq(n), alpha.pi_leq(n), beta.pi_leq(n), LA, LB);
        auto lhs = homotopy_star(nuB, r.pi_leq(n), alpha.pi_leq(n), beta.pi_leq(n), n);
        auto rhs = tower_after_blockmap(nuB.pi_leq(n), F, LA, LB);
        rep.homotopy_star_ok = (lhs - rhs).is_zero();
        if (!rep.homotopy_star_ok) rep.detail += "[homotopy star route mismatch]";
    }
    return rep;
}

} // namespace ainfty
