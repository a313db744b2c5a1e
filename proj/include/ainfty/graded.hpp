#pragma once
// Graded modules, chain complexes, suspension, tensor complexes and the
// Koszul sign engine. Every complex carries an explicit validity window;
// queries outside the window raise WindowError instead of silently
// returning zero, since truncated resolutions are only trustworthy inside
// the range they were computed on.

#include "presentation.hpp"

#include <climits>
#include <functional>
#include <memory>
#include <set>
#include <string>

namespace ainfty {

constexpr int WIN_MIN = INT_MIN / 4;
constexpr int WIN_MAX = INT_MAX / 4;

struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Window {
    int lo = WIN_MIN;
    int hi = WIN_MAX;

    bool contains(int d) const { return d >= lo && d <= hi; }
    bool unbounded_below() const { return lo == WIN_MIN; }
    bool unbounded_above() const { return hi == WIN_MAX; }
    Window meet(const Window& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
    Window shifted(int k) const {
        return {unbounded_below() ? WIN_MIN : lo + k, unbounded_above() ? WIN_MAX : hi + k};
    }
    std::string str() const {
        std::string a = unbounded_below() ? "-inf" : std::to_string(lo);
        std::string b = unbounded_above() ? "+inf" : std::to_string(hi);
        return "[" + a + ", " + b + "]";
    }
};

struct Verdict {
    bool ok = false;
    std::string detail;
    explicit operator bool() const { return ok; }
};

inline int sign_of(long long parity) { return (parity % 2 + 2) % 2 == 0 ? 1 : -1; }

template <ring R>
class GradedModule {
public:
    GradedModule(R ring, Window win = {}) : ring_(std::move(ring)), win_(win) {}

    const R& ring() const { return ring_; }
    const Window& window() const { return win_; }
    void set_window(Window w) { win_ = w; }

    void set_component(int d, Presentation<R> p, std::vector<std::string> labels = {}) {
        if (!win_.contains(d)) throw WindowError("component set outside window");
        if (!labels.empty() && (int)labels.size() != p.gens())
            throw DimensionError("label count != generator count");
        labels_[d] = std::move(labels);
        comps_.erase(d);
        comps_.emplace(d, std::move(p));
    }
    void set_free_component(int d, int n, std::vector<std::string> labels = {}) {
        set_component(d, Presentation<R>(ring_, n), std::move(labels));
    }

    void check_window(int d) const {
        if (!win_.contains(d))
            throw WindowError("degree " + std::to_string(d) + " outside validity window " + win_.str());
    }
    int dim(int d) const {
        check_window(d);
        auto it = comps_.find(d);
        return it == comps_.end() ? 0 : it->second.gens();
    }
    Presentation<R> pres(int d) const {
        check_window(d);
        auto it = comps_.find(d);
        return it == comps_.end() ? Presentation<R>(ring_, 0) : it->second;
    }
    Vec<R> reduce(int d, const Vec<R>& v) const {
        check_window(d);
        auto it = comps_.find(d);
        if (it == comps_.end()) {
            if (!v.empty()) throw DimensionError("element of zero component");
            return v;
        }
        return it->second.reduce(v);
    }
    bool is_free_at(int d) const {
        check_window(d);
        auto it = comps_.find(d);
        return it == comps_.end() || it->second.is_free();
    }

    std::vector<int> support() const {
        std::vector<int> out;
        for (const auto& [d, p] : comps_)
            if (p.gens() > 0 && !p.is_zero_module()) out.push_back(d);
        return out;
    }
    int min_support() const {
        auto s = support();
        return s.empty() ? 0 : s.front();
    }
    int max_support() const {
        auto s = support();
        return s.empty() ? 0 : s.back();
    }

    std::string label(int d, int i) const {
        auto it = labels_.find(d);
        if (it != labels_.end() && i < (int)it->second.size()) return it->second[i];
        return "g" + std::to_string(d) + "." + std::to_string(i);
    }
    const std::map<int, Presentation<R>>& components() const { return comps_; }

private:
    R ring_;
    Window win_;
    std::map<int, Presentation<R>> comps_;
    std::map<int, std::vector<std::string>> labels_;
};

struct SpecViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <ring R>
class ChainComplex {
public:
    ChainComplex(GradedModule<R> mod, std::map<int, Matrix<R>> diff, std::string name = "C")
        : mod_(std::move(mod)), diff_(std::move(diff)), name_(std::move(name)) {
        validate();
    }

    const R& ring() const { return mod_.ring(); }
    const GradedModule<R>& module() const { return mod_; }
    const Window& window() const { return mod_.window(); }
    const std::string& name() const { return name_; }

    int dim(int d) const { return mod_.dim(d); }
    Presentation<R> pres(int d) const { return mod_.pres(d); }
    Vec<R> reduce(int d, const Vec<R>& v) const { return mod_.reduce(d, v); }
    std::vector<int> support() const { return mod_.support(); }
    std::string label(int d, int i) const { return mod_.label(d, i); }

    // d_n : C_n -> C_{n-1}; both degrees must be inside the window
    Matrix<R> diff(int d) const {
        mod_.check_window(d);
        mod_.check_window(d - 1);
        auto it = diff_.find(d);
        if (it != diff_.end()) return it->second;
        return Matrix<R>(ring(), mod_.dim(d - 1), mod_.dim(d));
    }

    bool degreewise_free() const {
        for (const auto& [d, p] : mod_.components())
            if (!p.is_free()) return false;
        return true;
    }

    const std::map<int, Matrix<R>>& diffs() const { return diff_; }

private:
    void validate() const {
        for (const auto& [d, m] : diff_) {
            if (!mod_.window().contains(d) || !mod_.window().contains(d - 1)) continue;
            if (m.rows() != mod_.dim(d - 1) || m.cols() != mod_.dim(d))
                throw DimensionError("differential shape mismatch at degree " + std::to_string(d));
            // the differential must descend to the quotient by the relations
            auto rels = mod_.pres(d).rels();
            auto target = mod_.pres(d - 1);
            for (int j = 0; j < rels.cols(); ++j)
                if (!target.is_zero_elem(m.apply(rels.col(j))))
                    throw SpecViolation(name_ + ": differential does not respect relations at degree " +
                                        std::to_string(d));
        }
        for (const auto& [d, m] : diff_) {
            if (!mod_.window().contains(d - 2)) continue;
            auto it2 = diff_.find(d - 1);
            if (it2 == diff_.end()) continue;
            auto square = it2->second * m;
            auto target = mod_.pres(d - 2);
            for (int j = 0; j < square.cols(); ++j)
                if (!target.is_zero_elem(square.col(j)))
                    throw SpecViolation(name_ + ": d*d != 0 at degree " + std::to_string(d));
        }
    }

    GradedModule<R> mod_;
    std::map<int, Matrix<R>> diff_;
    std::string name_;
};

template <ring R>
using CxPtr = std::shared_ptr<const ChainComplex<R>>;

template <ring R>
CxPtr<R> make_complex(GradedModule<R> mod, std::map<int, Matrix<R>> diff, std::string name = "C") {
    return std::make_shared<const ChainComplex<R>>(std::move(mod), std::move(diff), std::move(name));
}

// Degree shift by k with differential scaled by (-1)^k; suspend = shift(1).
// Basis labels are reused, matching the convention that [x] in (Pi M)_{n+1}
// is the element corresponding to x in M_n.
template <ring R>
CxPtr<R> shift_complex(const CxPtr<R>& C, int k, std::string name = "") {
    GradedModule<R> mod(C->ring(), C->window().shifted(k));
    for (const auto& [d, p] : C->module().components()) {
        std::vector<std::string> labels;
        for (int i = 0; i < p.gens(); ++i) labels.push_back(C->label(d, i));
        mod.set_component(d + k, p, std::move(labels));
    }
    std::map<int, Matrix<R>> diff;
    for (const auto& [d, m] : C->diffs()) {
        if (!C->window().contains(d) || !C->window().contains(d - 1)) continue;
        if (m.is_zero()) continue;
        diff[d + k] = (k % 2 == 0) ? m : -m;
    }
    if (name.empty()) name = (k == 1 ? "Pi " : "shift ") + C->name();
    return make_complex(std::move(mod), std::move(diff), std::move(name));
}

template <ring R>
CxPtr<R> suspend(const CxPtr<R>& C) { return shift_complex(C, 1); }

// ---------------------------------------------------------------------------
// Tensor complexes.
//
// The basis of a tensor product is the set of lexicographically ordered
// tuples of factor basis elements, grouped by multidegree; within a fixed
// multidegree tuples are ranked in mixed-radix order. This fixed layout
// makes every downstream matrix reproducible.

template <ring R>
struct TensorLayout {
    std::vector<CxPtr<R>> factors;
    Window win;
    // per total degree: list of (multidegree, per-factor dims, flat offset)
    struct Block {
        std::vector<int> multidegree;
        std::vector<int> dims;
        int offset;
        int size;
    };
    std::map<int, std::vector<Block>> blocks;
    std::map<int, int> total_dim;

    const R& ring() const { return factors.at(0)->ring(); }

    void check_window(int d) const {
        if (!win.contains(d))
            throw WindowError("tensor degree " + std::to_string(d) + " outside window " + win.str());
    }
    int dim(int d) const {
        check_window(d);
        auto it = total_dim.find(d);
        return it == total_dim.end() ? 0 : it->second;
    }
    const std::vector<Block>& blocks_at(int d) const {
        check_window(d);
        static const std::vector<Block> empty;
        auto it = blocks.find(d);
        return it == blocks.end() ? empty : it->second;
    }
    const Block* find_block(int d, const std::vector<int>& md) const {
        for (const auto& b : blocks_at(d))
            if (b.multidegree == md) return &b;
        return nullptr;
    }
    static int tuple_rank(const Block& b, const std::vector<int>& tuple) {
        int r = 0;
        for (size_t i = 0; i < tuple.size(); ++i) r = r * b.dims[i] + tuple[i];
        return r;
    }
    static std::vector<int> tuple_unrank(const Block& b, int rank) {
        std::vector<int> t(b.dims.size());
        for (int i = (int)b.dims.size() - 1; i >= 0; --i) {
            t[i] = rank % b.dims[i];
            rank /= b.dims[i];
        }
        return t;
    }
};

// All factors must be degreewise free and fully known below (tensoring
// complexes with unknown low part, or with relations, is out of scope).
template <ring R>
TensorLayout<R> tensor_layout(std::vector<CxPtr<R>> factors) {
    if (factors.empty()) throw DimensionError("tensor of zero factors");
    TensorLayout<R> out;
    out.factors = factors;
    int hi = WIN_MAX;
    bool any_empty = false;
    std::vector<std::vector<int>> supports;
    int minsupp_total = 0;
    for (const auto& f : factors) {
        if (!f->degreewise_free())
            throw SpecViolation("tensor_complex: factor " + f->name() + " is not degreewise free");
        if (!f->window().unbounded_below())
            throw WindowError("tensor_complex: factor " + f->name() + " unknown below " +
                              std::to_string(f->window().lo));
        auto s = f->support();
        if (s.empty()) any_empty = true;
        else minsupp_total += s.front();
        supports.push_back(std::move(s));
    }
    for (size_t j = 0; j < factors.size(); ++j) {
        if (factors[j]->window().unbounded_above()) continue;
        int others = 0;
        for (size_t k = 0; k < factors.size(); ++k)
            if (k != j) others += supports[k].empty() ? 0 : supports[k].front();
        hi = std::min(hi, factors[j]->window().hi + others);
    }
    out.win = Window{WIN_MIN, hi};
    if (any_empty) return out; // zero complex

    // enumerate multidegrees over factor supports (clamped to windows)
    std::vector<int> md(factors.size());
    std::function<void(size_t, int)> rec = [&](size_t i, int sum) {
        if (i == factors.size()) {
            if (!out.win.contains(sum)) return;
            auto& blks = out.blocks[sum];
            int off = out.total_dim.count(sum) ? out.total_dim[sum] : 0;
            typename TensorLayout<R>::Block b;
            b.multidegree = md;
            int size = 1;
            for (size_t k = 0; k < factors.size(); ++k) {
                int dk = factors[k]->dim(md[k]);
                b.dims.push_back(dk);
                size *= dk;
            }
            b.offset = off;
            b.size = size;
            out.total_dim[sum] = off + size;
            blks.push_back(std::move(b));
            return;
        }
        for (int d : supports[i]) {
            if (!factors[i]->window().contains(d)) continue;
            md[i] = d;
            rec(i + 1, sum + d);
        }
    };
    rec(0, 0);
    // multidegree blocks must be ordered lexicographically: rebuild offsets
    for (auto& [deg, blks] : out.blocks) {
        std::sort(blks.begin(), blks.end(),
                  [](const auto& a, const auto& b) { return a.multidegree < b.multidegree; });
        int off = 0;
        for (auto& b : blks) {
            b.offset = off;
            off += b.size;
        }
        out.total_dim[deg] = off;
    }
    return out;
}

// Apply a tensor product of graded maps to a basis tensor with the Koszul
// rule (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y). Each map is given as
// (degree, matrix per source degree); identity slots pass nullptr.
template <ring R>
struct GradedMapSlot {
    int degree = 0;
    // matrix for a given source degree; absent means the map is zero there
    std::function<Matrix<R>(int)> at;
    bool is_identity = false;
};

// Result: vector over the target layout at degree (sum md + sum map degrees).
template <ring R>
Vec<R> koszul_apply(const TensorLayout<R>& src, const TensorLayout<R>& dst,
                    const std::vector<GradedMapSlot<R>>& maps,
                    const std::vector<int>& md, const std::vector<int>& tuple) {
    const R& ring = src.ring();
    if (maps.size() != src.factors.size()) throw DimensionError("koszul_apply arity mismatch");
    int total_map_deg = 0;
    for (const auto& m : maps) total_map_deg += m.degree;
    int src_deg = 0;
    for (int d : md) src_deg += d;
    int out_deg = src_deg + total_map_deg;
    dst.check_window(out_deg);
    Vec<R> result(dst.dim(out_deg), ring.zero());

    // sign: sum over i<j of |f_j| * |x_i|
    long long parity = 0;
    for (size_t j = 0; j < maps.size(); ++j)
        for (size_t i = 0; i < j; ++i) parity += (long long)maps[j].degree * md[i];
    auto base_sign = ring.from_int(sign_of(parity));

    // expand each slot image as (coeff, index) over the factor's component
    struct Term {
        typename R::Elem c;
        std::vector<int> idx;
        std::vector<int> degs;
    };
    std::vector<Term> terms;
    terms.push_back({base_sign, {}, {}});
    for (size_t k = 0; k < maps.size(); ++k) {
        std::vector<Term> next;
        int dk = md[k] + maps[k].degree;
        if (maps[k].is_identity) {
            for (auto& t : terms) {
                Term nt = t;
                nt.idx.push_back(tuple[k]);
                nt.degs.push_back(md[k]);
                next.push_back(std::move(nt));
            }
        } else {
            Matrix<R> m = maps[k].at(md[k]);
            for (auto& t : terms) {
                for (int i = 0; i < m.rows(); ++i) {
                    auto v = m.get(i, tuple[k]);
                    if (ring.is_zero(v)) continue;
                    Term nt = t;
                    nt.c = ring.mul(nt.c, v);
                    nt.idx.push_back(i);
                    nt.degs.push_back(dk);
                    next.push_back(std::move(nt));
                }
            }
        }
        terms = std::move(next);
    }
    for (const auto& t : terms) {
        const auto* blk = dst.find_block(out_deg, t.degs);
        if (!blk) throw SpecViolation("koszul_apply: image block missing from target layout");
        int r = TensorLayout<R>::tuple_rank(*blk, t.idx);
        result[blk->offset + r] = ring.add(result[blk->offset + r], t.c);
    }
    return result;
}

// The tensor complex: basis per TensorLayout, differential
// sum_j 1^{(x)j} (x) d (x) 1^{(x)(n-j-1)} with Koszul signs.
template <ring R>
std::pair<CxPtr<R>, TensorLayout<R>> tensor_complex(std::vector<CxPtr<R>> factors, std::string name = "") {
    auto layout = tensor_layout(factors);
    const R& ring = factors.at(0)->ring();
    GradedModule<R> mod(ring, layout.win);
    for (const auto& [d, n] : layout.total_dim)
        if (n > 0) mod.set_free_component(d, n);

    std::map<int, Matrix<R>> diff;
    for (const auto& [d, n] : layout.total_dim) {
        if (n == 0) continue;
        if (!layout.win.contains(d - 1)) continue;
        Matrix<R> m(ring, layout.dim(d - 1), n);
        for (const auto& blk : layout.blocks_at(d)) {
            for (int t = 0; t < blk.size; ++t) {
                auto tuple = TensorLayout<R>::tuple_unrank(blk, t);
                Vec<R> col(layout.dim(d - 1), ring.zero());
                for (size_t j = 0; j < factors.size(); ++j) {
                    // skip slots where the factor differential is out of window
                    if (!factors[j]->window().contains(blk.multidegree[j] - 1)) continue;
                    std::vector<GradedMapSlot<R>> maps;
                    for (size_t k = 0; k < factors.size(); ++k) {
                        GradedMapSlot<R> slot;
                        if (k == j) {
                            slot.degree = -1;
                            auto f = factors[j];
                            slot.at = [f](int sd) { return f->diff(sd); };
                        } else {
                            slot.is_identity = true;
                        }
                        maps.push_back(std::move(slot));
                    }
                    col = vec_add(ring, col, koszul_apply(layout, layout, maps, blk.multidegree, tuple));
                }
                for (int i = 0; i < (int)col.size(); ++i)
                    if (!ring.is_zero(col[i])) m.set(i, blk.offset + t, col[i]);
            }
        }
        if (!m.is_zero()) diff[d] = std::move(m);
    }
    if (name.empty()) {
        name = "(";
        for (size_t i = 0; i < factors.size(); ++i)
            name += (i ? " (x) " : "") + factors[i]->name();
        name += ")";
    }
    return {make_complex(std::move(mod), std::move(diff), std::move(name)), std::move(layout)};
}

// ---------------------------------------------------------------------------

template <ring R>
struct ChainMap {
    CxPtr<R> source, target;
    int degree = 0;
    std::map<int, Matrix<R>> comps; // degree d: source_d -> target_{d+degree}

    Matrix<R> at(int d) const {
        source->module().check_window(d);
        target->module().check_window(d + degree);
        auto it = comps.find(d);
        if (it != comps.end()) return it->second;
        return Matrix<R>(source->ring(), target->dim(d + degree), source->dim(d));
    }

    Vec<R> apply(int d, const Vec<R>& v) const { return target->reduce(d + degree, at(d).apply(v)); }
};

// delta_N f - (-1)^{|f|} f delta_M = 0, checked exactly on the window.
template <ring R>
Verdict is_chain_map(const ChainMap<R>& f, Window w) {
    const R& ring = f.source->ring();
    w = w.meet(f.source->window()).meet(f.target->window().shifted(-f.degree));
    for (int d : f.source->support()) {
        if (!w.contains(d) || !w.contains(d - 1)) continue;
        if (!f.target->window().contains(d + f.degree - 1)) continue;
        auto lhs = f.target->diff(d + f.degree) * f.at(d);
        auto rhs = f.at(d - 1) * f.source->diff(d);
        auto diff = (f.degree % 2 == 0) ? lhs - rhs : lhs + rhs;
        auto pres = f.target->pres(d + f.degree - 1);
        for (int j = 0; j < diff.cols(); ++j)
            if (!pres.is_zero_elem(diff.col(j)))
                return {false, "chain map equation fails at degree " + std::to_string(d) +
                                   " on generator " + f.source->label(d, j)};
    }
    return {true, ""};
}

// (Pi f)[m] = [f(m)]: shift a degree-0 chain map along with its complexes
template <ring R>
ChainMap<R> shift_map(const ChainMap<R>& f, const CxPtr<R>& shifted_source,
                      const CxPtr<R>& shifted_target, int k) {
    ChainMap<R> out{shifted_source, shifted_target, f.degree, {}};
    for (const auto& [d, m] : f.comps) out.comps.insert_or_assign(d + k, m);
    return out;
}

// Mapping cone of a degree-0 chain map: cone_n = M_{n-1} + N_n with
// d(m, x) = (-d m, q m + d x).
template <ring R>
CxPtr<R> cone(const ChainMap<R>& q) {
    if (q.degree != 0) throw SpecViolation("cone expects a degree-0 map");
    const R& ring = q.source->ring();
    Window w = q.source->window().shifted(1).meet(q.target->window());
    GradedModule<R> mod(ring, w);
    auto dims = [&](int n) {
        return std::pair<int, int>{q.source->dim(n - 1), q.target->dim(n)};
    };
    std::set<int> degs;
    for (int d : q.source->support()) degs.insert(d + 1);
    for (int d : q.target->support()) degs.insert(d);
    for (int n : degs) {
        if (!w.contains(n)) continue;
        auto [a, b] = dims(n);
        if (a + b == 0) continue;
        auto pa = q.source->pres(n - 1);
        auto pb = q.target->pres(n);
        Matrix<R> rels(ring, a + b, pa.rels().cols() + pb.rels().cols());
        for (const auto& [ij, v] : pa.rels().entries()) rels.set(ij.first, ij.second, v);
        for (const auto& [ij, v] : pb.rels().entries())
            rels.set(a + ij.first, pa.rels().cols() + ij.second, v);
        mod.set_component(n, Presentation<R>(ring, a + b, rels));
    }
    std::map<int, Matrix<R>> diff;
    for (int n : degs) {
        if (!w.contains(n) || !w.contains(n - 1)) continue;
        auto [a, b] = dims(n);
        auto [a2, b2] = dims(n - 1);
        if (a + b == 0 || a2 + b2 == 0) continue;
        Matrix<R> m(ring, a2 + b2, a + b);
        if (a > 0 && a2 > 0 && q.source->window().contains(n - 1) && q.source->window().contains(n - 2)) {
            auto dm = q.source->diff(n - 1);
            for (const auto& [ij, v] : dm.entries()) m.set(ij.first, ij.second, ring.neg(v));
        }
        if (a > 0 && b2 > 0) {
            auto qm = q.at(n - 1);
            for (const auto& [ij, v] : qm.entries()) m.set(a2 + ij.first, ij.second, v);
        }
        if (b > 0 && b2 > 0) {
            auto dn = q.target->diff(n);
            for (const auto& [ij, v] : dn.entries()) m.set(a2 + ij.first, a + ij.second, v);
        }
        if (!m.is_zero()) diff[n] = std::move(m);
    }
    return make_complex(std::move(mod), std::move(diff), "cone(" + q.source->name() + " -> " + q.target->name() + ")");
}

// H_n = ker d_n / im d_{n+1}; requires degree n+1 inside the window.
template <ring R>
Presentation<R> homology_at(const ChainComplex<R>& C, int n) {
    C.module().check_window(n + 1);
    C.module().check_window(n - 1);
    const R& ring = C.ring();
    auto relsn = C.pres(n).rels();
    auto Z = kernel_mod(C.diff(n), C.pres(n - 1).rels());
    Matrix<R> den = C.diff(n + 1).hcat(relsn);
    return present_subquotient(Z, den);
}

template <ring R>
std::map<int, Presentation<R>> homology(const CxPtr<R>& C, Window w) {
    std::map<int, Presentation<R>> out;
    w = w.meet({C->window().lo == WIN_MIN ? WIN_MIN : C->window().lo + 1,
                C->window().hi == WIN_MAX ? WIN_MAX : C->window().hi - 1});
    std::set<int> degs;
    for (int d : C->support()) {
        for (int k = -1; k <= 1; ++k)
            if (w.contains(d + k)) degs.insert(d + k);
    }
    for (int n : degs) out.emplace(n, homology_at(*C, n));
    return out;
}

template <ring R>
bool homology_vanishes_at(const ChainComplex<R>& C, int n) {
    return homology_at(C, n).is_zero_module();
}

struct QuasiIsoWitness {
    bool ok = false;
    std::string reason;
    Window surjective_checked;
    Window acyclic_checked;
    explicit operator bool() const { return ok; }
};

// verdict true iff q is surjective in every window degree and cone(q) has
// vanishing homology on the interior of the window.
template <ring R>
QuasiIsoWitness is_surjective_quasi_iso(const ChainMap<R>& q, Window w) {
    QuasiIsoWitness out;
    if (q.degree != 0) {
        out.reason = "map is not of degree 0";
        return out;
    }
    w = w.meet(q.source->window()).meet(q.target->window());
    out.surjective_checked = w;
    const R& ring = q.source->ring();
    for (int d : q.target->support()) {
        if (!w.contains(d)) continue;
        auto rels = q.target->pres(d).rels();
        auto m = q.at(d);
        for (int i = 0; i < q.target->dim(d); ++i) {
            Vec<R> e = zero_vec(ring, q.target->dim(d));
            e[i] = ring.one();
            if (!solve_mod(m, rels, e)) {
                out.reason = "not surjective in degree " + std::to_string(d) + " at generator " +
                             q.target->label(d, i);
                return out;
            }
        }
    }
    auto cn = cone(q);
    Window interior = {cn->window().lo == WIN_MIN ? WIN_MIN : cn->window().lo + 1,
                       cn->window().hi == WIN_MAX ? WIN_MAX : cn->window().hi - 1};
    out.acyclic_checked = interior;
    std::set<int> degs;
    for (int d : cn->support())
        for (int k = -1; k <= 1; ++k)
            if (interior.contains(d + k)) degs.insert(d + k);
    for (int n : degs) {
        if (!homology_vanishes_at(*cn, n)) {
            out.reason = "cone has homology in degree " + std::to_string(n);
            return out;
        }
    }
    out.ok = true;
    return out;
}

} // namespace ainfty
