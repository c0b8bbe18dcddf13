#include <algorithm>
#include <unordered_set>

#include "idealab/expr.hpp"

namespace idealab {

namespace {

using U128 = unsigned __int128;
constexpr Nat kNatMax = ~Nat(0);
constexpr std::size_t kFsGeneratorCap = 20;

std::vector<Nat> sorted_unique(std::vector<Nat> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Nat> merge_union(const std::vector<Nat>& a, const std::vector<Nat>& b) {
    std::vector<Nat> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Nat> merge_intersection(const std::vector<Nat>& a, const std::vector<Nat>& b) {
    std::vector<Nat> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Nat> merge_difference(const std::vector<Nat>& a, const std::vector<Nat>& b) {
    std::vector<Nat> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool sorted_contains(const std::vector<Nat>& v, Nat x) {
    return std::binary_search(v.begin(), v.end(), x);
}

// Linear-scan window branches refuse absurd bounds instead of thrashing.
void check_scan_bound(Nat bound) {
    if (bound > (Nat(1) << 26))
        throw effort_exceeded("window bound " + std::to_string(bound) +
                              " too large for element-wise evaluation");
}

BigInt count_sorted_below(const std::vector<Nat>& v, const BigInt& n) {
    if (n <= 0) return 0;
    auto nn = to_nat(n);
    if (!nn) return BigInt(static_cast<unsigned long>(v.size()));
    auto it = std::lower_bound(v.begin(), v.end(), *nn);
    return BigInt(static_cast<unsigned long>(it - v.begin()));
}

}  // namespace

using SNode = SetExpr::Node;

CountFn CountFn::constant_count(BigInt c) {
    CountFn f;
    f.kind = Kind::Constant;
    if (c < 0) throw malformed("negative block count");
    f.constant = std::move(c);
    return f;
}

CountFn CountFn::scaled_length(Rat b, RoundMode r) {
    if (b < 0) throw malformed("negative block-count scale");
    CountFn f;
    f.kind = Kind::ScaledLength;
    f.scale = std::move(b);
    f.round = r;
    return f;
}

CountFn CountFn::scaled_start(Rat b, RoundMode r, int shift) {
    if (b < 0) throw malformed("negative block-count scale");
    CountFn f;
    f.kind = Kind::ScaledStart;
    f.scale = std::move(b);
    f.round = r;
    f.index_shift = shift;
    return f;
}

BigInt CountFn::eval(const GridSchedule& sched, std::size_t n, const BigInt& len) const {
    BigInt c;
    switch (kind) {
        case Kind::Constant:
            c = constant;
            break;
        case Kind::ScaledLength: {
            Rat v = scale * Rat(len);
            c = round == RoundMode::Floor ? rat_floor(v) : rat_nearest(v);
            break;
        }
        case Kind::ScaledStart: {
            long idx = static_cast<long>(n) + index_shift;
            if (idx < 0) return 0;
            Rat v = scale * Rat(sched.start(static_cast<std::size_t>(idx)));
            c = round == RoundMode::Floor ? rat_floor(v) : rat_nearest(v);
            break;
        }
    }
    if (c < 0) c = 0;
    if (c > len) c = len;
    return c;
}

// ---------------------------------------------------------------------------
// Constructors

SetExpr SetExpr::explicit_set(std::vector<Nat> elems, BaseSpace space) {
    return SetExpr(std::make_shared<Node>(Node{SNode::Explicit{sorted_unique(std::move(elems))}}),
                   space);
}
SetExpr SetExpr::cofinite(std::vector<Nat> excluded, BaseSpace space) {
    return SetExpr(std::make_shared<Node>(Node{SNode::Cofinite{sorted_unique(std::move(excluded))}}),
                   space);
}
SetExpr SetExpr::empty(BaseSpace space) { return explicit_set({}, space); }
SetExpr SetExpr::full(BaseSpace space) { return cofinite({}, space); }
SetExpr SetExpr::squares() {
    return SetExpr(std::make_shared<Node>(Node{SNode::Squares{}}), BaseSpace::omega());
}
SetExpr SetExpr::powers(Nat base) {
    if (base < 2) throw malformed("powers generator needs base >= 2");
    return SetExpr(std::make_shared<Node>(Node{SNode::Powers{base}}), BaseSpace::omega());
}
SetExpr SetExpr::ap(Nat start, Nat step) {
    if (step == 0) throw malformed("arithmetic progression needs step >= 1");
    return SetExpr(std::make_shared<Node>(Node{SNode::AP{start, step}}), BaseSpace::omega());
}
SetExpr SetExpr::fs_set(std::vector<Nat> generators) {
    auto gens = sorted_unique(std::move(generators));
    if (!gens.empty() && gens.front() == 0) throw malformed("fs-set generators must be positive");
    if (gens.size() > kFsGeneratorCap)
        throw effort_exceeded("fs-set generator larger than " + std::to_string(kFsGeneratorCap));
    // All nonempty subset sums, deduplicated.
    std::vector<Nat> sums{0};
    for (Nat g : gens) {
        std::vector<Nat> next;
        next.reserve(sums.size() * 2);
        for (Nat s : sums) {
            if (s > kNatMax - g) throw malformed("fs-set sums overflow");
            next.push_back(s);
            next.push_back(s + g);
        }
        sums = sorted_unique(std::move(next));
    }
    sums.erase(sums.begin());  // drop the empty sum
    return SetExpr(std::make_shared<Node>(Node{SNode::FS{std::move(gens), std::move(sums)}}),
                   BaseSpace::omega());
}
SetExpr SetExpr::block_rule(GridSchedule sched, BlockRuleSpec rule) {
    return SetExpr(std::make_shared<Node>(Node{SNode::BlockRule{std::move(sched), std::move(rule)}}),
                   BaseSpace::omega());
}
SetExpr SetExpr::set_union(SetExpr a, SetExpr b) {
    if (a.space() != b.space()) throw space_mismatch("union over different base spaces");
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Union{std::move(a), std::move(b)}}), sp);
}
SetExpr SetExpr::set_intersection(SetExpr a, SetExpr b) {
    if (a.space() != b.space()) throw space_mismatch("intersection over different base spaces");
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Intersection{std::move(a), std::move(b)}}), sp);
}
SetExpr SetExpr::set_difference(SetExpr a, SetExpr b) {
    if (a.space() != b.space()) throw space_mismatch("difference over different base spaces");
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Difference{std::move(a), std::move(b)}}), sp);
}
SetExpr SetExpr::complement(SetExpr a) {
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Complement{std::move(a)}}), sp);
}
SetExpr SetExpr::image(InjectionExpr f, SetExpr a) {
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Image{std::move(f), std::move(a)}}), sp);
}
SetExpr SetExpr::preimage(InjectionExpr f, SetExpr a) {
    BaseSpace sp = a.space();
    return SetExpr(std::make_shared<Node>(Node{SNode::Preimage{std::move(f), std::move(a)}}), sp);
}
namespace {

// Sections distribute over boolean structure; pushing them down exposes the
// factors to the structural analyses (infinitude, density, counting).
std::optional<SetExpr> section_pushdown(const SetExpr& a, Nat index, bool by_first) {
    const BaseSpace sp = a.space();
    auto recurse = [&](const SetExpr& e) { return section_pushdown(e, index, by_first); };
    if (auto* p = std::get_if<SNode::Product>(&a.node().v)) {
        const SetExpr& on = by_first ? p->left : p->right;
        const SetExpr& other = by_first ? p->right : p->left;
        return on.contains(index) ? other : SetExpr::empty();
    }
    if (auto* u = std::get_if<SNode::Union>(&a.node().v)) {
        auto l = recurse(u->a), r = recurse(u->b);
        if (l && r) return SetExpr::set_union(*l, *r);
        return std::nullopt;
    }
    if (auto* i = std::get_if<SNode::Intersection>(&a.node().v)) {
        auto l = recurse(i->a), r = recurse(i->b);
        if (l && r) return SetExpr::set_intersection(*l, *r);
        return std::nullopt;
    }
    if (auto* d = std::get_if<SNode::Difference>(&a.node().v)) {
        auto l = recurse(d->a), r = recurse(d->b);
        if (l && r) return SetExpr::set_difference(*l, *r);
        return std::nullopt;
    }
    if (auto* c = std::get_if<SNode::Complement>(&a.node().v)) {
        auto inner = recurse(c->a);
        if (inner) return SetExpr::complement(*inner);
        return std::nullopt;
    }
    if (auto* e = std::get_if<SNode::Explicit>(&a.node().v)) {
        std::vector<Nat> sec;
        for (Nat code : e->elems) {
            auto pt = sp.decode(code);
            if (pt[by_first ? 0 : 1] == index) sec.push_back(pt[by_first ? 1 : 0]);
        }
        return SetExpr::explicit_set(std::move(sec));
    }
    if (auto* g = std::get_if<SNode::GridSet>(&a.node().v)) {
        std::vector<Nat> sec;
        Nat v_on = by_first ? g->v1 : g->v2;
        Nat v_other = by_first ? g->v2 : g->v1;
        if (index >= v_on + g->alpha && (index - v_on) % g->alpha == 0 &&
            (index - v_on) / g->alpha <= g->side) {
            for (Nat t = 1; t <= g->side; ++t) sec.push_back(v_other + g->alpha * t);
        }
        return SetExpr::explicit_set(std::move(sec));
    }
    if (std::get_if<SNode::LowerTriangle>(&a.node().v)) {
        if (by_first) {
            // {j : j <= index}
            std::vector<Nat> sec(index + 1);
            for (Nat j = 0; j <= index; ++j) sec[j] = j;
            return SetExpr::explicit_set(std::move(sec));
        }
        return SetExpr::ap(index, 1);  // {i : i >= index}
    }
    return std::nullopt;
}

}  // namespace

SetExpr SetExpr::column(SetExpr a, Nat index) {
    if (!a.space().is_pair_space()) throw space_mismatch("column section needs a pair space");
    if (auto pushed = section_pushdown(a, index, /*by_first=*/true)) return *pushed;
    return SetExpr(std::make_shared<Node>(Node{SNode::Column{std::move(a), index}}),
                   BaseSpace::omega());
}
SetExpr SetExpr::row_section(SetExpr a, Nat index) {
    if (!a.space().is_pair_space()) throw space_mismatch("row section needs a pair space");
    if (auto pushed = section_pushdown(a, index, /*by_first=*/false)) return *pushed;
    return SetExpr(std::make_shared<Node>(Node{SNode::RowSec{std::move(a), index}}),
                   BaseSpace::omega());
}
SetExpr SetExpr::product(SetExpr left, SetExpr right, BaseSpace space) {
    if (!space.is_pair_space()) throw space_mismatch("product needs a pair space");
    if (left.space() != BaseSpace::omega() || right.space() != BaseSpace::omega())
        throw space_mismatch("product factors live on omega");
    return SetExpr(std::make_shared<Node>(Node{SNode::Product{std::move(left), std::move(right)}}),
                   space);
}
SetExpr SetExpr::lower_triangle() {
    return SetExpr(std::make_shared<Node>(Node{SNode::LowerTriangle{}}), BaseSpace::omega_squared());
}
SetExpr SetExpr::subsets_of(SetExpr s, unsigned n) {
    if (n == 0) throw malformed("subsets-of needs n >= 1");
    if (s.space() != BaseSpace::omega()) throw space_mismatch("subsets-of base lives on omega");
    return SetExpr(std::make_shared<Node>(Node{SNode::SubsetsOf{std::move(s), n}}),
                   BaseSpace::n_subsets(n));
}
SetExpr SetExpr::grid_set(Nat v1, Nat v2, Nat alpha, Nat side) {
    if (alpha == 0 || side == 0) throw malformed("grid set needs alpha, side >= 1");
    return SetExpr(std::make_shared<Node>(Node{SNode::GridSet{v1, v2, alpha, side}}),
                   BaseSpace::omega_squared());
}

SetExpr SetExpr::with_annotation(Annotation a) const {
    SetExpr copy = *this;
    copy.annotation_ = std::move(a);
    return copy;
}

bool SetExpr::same_as(const SetExpr& other) const {
    if (node_ == other.node_) return true;
    if (space_ != other.space_) return false;
    if (node_->v.index() != other.node_->v.index()) return false;
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            const auto& o = std::get<T>(other.node_->v);
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                return n.elems == o.elems;
            } else if constexpr (std::is_same_v<T, SNode::Cofinite>) {
                return n.excluded == o.excluded;
            } else if constexpr (std::is_same_v<T, SNode::Squares> ||
                                 std::is_same_v<T, SNode::LowerTriangle>) {
                return true;
            } else if constexpr (std::is_same_v<T, SNode::Powers>) {
                return n.base == o.base;
            } else if constexpr (std::is_same_v<T, SNode::AP>) {
                return n.start == o.start && n.step == o.step;
            } else if constexpr (std::is_same_v<T, SNode::FS>) {
                return n.gens == o.gens;
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                if (!(n.sched == o.sched) || n.rule.kind != o.rule.kind) return false;
                if (n.rule.kind == BlockRuleSpec::Kind::IndexSet)
                    return n.rule.index_set->same_as(*o.rule.index_set);
                return n.rule.count.kind == o.rule.count.kind &&
                       n.rule.count.constant == o.rule.count.constant &&
                       n.rule.count.scale == o.rule.count.scale &&
                       n.rule.arith_offset == o.rule.arith_offset &&
                       n.rule.arith_step == o.rule.arith_step;
            } else if constexpr (std::is_same_v<T, SNode::Union> ||
                                 std::is_same_v<T, SNode::Intersection> ||
                                 std::is_same_v<T, SNode::Difference>) {
                return n.a.same_as(o.a) && n.b.same_as(o.b);
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                return n.a.same_as(o.a);
            } else if constexpr (std::is_same_v<T, SNode::Column> ||
                                 std::is_same_v<T, SNode::RowSec>) {
                return n.index == o.index && n.a.same_as(o.a);
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                return n.left.same_as(o.left) && n.right.same_as(o.right);
            } else if constexpr (std::is_same_v<T, SNode::SubsetsOf>) {
                return n.n == o.n && n.s.same_as(o.s);
            } else if constexpr (std::is_same_v<T, SNode::GridSet>) {
                return n.v1 == o.v1 && n.v2 == o.v2 && n.alpha == o.alpha && n.side == o.side;
            } else {
                return false;  // images/preimages: map equality is not tracked
            }
        },
        node_->v);
}

// ---------------------------------------------------------------------------
// Membership

bool SetExpr::contains(Nat x) const {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                return sorted_contains(n.elems, x);
            } else if constexpr (std::is_same_v<T, SNode::Cofinite>) {
                return !sorted_contains(n.excluded, x);
            } else if constexpr (std::is_same_v<T, SNode::Squares>) {
                BigInt r = isqrt_big(big_of(x));
                return r * r == big_of(x);
            } else if constexpr (std::is_same_v<T, SNode::Powers>) {
                if (x == 0) return false;
                Nat v = x;
                while (v % n.base == 0) v /= n.base;
                return v == 1;
            } else if constexpr (std::is_same_v<T, SNode::AP>) {
                return x >= n.start && (x - n.start) % n.step == 0;
            } else if constexpr (std::is_same_v<T, SNode::FS>) {
                return sorted_contains(n.sums, x);
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                auto blk = n.sched.block_of(big_of(x));
                if (!blk) return false;
                BigInt len = n.sched.length(*blk);
                BigInt pos = big_of(x) - n.sched.start(*blk);
                switch (n.rule.kind) {
                    case BlockRuleSpec::Kind::All: return true;
                    case BlockRuleSpec::Kind::None: return false;
                    case BlockRuleSpec::Kind::First:
                        return pos < n.rule.count.eval(n.sched, *blk, len);
                    case BlockRuleSpec::Kind::Last:
                        return pos >= len - n.rule.count.eval(n.sched, *blk, len);
                    case BlockRuleSpec::Kind::Arithmetic: {
                        if (pos < big_of(n.rule.arith_offset)) return false;
                        BigInt rel = pos - big_of(n.rule.arith_offset);
                        return rel % big_of(n.rule.arith_step) == 0;
                    }
                    case BlockRuleSpec::Kind::IndexSet:
                        return *blk <= kNatMax && n.rule.index_set->contains(Nat(*blk));
                }
                return false;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                return n.a.contains(x) || n.b.contains(x);
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                return n.a.contains(x) && n.b.contains(x);
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return n.a.contains(x) && !n.b.contains(x);
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                return !n.a.contains(x);
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                auto pre = n.f.invert(x);
                return pre && n.a.contains(*pre);
            } else if constexpr (std::is_same_v<T, SNode::Preimage>) {
                auto y = n.f.apply(x);
                return y && n.a.contains(*y);
            } else if constexpr (std::is_same_v<T, SNode::Column>) {
                return n.a.contains(n.a.space().encode({n.index, x}));
            } else if constexpr (std::is_same_v<T, SNode::RowSec>) {
                return n.a.contains(n.a.space().encode({x, n.index}));
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                auto pt = space_.decode(x);
                return n.left.contains(pt[0]) && n.right.contains(pt[1]);
            } else if constexpr (std::is_same_v<T, SNode::LowerTriangle>) {
                auto pt = pair_decode(x);
                return pt[0] >= pt[1];
            } else if constexpr (std::is_same_v<T, SNode::SubsetsOf>) {
                for (Nat e : space_.decode(x))
                    if (!n.s.contains(e)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, SNode::GridSet>) {
                auto pt = pair_decode(x);
                auto in_leg = [&](Nat c, Nat v) {
                    if (c < v + n.alpha) return false;
                    Nat rel = c - v;
                    return rel % n.alpha == 0 && rel / n.alpha <= n.side;
                };
                return in_leg(pt[0], n.v1) && in_leg(pt[1], n.v2);
            }
        },
        node_->v);
}

// ---------------------------------------------------------------------------
// Windows

Window SetExpr::window(Nat bound) const {
    Window w;
    w.bound = bound;
    w.elems = std::visit(
        [&](const auto& n) -> std::vector<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                auto it = std::lower_bound(n.elems.begin(), n.elems.end(), bound);
                return std::vector<Nat>(n.elems.begin(), it);
            } else if constexpr (std::is_same_v<T, SNode::Cofinite>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                out.reserve(bound);
                for (Nat x = 0; x < bound; ++x)
                    if (!sorted_contains(n.excluded, x)) out.push_back(x);
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Squares>) {
                std::vector<Nat> out;
                for (Nat k = 0;; ++k) {
                    if (k >= (Nat(1) << 32)) break;
                    Nat sq = k * k;
                    if (sq >= bound) break;
                    out.push_back(sq);
                }
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Powers>) {
                std::vector<Nat> out;
                for (U128 v = 1; v < bound; v *= n.base) out.push_back(Nat(v));
                return out;
            } else if constexpr (std::is_same_v<T, SNode::AP>) {
                std::vector<Nat> out;
                for (U128 x = n.start; x < bound; x += n.step) out.push_back(Nat(x));
                return out;
            } else if constexpr (std::is_same_v<T, SNode::FS>) {
                auto it = std::lower_bound(n.sums.begin(), n.sums.end(), bound);
                return std::vector<Nat>(n.sums.begin(), it);
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                std::vector<Nat> out;
                BigInt nb = big_of(bound);
                for (std::size_t blk = 0; n.sched.start(blk) < nb; ++blk) {
                    BigInt s = n.sched.start(blk), len = n.sched.length(blk);
                    if (len == 0) continue;
                    BigInt cut = std::min(BigInt(nb - s), len);  // positions < cut are inside the window
                    auto push = [&](const BigInt& pos) {
                        auto v = to_nat(s + pos);
                        if (v) out.push_back(*v);
                    };
                    switch (n.rule.kind) {
                        case BlockRuleSpec::Kind::All:
                            for (BigInt p = 0; p < cut; ++p) push(p);
                            break;
                        case BlockRuleSpec::Kind::None:
                            break;
                        case BlockRuleSpec::Kind::First: {
                            BigInt c = std::min(n.rule.count.eval(n.sched, blk, len), cut);
                            for (BigInt p = 0; p < c; ++p) push(p);
                            break;
                        }
                        case BlockRuleSpec::Kind::Last: {
                            BigInt c = n.rule.count.eval(n.sched, blk, len);
                            for (BigInt p = std::max(BigInt(0), BigInt(len - c)); p < cut; ++p) push(p);
                            break;
                        }
                        case BlockRuleSpec::Kind::Arithmetic:
                            for (BigInt p = big_of(n.rule.arith_offset); p < cut;
                                 p += big_of(n.rule.arith_step))
                                push(p);
                            break;
                        case BlockRuleSpec::Kind::IndexSet:
                            if (blk <= kNatMax && n.rule.index_set->contains(Nat(blk)))
                                for (BigInt p = 0; p < cut; ++p) push(p);
                            break;
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                return merge_union(n.a.window(bound).elems, n.b.window(bound).elems);
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                return merge_intersection(n.a.window(bound).elems, n.b.window(bound).elems);
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return merge_difference(n.a.window(bound).elems, n.b.window(bound).elems);
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                check_scan_bound(bound);
                auto in = n.a.window(bound).elems;
                std::vector<Nat> out;
                out.reserve(bound - in.size());
                std::size_t idx = 0;
                for (Nat x = 0; x < bound; ++x) {
                    if (idx < in.size() && in[idx] == x) {
                        ++idx;
                    } else {
                        out.push_back(x);
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                Nat pb = n.f.preimage_bound(bound);
                std::vector<Nat> out;
                for (Nat x : n.a.window(pb).elems) {
                    auto y = n.f.apply(x);
                    if (y && *y < bound) out.push_back(*y);
                }
                return sorted_unique(std::move(out));
            } else if constexpr (std::is_same_v<T, SNode::Preimage>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                for (Nat x = 0; x < bound; ++x) {
                    auto y = n.f.apply(x);
                    if (y && n.a.contains(*y)) out.push_back(x);
                }
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Column>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                for (Nat j = 0; j < bound; ++j)
                    if (n.a.contains(n.a.space().encode({n.index, j}))) out.push_back(j);
                return out;
            } else if constexpr (std::is_same_v<T, SNode::RowSec>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                for (Nat i = 0; i < bound; ++i)
                    if (n.a.contains(n.a.space().encode({i, n.index}))) out.push_back(i);
                return out;
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                std::vector<Nat> out;
                if (space_.kind == SpaceKind::TwoCopies) {
                    Nat jb = bound / 2 + 1;
                    for (Nat c : n.left.window(2).elems)
                        for (Nat j : n.right.window(jb).elems) {
                            Nat code = space_.encode({c, j});
                            if (code < bound) out.push_back(code);
                        }
                } else {
                    Nat d = bound == 0 ? 0 : pair_decode(bound - 1)[0] + pair_decode(bound - 1)[1] + 1;
                    for (Nat i : n.left.window(d + 1).elems)
                        for (Nat j : n.right.window(d + 1).elems) {
                            if (U128(i) + j > d) continue;
                            Nat code = space_.encode({i, j});
                            if (code < bound) out.push_back(code);
                        }
                }
                return sorted_unique(std::move(out));
            } else if constexpr (std::is_same_v<T, SNode::LowerTriangle>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                for (Nat m = 0; m < bound; ++m) {
                    auto pt = pair_decode(m);
                    if (pt[0] >= pt[1]) out.push_back(m);
                }
                return out;
            } else if constexpr (std::is_same_v<T, SNode::SubsetsOf>) {
                check_scan_bound(bound);
                std::vector<Nat> out;
                for (Nat m = 0; m < bound; ++m)
                    if (contains(m)) out.push_back(m);
                return out;
            } else if constexpr (std::is_same_v<T, SNode::GridSet>) {
                std::vector<Nat> out;
                for (Nat a = 1; a <= n.side; ++a)
                    for (Nat b = 1; b <= n.side; ++b) {
                        U128 x = U128(n.v1) + U128(n.alpha) * a;
                        U128 y = U128(n.v2) + U128(n.alpha) * b;
                        if (x > kNatMax || y > kNatMax) continue;
                        Nat code = pair_encode(Nat(x), Nat(y));
                        if (code < bound) out.push_back(code);
                    }
                return sorted_unique(std::move(out));
            }
        },
        node_->v);
    return w;
}

// ---------------------------------------------------------------------------
// Counting

namespace {

// Finite generator nodes expose their elements directly.
std::optional<std::vector<Nat>> finite_elements(const SetExpr& e) {
    if (auto* x = std::get_if<SNode::Explicit>(&e.node().v)) return x->elems;
    if (auto* x = std::get_if<SNode::FS>(&e.node().v)) return x->sums;
    if (auto* g = std::get_if<SNode::GridSet>(&e.node().v)) {
        return e.window(kNatMax).elems;
    }
    return std::nullopt;
}

}  // namespace

std::optional<BigInt> SetExpr::count_below(const BigInt& bound) const {
    if (bound <= 0) return BigInt(0);
    return std::visit(
        [&](const auto& n) -> std::optional<BigInt> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                return count_sorted_below(n.elems, bound);
            } else if constexpr (std::is_same_v<T, SNode::Cofinite>) {
                return bound - count_sorted_below(n.excluded, bound);
            } else if constexpr (std::is_same_v<T, SNode::Squares>) {
                return isqrt_big(bound - 1) + 1;
            } else if constexpr (std::is_same_v<T, SNode::Powers>) {
                BigInt c = 0;
                for (BigInt v = 1; v < bound; v *= big_of(n.base)) ++c;
                return c;
            } else if constexpr (std::is_same_v<T, SNode::AP>) {
                BigInt s = big_of(n.start);
                if (bound <= s) return BigInt(0);
                return ceil_div(bound - s, big_of(n.step));
            } else if constexpr (std::is_same_v<T, SNode::FS>) {
                return count_sorted_below(n.sums, bound);
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                BigInt total = 0;
                for (std::size_t blk = 0; n.sched.start(blk) < bound; ++blk) {
                    BigInt s = n.sched.start(blk), len = n.sched.length(blk);
                    if (len == 0) continue;
                    BigInt cut = std::min(BigInt(bound - s), len);
                    switch (n.rule.kind) {
                        case BlockRuleSpec::Kind::All:
                            total += cut;
                            break;
                        case BlockRuleSpec::Kind::None:
                            break;
                        case BlockRuleSpec::Kind::First:
                            total += std::min(n.rule.count.eval(n.sched, blk, len), cut);
                            break;
                        case BlockRuleSpec::Kind::Last: {
                            BigInt c = n.rule.count.eval(n.sched, blk, len);
                            BigInt from = len - c;  // first included position
                            if (cut > from) total += cut - from;
                            break;
                        }
                        case BlockRuleSpec::Kind::Arithmetic: {
                            BigInt off = big_of(n.rule.arith_offset);
                            if (cut > off) total += ceil_div(cut - off, big_of(n.rule.arith_step));
                            break;
                        }
                        case BlockRuleSpec::Kind::IndexSet:
                            if (blk <= kNatMax && n.rule.index_set->contains(Nat(blk))) total += cut;
                            break;
                    }
                }
                return total;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                if (auto fb = finite_elements(n.b)) {
                    auto ca = n.a.count_below(bound);
                    if (!ca) return std::nullopt;
                    BigInt extra = 0;
                    for (Nat e : *fb)
                        if (big_of(e) < bound && !n.a.contains(e)) ++extra;
                    return *ca + extra;
                }
                if (auto fa = finite_elements(n.a)) {
                    auto cb = n.b.count_below(bound);
                    if (!cb) return std::nullopt;
                    BigInt extra = 0;
                    for (Nat e : *fa)
                        if (big_of(e) < bound && !n.b.contains(e)) ++extra;
                    return *cb + extra;
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                for (const auto* side : {&n.a, &n.b}) {
                    const SetExpr& other = side == &n.a ? n.b : n.a;
                    if (auto fe = finite_elements(*side)) {
                        BigInt c = 0;
                        for (Nat e : *fe)
                            if (big_of(e) < bound && other.contains(e)) ++c;
                        return c;
                    }
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                if (auto fa = finite_elements(n.a)) {
                    BigInt c = 0;
                    for (Nat e : *fa)
                        if (big_of(e) < bound && !n.b.contains(e)) ++c;
                    return c;
                }
                if (auto fb = finite_elements(n.b)) {
                    auto ca = n.a.count_below(bound);
                    if (!ca) return std::nullopt;
                    BigInt drop = 0;
                    for (Nat e : *fb)
                        if (big_of(e) < bound && n.a.contains(e)) ++drop;
                    return *ca - drop;
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                auto ca = n.a.count_below(bound);
                if (!ca) return std::nullopt;
                return bound - *ca;
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                if (n.f.increasing() == std::optional<bool>(true)) {
                    auto pb = n.f.preimage_bound_big(bound);
                    if (pb) return n.a.count_below(*pb);
                }
                if (std::get_if<InjectionExpr::Node::SwapPairs>(&n.f.node().v)) {
                    // f^{-1}([0,bound)) differs from [0,bound) only at the split pair.
                    if (bound % 2 == 0) return n.a.count_below(bound);
                    auto base = n.a.count_below(bound - 1);
                    if (!base) return std::nullopt;
                    auto bn = to_nat(bound);
                    if (!bn) return std::nullopt;
                    return *base + (n.a.contains(*bn) ? 1 : 0);
                }
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

BigInt SetExpr::count_below_checked(const BigInt& bound, Nat enum_cap) const {
    if (auto c = count_below(bound)) return *c;
    auto nb = to_nat(bound);
    if (!nb || *nb > enum_cap)
        throw effort_exceeded("no closed-form count below " + bound.get_str() +
                              " and bound exceeds the enumeration cap");
    return BigInt(static_cast<unsigned long>(window(*nb).elems.size()));
}

std::optional<Nat> SetExpr::select(Nat k) const {
    // Node-specific fast paths.
    if (auto* x = std::get_if<SNode::Explicit>(&node_->v))
        return k < x->elems.size() ? std::optional<Nat>(x->elems[k]) : std::nullopt;
    if (auto* x = std::get_if<SNode::FS>(&node_->v))
        return k < x->sums.size() ? std::optional<Nat>(x->sums[k]) : std::nullopt;
    if (auto* x = std::get_if<SNode::AP>(&node_->v)) {
        U128 v = U128(x->start) + U128(x->step) * k;
        return v > kNatMax ? std::nullopt : std::optional<Nat>(Nat(v));
    }
    if (auto* x = std::get_if<SNode::Squares>(&node_->v)) {
        (void)x;
        return k < (Nat(1) << 32) ? std::optional<Nat>(k * k) : std::nullopt;
    }
    if (auto* x = std::get_if<SNode::Powers>(&node_->v)) {
        U128 v = 1;
        for (Nat i = 0; i < k; ++i) {
            v *= x->base;
            if (v > kNatMax) return std::nullopt;
        }
        return Nat(v);
    }
    if (auto* x = std::get_if<SNode::Cofinite>(&node_->v)) {
        U128 v = k;
        for (Nat e : x->excluded) {
            if (e <= v) ++v;
            else break;
        }
        return v > kNatMax ? std::nullopt : std::optional<Nat>(Nat(v));
    }
    // Closed-form counting: least y with count_below(y+1) = k+1 and y in set.
    if (count_below(BigInt(1))) {
        BigInt target = big_of(k) + 1;
        BigInt hi = 1;
        int steps = 0;
        while (*count_below(hi) < target) {
            hi *= 2;
            if (++steps > 200) return std::nullopt;
        }
        BigInt lo = 0;  // count_below(lo) < target <= count_below(hi)
        while (lo + 1 < hi) {
            BigInt mid = (lo + hi) / 2;
            (*count_below(mid) < target ? lo : hi) = mid;
        }
        return to_nat(lo);  // lo is the k-th element: count_below(lo) = k, count_below(lo+1) = k+1
    }
    // Enumeration fallback.
    Nat bound = 64;
    while (bound <= (Nat(1) << 22)) {
        auto w = window(bound);
        if (w.elems.size() > k) return w.elems[k];
        bound *= 2;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Structure

std::optional<bool> SetExpr::structurally_infinite() const {
    return std::visit(
        [&](const auto& n) -> std::optional<bool> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit> || std::is_same_v<T, SNode::FS> ||
                          std::is_same_v<T, SNode::GridSet>) {
                return false;
            } else if constexpr (std::is_same_v<T, SNode::Cofinite> ||
                                 std::is_same_v<T, SNode::Squares> ||
                                 std::is_same_v<T, SNode::Powers> ||
                                 std::is_same_v<T, SNode::AP> ||
                                 std::is_same_v<T, SNode::LowerTriangle>) {
                return true;
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                bool growing = n.sched.kind() != GridSchedule::Kind::Custom;
                switch (n.rule.kind) {
                    case BlockRuleSpec::Kind::All: return true;
                    case BlockRuleSpec::Kind::None: return false;
                    case BlockRuleSpec::Kind::First:
                    case BlockRuleSpec::Kind::Last: {
                        const CountFn& c = n.rule.count;
                        if (c.kind == CountFn::Kind::Constant) return c.constant >= 1;
                        if (c.scale == 0) return false;
                        if (growing) return true;
                        BigInt len = n.sched.custom_lengths().back();
                        return c.eval(n.sched, 1'000'000, len) >= 1 ? std::optional<bool>(true)
                                                                    : std::nullopt;
                    }
                    case BlockRuleSpec::Kind::Arithmetic:
                        if (growing) return true;
                        return n.sched.custom_lengths().back() > big_of(n.rule.arith_offset);
                    case BlockRuleSpec::Kind::IndexSet:
                        return n.rule.index_set->structurally_infinite();
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                auto a = n.a.structurally_infinite(), b = n.b.structurally_infinite();
                if (a == std::optional<bool>(true) || b == std::optional<bool>(true)) return true;
                if (a == std::optional<bool>(false) && b == std::optional<bool>(false)) return false;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                auto a = n.a.structurally_infinite(), b = n.b.structurally_infinite();
                if (a == std::optional<bool>(false) || b == std::optional<bool>(false)) return false;
                if (n.a.same_as(n.b)) return a;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                auto a = n.a.structurally_infinite(), b = n.b.structurally_infinite();
                if (a == std::optional<bool>(false)) return false;
                if (n.a.same_as(n.b)) return false;
                if (a == std::optional<bool>(true) && b == std::optional<bool>(false)) return true;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                if (std::get_if<SNode::Cofinite>(&n.a.node().v)) return false;
                if (n.a.structurally_infinite() == std::optional<bool>(false)) return true;
                if (auto* ap = std::get_if<SNode::AP>(&n.a.node().v))
                    return ap->step >= 2 || ap->start > 0;
                if (std::get_if<SNode::Squares>(&n.a.node().v)) return true;
                if (std::get_if<SNode::Powers>(&n.a.node().v)) return true;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                return n.a.structurally_infinite();
            } else if constexpr (std::is_same_v<T, SNode::Preimage>) {
                if (n.a.structurally_infinite() == std::optional<bool>(false)) return false;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Column>) {
                if (auto* p = std::get_if<SNode::Product>(&n.a.node().v))
                    return p->left.contains(n.index) ? p->right.structurally_infinite()
                                                     : std::optional<bool>(false);
                if (std::get_if<SNode::LowerTriangle>(&n.a.node().v)) return false;  // j <= index
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::RowSec>) {
                if (auto* p = std::get_if<SNode::Product>(&n.a.node().v))
                    return p->right.contains(n.index) ? p->left.structurally_infinite()
                                                      : std::optional<bool>(false);
                if (std::get_if<SNode::LowerTriangle>(&n.a.node().v)) return true;  // i >= index
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                auto l = n.left.structurally_infinite(), r = n.right.structurally_infinite();
                if (l == std::optional<bool>(false) && r == std::optional<bool>(false)) return false;
                if ((l == std::optional<bool>(true) || r == std::optional<bool>(true))) {
                    // nonempty other side makes the product infinite; emptiness is
                    // not tracked structurally, so only certify via windows
                    const SetExpr& other = l == std::optional<bool>(true) ? n.right : n.left;
                    if (!other.window(256).elems.empty()) return true;
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::SubsetsOf>) {
                return n.s.structurally_infinite();
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<Rat> SetExpr::structural_density() const {
    return std::visit(
        [&](const auto& n) -> std::optional<Rat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit> || std::is_same_v<T, SNode::FS> ||
                          std::is_same_v<T, SNode::Squares> || std::is_same_v<T, SNode::Powers> ||
                          std::is_same_v<T, SNode::GridSet>) {
                return Rat(0);
            } else if constexpr (std::is_same_v<T, SNode::Cofinite>) {
                return Rat(1);
            } else if constexpr (std::is_same_v<T, SNode::AP>) {
                return make_rat(1, big_of(n.step));
            } else if constexpr (std::is_same_v<T, SNode::BlockRule>) {
                if (n.rule.kind == BlockRuleSpec::Kind::None) return Rat(0);
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                // density unchanged under finite perturbation
                if (finite_elements(n.b)) return n.a.structural_density();
                if (finite_elements(n.a)) return n.b.structural_density();
                if (n.a.same_as(n.b)) return n.a.structural_density();
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                if (finite_elements(n.a) || finite_elements(n.b)) return Rat(0);
                if (n.a.same_as(n.b)) return n.a.structural_density();
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                if (finite_elements(n.a)) return Rat(0);
                if (finite_elements(n.b)) return n.a.structural_density();
                if (n.a.same_as(n.b)) return Rat(0);
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Complement>) {
                auto d = n.a.structural_density();
                if (!d) return std::nullopt;
                return Rat(1) - *d;
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                const auto& fv = n.f.node().v;
                if (std::get_if<InjectionExpr::Node::Identity>(&fv) ||
                    std::get_if<InjectionExpr::Node::Shift>(&fv) ||
                    std::get_if<InjectionExpr::Node::SwapPairs>(&fv)) {
                    return n.a.structural_density();
                }
                if (auto* aff = std::get_if<InjectionExpr::Node::Affine>(&fv)) {
                    auto d = n.a.structural_density();
                    if (!d) return std::nullopt;
                    return *d / Rat(big_of(aff->scale));
                }
                if (std::get_if<InjectionExpr::Node::Power>(&fv)) {
                    // Certified only for cofinite arguments; proper subsets stay
                    // evidence-grade (see membership oracle notes).
                    if (std::get_if<SNode::Cofinite>(&n.a.node().v)) return Rat(0);
                    return std::nullopt;
                }
                if (auto* en = std::get_if<InjectionExpr::Node::Enumerate>(&fv)) {
                    if (std::get_if<SNode::Cofinite>(&n.a.node().v))
                        return en->s.structural_density();
                    return std::nullopt;
                }
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<Nat> SetExpr::structural_ap_bound() const {
    if (annotation_ && annotation_->ap_bound) return annotation_->ap_bound;
    return std::visit(
        [&](const auto& n) -> std::optional<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                return n.elems.size();
            } else if constexpr (std::is_same_v<T, SNode::FS>) {
                return n.sums.size();
            } else if constexpr (std::is_same_v<T, SNode::Powers>) {
                return 2;  // three distinct powers are never in progression
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                auto a = n.a.structural_ap_bound(), b = n.b.structural_ap_bound();
                if (a && b) return std::min(*a, *b);
                return a ? a : b;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return n.a.structural_ap_bound();
            } else if constexpr (std::is_same_v<T, SNode::Image>) {
                const auto& fv = n.f.node().v;
                if (std::get_if<InjectionExpr::Node::Identity>(&fv) ||
                    std::get_if<InjectionExpr::Node::Shift>(&fv) ||
                    std::get_if<InjectionExpr::Node::Affine>(&fv))
                    return n.a.structural_ap_bound();
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<std::string> SetExpr::fs_obstruction() const {
    return std::visit(
        [&](const auto& n) -> std::optional<std::string> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::AP>) {
                if (n.start % n.step != 0)
                    return "all elements are " + std::to_string(n.start % n.step) + " mod " +
                           std::to_string(n.step) + ", so pair sums leave the set";
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                auto a = n.a.fs_obstruction();
                return a ? a : n.b.fs_obstruction();
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return n.a.fs_obstruction();
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<Nat> SetExpr::support_row_bound() const {
    if (!space_.is_pair_space()) return std::nullopt;
    return std::visit(
        [&](const auto& n) -> std::optional<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                Nat b = 0;
                for (Nat code : n.elems) b = std::max(b, space_.decode(code)[0] + 1);
                return b;
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                if (auto fe = finite_elements(n.left)) {
                    Nat b = 0;
                    for (Nat e : *fe) b = std::max(b, e + 1);
                    return b;
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::GridSet>) {
                U128 b = U128(n.v1) + U128(n.alpha) * n.side + 1;
                return b > kNatMax ? std::nullopt : std::optional<Nat>(Nat(b));
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                auto a = n.a.support_row_bound(), b = n.b.support_row_bound();
                if (a && b) return std::max(*a, *b);
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                auto a = n.a.support_row_bound(), b = n.b.support_row_bound();
                if (a && b) return std::min(*a, *b);
                return a ? a : b;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return n.a.support_row_bound();
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<Nat> SetExpr::structural_column_bound() const {
    if (!space_.is_pair_space()) return std::nullopt;
    return std::visit(
        [&](const auto& n) -> std::optional<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, SNode::Explicit>) {
                std::map<Nat, Nat> counts;
                Nat best = 0;
                for (Nat code : n.elems) best = std::max(best, ++counts[space_.decode(code)[0]]);
                return best;
            } else if constexpr (std::is_same_v<T, SNode::Product>) {
                if (auto fe = finite_elements(n.right)) return fe->size();
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::GridSet>) {
                return n.side;
            } else if constexpr (std::is_same_v<T, SNode::Union>) {
                auto a = n.a.structural_column_bound(), b = n.b.structural_column_bound();
                if (a && b) return *a + *b;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SNode::Intersection>) {
                auto a = n.a.structural_column_bound(), b = n.b.structural_column_bound();
                if (a && b) return std::min(*a, *b);
                return a ? a : b;
            } else if constexpr (std::is_same_v<T, SNode::Difference>) {
                return n.a.structural_column_bound();
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::vector<BigInt> SetExpr::block_counts(const GridSchedule& sched, std::size_t n_max,
                                          Nat enum_cap) const {
    std::vector<BigInt> out;
    out.reserve(n_max);
    // Same-schedule block rules are answered by the rule itself.
    if (auto* br = std::get_if<SNode::BlockRule>(&node_->v)) {
        if (br->sched == sched) {
            for (std::size_t n = 0; n < n_max; ++n) {
                BigInt len = sched.length(n);
                switch (br->rule.kind) {
                    case BlockRuleSpec::Kind::All: out.push_back(len); break;
                    case BlockRuleSpec::Kind::None: out.push_back(0); break;
                    case BlockRuleSpec::Kind::First:
                    case BlockRuleSpec::Kind::Last:
                        out.push_back(br->rule.count.eval(sched, n, len));
                        break;
                    case BlockRuleSpec::Kind::Arithmetic: {
                        BigInt off = big_of(br->rule.arith_offset);
                        out.push_back(len > off ? ceil_div(len - off, big_of(br->rule.arith_step))
                                                : BigInt(0));
                        break;
                    }
                    case BlockRuleSpec::Kind::IndexSet:
                        out.push_back(n <= kNatMax && br->rule.index_set->contains(Nat(n))
                                          ? len
                                          : BigInt(0));
                        break;
                }
            }
            return out;
        }
    }
    for (std::size_t n = 0; n < n_max; ++n) {
        BigInt s = sched.start(n), e = sched.end(n);
        auto ce = count_below(e);
        auto cs = count_below(s);
        if (ce && cs) {
            out.push_back(*ce - *cs);
            continue;
        }
        BigInt len = e - s;
        auto sn = to_nat(s);
        auto en = to_nat(e);
        if (!sn || !en || len > big_of(enum_cap))
            throw effort_exceeded("block count for I_" + std::to_string(n) +
                                  " has no closed form and the interval exceeds the cap");
        BigInt c = 0;
        for (Nat x = *sn; x < *en; ++x)
            if (contains(x)) ++c;
        out.push_back(c);
    }
    return out;
}

SetExpr fixed_points(const InjectionExpr& f, Nat n) {
    if (auto col = f.find_collision(n))
        throw injectivity_violation("f(" + std::to_string(col->first) + ") = f(" +
                                    std::to_string(col->second) + ")");
    std::vector<Nat> fixed;
    for (Nat x = 0; x < n; ++x)
        if (f.apply(x) == std::optional<Nat>(x)) fixed.push_back(x);
    return SetExpr::explicit_set(std::move(fixed));
}

}  // namespace idealab
