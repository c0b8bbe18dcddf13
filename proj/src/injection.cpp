#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "idealab/expr.hpp"

namespace idealab {

namespace {

using U128 = unsigned __int128;
constexpr Nat kNatMax = ~Nat(0);

Nat clamp128(U128 v) { return v > U128(kNatMax) ? kNatMax : Nat(v); }

std::optional<Nat> checked_pow(Nat x, unsigned p) {
    U128 r = 1;
    for (unsigned i = 0; i < p; ++i) {
        r *= x;
        if (r > U128(kNatMax)) return std::nullopt;
    }
    return Nat(r);
}

Nat iroot(Nat n, unsigned p) {
    BigInt r;
    BigInt b = big_of(n);
    mpz_root(r.get_mpz_t(), b.get_mpz_t(), p);
    return *to_nat(r);
}

// Least upper bound covering every element of `s` with rank < n (i.e. the
// n-th element + 1 when it exists, or sup(s)+1 for finite s).
Nat sup_below_rank(const SetExpr& s, Nat n) {
    if (n == 0) return 0;
    if (auto e = s.select(n - 1)) return *e == kNatMax ? kNatMax : *e + 1;
    // s has fewer than n elements; find the largest defined rank.
    Nat lo = 0, hi = n - 1;  // select(lo) defined or set empty
    if (!s.select(0)) return 0;
    while (lo + 1 < hi) {
        Nat mid = lo + (hi - lo) / 2;
        (s.select(mid) ? lo : hi) = mid;
    }
    Nat last = *s.select(lo);
    return last == kNatMax ? kNatMax : last + 1;
}

}  // namespace

using INode = InjectionExpr::Node;

InjectionExpr InjectionExpr::identity() {
    return InjectionExpr(std::make_shared<Node>(Node{INode::Identity{}}));
}
InjectionExpr InjectionExpr::shift(Nat k) {
    return InjectionExpr(std::make_shared<Node>(Node{INode::Shift{k}}));
}
InjectionExpr InjectionExpr::affine(Nat scale, Nat offset) {
    if (scale == 0) throw malformed("affine injection needs scale >= 1");
    return InjectionExpr(std::make_shared<Node>(Node{INode::Affine{scale, offset}}));
}
InjectionExpr InjectionExpr::power(unsigned exponent) {
    if (exponent < 2) throw malformed("power injection needs exponent >= 2");
    return InjectionExpr(std::make_shared<Node>(Node{INode::Power{exponent}}));
}
InjectionExpr InjectionExpr::swap_pairs() {
    return InjectionExpr(std::make_shared<Node>(Node{INode::SwapPairs{}}));
}
InjectionExpr InjectionExpr::enumerate(SetExpr s) {
    return InjectionExpr(std::make_shared<Node>(Node{INode::Enumerate{std::move(s)}}));
}
InjectionExpr InjectionExpr::match_enum(SetExpr from, SetExpr to) {
    return InjectionExpr(std::make_shared<Node>(Node{INode::MatchEnum{std::move(from), std::move(to)}}));
}
InjectionExpr InjectionExpr::piecewise(std::vector<std::pair<SetExpr, InjectionExpr>> cases,
                                       InjectionExpr fallback) {
    INode::Piecewise pw;
    pw.cases = std::move(cases);
    pw.fallback = std::make_shared<InjectionExpr>(std::move(fallback));
    return InjectionExpr(std::make_shared<Node>(Node{std::move(pw)}));
}
InjectionExpr InjectionExpr::compose(InjectionExpr outer, InjectionExpr inner) {
    INode::Compose c{std::make_shared<InjectionExpr>(std::move(outer)),
                     std::make_shared<InjectionExpr>(std::move(inner))};
    return InjectionExpr(std::make_shared<Node>(Node{std::move(c)}));
}
InjectionExpr InjectionExpr::inverse(InjectionExpr f) {
    return InjectionExpr(
        std::make_shared<Node>(Node{INode::Inverse{std::make_shared<InjectionExpr>(std::move(f))}}));
}
InjectionExpr InjectionExpr::product_map(InjectionExpr outer, InjectionExpr inner_default,
                                         std::map<Nat, InjectionExpr> inner_exceptions,
                                         BaseSpace space) {
    if (!space.is_pair_space()) throw malformed("product map needs a pair space");
    INode::ProductMap pm{std::make_shared<InjectionExpr>(std::move(outer)),
                         std::make_shared<InjectionExpr>(std::move(inner_default)),
                         std::move(inner_exceptions), space};
    return InjectionExpr(std::make_shared<Node>(Node{std::move(pm)}));
}

std::optional<Nat> InjectionExpr::apply(Nat x) const {
    return std::visit(
        [&](const auto& n) -> std::optional<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, INode::Identity>) {
                return x;
            } else if constexpr (std::is_same_v<T, INode::Shift>) {
                return x > kNatMax - n.k ? std::nullopt : std::optional<Nat>(x + n.k);
            } else if constexpr (std::is_same_v<T, INode::Affine>) {
                U128 v = U128(n.scale) * x + n.offset;
                return v > U128(kNatMax) ? std::nullopt : std::optional<Nat>(Nat(v));
            } else if constexpr (std::is_same_v<T, INode::Power>) {
                return checked_pow(x, n.exponent);
            } else if constexpr (std::is_same_v<T, INode::SwapPairs>) {
                return x ^ 1;
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                return n.s.select(x);
            } else if constexpr (std::is_same_v<T, INode::MatchEnum>) {
                if (!n.from.contains(x)) return std::nullopt;
                auto rank = to_nat(n.from.count_below_checked(big_of(x)));
                if (!rank) return std::nullopt;
                return n.to.select(*rank);
            } else if constexpr (std::is_same_v<T, INode::Piecewise>) {
                for (const auto& [region, map] : n.cases)
                    if (region.contains(x)) return map.apply(x);
                return n.fallback->apply(x);
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                auto mid = n.inner->apply(x);
                return mid ? n.outer->apply(*mid) : std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return n.f->invert(x);
            } else if constexpr (std::is_same_v<T, INode::ProductMap>) {
                auto pt = n.space.decode(x);
                auto u = n.outer->apply(pt[0]);
                if (!u) return std::nullopt;
                auto it = n.inner_exceptions.find(*u);
                const InjectionExpr& inner =
                    it != n.inner_exceptions.end() ? it->second : *n.inner_default;
                auto v = inner.apply(pt[1]);
                if (!v) return std::nullopt;
                return n.space.encode({*u, *v});
            }
        },
        node_->v);
}

std::optional<Nat> InjectionExpr::invert(Nat y) const {
    return std::visit(
        [&](const auto& n) -> std::optional<Nat> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, INode::Identity>) {
                return y;
            } else if constexpr (std::is_same_v<T, INode::Shift>) {
                return y >= n.k ? std::optional<Nat>(y - n.k) : std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::Affine>) {
                if (y < n.offset || (y - n.offset) % n.scale != 0) return std::nullopt;
                return (y - n.offset) / n.scale;
            } else if constexpr (std::is_same_v<T, INode::Power>) {
                Nat r = iroot(y, n.exponent);
                return checked_pow(r, n.exponent) == std::optional<Nat>(y) ? std::optional<Nat>(r)
                                                                           : std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::SwapPairs>) {
                return y ^ 1;
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                if (!n.s.contains(y)) return std::nullopt;
                return to_nat(n.s.count_below_checked(big_of(y)));
            } else if constexpr (std::is_same_v<T, INode::MatchEnum>) {
                if (!n.to.contains(y)) return std::nullopt;
                auto rank = to_nat(n.to.count_below_checked(big_of(y)));
                if (!rank) return std::nullopt;
                auto x = n.from.select(*rank);
                return x;
            } else if constexpr (std::is_same_v<T, INode::Piecewise>) {
                auto routes_here = [&](Nat x, std::size_t idx) {
                    for (std::size_t i = 0; i < idx; ++i)
                        if (n.cases[i].first.contains(x)) return false;
                    return idx == n.cases.size() || n.cases[idx].first.contains(x);
                };
                for (std::size_t i = 0; i < n.cases.size(); ++i) {
                    auto x = n.cases[i].second.invert(y);
                    if (x && routes_here(*x, i)) return x;
                }
                auto x = n.fallback->invert(y);
                if (x && routes_here(*x, n.cases.size())) return x;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                auto mid = n.outer->invert(y);
                return mid ? n.inner->invert(*mid) : std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return n.f->apply(y);
            } else if constexpr (std::is_same_v<T, INode::ProductMap>) {
                auto pt = n.space.decode(y);
                auto i = n.outer->invert(pt[0]);
                if (!i) return std::nullopt;
                auto it = n.inner_exceptions.find(pt[0]);
                const InjectionExpr& inner =
                    it != n.inner_exceptions.end() ? it->second : *n.inner_default;
                auto j = inner.invert(pt[1]);
                if (!j) return std::nullopt;
                return n.space.encode({*i, *j});
            }
        },
        node_->v);
}

std::optional<bool> InjectionExpr::increasing() const {
    return std::visit(
        [&](const auto& n) -> std::optional<bool> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, INode::Identity> || std::is_same_v<T, INode::Shift> ||
                          std::is_same_v<T, INode::Affine> || std::is_same_v<T, INode::Power> ||
                          std::is_same_v<T, INode::Enumerate> || std::is_same_v<T, INode::MatchEnum>) {
                return true;
            } else if constexpr (std::is_same_v<T, INode::SwapPairs>) {
                return false;
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                auto a = n.outer->increasing(), b = n.inner->increasing();
                if (a == std::optional<bool>(true) && b == std::optional<bool>(true)) return true;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return n.f->increasing();
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

bool InjectionExpr::total() const {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, INode::Identity> || std::is_same_v<T, INode::Shift> ||
                          std::is_same_v<T, INode::Affine> || std::is_same_v<T, INode::Power> ||
                          std::is_same_v<T, INode::SwapPairs>) {
                return true;
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                return n.s.structurally_infinite() == std::optional<bool>(true);
            } else if constexpr (std::is_same_v<T, INode::MatchEnum>) {
                return false;
            } else if constexpr (std::is_same_v<T, INode::Piecewise>) {
                for (const auto& [region, map] : n.cases)
                    if (!map.total()) return false;
                return n.fallback->total();
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                return n.outer->total() && n.inner->total();
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return false;
            } else if constexpr (std::is_same_v<T, INode::ProductMap>) {
                if (!n.outer->total() || !n.inner_default->total()) return false;
                for (const auto& [row, map] : n.inner_exceptions)
                    if (!map.total()) return false;
                return true;
            }
        },
        node_->v);
}

Nat InjectionExpr::preimage_bound(Nat n) const {
    if (n == 0) return 0;
    return std::visit(
        [&](const auto& nd) -> Nat {
            using T = std::decay_t<decltype(nd)>;
            if constexpr (std::is_same_v<T, INode::Identity>) {
                return n;
            } else if constexpr (std::is_same_v<T, INode::Shift>) {
                return n > nd.k ? n - nd.k : 0;
            } else if constexpr (std::is_same_v<T, INode::Affine>) {
                if (n <= nd.offset) return 0;
                return (n - nd.offset + nd.scale - 1) / nd.scale;
            } else if constexpr (std::is_same_v<T, INode::Power>) {
                return iroot(n - 1, nd.exponent) + 1;
            } else if constexpr (std::is_same_v<T, INode::SwapPairs>) {
                return clamp128(U128(n) + 1);
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                return n;  // n-th element of a set is >= n
            } else if constexpr (std::is_same_v<T, INode::MatchEnum>) {
                return sup_below_rank(nd.from, n);
            } else if constexpr (std::is_same_v<T, INode::Piecewise>) {
                Nat b = nd.fallback->preimage_bound(n);
                for (const auto& [region, map] : nd.cases) b = std::max(b, map.preimage_bound(n));
                return b;
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                return nd.inner->preimage_bound(nd.outer->preimage_bound(n));
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return nd.f->forward_bound(n);
            } else if constexpr (std::is_same_v<T, INode::ProductMap>) {
                auto diag = pair_decode(n - 1);
                Nat d = diag[0] + diag[1] + 1;
                if (nd.space.kind == SpaceKind::TwoCopies) d = n / 2 + 1;
                Nat bi = nd.outer->preimage_bound(d);
                Nat bj = nd.inner_default->preimage_bound(d);
                for (const auto& [row, map] : nd.inner_exceptions)
                    bj = std::max(bj, map.preimage_bound(d));
                U128 s = U128(bi) + bj + 2;
                return clamp128(s * (s + 1) / 2 + s);
            }
        },
        node_->v);
}

Nat InjectionExpr::forward_bound(Nat n) const {
    if (n == 0) return 0;
    return std::visit(
        [&](const auto& nd) -> Nat {
            using T = std::decay_t<decltype(nd)>;
            if constexpr (std::is_same_v<T, INode::Identity>) {
                return n;
            } else if constexpr (std::is_same_v<T, INode::Shift>) {
                return clamp128(U128(n) + nd.k);
            } else if constexpr (std::is_same_v<T, INode::Affine>) {
                return clamp128(U128(nd.scale) * (n - 1) + nd.offset + 1);
            } else if constexpr (std::is_same_v<T, INode::Power>) {
                U128 r = 1;
                for (unsigned i = 0; i < nd.exponent; ++i) {
                    r *= (n - 1);
                    if (r > U128(kNatMax)) return kNatMax;
                }
                return clamp128(r + 1);
            } else if constexpr (std::is_same_v<T, INode::SwapPairs>) {
                return clamp128(U128(n) + 1);
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                return sup_below_rank(nd.s, n);
            } else if constexpr (std::is_same_v<T, INode::MatchEnum>) {
                BigInt c = nd.from.count_below_checked(big_of(n));
                auto cn = to_nat(c);
                return cn && *cn > 0 ? sup_below_rank(nd.to, *cn) : 0;
            } else if constexpr (std::is_same_v<T, INode::Piecewise>) {
                Nat b = nd.fallback->forward_bound(n);
                for (const auto& [region, map] : nd.cases) b = std::max(b, map.forward_bound(n));
                return b;
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                return nd.outer->forward_bound(nd.inner->forward_bound(n));
            } else if constexpr (std::is_same_v<T, INode::Inverse>) {
                return nd.f->preimage_bound(n);
            } else if constexpr (std::is_same_v<T, INode::ProductMap>) {
                auto diag = pair_decode(n - 1);
                Nat d = diag[0] + diag[1] + 1;
                if (nd.space.kind == SpaceKind::TwoCopies) d = n / 2 + 1;
                Nat bu = nd.outer->forward_bound(d);
                Nat bv = nd.inner_default->forward_bound(d);
                for (const auto& [row, map] : nd.inner_exceptions)
                    bv = std::max(bv, map.forward_bound(d));
                U128 s = U128(bu) + bv + 2;
                return clamp128(s * (s + 1) / 2 + s);
            }
        },
        node_->v);
}

std::optional<BigInt> InjectionExpr::preimage_bound_big(const BigInt& n) const {
    if (n <= 0) return BigInt(0);
    return std::visit(
        [&](const auto& nd) -> std::optional<BigInt> {
            using T = std::decay_t<decltype(nd)>;
            if constexpr (std::is_same_v<T, INode::Identity>) {
                return n;
            } else if constexpr (std::is_same_v<T, INode::Shift>) {
                BigInt b = n - big_of(nd.k);
                return b < 0 ? BigInt(0) : b;
            } else if constexpr (std::is_same_v<T, INode::Affine>) {
                BigInt b = n - big_of(nd.offset);
                if (b <= 0) return BigInt(0);
                return ceil_div(b, big_of(nd.scale));
            } else if constexpr (std::is_same_v<T, INode::Power>) {
                BigInt r, m = n - 1;
                mpz_root(r.get_mpz_t(), m.get_mpz_t(), nd.exponent);
                return r + 1;
            } else if constexpr (std::is_same_v<T, INode::Enumerate>) {
                return nd.s.count_below(n);
            } else if constexpr (std::is_same_v<T, INode::Compose>) {
                auto mid = nd.outer->preimage_bound_big(n);
                return mid ? nd.inner->preimage_bound_big(*mid) : std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        node_->v);
}

std::optional<std::pair<Nat, Nat>> InjectionExpr::find_collision(Nat n) const {
    std::unordered_map<Nat, Nat> seen;
    seen.reserve(n);
    for (Nat x = 0; x < n; ++x) {
        auto y = apply(x);
        if (!y) continue;
        auto [it, fresh] = seen.emplace(*y, x);
        if (!fresh) return std::make_pair(it->second, x);
    }
    return std::nullopt;
}

}  // namespace idealab
