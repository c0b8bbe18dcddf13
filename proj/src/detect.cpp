#include "idealab/detect.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace idealab {

namespace {

using U128 = unsigned __int128;
constexpr Nat kNatMax = ~Nat(0);

struct PairHash {
    std::size_t operator()(const std::pair<Nat, Nat>& p) const {
        return std::hash<Nat>()(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
    }
};

bool better(const ApWitness& a, const ApWitness& b) {
    if (a.length != b.length) return a.length > b.length;
    if (a.step != b.step) return a.step < b.step;
    return a.start < b.start;
}

}  // namespace

std::pair<Nat, ApWitness> longest_ap(const std::vector<Nat>& elems) {
    if (elems.empty()) return {0, ApWitness{0, 1, 0}};
    std::vector<Nat> e = elems;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    ApWitness best{e[0], 1, 1};
    // len[(j, d)] = length of the longest progression with difference d
    // ending at index j
    std::unordered_map<std::pair<Nat, Nat>, Nat, PairHash> len;
    len.reserve(e.size() * e.size() / 2 + 1);
    for (Nat j = 1; j < e.size(); ++j) {
        for (Nat i = 0; i < j; ++i) {
            Nat d = e[j] - e[i];
            auto it = len.find({i, d});
            Nat l = (it == len.end() ? 1 : it->second) + 1;
            len[{j, d}] = l;
            ApWitness cand{e[j] - (l - 1) * d, d, l};
            if (better(cand, best)) best = cand;
        }
    }
    return {best.length, best};
}

std::pair<Nat, ApWitness> longest_ap_bruteforce(const std::vector<Nat>& elems) {
    if (elems.empty()) return {0, ApWitness{0, 1, 0}};
    std::vector<Nat> e = elems;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    std::unordered_set<Nat> in(e.begin(), e.end());
    ApWitness best{e[0], 1, 1};
    for (Nat i = 0; i < e.size(); ++i) {
        for (Nat j = i + 1; j < e.size(); ++j) {
            Nat d = e[j] - e[i];
            Nat l = 2;
            U128 next = U128(e[j]) + d;
            while (next <= kNatMax && in.count(Nat(next))) {
                ++l;
                next += d;
            }
            ApWitness cand{e[i], d, l};
            if (better(cand, best)) best = cand;
        }
    }
    return {best.length, best};
}

bool ap_witness_valid(const ApWitness& w, const SetExpr& a) {
    for (Nat t = 0; t < w.length; ++t) {
        U128 x = U128(w.start) + U128(w.step) * t;
        if (x > kNatMax || !a.contains(Nat(x))) return false;
    }
    return true;
}

std::optional<GridWitness> find_grid_copy(const Window& w, Nat side) {
    if (side == 0) throw malformed("grid side must be >= 1");
    if (w.elems.empty()) return std::nullopt;
    std::unordered_set<Nat> points(w.elems.begin(), w.elems.end());
    Nat max1 = 0, max2 = 0;
    for (Nat code : w.elems) {
        auto pt = pair_decode(code);
        max1 = std::max(max1, pt[0]);
        max2 = std::max(max2, pt[1]);
    }
    auto has = [&](U128 x, U128 y) {
        if (x > max1 || y > max2) return false;
        return points.count(pair_encode(Nat(x), Nat(y))) > 0;
    };
    Nat alpha_cap = std::max(max1, max2) / side;
    for (Nat alpha = 1; alpha <= alpha_cap; ++alpha) {
        U128 span = U128(alpha) * side;
        if (span > max1 && span > max2) break;
        for (Nat v1 = 0; U128(v1) + span <= max1; ++v1) {
            for (Nat v2 = 0; U128(v2) + span <= max2; ++v2) {
                bool all = true;
                for (Nat a = 1; all && a <= side; ++a)
                    for (Nat b = 1; all && b <= side; ++b)
                        all = has(U128(v1) + U128(alpha) * a, U128(v2) + U128(alpha) * b);
                if (all) return GridWitness{v1, v2, alpha, side};
            }
        }
    }
    return std::nullopt;
}

bool grid_witness_valid(const GridWitness& g, const SetExpr& a) {
    for (Nat i = 1; i <= g.side; ++i)
        for (Nat j = 1; j <= g.side; ++j) {
            U128 x = U128(g.v1) + U128(g.alpha) * i;
            U128 y = U128(g.v2) + U128(g.alpha) * j;
            if (x > kNatMax || y > kNatMax) return false;
            if (!a.contains(pair_encode(Nat(x), Nat(y)))) return false;
        }
    return true;
}

FsCheck fs_contained(const std::vector<Nat>& b, const SetExpr& a) {
    if (b.size() > 30) throw effort_exceeded("fs generator larger than 30 elements");
    std::vector<Nat> gens = b;
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    FsCheck out;
    out.contained = true;
    std::vector<Nat> sums{0};
    for (Nat g : gens) {
        std::size_t old = sums.size();
        for (std::size_t i = 0; i < old; ++i) {
            if (sums[i] > kNatMax - g) throw malformed("fs sums overflow");
            Nat s = sums[i] + g;
            sums.push_back(s);
            if (!a.contains(s)) {
                out.contained = false;
                if (!out.missing_sum) out.missing_sum = s;
            }
        }
    }
    sums.erase(sums.begin());
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    out.sums = std::move(sums);
    return out;
}

namespace {

// Backtracking search for the lexicographically least generator set.  All
// subset sums of the chosen prefix must stay distinct and inside the window;
// both constraints are monotone, so pruning is safe.
bool fs_search(const std::vector<Nat>& pool, const std::unordered_set<Nat>& in, unsigned n,
               std::size_t from, std::vector<Nat>& chosen, std::vector<Nat>& sums,
               std::size_t& budget) {
    if (chosen.size() == n) return true;
    for (std::size_t idx = from; idx < pool.size(); ++idx) {
        if (budget-- == 0) throw effort_exceeded("fs generator search budget exhausted");
        Nat g = pool[idx];
        std::size_t old = sums.size();
        bool ok = true;
        for (std::size_t i = 0; ok && i < old; ++i) {
            if (sums[i] > kNatMax - g) {
                ok = false;
                break;
            }
            Nat s = sums[i] + g;
            if (!in.count(s)) ok = false;
            for (std::size_t j = 0; ok && j < sums.size(); ++j)
                if (sums[j] == s) ok = false;  // duplicate sum
            if (ok) sums.push_back(s);
        }
        if (ok) {
            chosen.push_back(g);
            if (fs_search(pool, in, n, idx + 1, chosen, sums, budget)) return true;
            chosen.pop_back();
        }
        sums.resize(old);
    }
    return false;
}

}  // namespace

std::optional<std::vector<Nat>> find_fs_generator(const Window& w, unsigned n) {
    if (n < 2) throw malformed("fs generator search needs n >= 2");
    if (n > 30) throw effort_exceeded("fs generator size beyond 30");
    // 2^n - 1 distinct sums all land in the window set, so a small window
    // rules the size out immediately
    if (n >= 60 || w.elems.size() < (std::size_t(1) << n) - 1) return std::nullopt;
    std::unordered_set<Nat> in(w.elems.begin(), w.elems.end());
    std::vector<Nat> pool;
    for (Nat x : w.elems)
        if (x > 0) pool.push_back(x);
    std::vector<Nat> chosen, sums{0};
    std::size_t budget = 4'000'000;
    if (fs_search(pool, in, n, 0, chosen, sums, budget)) return chosen;
    return std::nullopt;
}

namespace {

struct RamseyCtx {
    const std::unordered_set<Nat>* blocks;
    const BaseSpace* space;
    unsigned n;
};

bool compatible(const RamseyCtx& ctx, const std::vector<Nat>& chosen, Nat v) {
    // all n-subsets formed by v together with chosen elements must be present
    unsigned need = ctx.n - 1;
    if (chosen.size() < need) return true;
    std::vector<unsigned> idx(need);
    for (unsigned i = 0; i < need; ++i) idx[i] = i;
    while (true) {
        std::vector<Nat> tuple{v};
        for (unsigned i : idx) tuple.push_back(chosen[i]);
        if (!ctx.blocks->count(ctx.space->encode(tuple))) return false;
        int i = int(need) - 1;
        while (i >= 0 && idx[i] == chosen.size() - need + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (unsigned j = unsigned(i) + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

// Candidate sets are visited in colex order: the maximum element ascends,
// and the remainder below it is filled colex-least recursively.
bool ramsey_search(const RamseyCtx& ctx, const std::vector<Nat>& verts, unsigned m, std::size_t cap,
                   std::vector<Nat>& chosen) {
    if (chosen.size() == m) return true;
    std::size_t need_below = m - chosen.size() - 1;
    for (std::size_t i = need_below; i < cap; ++i) {
        if (!compatible(ctx, chosen, verts[i])) continue;
        chosen.push_back(verts[i]);
        if (ramsey_search(ctx, verts, m, i, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

std::optional<std::vector<Nat>> ramsey_block(const Window& w, const BaseSpace& space, unsigned m) {
    if (space.kind != SpaceKind::NSubsets || (space.subset_size != 2 && space.subset_size != 3))
        throw malformed("ramsey search supports 2- and 3-subset spaces");
    if (m > 12) throw effort_exceeded("ramsey block size beyond 12");
    if (m < space.subset_size) throw malformed("block smaller than the subset arity");
    std::unordered_set<Nat> blocks(w.elems.begin(), w.elems.end());
    std::vector<Nat> verts;
    for (Nat code : w.elems)
        for (Nat e : space.decode(code)) verts.push_back(e);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.size() < m) return std::nullopt;
    RamseyCtx ctx{&blocks, &space, space.subset_size};
    std::vector<Nat> chosen;
    if (ramsey_search(ctx, verts, m, verts.size(), chosen)) {
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }
    return std::nullopt;
}

ColumnProfile column_profile(const Window& w) {
    ColumnProfile p;
    for (Nat code : w.elems) {
        auto pt = pair_decode(code);
        ++p.counts[pt[0]];
    }
    for (const auto& [col, cnt] : p.counts) {
        if (cnt > p.max_count) {
            p.max_count = cnt;
            p.argmax = col;
        }
    }
    return p;
}

}  // namespace idealab
