#include "idealab/base_space.hpp"

#include <algorithm>
#include <cmath>

namespace idealab {

namespace {

using U128 = unsigned __int128;

Nat checked(U128 v, const char* ctx) {
    if (v > U128(~Nat(0))) throw malformed(std::string("encoding overflow in ") + ctx);
    return Nat(v);
}

}  // namespace

std::string BaseSpace::name() const {
    switch (kind) {
        case SpaceKind::Omega: return "omega";
        case SpaceKind::OmegaSquared: return "omega-squared";
        case SpaceKind::TwoCopies: return "two-copies";
        case SpaceKind::NSubsets: return "n-subsets(" + std::to_string(subset_size) + ")";
        case SpaceKind::OmegaTimesOmega: return "omega-times-omega";
    }
    return "?";
}

Nat pair_encode(Nat i, Nat j) {
    U128 d = U128(i) + j;
    U128 tri = d * (d + 1) / 2;
    return checked(tri + i, "pair");
}

std::array<Nat, 2> pair_decode(Nat code) {
    // Largest d with d(d+1)/2 <= code.
    U128 m = code;
    Nat d = Nat((std::sqrt(8.0 * double(m) + 1.0) - 1.0) / 2.0);
    auto tri = [](U128 x) { return x * (x + 1) / 2; };
    while (tri(d) > m) --d;
    while (tri(U128(d) + 1) <= m) ++d;
    Nat i = Nat(m - tri(d));
    return {i, d - i};
}

// Saturates at Nat max instead of overflowing; encode() re-checks totals.
Nat binom(Nat n, unsigned k) {
    if (k == 0) return 1;
    if (n < k) return 0;
    U128 r = 1;
    for (unsigned t = 1; t <= k; ++t) {
        if (r > U128(~Nat(0))) return ~Nat(0);  // intermediates are nondecreasing
        r = r * (n - k + t);
        r /= t;
    }
    return r > U128(~Nat(0)) ? ~Nat(0) : Nat(r);
}

Nat BaseSpace::encode(const std::vector<Nat>& point) const {
    switch (kind) {
        case SpaceKind::Omega:
            if (point.size() != 1) throw malformed("omega point arity");
            return point[0];
        case SpaceKind::OmegaSquared:
        case SpaceKind::OmegaTimesOmega:
            if (point.size() != 2) throw malformed("pair point arity");
            return pair_encode(point[0], point[1]);
        case SpaceKind::TwoCopies: {
            if (point.size() != 2) throw malformed("two-copies point arity");
            if (point[0] > 1) throw malformed("two-copies copy index must be 0 or 1");
            U128 v = U128(point[1]) * 2 + point[0];
            return checked(v, "two-copies");
        }
        case SpaceKind::NSubsets: {
            if (point.size() != subset_size) throw malformed("n-subsets point arity");
            std::vector<Nat> s = point;
            std::sort(s.begin(), s.end());
            for (std::size_t t = 1; t < s.size(); ++t)
                if (s[t] == s[t - 1]) throw malformed("n-subsets point has repeats");
            U128 rank = 0;
            for (unsigned t = 0; t < subset_size; ++t) rank += binom(s[t], t + 1);
            return checked(rank, "n-subsets");
        }
    }
    throw malformed("unknown space");
}

std::vector<Nat> BaseSpace::decode(Nat code) const {
    switch (kind) {
        case SpaceKind::Omega:
            return {code};
        case SpaceKind::OmegaSquared:
        case SpaceKind::OmegaTimesOmega: {
            auto p = pair_decode(code);
            return {p[0], p[1]};
        }
        case SpaceKind::TwoCopies:
            return {code & 1, code >> 1};
        case SpaceKind::NSubsets: {
            std::vector<Nat> out(subset_size);
            Nat rest = code;
            for (unsigned t = subset_size; t >= 1; --t) {
                if (t == 1) {
                    out[0] = rest;
                    break;
                }
                // Largest a with binom(a, t) <= rest, by doubling then bisection.
                Nat lo = t - 1, hi = t;
                while (binom(hi, t) <= rest) {
                    lo = hi;
                    hi *= 2;
                }
                while (lo + 1 < hi) {
                    Nat mid = lo + (hi - lo) / 2;
                    (binom(mid, t) <= rest ? lo : hi) = mid;
                }
                out[t - 1] = lo;
                rest -= binom(lo, t);
            }
            return out;
        }
    }
    throw malformed("unknown space");
}

}  // namespace idealab
