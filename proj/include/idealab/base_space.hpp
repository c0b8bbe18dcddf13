#pragma once

#include <array>
#include <string>
#include <vector>

#include "idealab/rational.hpp"

namespace idealab {

// Base spaces a set expression can live on.  Every space comes with a fixed
// bijective encoding onto the naturals, so windows are always prefixes of
// the encoded order:
//   - omega:            identity
//   - omega-squared,
//     omega-times-omega: diagonal (Cantor) pairing, (i,j) -> T(i+j)+i,
//                        rows ascending within each anti-diagonal
//   - two-copies:       interleaving, (c,n) -> 2n+c
//   - n-subsets(n):     combinatorial number system (colex rank)
enum class SpaceKind { Omega, OmegaSquared, TwoCopies, NSubsets, OmegaTimesOmega };

struct BaseSpace {
    SpaceKind kind = SpaceKind::Omega;
    unsigned subset_size = 0;  // used by NSubsets only

    static BaseSpace omega() { return {SpaceKind::Omega, 0}; }
    static BaseSpace omega_squared() { return {SpaceKind::OmegaSquared, 0}; }
    static BaseSpace two_copies() { return {SpaceKind::TwoCopies, 0}; }
    static BaseSpace n_subsets(unsigned n) { return {SpaceKind::NSubsets, n}; }
    static BaseSpace omega_times_omega() { return {SpaceKind::OmegaTimesOmega, 0}; }

    bool is_pair_space() const {
        return kind == SpaceKind::OmegaSquared || kind == SpaceKind::OmegaTimesOmega ||
               kind == SpaceKind::TwoCopies;
    }

    unsigned arity() const {
        switch (kind) {
            case SpaceKind::Omega: return 1;
            case SpaceKind::NSubsets: return subset_size;
            default: return 2;
        }
    }

    bool operator==(const BaseSpace& o) const {
        return kind == o.kind && subset_size == o.subset_size;
    }
    bool operator!=(const BaseSpace& o) const { return !(*this == o); }

    std::string name() const;

    // Encode a point of this space; throws on arity mismatch or overflow.
    Nat encode(const std::vector<Nat>& point) const;
    std::vector<Nat> decode(Nat code) const;
};

// Pairing helpers (shared by the pair spaces).
Nat pair_encode(Nat i, Nat j);
std::array<Nat, 2> pair_decode(Nat code);

// Binomial coefficient clamped to Nat range; throws on overflow.
Nat binom(Nat n, unsigned k);

}  // namespace idealab
