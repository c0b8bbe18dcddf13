#pragma once

#include <map>
#include <optional>
#include <vector>

#include "idealab/expr.hpp"

namespace idealab {

struct ApWitness {
    Nat start = 0;
    Nat step = 1;
    Nat length = 0;
};

struct GridWitness {
    Nat v1 = 0, v2 = 0;  // base point
    Nat alpha = 1;       // dilation
    Nat side = 1;        // grid is v + alpha {1..side}^2
};

struct FsCheck {
    bool contained = false;
    std::vector<Nat> sums;                 // FS(B), deduplicated, sorted
    std::optional<Nat> missing_sum;        // witness when not contained
};

struct ColumnProfile {
    std::map<Nat, Nat> counts;  // column index -> points in the window
    Nat max_count = 0;
    std::optional<Nat> argmax;  // least column attaining the max
};

// Maximum-length arithmetic progression inside a finite set.  Ties break
// deterministically: smallest step, then smallest start.  Empty input gives
// length 0; singletons report step 1.
std::pair<Nat, ApWitness> longest_ap(const std::vector<Nat>& elems);

// O(n^3) reference search, kept as an independent oracle for tests.
std::pair<Nat, ApWitness> longest_ap_bruteforce(const std::vector<Nat>& elems);

bool ap_witness_valid(const ApWitness& w, const SetExpr& a);

// First homothetic square grid v + alpha {1..side}^2 inside a window over
// omega-squared; search order is alpha ascending, then v lexicographic.
std::optional<GridWitness> find_grid_copy(const Window& w, Nat side);

bool grid_witness_valid(const GridWitness& g, const SetExpr& a);

// Do all nonempty subset sums of b land in a?  |b| is capped at 30.
FsCheck fs_contained(const std::vector<Nat>& b, const SetExpr& a);

// Lexicographically least B of size n drawn from the window with all
// 2^n - 1 subset sums distinct and inside the window.
std::optional<std::vector<Nat>> find_fs_generator(const Window& w, unsigned n);

// Least (in colex order) m-element B with all n-subsets of B in the window,
// for a window over the n-subsets space.  n in {2,3}, m <= 12.
std::optional<std::vector<Nat>> ramsey_block(const Window& w, const BaseSpace& space, unsigned m);

// Exact per-column counts of a window over omega-squared.
ColumnProfile column_profile(const Window& w);

}  // namespace idealab
