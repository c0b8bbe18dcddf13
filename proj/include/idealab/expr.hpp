#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "idealab/base_space.hpp"
#include "idealab/schedule.hpp"

namespace idealab {

// Enumeration budget for operations that have no closed form.
inline constexpr Nat kEnumCap = 1'000'000;

struct Window {
    Nat bound = 0;
    std::vector<Nat> elems;  // strictly increasing, all < bound
};

class SetExpr;
class InjectionExpr;

// Trusted analytic annotation; always cross-checked against window statistics
// before an oracle relies on it (see check_annotation in ideal.hpp).
struct Annotation {
    std::optional<Rat> density;    // claimed limit of |A n [0,N)| / N
    std::optional<Nat> ap_bound;   // claimed: no arithmetic progression longer than this
    std::optional<Nat> grid_bound; // claimed: no homothetic square grid of side beyond this
    std::optional<bool> summable;  // claimed: ambient weighted sum is finite
    std::string justification;
};

enum class RoundMode { Floor, Nearest };

// Per-block element count, evaluated in closed form.
struct CountFn {
    enum class Kind { Constant, ScaledLength, ScaledStart } kind = Kind::Constant;
    BigInt constant{0};
    Rat scale{0};
    RoundMode round = RoundMode::Floor;
    int index_shift = 0;  // ScaledStart: count_n = round(scale * start(I_{n+shift}))

    static CountFn constant_count(BigInt c);
    static CountFn scaled_length(Rat b, RoundMode r = RoundMode::Floor);
    static CountFn scaled_start(Rat b, RoundMode r = RoundMode::Nearest, int shift = 0);

    // Count for block n, clamped to [0, len].
    BigInt eval(const GridSchedule& sched, std::size_t n, const BigInt& len) const;
};

struct BlockRuleSpec {
    enum class Kind { All, None, First, Last, Arithmetic, IndexSet } kind = Kind::All;
    CountFn count;                     // First / Last
    Nat arith_offset = 0, arith_step = 1;  // Arithmetic
    std::shared_ptr<SetExpr> index_set;    // IndexSet: block n included fully iff n in set
};

class InjectionExpr {
public:
    struct Node;

    static InjectionExpr identity();
    static InjectionExpr shift(Nat k);
    static InjectionExpr affine(Nat scale, Nat offset);  // scale >= 1
    static InjectionExpr power(unsigned exponent);       // exponent >= 2
    static InjectionExpr swap_pairs();                   // 2k <-> 2k+1
    static InjectionExpr enumerate(SetExpr s);           // n -> n-th element of s
    static InjectionExpr match_enum(SetExpr from, SetExpr to);  // partial, on `from`
    static InjectionExpr piecewise(std::vector<std::pair<SetExpr, InjectionExpr>> cases,
                                   InjectionExpr fallback);
    static InjectionExpr compose(InjectionExpr outer, InjectionExpr inner);
    static InjectionExpr inverse(InjectionExpr f);
    static InjectionExpr product_map(InjectionExpr outer, InjectionExpr inner_default,
                                     std::map<Nat, InjectionExpr> inner_exceptions,
                                     BaseSpace space);

    std::optional<Nat> apply(Nat x) const;
    std::optional<Nat> invert(Nat y) const;
    std::optional<bool> increasing() const;
    bool total() const;

    // All x with f(x) < n satisfy x < preimage_bound(n).
    Nat preimage_bound(Nat n) const;
    // sup{f(x)+1 : x < n, f(x) defined}, over-approximated.
    Nat forward_bound(Nat n) const;
    // Exact inverse bound for closed-form increasing maps (used by counting).
    std::optional<BigInt> preimage_bound_big(const BigInt& n) const;

    // First colliding pair (x < y < n with f(x) = f(y)), if any.
    std::optional<std::pair<Nat, Nat>> find_collision(Nat n) const;

    const Node& node() const { return *node_; }
    std::shared_ptr<const Node> node_ptr() const { return node_; }

private:
    explicit InjectionExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

class SetExpr {
public:
    struct Node;

    // -- generators on omega --
    static SetExpr explicit_set(std::vector<Nat> elems, BaseSpace space = BaseSpace::omega());
    static SetExpr cofinite(std::vector<Nat> excluded, BaseSpace space = BaseSpace::omega());
    static SetExpr empty(BaseSpace space = BaseSpace::omega());
    static SetExpr full(BaseSpace space = BaseSpace::omega());
    static SetExpr squares();
    static SetExpr powers(Nat base);
    static SetExpr ap(Nat start, Nat step);
    static SetExpr evens() { return ap(0, 2); }
    static SetExpr odds() { return ap(1, 2); }
    static SetExpr fs_set(std::vector<Nat> generators);
    static SetExpr block_rule(GridSchedule sched, BlockRuleSpec rule);

    // -- boolean algebra --
    static SetExpr set_union(SetExpr a, SetExpr b);
    static SetExpr set_intersection(SetExpr a, SetExpr b);
    static SetExpr set_difference(SetExpr a, SetExpr b);
    static SetExpr complement(SetExpr a);

    // -- maps and sections --
    static SetExpr image(InjectionExpr f, SetExpr a);
    static SetExpr preimage(InjectionExpr f, SetExpr a);
    static SetExpr column(SetExpr a, Nat index);   // {j : (index, j) in a}
    static SetExpr row_section(SetExpr a, Nat index);  // {i : (i, index) in a}

    // -- generators on product / subset spaces --
    static SetExpr product(SetExpr left, SetExpr right, BaseSpace space);
    static SetExpr lower_triangle();  // D = {(i,j) : i >= j} on omega-squared
    static SetExpr subsets_of(SetExpr s, unsigned n);
    static SetExpr grid_set(Nat v1, Nat v2, Nat alpha, Nat side);  // v + alpha {1..side}^2

    SetExpr with_annotation(Annotation a) const;
    const std::optional<Annotation>& annotation() const { return annotation_; }

    const BaseSpace& space() const { return space_; }
    const Node& node() const { return *node_; }
    std::shared_ptr<const Node> node_ptr() const { return node_; }

    // Structural equality of expression trees (annotations ignored).
    bool same_as(const SetExpr& other) const;

    bool contains(Nat encoded) const;
    Window window(Nat bound) const;

    // Exact count of elements below n, when a closed form exists.
    std::optional<BigInt> count_below(const BigInt& n) const;
    // Closed form if available, enumeration below `enum_cap` otherwise.
    BigInt count_below_checked(const BigInt& n, Nat enum_cap = kEnumCap) const;
    // k-th element in increasing order (0-based).
    std::optional<Nat> select(Nat k) const;

    std::optional<bool> structurally_infinite() const;
    std::optional<Rat> structural_density() const;   // certified natural-density limit
    std::optional<Nat> structural_ap_bound() const;
    // Residue obstruction against finite-sum subsets (e.g. odds).
    std::optional<std::string> fs_obstruction() const;
    // Pair spaces: all first coordinates >= bound have empty sections.
    std::optional<Nat> support_row_bound() const;
    // Pair spaces: uniform bound on |A n ({k} x omega)| over all k.
    std::optional<Nat> structural_column_bound() const;

    // Exact per-interval counts |expr n I_n| for n < n_max.
    std::vector<BigInt> block_counts(const GridSchedule& sched, std::size_t n_max,
                                     Nat enum_cap = kEnumCap) const;

private:
    SetExpr(std::shared_ptr<const Node> n, BaseSpace s) : node_(std::move(n)), space_(s) {}
    std::shared_ptr<const Node> node_;
    BaseSpace space_;
    std::optional<Annotation> annotation_;
};

// {x < n : f(x) = x} as an explicit set; validates injectivity on [0, n).
SetExpr fixed_points(const InjectionExpr& f, Nat n);

// Node definitions (public so serialization and tests can pattern-match).
struct SetExpr::Node {
    struct Explicit { std::vector<Nat> elems; };
    struct Cofinite { std::vector<Nat> excluded; };
    struct Squares {};
    struct Powers { Nat base; };
    struct AP { Nat start, step; };
    struct FS { std::vector<Nat> gens; std::vector<Nat> sums; };
    struct BlockRule { GridSchedule sched; BlockRuleSpec rule; };
    struct Union { SetExpr a, b; };
    struct Intersection { SetExpr a, b; };
    struct Difference { SetExpr a, b; };
    struct Complement { SetExpr a; };
    struct Image { InjectionExpr f; SetExpr a; };
    struct Preimage { InjectionExpr f; SetExpr a; };
    struct Column { SetExpr a; Nat index; };
    struct RowSec { SetExpr a; Nat index; };
    struct Product { SetExpr left, right; };
    struct LowerTriangle {};
    struct SubsetsOf { SetExpr s; unsigned n; };
    struct GridSet { Nat v1, v2, alpha, side; };

    using Variant = std::variant<Explicit, Cofinite, Squares, Powers, AP, FS, BlockRule, Union,
                                 Intersection, Difference, Complement, Image, Preimage, Column,
                                 RowSec, Product, LowerTriangle, SubsetsOf, GridSet>;
    Variant v;
};

struct InjectionExpr::Node {
    struct Identity {};
    struct Shift { Nat k; };
    struct Affine { Nat scale, offset; };
    struct Power { unsigned exponent; };
    struct SwapPairs {};
    struct Enumerate { SetExpr s; };
    struct MatchEnum { SetExpr from, to; };
    struct Piecewise {
        std::vector<std::pair<SetExpr, InjectionExpr>> cases;
        std::shared_ptr<InjectionExpr> fallback;
    };
    struct Compose { std::shared_ptr<InjectionExpr> outer, inner; };
    struct Inverse { std::shared_ptr<InjectionExpr> f; };
    struct ProductMap {
        std::shared_ptr<InjectionExpr> outer, inner_default;
        std::map<Nat, InjectionExpr> inner_exceptions;  // keyed by target row
        BaseSpace space;
    };

    using Variant = std::variant<Identity, Shift, Affine, Power, SwapPairs, Enumerate, MatchEnum,
                                 Piecewise, Compose, Inverse, ProductMap>;
    Variant v;
};

}  // namespace idealab
