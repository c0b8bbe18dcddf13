#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idealab/ideal.hpp"

namespace idealab {

// A window-validated isomorphism witness: `map` carries `source` onto
// `target` and is expected to transfer membership on the checked family.
struct IsoWitness {
    SetExpr source;
    SetExpr target;
    InjectionExpr map;
    Json params = Json::object();
};

struct CheckResult {
    std::string name;
    bool pass = true;
    Json details = Json::object();
};

struct WitnessReport {
    std::string construction;
    Json params = Json::object();
    Nat window = 0;
    std::vector<CheckResult> checks;
    bool pass = true;
    Json counterexample;        // first failing detail, when any
    Json data = Json::object();  // construction-specific payload

    void add(const std::string& name, bool ok, Json details = Json::object());
    Json to_json() const;
};

// Bijectivity of w.map between w.source and w.target on windows [0, n) and
// [0, m), plus re-evaluation consistency, plus membership transfer on a test
// family when an ideal is supplied.
WitnessReport validate_iso(const IsoWitness& w, Nat n, Nat m,
                           const std::optional<IdealDescriptor>& ideal,
                           const std::vector<std::pair<std::string, SetExpr>>& family,
                           Nat effort = 8);

// Standard transfer family on omega (sections/blocks/sparse generators).
std::vector<std::pair<std::string, SetExpr>> standard_omega_family();

// ---------------------------------------------------------------------------
// Constructions

// Witness for restrictions to co-small sets: fixes A minus B and matches
// B u complement(A) onto B by increasing enumeration.
struct CostarResult {
    IsoWitness iso;
    WitnessReport report;
};
CostarResult costar_witness(const IdealDescriptor& ideal, const SetExpr& a, const SetExpr& b,
                            Nat window, Nat effort = 8);

// Given a bijection f from omega onto A and a superset B of A, builds the
// bijection onto B that fixes new points and inverse-orbit escapees.
struct SupersetClosureResult {
    IsoWitness iso;                // the adjusted map onto B
    std::vector<Nat> orbit_fixed;  // A' within the window
    SetExpr fixed_region;          // M = A' u (B minus A)
    WitnessReport report;
};
SupersetClosureResult superset_closure(const InjectionExpr& f, const SetExpr& a, const SetExpr& b,
                                       Nat window);

// Column-selection witness for the bounded-columns ideal on D.
struct EdfinWitnessResult {
    IsoWitness iso;  // map D -> A' built from chosen columns
    std::vector<Nat> columns;
    WitnessReport report;
};
EdfinWitnessResult edfin_witness(const SetExpr& a, Nat depth, Nat window);

// Product map phi((i,j)) = (g(i), f_i(j)) from outer and per-row witnesses.
struct ProductWitnessResult {
    IsoWitness iso;
    WitnessReport report;
};
ProductWitnessResult product_witness(const InjectionExpr& outer,
                                     const InjectionExpr& inner_default,
                                     const std::map<Nat, InjectionExpr>& inner_exceptions,
                                     BaseSpace space, Nat window);

// Separated homothetic grids inside a square-plane set, with the piecewise
// relabeling onto the plane.
struct GallaiBlock {
    Nat order_index;  // position in the pairing enumeration
    Nat i, j;         // block coordinates (side 2^i, slab j)
    Nat v1, v2, alpha, side;
};
struct Gallai2Result {
    std::vector<GallaiBlock> blocks;
    WitnessReport report;
};
Gallai2Result gallai2_witness(const SetExpr& a, Nat depth, Nat box_cap = 1 << 16);

// Increasing-enumeration witness for positive-lower-density sets.
struct IddEnumResult {
    IsoWitness iso;
    Nat linear_bound = 0;  // least C with a_n <= C n on the window
    WitnessReport report;
};
IddEnumResult idd_enum_witness(const SetExpr& a, const Rat& lower_density_bound, Nat window);

// Greedy disjoint pair extraction along an injection.
struct C1PairsResult {
    std::vector<std::pair<Nat, Nat>> pairs;  // (a_n, b_n = f(a_n))
    SetExpr a_side, b_side;
    WitnessReport report;
};
C1PairsResult c1_pair_extraction(const InjectionExpr& f, Nat pair_count, Nat window);

// Three-piece involution from a partial isomorphism between A and B.
struct C1BuilderResult {
    InjectionExpr g;
    SetExpr moved;  // the branch set actually used
    std::string branch_used;
    WitnessReport report;
};
C1BuilderResult c1_builder(const SetExpr& a, const SetExpr& b, const InjectionExpr& f,
                           const IdealDescriptor& ideal, Nat window, Nat effort = 8);

// Exact reproduction of the shifted-maxima counterexample on the (2^n)!
// schedule.
WitnessReport eu_nondense_counterexample(std::size_t n_max);

// Exact reproduction of the dense counterexample on the 2^{k_n} schedule.
// Case 1 uses the tail-block set at scale b; case 2 verifies a supplied
// representing weight via the series-thinning construction.
WitnessReport eu_dense_counterexample(std::size_t n_max, int which_case, const Rat& b,
                                      const std::optional<WeightFn>& g);

// Partition of the factorial-schedule blocks by where an injection sends
// them, with exact block measures of each part.
struct AntihomogResult {
    struct BlockRow {
        std::size_t n;
        BigInt below, inside, above, image_above;  // counts within I_n
        Rat phi_below, phi_image_above;
    };
    std::vector<BlockRow> rows;
    WitnessReport report;
};
AntihomogResult antihomog_partition(const InjectionExpr& f, std::size_t n_max,
                                    const std::optional<SetExpr>& target = std::nullopt);

}  // namespace idealab
