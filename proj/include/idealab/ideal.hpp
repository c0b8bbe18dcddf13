#pragma once

#include <memory>
#include <string>
#include <vector>

#include "idealab/detect.hpp"
#include "idealab/measure.hpp"
#include "idealab/verdict.hpp"

namespace idealab {

// The ideal catalog plus combinators.  A descriptor fixes the base space its
// member sets must live on.
class IdealDescriptor {
public:
    struct Node;

    static IdealDescriptor fin();
    static IdealDescriptor fin_oplus_full();  // {A : the copy-1 section is finite}
    static IdealDescriptor ed_fin();          // bounded-columns ideal on D
    static IdealDescriptor ramsey(unsigned n);
    static IdealDescriptor van_der_waerden();
    static IdealDescriptor hindman();
    static IdealDescriptor folkman();
    static IdealDescriptor gallai(unsigned n);  // n in {1, 2}
    static IdealDescriptor density_zero();
    static IdealDescriptor summable(WeightFn w);
    static IdealDescriptor erdos_ulam(WeightFn w);
    static IdealDescriptor farah_density(GridSchedule sched);

    const Node& node() const { return *node_; }
    std::shared_ptr<const Node> node_ptr() const { return node_; }
    BaseSpace space() const;
    std::string name() const;

private:
    friend IdealDescriptor restrict_ideal(IdealDescriptor, SetExpr);
    friend IdealDescriptor direct_sum(IdealDescriptor, IdealDescriptor);
    friend IdealDescriptor fubini_product(IdealDescriptor, IdealDescriptor);
    friend IdealDescriptor fubini_sum(IdealDescriptor, std::vector<IdealDescriptor>,
                                      IdealDescriptor);
    explicit IdealDescriptor(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

IdealDescriptor restrict_ideal(IdealDescriptor ideal, SetExpr carrier);
IdealDescriptor direct_sum(IdealDescriptor left, IdealDescriptor right);
IdealDescriptor fubini_product(IdealDescriptor outer, IdealDescriptor inner);
IdealDescriptor fubini_sum(IdealDescriptor outer, std::vector<IdealDescriptor> inners,
                           IdealDescriptor inner_default);

struct MemberOptions {
    // Divergence threshold for summable/EU "out" evidence, as a multiple of
    // the weight scale.
    Rat divergence_scale{1000};
    Nat enum_cap = kEnumCap;
};

// Three-valued membership with certificates.  `effort` scales both the
// evidence targets and the window budget (about 1024 * (effort + 1), capped
// at 2^20).  Proven verdicts are effort-independent.
Verdict member(const IdealDescriptor& ideal, const SetExpr& a, Nat effort,
               const MemberOptions& opts = {});

// Re-checks a verdict's certificate against the set; used by the soundness
// suite and by report consumers.
bool replay_certificate(const IdealDescriptor& ideal, const SetExpr& a, const Verdict& v);

// Hard consistency check of a set's analytic annotation against window
// statistics; throws annotation-inconsistent on failure.
void check_annotation(const SetExpr& a, Nat enum_cap = kEnumCap);

struct IdealDescriptor::Node {
    struct Fin {};
    struct FinOplusFull {};
    struct EDfin {};
    struct Ramsey { unsigned n; };
    struct VanDerWaerden {};
    struct Hindman {};
    struct Folkman {};
    struct Gallai { unsigned n; };
    struct DensityZero {};
    struct Summable { WeightFn w; };
    struct ErdosUlam { WeightFn w; };
    struct FarahDensity { GridSchedule sched; };
    struct Restriction { IdealDescriptor inner; SetExpr carrier; };
    struct DirectSum { IdealDescriptor left, right; };
    struct FubiniProduct { IdealDescriptor outer, inner; };
    struct FubiniSum {
        IdealDescriptor outer;
        std::vector<IdealDescriptor> inners;
        IdealDescriptor inner_default;
    };

    using Variant = std::variant<Fin, FinOplusFull, EDfin, Ramsey, VanDerWaerden, Hindman, Folkman,
                                 Gallai, DensityZero, Summable, ErdosUlam, FarahDensity,
                                 Restriction, DirectSum, FubiniProduct, FubiniSum>;
    Variant v;
};

}  // namespace idealab
