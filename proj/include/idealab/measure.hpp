#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idealab/expr.hpp"

namespace idealab {

// Nonnegative weight on the naturals with closed forms where they exist.
class WeightFn {
public:
    enum class Kind { Constant, Harmonic, InvPower, Geometric, PerBlock };
    enum class BlockValue { Length, Start, List };

    static WeightFn constant(Rat c);
    static WeightFn harmonic();                 // w(n) = 1/(n+1)
    static WeightFn inv_power(unsigned p);      // w(n) = 1/(n+1)^p
    static WeightFn geometric(Rat ratio);       // w(n) = ratio^n
    static WeightFn per_block(GridSchedule sched, BlockValue v, std::vector<Rat> values = {});

    Kind kind() const { return kind_; }
    BlockValue block_value() const { return block_value_; }
    const Rat& parameter() const { return param_; }
    unsigned exponent() const { return exponent_; }
    const GridSchedule& schedule() const;
    const std::vector<Rat>& values() const { return values_; }

    Rat value(const BigInt& n) const;
    Rat value_at(Nat n) const { return value(big_of(n)); }
    // Constant value on block n, for per-block weights.
    Rat block_constant(std::size_t n) const;

    bool nonincreasing() const;
    // Upper bound for the full series when it converges.
    std::optional<Rat> total_bound() const;
    // Scale used by divergence thresholds (the first nonzero weight).
    Rat scale() const;

private:
    Kind kind_ = Kind::Constant;
    Rat param_{1};
    unsigned exponent_ = 1;
    std::optional<GridSchedule> sched_;
    BlockValue block_value_ = BlockValue::Length;
    std::vector<Rat> values_;
};

// Lower semicontinuous submeasures used by the Fin/Exh machinery.
struct SubmeasureExpr {
    enum class Kind { SummableWeights, EUNormalized, FarahSup } kind = Kind::SummableWeights;
    WeightFn weight = WeightFn::constant(Rat(1));  // Summable / EU
    std::optional<GridSchedule> sched;             // FarahSup

    static SubmeasureExpr summable(WeightFn w);
    static SubmeasureExpr eu_normalized(WeightFn w);
    static SubmeasureExpr farah_sup(GridSchedule sched);

    // phi(A) evaluated on the window [0, bound).
    Rat window_value(const SetExpr& a, Nat bound) const;
};

struct DensityEstimate {
    BigInt bound;                                   // window N
    Rat ratio;                                      // |A n [0,N)| / N, exact
    std::vector<std::pair<BigInt, Rat>> checkpoints;  // (2^k, ratio)
    Rat liminf_env{0}, limsup_env{0};               // min/max over the tail half
};

DensityEstimate density_window(const SetExpr& a, const BigInt& bound, Nat enum_cap = kEnumCap);

struct PartialSum {
    Rat lower{0};              // certified lower bound
    std::optional<Rat> upper;  // certified upper bound; equals lower when exact
    bool exact = true;
    std::string method;  // "enumeration", "per-block", "constant", "dyadic-lower-bound"
};

// Sum of w over A n [0, bound), exact when feasible; for monotone weights a
// certified dyadic-block lower bound is produced beyond the enumeration cap.
PartialSum summable_partial(const WeightFn& w, const SetExpr& a, const BigInt& bound,
                            Nat enum_cap = kEnumCap);

// A_w[1, n] / omega_w[1, n] with the inclusive interval convention.
Rat eu_ratio(const WeightFn& w, const SetExpr& a, const BigInt& n, Nat enum_cap = kEnumCap);

// |A n I_n| / |I_n|, exact.
Rat farah_block_measure(const GridSchedule& sched, const SetExpr& a, std::size_t n,
                        Nat enum_cap = kEnumCap);

struct TailEstimate {
    Rat lower{0};
    std::optional<Rat> upper;  // closed-form tail bound when available
};

// phi(A n [cut, inf)) bracketed from windows and closed forms.
TailEstimate exh_tail(const SubmeasureExpr& phi, const SetExpr& a, Nat cut, Nat effort);

struct AbelDiniReport {
    std::vector<std::pair<BigInt, PartialSum>> checkpoints;  // (n, partial sum through n)
    PartialSum final_sum;
    bool bounded_below_two = false;  // convenience flag for the delta=1, x=1 case
};

// Partial sums of x_n / (x_1 + ... + x_n)^{1+delta}, terms indexed from 1
// with x_n = w(n-1).  delta must be a nonnegative integer for exactness.
AbelDiniReport abel_dini(const WeightFn& x, const Rat& delta, const BigInt& n_max);

struct InvarianceSample {
    std::string name;
    Rat phi_a{0}, phi_fa{0};
    bool holds = false;  // phi(A) >= c * phi(f[A])
};

struct FinExhReport {
    bool all_hold = true;
    std::vector<InvarianceSample> samples;
};

// Checks phi(A) >= c phi(f[A]) on a named family of sample sets, windowed.
FinExhReport finexh_invariance_check(const SubmeasureExpr& phi, const InjectionExpr& f,
                                     const Rat& c,
                                     const std::vector<std::pair<std::string, SetExpr>>& family,
                                     Nat bound);

}  // namespace idealab
