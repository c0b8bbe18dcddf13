#include "idealab/measure.hpp"

#include <algorithm>

namespace idealab {

namespace {

constexpr unsigned kIntervalBits = 128;

// Interval accumulator with asymmetric endpoints and outward dyadic rounding.
struct IntervalSum {
    Rat lo{0}, hi{0};
    bool exact = true;
    std::size_t bit_limit = 2048;

    void add(const Rat& t_lo, const Rat& t_hi) {
        lo += t_lo;
        hi += t_hi;
        if (t_lo != t_hi) exact = false;
        std::size_t bits = mpz_sizeinbase(lo.get_den().get_mpz_t(), 2) +
                           mpz_sizeinbase(hi.get_den().get_mpz_t(), 2);
        if (bits > bit_limit) {
            exact = false;
            lo = rat_round_down(lo, kIntervalBits);
            hi = rat_round_up(hi, kIntervalBits);
        }
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// WeightFn

WeightFn WeightFn::constant(Rat c) {
    if (c < 0) throw degenerate_weight("negative constant weight");
    WeightFn w;
    w.kind_ = Kind::Constant;
    w.param_ = std::move(c);
    return w;
}

WeightFn WeightFn::harmonic() {
    WeightFn w;
    w.kind_ = Kind::Harmonic;
    return w;
}

WeightFn WeightFn::inv_power(unsigned p) {
    if (p == 0) throw degenerate_weight("inv-power weight needs p >= 1");
    WeightFn w;
    w.kind_ = Kind::InvPower;
    w.exponent_ = p;
    return w;
}

WeightFn WeightFn::geometric(Rat ratio) {
    if (ratio <= 0 || ratio >= 1) throw degenerate_weight("geometric ratio must be in (0,1)");
    WeightFn w;
    w.kind_ = Kind::Geometric;
    w.param_ = std::move(ratio);
    return w;
}

WeightFn WeightFn::per_block(GridSchedule sched, BlockValue v, std::vector<Rat> values) {
    WeightFn w;
    w.kind_ = Kind::PerBlock;
    w.sched_ = std::move(sched);
    w.block_value_ = v;
    if (v == BlockValue::List) {
        if (values.empty()) throw degenerate_weight("per-block list weight needs values");
        for (const auto& x : values)
            if (x < 0) throw degenerate_weight("negative per-block weight");
    }
    w.values_ = std::move(values);
    return w;
}

const GridSchedule& WeightFn::schedule() const {
    if (!sched_) throw malformed("weight has no schedule");
    return *sched_;
}

Rat WeightFn::block_constant(std::size_t n) const {
    if (kind_ != Kind::PerBlock) throw malformed("not a per-block weight");
    switch (block_value_) {
        case BlockValue::Length: return Rat(sched_->length(n));
        case BlockValue::Start: return Rat(sched_->start(n));
        case BlockValue::List: return values_[std::min(n, values_.size() - 1)];
    }
    return Rat(0);
}

Rat WeightFn::value(const BigInt& n) const {
    switch (kind_) {
        case Kind::Constant:
            return param_;
        case Kind::Harmonic:
            return make_rat(1, n + 1);
        case Kind::InvPower:
            return make_rat(1, pow_big(n + 1, exponent_));
        case Kind::Geometric: {
            auto e = to_nat(n);
            if (!e || *e > 1'000'000) throw effort_exceeded("geometric weight exponent too large");
            return rat_pow(param_, static_cast<unsigned long>(*e));
        }
        case Kind::PerBlock: {
            auto blk = sched_->block_of(n);
            if (!blk) return Rat(0);  // below the schedule's start offset
            return block_constant(*blk);
        }
    }
    return Rat(0);
}

bool WeightFn::nonincreasing() const {
    switch (kind_) {
        case Kind::Constant:
        case Kind::Harmonic:
        case Kind::InvPower:
            return true;
        case Kind::Geometric:
            return param_ <= 1;
        case Kind::PerBlock:
            if (block_value_ != BlockValue::List) return false;  // lengths/starts grow
            for (std::size_t i = 1; i < values_.size(); ++i)
                if (values_[i] > values_[i - 1]) return false;
            return true;
    }
    return false;
}

std::optional<Rat> WeightFn::total_bound() const {
    switch (kind_) {
        case Kind::Geometric:
            return Rat(1) / (Rat(1) - param_);
        case Kind::InvPower:
            if (exponent_ >= 2) return Rat(1) + make_rat(1, BigInt(exponent_ - 1));
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

Rat WeightFn::scale() const {
    switch (kind_) {
        case Kind::Constant:
            return param_ == 0 ? Rat(1) : param_;
        case Kind::Harmonic:
        case Kind::InvPower:
        case Kind::Geometric:
            return Rat(1);
        case Kind::PerBlock:
            for (std::size_t n = 0; n < 64; ++n) {
                if (sched_->length(n) == 0) continue;
                Rat v = block_constant(n);
                if (v > 0) return v;
            }
            return Rat(1);
    }
    return Rat(1);
}

// ---------------------------------------------------------------------------
// Submeasures

SubmeasureExpr SubmeasureExpr::summable(WeightFn w) {
    SubmeasureExpr s;
    s.kind = Kind::SummableWeights;
    s.weight = std::move(w);
    return s;
}

SubmeasureExpr SubmeasureExpr::eu_normalized(WeightFn w) {
    SubmeasureExpr s;
    s.kind = Kind::EUNormalized;
    s.weight = std::move(w);
    return s;
}

SubmeasureExpr SubmeasureExpr::farah_sup(GridSchedule sched) {
    SubmeasureExpr s;
    s.kind = Kind::FarahSup;
    s.sched = std::move(sched);
    return s;
}

Rat SubmeasureExpr::window_value(const SetExpr& a, Nat bound) const {
    switch (kind) {
        case Kind::SummableWeights: {
            Rat total(0);
            for (Nat x : a.window(bound).elems) total += weight.value_at(x);
            return total;
        }
        case Kind::EUNormalized: {
            // sup over n <= bound of A_w[1,n] / omega_w[1,n]
            Rat a_cum(0), w_cum(0), best(0);
            auto w_elems = a.window(bound).elems;
            std::size_t idx = 0;
            for (Nat n = 1; n < bound; ++n) {
                Rat wn = weight.value_at(n);
                w_cum += wn;
                while (idx < w_elems.size() && w_elems[idx] < n) ++idx;
                if (idx < w_elems.size() && w_elems[idx] == n) a_cum += wn;
                if (w_cum > 0) {
                    Rat r = a_cum / w_cum;
                    if (r > best) best = r;
                }
            }
            return best;
        }
        case Kind::FarahSup: {
            Rat best(0);
            auto w_elems = a.window(bound).elems;
            std::size_t idx = 0;
            for (std::size_t n = 0; sched->start(n) < big_of(bound); ++n) {
                BigInt len = sched->length(n);
                if (len == 0) continue;
                auto s = to_nat(sched->start(n));
                BigInt cnt = 0;
                while (idx < w_elems.size() && big_of(w_elems[idx]) < sched->end(n)) {
                    if (s && w_elems[idx] >= *s) ++cnt;
                    ++idx;
                }
                Rat v = make_rat(cnt, len);
                if (v > best) best = v;
            }
            return best;
        }
    }
    return Rat(0);
}

// ---------------------------------------------------------------------------
// Density

DensityEstimate density_window(const SetExpr& a, const BigInt& bound, Nat enum_cap) {
    if (bound <= 0) throw malformed("density window needs N >= 1");
    DensityEstimate est;
    est.bound = bound;

    // A single enumeration serves all checkpoints when there is no closed form.
    std::optional<std::vector<Nat>> enumerated;
    auto count_at = [&](const BigInt& n) -> BigInt {
        if (auto c = a.count_below(n)) return *c;
        if (!enumerated) {
            auto nb = to_nat(bound);
            if (!nb || *nb > enum_cap)
                throw effort_exceeded("no closed-form count and window exceeds the cap");
            enumerated = a.window(*nb).elems;
        }
        auto nn = to_nat(n);
        auto it = std::lower_bound(enumerated->begin(), enumerated->end(), *nn);
        return BigInt(static_cast<unsigned long>(it - enumerated->begin()));
    };

    est.ratio = make_rat(count_at(bound), bound);
    for (BigInt n = 1; n < bound; n *= 2) est.checkpoints.emplace_back(n, make_rat(count_at(n), n));
    est.checkpoints.emplace_back(bound, est.ratio);

    std::size_t tail_from = est.checkpoints.size() / 2;
    est.liminf_env = est.checkpoints[tail_from].second;
    est.limsup_env = est.checkpoints[tail_from].second;
    for (std::size_t i = tail_from; i < est.checkpoints.size(); ++i) {
        est.liminf_env = std::min(est.liminf_env, est.checkpoints[i].second);
        est.limsup_env = std::max(est.limsup_env, est.checkpoints[i].second);
    }
    return est;
}

// ---------------------------------------------------------------------------
// Partial sums

namespace {

// Exact per-block sum when the weight is constant on schedule blocks and the
// set has closed-form counts at block edges.
std::optional<Rat> per_block_sum(const WeightFn& w, const SetExpr& a, const BigInt& from,
                                 const BigInt& bound) {
    if (w.kind() != WeightFn::Kind::PerBlock) return std::nullopt;
    const GridSchedule& sched = w.schedule();
    Rat total(0);
    for (std::size_t n = 0; sched.start(n) < bound; ++n) {
        if (sched.length(n) == 0) continue;
        BigInt lo = std::max(sched.start(n), from);
        BigInt hi = std::min(sched.end(n), bound);
        if (lo >= hi) continue;
        auto chi = a.count_below(hi);
        auto clo = a.count_below(lo);
        if (!chi || !clo) return std::nullopt;
        total += w.block_constant(n) * Rat(*chi - *clo);
    }
    return total;
}

std::optional<Rat> constant_sum(const WeightFn& w, const SetExpr& a, const BigInt& from,
                                const BigInt& bound) {
    if (w.kind() != WeightFn::Kind::Constant) return std::nullopt;
    auto chi = a.count_below(bound);
    auto clo = a.count_below(from);
    if (!chi || !clo) return std::nullopt;
    return w.parameter() * Rat(*chi - *clo);
}

}  // namespace

PartialSum summable_partial(const WeightFn& w, const SetExpr& a, const BigInt& bound,
                            Nat enum_cap) {
    PartialSum out;
    if (auto s = constant_sum(w, a, BigInt(0), bound)) {
        out.lower = *s;
        out.upper = *s;
        out.method = "constant";
        return out;
    }
    if (auto s = per_block_sum(w, a, BigInt(0), bound)) {
        out.lower = *s;
        out.upper = *s;
        out.method = "per-block";
        return out;
    }
    auto nb = to_nat(bound);
    if (nb && *nb <= enum_cap) {
        IntervalSum acc;
        for (Nat x : a.window(*nb).elems) {
            Rat v = w.value_at(x);
            acc.add(v, v);
        }
        out.lower = acc.lo;
        out.upper = acc.hi;
        out.exact = acc.exact;
        out.method = "enumeration";
        return out;
    }
    if (w.nonincreasing()) {
        // Dyadic-block lower bound: each block contributes count * (min weight).
        Rat total(0);
        BigInt lo = 0, hi = 1;
        bool complete = true;
        while (lo < bound) {
            BigInt cut = std::min(hi, bound);
            auto chi = a.count_below(cut);
            auto clo = a.count_below(lo);
            if (!chi || !clo) {
                complete = false;
                break;
            }
            total += w.value(cut - 1) * Rat(*chi - *clo);
            lo = hi;
            hi *= 2;
        }
        if (complete) {
            out.lower = total;
            out.upper = std::nullopt;
            out.exact = false;
            out.method = "dyadic-lower-bound";
            return out;
        }
    }
    throw effort_exceeded("partial sum has no closed form and exceeds the enumeration cap");
}

namespace {

// Exact sum of w over A n [1, n] (inclusive), or nullopt.
std::optional<Rat> eu_sum(const WeightFn& w, const SetExpr& a, const BigInt& n, Nat enum_cap) {
    BigInt bound = n + 1;
    if (auto s = constant_sum(w, a, BigInt(1), bound)) return s;
    if (auto s = per_block_sum(w, a, BigInt(1), bound)) return s;
    auto nb = to_nat(bound);
    if (nb && *nb <= enum_cap) {
        Rat total(0);
        for (Nat x : a.window(*nb).elems)
            if (x >= 1) total += w.value_at(x);
        return total;
    }
    return std::nullopt;
}

}  // namespace

Rat eu_ratio(const WeightFn& w, const SetExpr& a, const BigInt& n, Nat enum_cap) {
    auto num = eu_sum(w, a, n, enum_cap);
    auto den = eu_sum(w, SetExpr::full(a.space()), n, enum_cap);
    if (!num || !den)
        throw effort_exceeded("eu ratio has no exact evaluation at n = " + n.get_str());
    if (*den == 0) throw degenerate_weight("omega_w[1,n] is zero");
    return *num / *den;
}

Rat farah_block_measure(const GridSchedule& sched, const SetExpr& a, std::size_t n, Nat enum_cap) {
    BigInt len = sched.length(n);
    if (len == 0) throw malformed("interval I_" + std::to_string(n) + " is empty");
    auto counts = [&]() -> BigInt {
        auto chi = a.count_below(sched.end(n));
        auto clo = a.count_below(sched.start(n));
        if (chi && clo) return *chi - *clo;
        auto s = to_nat(sched.start(n));
        auto e = to_nat(sched.end(n));
        if (!s || !e || len > big_of(enum_cap))
            throw effort_exceeded("block count for I_" + std::to_string(n) + " unavailable");
        BigInt c = 0;
        for (Nat x = *s; x < *e; ++x)
            if (a.contains(x)) ++c;
        return c;
    }();
    return make_rat(counts, len);
}

TailEstimate exh_tail(const SubmeasureExpr& phi, const SetExpr& a, Nat cut, Nat effort) {
    TailEstimate est;
    Nat bound = std::max<Nat>(effort, cut + 1);
    SetExpr tail = SetExpr::set_difference(a, SetExpr::explicit_set([&] {
        std::vector<Nat> head;
        head.reserve(cut);
        for (Nat x : a.window(cut).elems) head.push_back(x);
        return head;
    }()));
    est.lower = phi.window_value(tail, bound);

    if (a.structurally_infinite() == std::optional<bool>(false)) {
        // finite set: the window value is the exact tail value once the
        // window covers the whole set
        auto all = a.window(Nat(1) << 22).elems;
        if (all.empty() || all.back() < bound) est.upper = est.lower;
        return est;
    }
    if (phi.kind == SubmeasureExpr::Kind::SummableWeights) {
        const WeightFn& w = phi.weight;
        if (w.kind() == WeightFn::Kind::Geometric) {
            est.upper = rat_pow(w.parameter(), cut) / (Rat(1) - w.parameter());
        } else if (w.kind() == WeightFn::Kind::InvPower && w.exponent() >= 2 && cut >= 1) {
            est.upper = make_rat(1, BigInt(w.exponent() - 1)) /
                        Rat(pow_big(big_of(cut), w.exponent() - 1));
        }
    } else if (phi.kind == SubmeasureExpr::Kind::FarahSup) {
        // constant per-block counts on a growing schedule give a closed tail
        if (auto* br = std::get_if<SetExpr::Node::BlockRule>(&a.node().v)) {
            bool growing = br->sched.kind() != GridSchedule::Kind::Custom;
            bool const_rule = (br->rule.kind == BlockRuleSpec::Kind::First ||
                               br->rule.kind == BlockRuleSpec::Kind::Last) &&
                              br->rule.count.kind == CountFn::Kind::Constant;
            if (growing && const_rule && br->sched == *phi.sched) {
                auto blk = phi.sched->block_of(big_of(cut));
                std::size_t b0 = blk ? *blk : 0;
                while (phi.sched->length(b0) == 0) ++b0;
                est.upper = make_rat(br->rule.count.constant, phi.sched->length(b0));
            }
        }
    }
    return est;
}

AbelDiniReport abel_dini(const WeightFn& x, const Rat& delta, const BigInt& n_max) {
    if (delta < 0 || delta.get_den() != 1)
        throw malformed("abel-dini exponent must be a nonnegative integer");
    unsigned long e = 1 + delta.get_num().get_ui();
    auto nm = to_nat(n_max);
    if (!nm || *nm > 2'000'000) throw effort_exceeded("abel-dini horizon too large");

    AbelDiniReport rep;
    IntervalSum s;    // running x_1 + ... + x_n
    IntervalSum sum;  // running sum of terms
    BigInt next_checkpoint = 1;
    for (Nat n = 1; n <= *nm; ++n) {
        Rat xn = x.value(big_of(n - 1));
        if (xn <= 0) throw malformed("abel-dini needs positive terms");
        s.add(xn, xn);
        Rat t_lo = xn / rat_pow(s.hi, e);
        Rat t_hi = xn / rat_pow(s.lo, e);
        sum.add(t_lo, t_hi);
        if (big_of(n) == next_checkpoint || n == *nm) {
            PartialSum p;
            p.lower = sum.lo;
            p.upper = sum.hi;
            p.exact = sum.exact;
            p.method = sum.exact ? "enumeration" : "certified-interval";
            rep.checkpoints.emplace_back(big_of(n), p);
            while (next_checkpoint <= big_of(n)) next_checkpoint *= 2;
        }
    }
    if (!rep.checkpoints.empty()) rep.final_sum = rep.checkpoints.back().second;
    rep.bounded_below_two = rep.final_sum.upper && *rep.final_sum.upper < 2;
    return rep;
}

FinExhReport finexh_invariance_check(const SubmeasureExpr& phi, const InjectionExpr& f,
                                     const Rat& c,
                                     const std::vector<std::pair<std::string, SetExpr>>& family,
                                     Nat bound) {
    if (c <= 0) throw malformed("invariance constant must be positive");
    if (f.increasing() == std::optional<bool>(false))
        throw precondition_failed("injection must be increasing");
    Nat prev = 0;
    bool first = true;
    for (Nat x = 0; x < std::min<Nat>(bound, 4096); ++x) {
        auto y = f.apply(x);
        if (!y) continue;
        if (!first && *y <= prev) throw precondition_failed("injection must be increasing");
        prev = *y;
        first = false;
    }

    FinExhReport rep;
    Nat image_bound = f.forward_bound(bound);
    for (const auto& [name, a] : family) {
        InvarianceSample s;
        s.name = name;
        s.phi_a = phi.window_value(a, bound);
        s.phi_fa = phi.window_value(SetExpr::image(f, a), image_bound);
        s.holds = s.phi_a >= c * s.phi_fa;
        rep.all_hold = rep.all_hold && s.holds;
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

}  // namespace idealab
