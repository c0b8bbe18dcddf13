#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace idealab {

using Nat = std::uint64_t;
using BigInt = mpz_class;
using Rat = mpq_class;

// Error taxonomy shared by all modules.  The `kind` string is stable and is
// what the CLI maps onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

inline Error malformed(const std::string& what) { return Error("malformed-expression", what); }
inline Error effort_exceeded(const std::string& what) { return Error("effort-exceeded", what); }
inline Error space_mismatch(const std::string& what) { return Error("space-mismatch", what); }
inline Error injectivity_violation(const std::string& what) { return Error("injectivity-violation", what); }
inline Error degenerate_weight(const std::string& what) { return Error("degenerate-weight", what); }
inline Error precondition_failed(const std::string& what) { return Error("precondition-failed", what); }
inline Error annotation_inconsistent(const std::string& what) { return Error("annotation-inconsistent", what); }
inline Error parse_error(const std::string& what) { return Error("parse-error", what); }

inline Rat make_rat(BigInt num, BigInt den) {
    if (den == 0) throw malformed("rational with zero denominator");
    Rat r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

inline Rat rat_of(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

inline BigInt big_of(Nat n) {
    BigInt b;
    mpz_import(b.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
    return b;
}

inline std::optional<Nat> to_nat(const BigInt& b) {
    if (b < 0) return std::nullopt;
    if (mpz_sizeinbase(b.get_mpz_t(), 2) > 64) return std::nullopt;
    Nat out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, b.get_mpz_t());
    return out;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt rat_floor(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }
inline BigInt rat_ceil(const Rat& r) { return ceil_div(r.get_num(), r.get_den()); }

// Nearest integer, ties rounding up: [x] = floor(x + 1/2).
inline BigInt rat_nearest(const Rat& r) { return rat_floor(r + make_rat(1, 2)); }

inline BigInt pow_big(const BigInt& base, unsigned long e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline BigInt two_pow(unsigned long e) {
    BigInt out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
    return out;
}

inline BigInt factorial(unsigned long n) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

inline BigInt isqrt_big(const BigInt& n) {
    BigInt out;
    mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

inline Rat rat_pow(const Rat& r, unsigned long e) {
    return make_rat(pow_big(r.get_num(), e), pow_big(r.get_den(), e));
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline std::string rat_str(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& text);

// Dyadic outward rounding (denominator 2^bits).
Rat rat_round_down(const Rat& r, unsigned bits);
Rat rat_round_up(const Rat& r, unsigned bits);

// Exact sum accumulator.  Sums stay exact rationals until the operands'
// sizes pass `exact_bit_limit`; after that both endpoints are maintained as
// dyadic rationals with outward rounding, so [lo, hi] always brackets the
// true sum.  Verdict-relevant comparisons use the sound endpoint.
class RatAccumulator {
public:
    explicit RatAccumulator(std::size_t exact_bit_limit = 4096, unsigned round_bits = 128)
        : exact_bit_limit_(exact_bit_limit), round_bits_(round_bits) {}

    void add(const Rat& term);
    const Rat& lower() const { return lo_; }
    const Rat& upper() const { return hi_; }
    bool exact() const { return exact_; }
    // Midpoint-style representative (equals the sum while exact).
    Rat value() const { return exact_ ? lo_ : (lo_ + hi_) / 2; }

private:
    Rat lo_{0}, hi_{0};
    bool exact_ = true;
    std::size_t exact_bit_limit_;
    unsigned round_bits_;
};

}  // namespace idealab
