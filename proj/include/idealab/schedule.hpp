#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "idealab/rational.hpp"

namespace idealab {

// A partition of the naturals (from `start_offset()` on) into consecutive
// intervals I_0, I_1, ...  Offsets and lengths are exact big integers; the
// per-kind length laws are:
//   factorial:          |I_n| = n!
//   two-pow-factorial:  |I_n| = (2^n)!        (starts at 0)
//   dyadic-kn:          I_n = [2^{k_n}, 2^{k_{n+1}}) for the recursion
//                       k_0 = 0, k_n = min{x : 2^x >= n * 2^{k_{n-1}}}
//   dyadic:             I_0 = [0,2), I_n = [2^n, 2^{n+1}) for n >= 1
//   custom:             explicit length list (repeating the last length)
class GridSchedule {
public:
    enum class Kind { Factorial, TwoPowFactorial, DyadicKn, Dyadic, Custom };

    static GridSchedule factorial() { return GridSchedule(Kind::Factorial, {}); }
    static GridSchedule two_pow_factorial() { return GridSchedule(Kind::TwoPowFactorial, {}); }
    static GridSchedule dyadic_kn() { return GridSchedule(Kind::DyadicKn, {}); }
    static GridSchedule dyadic() { return GridSchedule(Kind::Dyadic, {}); }
    static GridSchedule custom(std::vector<BigInt> lengths);

    Kind kind() const { return state_->kind; }
    const std::vector<BigInt>& custom_lengths() const { return state_->custom; }
    std::string kind_name() const;

    BigInt start_offset() const;  // first covered natural (1 for dyadic-kn)
    BigInt length(std::size_t n) const;
    BigInt start(std::size_t n) const;
    BigInt end(std::size_t n) const { return start(n) + length(n); }
    BigInt max_elem(std::size_t n) const;  // throws on empty interval

    // Exponent sequence of the dyadic-kn recursion.
    unsigned long k_exponent(std::size_t n) const;

    // Block index containing x; nullopt when x < start_offset().
    std::optional<std::size_t> block_of(const BigInt& x) const;

    bool operator==(const GridSchedule& o) const;

private:
    GridSchedule(Kind k, std::vector<BigInt> custom);

    struct State {
        Kind kind;
        std::vector<BigInt> custom;
        mutable std::mutex mu;
        mutable std::vector<BigInt> starts;   // starts[n] = start of I_n
        mutable std::vector<BigInt> lengths;  // lengths[n] = |I_n|
        mutable std::vector<unsigned long> kseq;
    };
    void ensure(std::size_t n) const;
    std::shared_ptr<State> state_;
};

}  // namespace idealab
