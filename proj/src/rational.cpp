#include "idealab/rational.hpp"

namespace idealab {

Rat parse_rat(const std::string& text) {
    Rat r;
    if (r.set_str(text, 10) != 0) throw parse_error("bad rational literal '" + text + "'");
    r.canonicalize();
    return r;
}

Rat rat_round_down(const Rat& r, unsigned bits) {
    BigInt scaled = floor_div(r.get_num() << bits, r.get_den());
    return make_rat(scaled, two_pow(bits));
}

Rat rat_round_up(const Rat& r, unsigned bits) {
    BigInt scaled = ceil_div(r.get_num() << bits, r.get_den());
    return make_rat(scaled, two_pow(bits));
}

namespace {

std::size_t rat_bits(const Rat& r) {
    return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) + mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
}

}  // namespace

void RatAccumulator::add(const Rat& term) {
    lo_ += term;
    if (exact_) {
        if (rat_bits(lo_) <= exact_bit_limit_) {
            hi_ = lo_;
            return;
        }
        exact_ = false;
        hi_ = lo_;
    } else {
        hi_ += term;
    }
    lo_ = rat_round_down(lo_, round_bits_);
    hi_ = rat_round_up(hi_, round_bits_);
}

}  // namespace idealab
