#include "idealab/schedule.hpp"

#include <algorithm>

namespace idealab {

namespace {
// (2^n)! beyond this is not materializable at desk scale.
constexpr std::size_t kTwoPowFactorialCap = 24;
}  // namespace

GridSchedule::GridSchedule(Kind k, std::vector<BigInt> custom) : state_(std::make_shared<State>()) {
    state_->kind = k;
    state_->custom = std::move(custom);
}

GridSchedule GridSchedule::custom(std::vector<BigInt> lengths) {
    if (lengths.empty()) throw malformed("custom schedule needs at least one length");
    for (const auto& l : lengths)
        if (l <= 0) throw malformed("custom schedule lengths must be positive");
    return GridSchedule(Kind::Custom, std::move(lengths));
}

std::string GridSchedule::kind_name() const {
    switch (state_->kind) {
        case Kind::Factorial: return "factorial";
        case Kind::TwoPowFactorial: return "two-pow-factorial";
        case Kind::DyadicKn: return "dyadic-kn";
        case Kind::Dyadic: return "dyadic";
        case Kind::Custom: return "custom";
    }
    return "?";
}

BigInt GridSchedule::start_offset() const {
    return state_->kind == Kind::DyadicKn ? BigInt(1) : BigInt(0);
}

void GridSchedule::ensure(std::size_t n) const {
    State& s = *state_;
    std::lock_guard<std::mutex> lock(s.mu);
    if (s.starts.empty()) {
        s.starts.push_back(start_offset());
        if (s.kind == Kind::DyadicKn) s.kseq = {0, 0};  // k_0 = 0, k_1 = min{x: 2^x >= 1} = 0
    }
    while (s.lengths.size() <= n) {
        std::size_t i = s.lengths.size();
        BigInt len;
        switch (s.kind) {
            case Kind::Factorial:
                len = idealab::factorial(static_cast<unsigned long>(i));
                break;
            case Kind::TwoPowFactorial: {
                if (i > kTwoPowFactorialCap)
                    throw effort_exceeded("(2^n)! schedule beyond n=" +
                                          std::to_string(kTwoPowFactorialCap));
                unsigned long m = 1UL << i;
                len = idealab::factorial(m);
                break;
            }
            case Kind::DyadicKn: {
                while (s.kseq.size() <= i + 1) {
                    std::size_t m = s.kseq.size();  // computing k_m, m >= 2
                    BigInt need = BigInt(static_cast<unsigned long>(m)) * two_pow(s.kseq[m - 1]);
                    unsigned long x = s.kseq[m - 1];
                    while (two_pow(x) < need) ++x;
                    // min{x : 2^x >= m 2^{k_{m-1}}}; scan down in case k_{m-1} overshot
                    while (x > 0 && two_pow(x - 1) >= need) --x;
                    s.kseq.push_back(x);
                }
                len = two_pow(s.kseq[i + 1]) - two_pow(s.kseq[i]);
                break;
            }
            case Kind::Dyadic:
                len = i == 0 ? BigInt(2) : two_pow(static_cast<unsigned long>(i));
                break;
            case Kind::Custom:
                len = s.custom[std::min(i, s.custom.size() - 1)];
                break;
        }
        s.lengths.push_back(len);
        s.starts.push_back(s.starts.back() + len);
    }
}

BigInt GridSchedule::length(std::size_t n) const {
    ensure(n);
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->lengths[n];
}

BigInt GridSchedule::start(std::size_t n) const {
    ensure(n);
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->starts[n];
}

BigInt GridSchedule::max_elem(std::size_t n) const {
    BigInt e = end(n);
    if (e == start(n)) throw malformed("interval I_" + std::to_string(n) + " is empty");
    return e - 1;
}

unsigned long GridSchedule::k_exponent(std::size_t n) const {
    if (state_->kind != Kind::DyadicKn) throw malformed("k_n sequence is dyadic-kn only");
    if (n >= 2) ensure(n - 1);
    else ensure(0);
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->kseq[n];
}

std::optional<std::size_t> GridSchedule::block_of(const BigInt& x) const {
    if (x < start_offset()) return std::nullopt;
    std::size_t n = 0;
    while (end(n) <= x) {  // schedules grow fast; linear scan is fine
        ++n;
        if (n > 5'000'000) throw effort_exceeded("block index search too deep");
    }
    return n;
}

bool GridSchedule::operator==(const GridSchedule& o) const {
    if (state_ == o.state_) return true;
    if (state_->kind != o.state_->kind) return false;
    return state_->custom == o.state_->custom;
}

}  // namespace idealab
