// include/padlift/padic.hpp — exact fixed-precision p-adic integer arithmetic.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace padlift {

/// Arbitrary-size nonnegative integer. Indices m, lift iterates and block
/// values grow like p^{1+Phi(n)}, so a machine word is not enough.
using Natural = mpz_class;

/// Thrown when an operation needs more digits than a value carries.
class PrecisionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A prime modulus, 2 <= p <= 65521. The bound keeps every digit product
/// inside a 64-bit word.
class Prime {
public:
    explicit Prime(std::uint32_t p) : p_(p) {
        if (p < 2 || p > kMaxPrime)
            throw std::invalid_argument("Prime: p out of range [2, 65521]");
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw std::invalid_argument("Prime: " + std::to_string(p) + " is composite");
    }

    std::uint32_t value() const { return p_; }
    bool operator==(const Prime&) const = default;

    static constexpr std::uint32_t kMaxPrime = 65521;

private:
    std::uint32_t p_;
};

/// p^e as a Natural.
inline Natural nat_pow(Prime p, std::size_t e) {
    Natural r;
    mpz_ui_pow_ui(r.get_mpz_t(), p.value(), static_cast<unsigned long>(e));
    return r;
}

/// First K base-p digits of m >= 0, little-endian.
inline std::vector<std::uint32_t> digits_of(const Natural& m, Prime p, std::size_t K) {
    if (sgn(m) < 0)
        throw std::invalid_argument("digits_of: negative value");
    std::vector<std::uint32_t> out(K, 0);
    Natural q = m;
    for (std::size_t i = 0; i < K && sgn(q) != 0; ++i) {
        out[i] = static_cast<std::uint32_t>(mpz_tdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), p.value()));
    }
    return out;
}

/// Digit block of m: sum_{i in [lo, hi]} m_i p^i / p^lo, i.e. the digits
/// lo..hi of m read as a value of their own.
inline Natural digit_block(const Natural& m, std::size_t lo, std::size_t hi, Prime p) {
    if (hi < lo)
        throw std::invalid_argument("digit_block: empty range");
    Natural shifted = m / nat_pow(p, lo);
    return shifted % nat_pow(p, hi - lo + 1);
}

/**
 * The p-adic valuation of a residue known to K digits.
 *
 * An all-zero residue only certifies v_p >= K; that lower bound must not be
 * conflated with an exact value, so both states are carried explicitly.
 */
class Valuation {
public:
    static Valuation exactly(std::size_t v) { return Valuation(v, true); }
    static Valuation at_least(std::size_t k) { return Valuation(k, false); }

    bool is_exact() const { return exact_; }
    /// Exact valuation, or the certified lower bound for an all-zero residue.
    std::size_t value() const { return v_; }

    /// True when v_p is certainly >= t at this precision.
    bool certified_at_least(std::size_t t) const { return v_ >= t; }
    /// True when v_p is certainly < t (requires an exact valuation).
    bool certainly_below(std::size_t t) const { return exact_ && v_ < t; }

    bool operator==(const Valuation&) const = default;

private:
    Valuation(std::size_t v, bool exact) : v_(v), exact_(exact) {}
    std::size_t v_;
    bool exact_;
};

/**
 * A p-adic integer known exactly modulo p^K, stored as K base-p digits,
 * little-endian (digit 0 is the p^0 coefficient).
 *
 * Values are immutable; every operation returns a fresh value at the minimum
 * of the operand precisions, so equality tests are exact and reproducible.
 */
class PAdicApprox {
public:
    PAdicApprox(Prime prime, std::vector<std::uint32_t> digits)
        : prime_(prime), digits_(std::move(digits)) {
        if (digits_.empty())
            throw std::invalid_argument("PAdicApprox: precision must be >= 1");
        for (auto d : digits_)
            if (d >= prime_.value())
                throw std::invalid_argument("PAdicApprox: digit out of range");
    }

    static PAdicApprox zero(Prime p, std::size_t K) {
        return PAdicApprox(p, std::vector<std::uint32_t>(check_k(K), 0));
    }

    /// Base-p expansion of m mod p^K.
    static PAdicApprox from_natural(const Natural& m, Prime p, std::size_t K) {
        return PAdicApprox(p, digits_of(m, p, check_k(K)));
    }

    /// Residue of an arbitrary (possibly negative) integer mod p^K.
    static PAdicApprox from_integer(const Natural& z, Prime p, std::size_t K) {
        Natural r;
        mpz_mod(r.get_mpz_t(), z.get_mpz_t(), nat_pow(p, check_k(K)).get_mpz_t());
        return from_natural(r, p, K);
    }

    Prime prime() const { return prime_; }
    std::size_t precision() const { return digits_.size(); }
    std::span<const std::uint32_t> digits() const { return digits_; }

    std::uint32_t digit(std::size_t i) const {
        if (i >= digits_.size())
            throw PrecisionError("PAdicApprox: digit index beyond precision");
        return digits_[i];
    }

    /// Canonical representative in [0, p^K).
    Natural to_natural() const {
        Natural acc = 0;
        for (std::size_t i = digits_.size(); i-- > 0;) {
            acc *= prime_.value();
            acc += digits_[i];
        }
        return acc;
    }

    bool is_zero() const {
        for (auto d : digits_)
            if (d != 0) return false;
        return true;
    }

    /// Index of the first nonzero digit, or the "at least K" marker when all
    /// K digits vanish.
    Valuation valuation() const {
        for (std::size_t i = 0; i < digits_.size(); ++i)
            if (digits_[i] != 0) return Valuation::exactly(i);
        return Valuation::at_least(digits_.size());
    }

    PAdicApprox truncated(std::size_t K) const {
        if (K < 1 || K > digits_.size())
            throw PrecisionError("truncated: bad target precision");
        return PAdicApprox(prime_, std::vector<std::uint32_t>(digits_.begin(), digits_.begin() + K));
    }

    /// Drop the t lowest digits (exact division by p^t for a value whose
    /// valuation is >= t). Result has precision K - t.
    PAdicApprox shifted_down(std::size_t t) const {
        if (t >= digits_.size())
            throw PrecisionError("shifted_down: shift eats the whole value");
        for (std::size_t i = 0; i < t; ++i)
            if (digits_[i] != 0)
                throw std::domain_error("shifted_down: valuation below shift");
        return PAdicApprox(prime_, std::vector<std::uint32_t>(digits_.begin() + t, digits_.end()));
    }

    friend PAdicApprox operator+(const PAdicApprox& a, const PAdicApprox& b) {
        auto [x, y, K] = align(a, b);
        std::vector<std::uint32_t> out(K);
        std::uint64_t carry = 0;
        const std::uint64_t p = a.prime_.value();
        for (std::size_t i = 0; i < K; ++i) {
            std::uint64_t s = std::uint64_t(x[i]) + y[i] + carry;
            out[i] = static_cast<std::uint32_t>(s % p);
            carry = s / p;
        }
        return PAdicApprox(a.prime_, std::move(out));
    }

    friend PAdicApprox operator-(const PAdicApprox& a, const PAdicApprox& b) {
        auto [x, y, K] = align(a, b);
        std::vector<std::uint32_t> out(K);
        const std::int64_t p = a.prime_.value();
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < K; ++i) {
            std::int64_t s = std::int64_t(x[i]) - y[i] - borrow;
            borrow = s < 0 ? 1 : 0;
            out[i] = static_cast<std::uint32_t>(s + borrow * p);
        }
        return PAdicApprox(a.prime_, std::move(out));
    }

    PAdicApprox operator-() const {
        return zero(prime_, digits_.size()) - *this;
    }

    friend PAdicApprox operator*(const PAdicApprox& a, const PAdicApprox& b) {
        auto [x, y, K] = align(a, b);
        // Column sums stay below K * p^2 < 2^63 for p <= 65521.
        std::vector<std::uint64_t> acc(K, 0);
        for (std::size_t i = 0; i < K; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; i + j < K; ++j)
                acc[i + j] += std::uint64_t(x[i]) * y[j];
        }
        std::vector<std::uint32_t> out(K);
        const std::uint64_t p = a.prime_.value();
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < K; ++i) {
            std::uint64_t s = acc[i] + carry;
            out[i] = static_cast<std::uint32_t>(s % p);
            carry = s / p;
        }
        return PAdicApprox(a.prime_, std::move(out));
    }

    bool operator==(const PAdicApprox&) const = default;

private:
    static std::size_t check_k(std::size_t K) {
        if (K < 1)
            throw std::invalid_argument("PAdicApprox: precision must be >= 1");
        return K;
    }

    // Truncate both operands to the common precision; reject prime mismatch.
    static std::tuple<std::span<const std::uint32_t>, std::span<const std::uint32_t>, std::size_t>
    align(const PAdicApprox& a, const PAdicApprox& b) {
        if (!(a.prime_ == b.prime_))
            throw std::invalid_argument("PAdicApprox: prime mismatch");
        std::size_t K = std::min(a.digits_.size(), b.digits_.size());
        return {std::span(a.digits_).first(K), std::span(b.digits_).first(K), K};
    }

    Prime prime_;
    std::vector<std::uint32_t> digits_;
};

} // namespace padlift
