// include/padlift/scale.hpp — scale functions and the digit-block machinery
// they induce: block levels, top blocks, block values, truncations, jump sets.

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <padlift/padic.hpp>

namespace padlift {

/**
 * A strictly increasing function Phi: N -> N, stored as a finite table plus
 * an affine tail Phi(n) = Phi(N_tab) + slope * (n - N_tab).
 *
 * The convention Phi(-1) = -1 is built in; all block computations rely on it.
 */
class ScaleFn {
public:
    ScaleFn(std::vector<std::int64_t> table, std::int64_t tail_slope)
        : table_(std::move(table)), tail_slope_(tail_slope) {
        if (table_.empty())
            throw std::invalid_argument("ScaleFn: table must not be empty");
        if (table_[0] < 0)
            throw std::invalid_argument("ScaleFn: Phi(0) must be >= 0");
        for (std::size_t i = 1; i < table_.size(); ++i)
            if (table_[i] <= table_[i - 1])
                throw std::invalid_argument("ScaleFn: table not strictly increasing");
        if (tail_slope_ < 1)
            throw std::invalid_argument("ScaleFn: tail slope must be >= 1");
    }

    /// Phi(n) = n.
    static ScaleFn identity() { return ScaleFn({0}, 1); }

    /// Phi(n) = intercept + slope * n.
    static ScaleFn affine(std::int64_t intercept, std::int64_t slope) {
        return ScaleFn({intercept}, slope);
    }

    std::int64_t operator()(std::int64_t n) const {
        if (n < -1)
            throw std::invalid_argument("ScaleFn: argument below -1");
        if (n == -1) return -1;
        auto un = static_cast<std::size_t>(n);
        if (un < table_.size()) return table_[un];
        return table_.back() + tail_slope_ * (n - std::int64_t(table_.size()) + 1);
    }

    const std::vector<std::int64_t>& table() const { return table_; }
    std::int64_t tail_slope() const { return tail_slope_; }

    bool operator==(const ScaleFn&) const = default;

private:
    std::vector<std::int64_t> table_;
    std::int64_t tail_slope_;
};

/// Block level of m: least h with m < p^{1+Phi(h)}. Linear ascent from h = 0;
/// strict increase of Phi guarantees termination.
inline std::size_t block_level(const ScaleFn& phi, const Natural& m, Prime p) {
    std::size_t h = 0;
    Natural bound = nat_pow(p, static_cast<std::size_t>(1 + phi(0)));
    while (m >= bound) {
        std::int64_t prev = phi(std::int64_t(h));
        ++h;
        // p^{1+Phi(h)} = p^{1+Phi(h-1)} * p^{Phi(h)-Phi(h-1)}
        bound *= nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(h)) - prev));
    }
    return h;
}

/// Top digit block of m at level tau(m): the digits in positions
/// Phi(tau-1)+1 .. Phi(tau), kept at their p^i weights. Defined only for
/// m >= p^{1+Phi(0)}.
inline Natural top_block(const ScaleFn& phi, const Natural& m, Prime p) {
    std::size_t tau = block_level(phi, m, p);
    if (tau == 0)
        throw std::domain_error("top_block: m below p^{1+Phi(0)} has no top block");
    // m < p^{1+Phi(tau)}, so the block is everything above the parent prefix.
    return m - m % nat_pow(p, static_cast<std::size_t>(1 + phi(std::int64_t(tau) - 1)));
}

/// j-th digit block of x shifted to weight p^0: digits Phi(j-1)+1 .. Phi(j).
/// j = 0 reads the leading block via Phi(-1) = -1.
inline Natural block_value(const PAdicApprox& x, std::size_t j, const ScaleFn& phi) {
    std::int64_t lo = phi(std::int64_t(j) - 1) + 1;
    std::int64_t hi = phi(std::int64_t(j));
    if (x.precision() < static_cast<std::size_t>(hi + 1))
        throw PrecisionError("block_value: x has fewer than 1+Phi(j) digits");
    Natural acc = 0;
    const std::uint32_t p = x.prime().value();
    for (std::int64_t i = hi; i >= lo; --i) {
        acc *= p;
        acc += x.digit(static_cast<std::size_t>(i));
    }
    return acc;
}

/// Same block read directly from a Natural.
inline Natural block_value(const Natural& m, std::size_t j, const ScaleFn& phi, Prime p) {
    std::int64_t lo = phi(std::int64_t(j) - 1) + 1;
    std::int64_t hi = phi(std::int64_t(j));
    return digit_block(m, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), p);
}

/// Truncation x(j): the first 1+Phi(j) digits of x as a Natural.
inline Natural truncate_to_level(const PAdicApprox& x, std::size_t j, const ScaleFn& phi) {
    std::int64_t hi = phi(std::int64_t(j));
    if (x.precision() < static_cast<std::size_t>(hi + 1))
        throw PrecisionError("truncate_to_level: x has fewer than 1+Phi(j) digits");
    Natural acc = 0;
    const std::uint32_t p = x.prime().value();
    for (std::int64_t i = hi; i >= 0; --i) {
        acc *= p;
        acc += x.digit(static_cast<std::size_t>(i));
    }
    return acc;
}

/// J(x) on the window [0, j_max]: {0} plus every j whose digit block is
/// nonzero, i.e. every j with x(j) > x(j-1).
inline std::set<std::size_t> jump_set(const PAdicApprox& x, std::size_t j_max, const ScaleFn& phi) {
    if (x.precision() < static_cast<std::size_t>(phi(std::int64_t(j_max)) + 1))
        throw PrecisionError("jump_set: x has fewer than 1+Phi(j_max) digits");
    std::set<std::size_t> out{0};
    for (std::size_t j = 1; j <= j_max; ++j)
        if (sgn(block_value(x, j, phi)) != 0)
            out.insert(j);
    return out;
}

/// Indicator of the basis ball around m: 1 iff the first 1+Phi(tau(m)) digits
/// of x equal those of m.
inline bool vdp_indicator(const ScaleFn& phi, const Natural& m, const PAdicApprox& x) {
    const Prime p = x.prime();
    std::size_t tau = block_level(phi, m, p);
    auto width = static_cast<std::size_t>(1 + phi(std::int64_t(tau)));
    if (x.precision() < width)
        throw PrecisionError("vdp_indicator: x has fewer than 1+Phi(tau(m)) digits");
    auto md = digits_of(m, p, width);
    for (std::size_t i = 0; i < width; ++i)
        if (md[i] != x.digit(i)) return false;
    return true;
}

} // namespace padlift
