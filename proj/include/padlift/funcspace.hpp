// include/padlift/funcspace.hpp — continuous functions Z_p -> Z_p as exact
// digit oracles: built-in families, modulus-of-continuity estimation, and the
// construction of a valid scale function from a modulus table.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <padlift/padic.hpp>
#include <padlift/scale.hpp>

namespace padlift {

/// Thrown by estimate_psi when no l below the window depth certifies the
/// requested output agreement.
class WindowTooRough : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * A continuous function f: Z_p -> Z_p represented by exact evaluation at
 * nonnegative integer points: eval(m, K) must equal the true f(m) mod p^K.
 *
 * Repeated calls with equal (m, K) return equal residues, and evaluations at
 * different precisions agree on their common digits. New oracles must honor
 * this contract; the coherence property tests check it for the built-ins.
 */
class FunctionOracle {
public:
    using Eval = std::function<PAdicApprox(const Natural&, std::size_t)>;
    using Params = std::vector<std::pair<std::string, std::string>>;

    FunctionOracle(Prime p, std::string family, Eval eval,
                   std::optional<ScaleFn> declared_scale = std::nullopt,
                   Params params = {})
        : prime_(p), family_(std::move(family)), eval_(std::move(eval)),
          declared_scale_(std::move(declared_scale)), params_(std::move(params)) {}

    PAdicApprox operator()(const Natural& m, std::size_t K) const {
        if (sgn(m) < 0)
            throw std::invalid_argument("FunctionOracle: negative evaluation point");
        return eval_(m, K);
    }

    Prime prime() const { return prime_; }
    const std::string& family() const { return family_; }
    /// Scale the family is known to live in, when one is known analytically.
    const std::optional<ScaleFn>& declared_scale() const { return declared_scale_; }
    const Params& params() const { return params_; }

private:
    Prime prime_;
    std::string family_;
    Eval eval_;
    std::optional<ScaleFn> declared_scale_;
    Params params_;
};

namespace detail {

inline std::string dec(const Natural& n) { return n.get_str(); }

// Sum of the even-position digits of m re-read at weight p^j, truncated to
// the first K terms (later terms vanish mod p^K).
inline Natural even_digit_contraction(const Natural& m, Prime p, std::size_t K) {
    auto d = digits_of(m, p, 2 * K - 1);
    Natural acc = 0;
    for (std::size_t j = K; j-- > 0;) {
        acc *= p.value();
        acc += d[2 * j];
    }
    return acc;
}

} // namespace detail

/// f(x) = a + sum_j x_{2j} p^j, with a an exact integer parameter.
inline FunctionOracle digit_linear(Prime p, const Natural& a) {
    return FunctionOracle(
        p, "digit_linear",
        [p, a](const Natural& m, std::size_t K) {
            return PAdicApprox::from_integer(a + detail::even_digit_contraction(m, p, K), p, K);
        },
        ScaleFn::affine(1, 2), {{"p", std::to_string(p.value())}, {"a", detail::dec(a)}});
}

/// f(x) = a + sum_j x_{2j} p^j with a known only to finitely many digits;
/// evaluation beyond the precision of a is an error.
inline FunctionOracle digit_linear(Prime p, const PAdicApprox& a) {
    if (!(a.prime() == p))
        throw std::invalid_argument("digit_linear: parameter prime mismatch");
    const Natural a_val = a.to_natural();
    const std::size_t cap = a.precision();
    return FunctionOracle(
        p, "digit_linear",
        [p, a_val, cap](const Natural& m, std::size_t K) {
            if (K > cap)
                throw PrecisionError("digit_linear: requested K exceeds precision of a");
            return PAdicApprox::from_integer(a_val + detail::even_digit_contraction(m, p, K), p, K);
        },
        ScaleFn::affine(1, 2), {{"p", std::to_string(p.value())}, {"a", detail::dec(a_val)}});
}

/// f(x) = a + sum_j x_{2j}^3 5^j. Fixed to p = 5, where cubing is a bijection
/// on digits.
inline FunctionOracle digit_cube(const Natural& a) {
    const Prime p(5);
    return FunctionOracle(
        p, "digit_cube",
        [p, a](const Natural& m, std::size_t K) {
            auto d = digits_of(m, p, 2 * K - 1);
            Natural acc = 0;
            for (std::size_t j = K; j-- > 0;) {
                acc *= 5;
                std::uint64_t c = d[2 * j];
                acc += c * c * c;
            }
            return PAdicApprox::from_integer(a + acc, p, K);
        },
        ScaleFn::affine(1, 2), {{"a", detail::dec(a)}});
}

inline FunctionOracle digit_cube(const PAdicApprox& a) {
    if (a.prime().value() != 5)
        throw std::invalid_argument("digit_cube: requires p = 5");
    const Natural a_val = a.to_natural();
    const std::size_t cap = a.precision();
    FunctionOracle exact = digit_cube(a_val);
    return FunctionOracle(
        Prime(5), "digit_cube",
        [exact, cap](const Natural& m, std::size_t K) {
            if (K > cap)
                throw PrecisionError("digit_cube: requested K exceeds precision of a");
            return exact(m, K);
        },
        ScaleFn::affine(1, 2), exact.params());
}

namespace detail {

inline void check_square_congruence(Prime p, const Natural& a) {
    Natural r;
    if (p.value() == 2) {
        mpz_mod_ui(r.get_mpz_t(), a.get_mpz_t(), 8);
        if (r != 1)
            throw std::invalid_argument("digit_square: p = 2 requires a = 1 (mod 8)");
    } else {
        mpz_mod_ui(r.get_mpz_t(), a.get_mpz_t(), p.value());
        if (r != 1)
            throw std::invalid_argument("digit_square: requires a = 1 (mod p)");
    }
}

} // namespace detail

/// f(x) = -a + (sum_j x_{2j} p^j)^2, with a = 1 (mod p) for odd p and
/// a = 1 (mod 8) for p = 2.
inline FunctionOracle digit_square(Prime p, const Natural& a) {
    detail::check_square_congruence(p, a);
    return FunctionOracle(
        p, "digit_square",
        [p, a](const Natural& m, std::size_t K) {
            Natural y = detail::even_digit_contraction(m, p, K);
            return PAdicApprox::from_integer(y * y - a, p, K);
        },
        ScaleFn::affine(1, 2), {{"p", std::to_string(p.value())}, {"a", detail::dec(a)}});
}

inline FunctionOracle digit_square(Prime p, const PAdicApprox& a) {
    if (!(a.prime() == p))
        throw std::invalid_argument("digit_square: parameter prime mismatch");
    if (p.value() == 2 && a.precision() < 3)
        throw std::invalid_argument("digit_square: a needs >= 3 digits to certify a = 1 (mod 8)");
    const Natural a_val = a.to_natural();
    const std::size_t cap = a.precision();
    FunctionOracle exact = digit_square(p, a_val);
    return FunctionOracle(
        p, "digit_square",
        [exact, cap](const Natural& m, std::size_t K) {
            if (K > cap)
                throw PrecisionError("digit_square: requested K exceeds precision of a");
            return exact(m, K);
        },
        ScaleFn::affine(1, 2), exact.params());
}

/// Q(x) evaluated by Horner's rule mod p^K; coefficients are exact integers,
/// lowest degree first. Q must not be constant.
inline FunctionOracle polynomial(Prime p, const std::vector<Natural>& coeffs) {
    bool nonconstant = false;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        if (sgn(coeffs[i]) != 0) nonconstant = true;
    if (!nonconstant)
        throw std::invalid_argument("polynomial: needs at least one nonconstant coefficient");
    FunctionOracle::Params params{{"p", std::to_string(p.value())}};
    for (const auto& c : coeffs)
        params.emplace_back("coeff", detail::dec(c));
    return FunctionOracle(
        p, "polynomial",
        [p, coeffs](const Natural& m, std::size_t K) {
            const Natural mod = nat_pow(p, K);
            Natural x = m % mod;
            Natural acc = 0;
            for (std::size_t i = coeffs.size(); i-- > 0;) {
                acc = (acc * x + coeffs[i]) % mod;
            }
            return PAdicApprox::from_integer(acc, p, K);
        },
        ScaleFn::identity(), std::move(params));
}

/// Polynomial with residue coefficients; evaluation beyond their common
/// precision is an error.
inline FunctionOracle polynomial(Prime p, const std::vector<PAdicApprox>& coeffs) {
    std::size_t cap = SIZE_MAX;
    std::vector<Natural> vals;
    bool nonconstant = false;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!(coeffs[i].prime() == p))
            throw std::invalid_argument("polynomial: coefficient prime mismatch");
        cap = std::min(cap, coeffs[i].precision());
        vals.push_back(coeffs[i].to_natural());
        if (i >= 1 && !coeffs[i].is_zero()) nonconstant = true;
    }
    if (!nonconstant)
        throw std::invalid_argument("polynomial: needs at least one nonconstant coefficient");
    FunctionOracle exact = polynomial(p, vals);
    return FunctionOracle(
        p, "polynomial",
        [exact, cap](const Natural& m, std::size_t K) {
            if (K > cap)
                throw PrecisionError("polynomial: requested K exceeds coefficient precision");
            return exact(m, K);
        },
        ScaleFn::identity(), exact.params());
}

/// f(x) = c.
inline FunctionOracle constant_fn(Prime p, const Natural& c) {
    return FunctionOracle(
        p, "constant",
        [p, c](const Natural&, std::size_t K) { return PAdicApprox::from_integer(c, p, K); },
        ScaleFn::identity(), {{"p", std::to_string(p.value())}, {"c", detail::dec(c)}});
}

/// f(x) = x_0 + sum_{i>=1} x_i p^{i-1}: the digit shift with the dropped
/// digit added back. Not 1-Lipschitz; lives in F(Phi) for Phi(n) = n+1.
inline FunctionOracle digit_shift(Prime p) {
    return FunctionOracle(
        p, "digit_shift",
        [p](const Natural& m, std::size_t K) {
            Natural low;
            mpz_mod_ui(low.get_mpz_t(), m.get_mpz_t(), p.value());
            return PAdicApprox::from_integer(low + digit_block(m, 1, K, p), p, K);
        },
        ScaleFn::affine(1, 1), {{"p", std::to_string(p.value())}});
}

/**
 * Modulus-of-continuity bounds certified on a finite window: entry n holds
 * the least l such that, for all pairs x, y < p^window_depth agreeing mod
 * p^l, the outputs agree mod p^n. An empirical bound only — nothing beyond
 * the window is claimed.
 */
struct ModulusTable {
    std::vector<std::size_t> psi; // psi[i] bounds the modulus for n = i+1
    std::size_t window_depth = 0;
};

/// Window estimate of the modulus of continuity at output precision n.
/// Exhaustive over all residues below p^search_depth; throws WindowTooRough
/// when only the vacuous l = search_depth remains.
inline std::size_t estimate_psi(const FunctionOracle& f, std::size_t n, std::size_t search_depth) {
    if (n < 1)
        throw std::invalid_argument("estimate_psi: n must be >= 1");
    const Prime p = f.prime();
    Natural span = nat_pow(p, search_depth);
    if (span > 1000000)
        throw std::invalid_argument("estimate_psi: window exceeds desk-scale cap");
    const auto count = span.get_ui();
    std::vector<Natural> values;
    values.reserve(count);
    for (unsigned long x = 0; x < count; ++x)
        values.push_back(f(Natural(x), n).to_natural());

    for (std::size_t l = 0; l < search_depth; ++l) {
        // Pairs with v_p(x-y) >= l are exactly the pairs sharing a residue
        // class mod p^l; output equality is transitive, so comparing every
        // member against its class representative covers them all.
        const unsigned long classes = nat_pow(p, l).get_ui();
        bool ok = true;
        for (unsigned long x = classes; x < count && ok; ++x)
            if (values[x] != values[x % classes]) ok = false;
        if (ok) return l;
    }
    throw WindowTooRough("estimate_psi: no l below the window depth certifies agreement");
}

/// psi entries for n = 1 .. n_max, all certified on the same window.
inline ModulusTable modulus_table(const FunctionOracle& f, std::size_t n_max, std::size_t search_depth) {
    ModulusTable t;
    t.window_depth = search_depth;
    for (std::size_t n = 1; n <= n_max; ++n)
        t.psi.push_back(estimate_psi(f, n, search_depth));
    return t;
}

/// Strictly increasing Phi built from a modulus table:
/// Phi(0) = max(0, psi(1)-1), Phi(n) = max(1+Phi(n-1), psi(n+1)-1).
/// Valid for f wherever the table entries really bound the modulus.
inline ScaleFn phi_from_psi(const ModulusTable& table) {
    if (table.psi.empty())
        throw std::invalid_argument("phi_from_psi: empty table");
    std::vector<std::int64_t> out;
    out.push_back(std::max<std::int64_t>(0, std::int64_t(table.psi[0]) - 1));
    for (std::size_t n = 1; n < table.psi.size(); ++n)
        out.push_back(std::max(out.back() + 1, std::int64_t(table.psi[n]) - 1));
    return ScaleFn(std::move(out), 1);
}

} // namespace padlift
