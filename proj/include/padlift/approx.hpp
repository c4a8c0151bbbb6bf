// include/padlift/approx.hpp — approximability: the digit-block analogue of a
// derivative, uniform approximability on residue classes, the bridge from
// differentiability modulo p^s, and the full-range lifting driver.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <padlift/funcspace.hpp>
#include <padlift/hensel.hpp>
#include <padlift/padic.hpp>
#include <padlift/scale.hpp>

namespace padlift {

/// Window parameters a certificate was checked on.
struct ApproxWindow {
    std::size_t depth = 0;   // sampled class members below p^{1+Phi(depth)}
    std::size_t n_lo = 0;    // tested n range
    std::size_t n_hi = 0;
};

/// Approximability data at a point: the per-n unit delta_n governing the
/// first-order response of f to block perturbations, with the window it was
/// certified on. delta_n is identified modulo p only — the defining
/// congruence cannot see higher digits.
struct ApproxCertificate {
    Natural u;
    std::size_t h = 0;
    std::size_t l = 0;
    std::map<std::size_t, std::uint32_t> delta_by_n;
    ApproxWindow window;
    bool unit_flag = false; // every tested delta_n is a unit
};

/// Result of one delta_n estimate: either the residue mod p, or the
/// perturbation u' that broke the first-order congruence.
struct DeltaEstimate {
    std::optional<std::uint32_t> delta;
    std::optional<Natural> violating;
    std::string reason;

    bool consistent() const { return delta.has_value(); }
};

/// Solves f(u + p^{1+Phi(n-1)} u') = f(u) + p^{h+n} u' delta mod p^{h+n+1}
/// for delta with u' = 1, then cross-checks the congruence for every
/// one-digit u' and a sample of two-digit ones.
inline DeltaEstimate estimate_delta(const FunctionOracle& f, const ScaleFn& phi,
                                    const Natural& u, std::size_t n, std::size_t h) {
    if (n < 1)
        throw std::invalid_argument("estimate_delta: n must be >= 1");
    const Prime p = f.prime();
    const std::size_t K = h + n + 1;
    const Natural pert = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n) - 1) + 1));
    const PAdicApprox base = f(u, K);

    PAdicApprox diff = f(u + pert, K) - base;
    for (std::size_t i = 0; i < h + n; ++i)
        if (diff.digit(i) != 0)
            return {std::nullopt, Natural(1),
                    "difference has valuation below h+n at u' = 1"};
    const std::uint32_t delta = diff.digit(h + n);

    auto check = [&](const Natural& up) -> bool {
        PAdicApprox expected =
            base + PAdicApprox::from_integer(nat_pow(p, h + n) * up * delta, p, K);
        return f(u + pert * up, K) == expected;
    };
    for (std::uint32_t up = 2; up < p.value(); ++up)
        if (!check(up))
            return {std::nullopt, Natural(up), "first-order congruence fails"};
    for (const Natural up : {Natural(p.value()), Natural(p.value()) + 1})
        if (!check(up))
            return {std::nullopt, up, "first-order congruence fails"};
    return {delta, std::nullopt, ""};
}

/// Least l <= l_max making the first-order congruence consistent at u for
/// all n in [max(l,1), n_hi]; the defining l is existential, so a scan is the
/// pragmatic device for black-box oracles.
inline std::optional<std::size_t> scan_l(const FunctionOracle& f, const ScaleFn& phi,
                                         const Natural& u, std::size_t h,
                                         std::size_t l_max, std::size_t n_hi) {
    for (std::size_t l = 0; l <= l_max; ++l) {
        bool ok = true;
        for (std::size_t n = std::max<std::size_t>(l, 1); n <= n_hi && ok; ++n)
            ok = estimate_delta(f, phi, u, n, h).consistent();
        if (ok) return l;
    }
    return std::nullopt;
}

struct ApproxViolation {
    Natural u_prime;
    std::size_t n = 0;
    std::string reason;
};

/// Window verdict on uniform approximability over the residue class of u.
struct UniformApproxReport {
    bool pass = false;
    ApproxCertificate cert;                  // data at the representative u
    std::optional<ApproxViolation> violation; // first in (u', n) order
};

/// Checks, for every class member u' < p^{1+Phi(depth)} and every n in
/// [max(n0, l), n_hi]: the first-order congruence is consistent, delta_n is a
/// unit, and f(u') vanishes mod p^{h+n0+1} as the lifting start requires.
/// Violations are reported in ascending (u', n) order, never by completion
/// time.
inline UniformApproxReport verify_uniform_approx(const FunctionOracle& f, const ScaleFn& phi,
                                                 const Natural& u, std::size_t n0, std::size_t h,
                                                 std::size_t l, std::size_t n_hi,
                                                 std::size_t depth) {
    const Prime p = f.prime();
    UniformApproxReport report;
    report.cert.u = u;
    report.cert.h = h;
    report.cert.l = l;
    report.cert.window = {depth, std::max(n0, l), n_hi};
    report.cert.unit_flag = true;

    const Natural res_step = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n0)) + 1));
    const Natural bound = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(depth)) + 1));
    for (Natural up = u % res_step; up < bound; up += res_step) {
        if (!f(up, h + n0 + 1).is_zero()) {
            report.violation = ApproxViolation{up, n0, "f(u') != 0 mod p^{h+n0+1}"};
            return report;
        }
        for (std::size_t n = std::max(n0, l); n <= n_hi; ++n) {
            DeltaEstimate est = estimate_delta(f, phi, up, n, h);
            if (!est.consistent()) {
                report.violation = ApproxViolation{up, n, est.reason};
                return report;
            }
            if (*est.delta == 0) {
                report.violation = ApproxViolation{up, n, "delta_n is not a unit"};
                return report;
            }
            if (up == u % res_step)
                report.cert.delta_by_n[n] = *est.delta;
        }
    }
    report.pass = true;
    return report;
}

/// Lift driven by a uniform-approximability certificate: S(n) = {1,...,p-1}
/// at every level, so every block of the root above the fixed prefix is a
/// single digit. Callers are expected to have verified uniform
/// approximability on the relevant window first.
inline LiftTrace approx_lift(const FunctionOracle& f, const ScaleFn& phi, const Natural& u,
                             std::size_t n0, std::size_t h, std::size_t l, std::size_t n_max) {
    if (n0 + 1 < l)
        throw std::invalid_argument("approx_lift: requires n0 + 1 >= l");
    LiftTrace trace = lift(LiftProblem(f, phi, h, n0, u, n_max, FullRange{}));
    if (trace.success) {
        const Natural p_val(f.prime().value());
        for (std::size_t n = n0; n < n_max; ++n)
            if (block_value(*trace.root, n + 1, phi) >= p_val)
                throw std::logic_error("approx_lift: root block exceeds one digit");
    }
    return trace;
}

/// Bridge from differentiability modulo p^s at u (Phi = Id only): estimates
/// the derivative by a difference quotient, requires its valuation to equal
/// h = s - 1, and packages delta_n = derivative / p^h as a certificate with
/// l = s.
inline ApproxCertificate from_derivative_mod_ps(const FunctionOracle& f, std::size_t s,
                                                const Natural& u) {
    if (s < 1)
        throw std::invalid_argument("from_derivative_mod_ps: s must be >= 1");
    const Prime p = f.prime();
    const std::size_t h = s - 1;
    const std::size_t n_est = s + 2;

    // f(u + p^n) - f(u) = p^n * derivative mod p^{n+s}
    PAdicApprox diff = f(u + nat_pow(p, n_est), n_est + s) - f(u, n_est + s);
    for (std::size_t i = 0; i < n_est; ++i)
        if (diff.digit(i) != 0)
            throw std::domain_error("from_derivative_mod_ps: difference quotient not integral");
    PAdicApprox deriv = diff.shifted_down(n_est); // mod p^s
    Valuation v = deriv.valuation();
    if (!(v.is_exact() && v.value() == h))
        throw std::domain_error("from_derivative_mod_ps: v_p(derivative) != s - 1, shifted derivative is not a unit");
    const std::uint32_t delta = deriv.digit(h);

    // Stability check of the quotient across nearby n and all one-digit u'.
    for (std::size_t n : {n_est, n_est + 1}) {
        const std::size_t K = n + s;
        const Natural pn = nat_pow(p, n);
        const PAdicApprox base = f(u, K);
        const Natural deriv_val = deriv.to_natural();
        for (std::uint32_t up = 1; up < p.value(); ++up) {
            PAdicApprox expected = base + PAdicApprox::from_integer(pn * up * deriv_val, p, K);
            if (!(f(u + pn * up, K) == expected))
                throw std::domain_error("from_derivative_mod_ps: quotient unstable on window");
        }
    }

    ApproxCertificate cert;
    cert.u = u;
    cert.h = h;
    cert.l = s;
    cert.window = {0, s, n_est + 1};
    for (std::size_t n = s; n <= n_est + 1; ++n)
        cert.delta_by_n[n] = delta;
    cert.unit_flag = true;
    return cert;
}

} // namespace padlift
