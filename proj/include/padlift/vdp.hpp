// include/padlift/vdp.hpp — generalized van der Put coefficients, series
// evaluation by the telescoping path sum, and the scale-membership verifier.

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include <padlift/funcspace.hpp>
#include <padlift/padic.hpp>
#include <padlift/scale.hpp>

namespace padlift {

/// Counterexample to f lying in the class of Phi: a coefficient whose
/// valuation falls short of its block level.
class MembershipViolation : public std::runtime_error {
public:
    MembershipViolation(Natural m, std::size_t required, Valuation observed)
        : std::runtime_error("membership violation at m = " + m.get_str() +
                             ": v_p(B) = " +
                             (observed.is_exact() ? std::to_string(observed.value())
                                                  : ">=" + std::to_string(observed.value())) +
                             " < tau = " + std::to_string(required)),
          m(std::move(m)), required(required), observed(observed) {}

    Natural m;
    std::size_t required;
    Valuation observed;
};

/// B(m): f(m) for m below p^{1+Phi(0)}, else f(m) - f(m - M(m)).
inline PAdicApprox vdp_coeff(const FunctionOracle& f, const ScaleFn& phi,
                             const Natural& m, std::size_t K) {
    const Prime p = f.prime();
    if (block_level(phi, m, p) == 0)
        return f(m, K);
    return f(m, K) - f(m - top_block(phi, m, p), K);
}

/// b(m) = p^{-tau(m)} B(m). B is computed at precision K + tau(m) so the
/// digit shift still leaves K certified digits. Throws MembershipViolation
/// when the valuation of B falls short of tau(m).
inline PAdicApprox vdp_coeff_normalized(const FunctionOracle& f, const ScaleFn& phi,
                                        const Natural& m, std::size_t K) {
    const Prime p = f.prime();
    std::size_t tau = block_level(phi, m, p);
    PAdicApprox B = vdp_coeff(f, phi, m, K + tau);
    if (tau == 0) return B;
    Valuation v = B.valuation();
    if (!v.certified_at_least(tau))
        throw MembershipViolation(m, tau, v);
    return B.shifted_down(tau);
}

/// One table row of the coefficient data attached to an index m.
struct VdpRow {
    Natural m;
    std::size_t tau = 0;
    std::optional<Natural> top;       // M(m), absent when tau = 0
    PAdicApprox B;
    Valuation v_B;
    std::optional<PAdicApprox> b;     // absent when the valuation falls short
};

inline VdpRow vdp_row(const FunctionOracle& f, const ScaleFn& phi,
                      const Natural& m, std::size_t K) {
    const Prime p = f.prime();
    std::size_t tau = block_level(phi, m, p);
    PAdicApprox B = vdp_coeff(f, phi, m, K + tau);
    VdpRow row{m, tau, std::nullopt, B.truncated(K), B.valuation(), std::nullopt};
    if (tau >= 1) row.top = top_block(phi, m, p);
    if (tau == 0)
        row.b = row.B;
    else if (B.valuation().certified_at_least(tau))
        row.b = B.shifted_down(tau);
    return row;
}

/**
 * Per-(f, Phi) evaluation cache. Lifting touches few indices and coefficient
 * tables touch many; caching the oracle values themselves serves both, since
 * adjacent coefficients share their parent evaluation. Safe for concurrent
 * use; results are identical to the uncached path.
 */
class CoeffCache {
public:
    CoeffCache(FunctionOracle f, ScaleFn phi)
        : f_(std::move(f)), phi_(std::move(phi)) {}

    const FunctionOracle& oracle() const { return f_; }
    const ScaleFn& scale() const { return phi_; }

    PAdicApprox value(const Natural& m, std::size_t K) const {
        {
            std::lock_guard lock(mu_);
            auto it = fvals_.find(m);
            if (it != fvals_.end() && it->second.precision() >= K)
                return it->second.truncated(K);
        }
        PAdicApprox v = f_(m, K);
        std::lock_guard lock(mu_);
        auto [it, inserted] = fvals_.try_emplace(m, v);
        if (!inserted && it->second.precision() < K) it->second = v;
        return v;
    }

    PAdicApprox coeff(const Natural& m, std::size_t K) const {
        if (block_level(phi_, m, f_.prime()) == 0)
            return value(m, K);
        return value(m, K) - value(m - top_block(phi_, m, f_.prime()), K);
    }

    PAdicApprox normalized(const Natural& m, std::size_t K) const {
        std::size_t tau = block_level(phi_, m, f_.prime());
        PAdicApprox B = coeff(m, K + tau);
        if (tau == 0) return B;
        Valuation v = B.valuation();
        if (!v.certified_at_least(tau))
            throw MembershipViolation(m, tau, v);
        return B.shifted_down(tau);
    }

private:
    FunctionOracle f_;
    ScaleFn phi_;
    mutable std::mutex mu_;
    mutable std::map<Natural, PAdicApprox> fvals_;
};

/// Partial series sum over the jump set of x: sum_{j in J(x), j <= j_max}
/// B(x(j)). The sum telescopes to f(x(j_max)), so only j_max + 1 terms can be
/// nonzero; output precision equals the precision of x.
inline PAdicApprox eval_series(const FunctionOracle& f, const ScaleFn& phi,
                               const PAdicApprox& x, std::size_t j_max) {
    const std::size_t K = x.precision();
    if (K < static_cast<std::size_t>(phi(std::int64_t(j_max)) + 1))
        throw PrecisionError("eval_series: x has fewer than 1+Phi(j_max) digits");
    PAdicApprox acc = vdp_coeff(f, phi, truncate_to_level(x, 0, phi), K);
    for (std::size_t j : jump_set(x, j_max, phi))
        if (j != 0)
            acc = acc + vdp_coeff(f, phi, truncate_to_level(x, j, phi), K);
    return acc;
}

/// f rebuilt from its own series: evaluates the partial sum at a level deep
/// enough to pin the requested precision. Agrees with f everywhere exactly
/// when the coefficients are the unique expansion of f.
inline FunctionOracle series_as_oracle(const FunctionOracle& f, const ScaleFn& phi) {
    return FunctionOracle(
        f.prime(), f.family() + ".series",
        [f, phi](const Natural& m, std::size_t K) {
            std::size_t j = block_level(phi, m, f.prime());
            while (static_cast<std::size_t>(phi(std::int64_t(j)) + 1) < K) ++j;
            auto width = static_cast<std::size_t>(phi(std::int64_t(j)) + 1);
            PAdicApprox x = PAdicApprox::from_natural(m, f.prime(), width);
            return eval_series(f, phi, x, j).truncated(K);
        },
        f.declared_scale(), f.params());
}

/// Outcome of the window membership check of f against Phi.
struct MembershipReport {
    bool pass = false;
    std::size_t depth = 0;
    std::size_t precision = 0;
    std::optional<Natural> failing_m;      // least failing index
    std::optional<std::size_t> required;   // tau at the failure
    std::optional<std::size_t> observed;   // exact v_p(B) at the failure
};

/// Checks v_p(B(m)) >= tau(m) for every m < p^{1+Phi(depth)}. A pass
/// certifies the scale condition for all pairs inside the window. K = 0
/// selects the default working precision 1 + Phi(depth + 1), enough to settle
/// every valuation comparison in the window.
inline MembershipReport verify_membership(const FunctionOracle& f, const ScaleFn& phi,
                                          std::size_t depth, std::size_t K = 0) {
    const Prime p = f.prime();
    if (K == 0) K = static_cast<std::size_t>(phi(std::int64_t(depth) + 1) + 1);
    MembershipReport report;
    report.depth = depth;
    report.precision = K;
    CoeffCache cache(f, phi);
    const Natural bound = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(depth)) + 1));
    for (Natural m = 0; m < bound; ++m) {
        std::size_t tau = block_level(phi, m, p);
        Valuation v = cache.coeff(m, K).valuation();
        if (v.certified_at_least(tau)) continue;
        if (!v.certainly_below(tau))
            throw PrecisionError("verify_membership: working precision below tau");
        report.pass = false;
        report.failing_m = m;
        report.required = tau;
        report.observed = v.value();
        return report;
    }
    report.pass = true;
    return report;
}

} // namespace padlift
