// include/padlift/hensel.hpp — the generalized Hensel lifter: S-set discovery
// and verification, the one-digit-per-level lifting iteration, certification
// of the resulting root, and the uniqueness side condition.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <padlift/padic.hpp>
#include <padlift/scale.hpp>
#include <padlift/vdp.hpp>

namespace padlift {

/// No candidate block value hits some required residue class during S-set
/// discovery.
class NoSSetError : public std::runtime_error {
public:
    NoSSetError(std::size_t level, Natural missing_class)
        : std::runtime_error("no S-set at level " + std::to_string(level) +
                             ": residue class " + missing_class.get_str() +
                             " is not attained"),
          level(level), missing_class(std::move(missing_class)) {}

    std::size_t level;
    Natural missing_class;
};

/// No block digit certifies the next vanishing order; the cover hypothesis
/// must have failed at this level.
class NoLiftDigitError : public std::runtime_error {
public:
    explicit NoLiftDigitError(std::size_t level)
        : std::runtime_error("no lift digit at level " + std::to_string(level)),
          level(level) {}

    std::size_t level;
};

/**
 * A candidate correction set for one level: p-1 block values in
 * (0, p^{Phi(n+1)-Phi(n)}) whose normalized coefficients are required to
 * cover every nonzero residue class j p^h mod p^{h+1}.
 */
struct SSet {
    std::size_t level = 0;
    std::vector<Natural> members; // sorted, distinct

    bool operator==(const SSet&) const = default;
};

/// Validates the structural invariants (range, cardinality, distinctness).
inline SSet make_s_set(const ScaleFn& phi, Prime p, std::size_t n, std::vector<Natural> members) {
    std::sort(members.begin(), members.end());
    if (members.size() != p.value() - 1)
        throw std::invalid_argument("SSet: cardinality must be p - 1");
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw std::invalid_argument("SSet: members must be distinct");
    const Natural hi = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n) + 1) - phi(std::int64_t(n))));
    if (sgn(members.front()) <= 0 || members.back() >= hi)
        throw std::invalid_argument("SSet: members must lie in (0, p^{Phi(n+1)-Phi(n)})");
    return SSet{n, std::move(members)};
}

/// {1, ..., p-1}: always structurally valid since Phi increases strictly.
inline SSet full_range_s_set(Prime p, std::size_t n) {
    std::vector<Natural> members;
    for (std::uint32_t i = 1; i < p.value(); ++i)
        members.emplace_back(i);
    return SSet{n, std::move(members)};
}

namespace detail {

// Target classes {j p^h mod p^{h+1} : j = 1..p-1} for the cover condition.
inline std::set<Natural> target_classes(Prime p, std::size_t h) {
    std::set<Natural> out;
    const Natural ph = nat_pow(p, h);
    for (std::uint32_t j = 1; j < p.value(); ++j)
        out.insert(Natural(j) * ph);
    return out;
}

inline Natural normalized_class(const CoeffCache& cache, const Natural& m_shifted, std::size_t h) {
    return cache.normalized(m_shifted, h + 1).to_natural();
}

} // namespace detail

/// The cover condition at (n, m): the normalized coefficients
/// b(m + i p^{1+Phi(n)}) over i in S must hit every class j p^h mod p^{h+1}
/// exactly once.
inline bool check_s_condition(const FunctionOracle& f, const ScaleFn& phi, std::size_t h,
                              std::size_t n, const Natural& m, const SSet& S) {
    CoeffCache cache(f, phi);
    const Natural step = nat_pow(f.prime(), static_cast<std::size_t>(phi(std::int64_t(n)) + 1));
    std::set<Natural> seen;
    for (const Natural& i : S.members) {
        auto [it, fresh] = seen.insert(detail::normalized_class(cache, m + i * step, h));
        if (!fresh) return false;
    }
    return seen == detail::target_classes(f.prime(), h);
}

/// Check only the current trajectory point m.
struct DiscoverTrajectory {
    Natural m;
};

/// Check every admissible m < p^{1+Phi(n)} congruent to u mod p^{1+Phi(n0)}.
struct DiscoverExhaustive {};

using DiscoverMode = std::variant<DiscoverTrajectory, DiscoverExhaustive>;

/// Greedy S-set discovery at level n: for each target class j p^h in
/// ascending j, pick the smallest unused i in (0, p^{Phi(n+1)-Phi(n)}) whose
/// b-class equals it — at the single trajectory point, or simultaneously at
/// every admissible m in exhaustive mode. Throws NoSSetError naming the first
/// class left uncovered.
inline SSet discover_s(const FunctionOracle& f, const ScaleFn& phi, std::size_t h,
                       std::size_t n, const Natural& u, std::size_t n0,
                       const DiscoverMode& mode) {
    const Prime p = f.prime();
    CoeffCache cache(f, phi);
    const Natural step = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n)) + 1));
    const Natural i_bound =
        nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n) + 1) - phi(std::int64_t(n))));

    std::vector<Natural> points;
    if (const auto* traj = std::get_if<DiscoverTrajectory>(&mode)) {
        points.push_back(traj->m);
    } else {
        const Natural res_step = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n0)) + 1));
        if ((step / res_step) > 1000000)
            throw std::invalid_argument("discover_s: exhaustive window exceeds desk-scale cap");
        for (Natural m = u % res_step; m < step; m += res_step)
            points.push_back(m);
    }

    // Class of candidate i, or nullopt when it varies across the points.
    auto class_of = [&](const Natural& i) -> std::optional<Natural> {
        std::optional<Natural> cls;
        for (const Natural& m : points) {
            Natural c = detail::normalized_class(cache, m + i * step, h);
            if (!cls)
                cls = c;
            else if (*cls != c)
                return std::nullopt;
        }
        return cls;
    };

    const Natural ph = nat_pow(p, h);
    std::vector<Natural> chosen;
    std::set<Natural> used;
    for (std::uint32_t j = 1; j < p.value(); ++j) {
        const Natural target = Natural(j) * ph;
        bool found = false;
        for (Natural i = 1; i < i_bound; ++i) {
            if (used.count(i)) continue;
            auto cls = class_of(i);
            if (cls && *cls == target) {
                chosen.push_back(i);
                used.insert(i);
                found = true;
                break;
            }
        }
        if (!found) throw NoSSetError(n, target);
    }
    return make_s_set(phi, p, n, std::move(chosen));
}

/// One lifting step and its audit trail.
struct LiftStepResult {
    Natural u_next;
    Natural digit;                 // chosen i in {0} union S
    std::vector<Natural> working;  // every i that certified; size 1 under the hypotheses
};

/// Finds the i in {0} union S with f(u_l + i p^{1+Phi(l)}) = 0 mod
/// p^{2+h+l}, verified by direct oracle evaluation. More than one working i
/// is reported back (the smallest is chosen); none throws NoLiftDigitError.
inline LiftStepResult lift_step(const FunctionOracle& f, const ScaleFn& phi, std::size_t h,
                                std::size_t l, const Natural& u_l, const SSet& S) {
    const Natural step = nat_pow(f.prime(), static_cast<std::size_t>(phi(std::int64_t(l)) + 1));
    const std::size_t target = 2 + h + l;
    LiftStepResult result{u_l, 0, {}};
    std::vector<Natural> candidates{0};
    candidates.insert(candidates.end(), S.members.begin(), S.members.end());
    std::sort(candidates.begin(), candidates.end());
    for (const Natural& i : candidates)
        if (f(u_l + i * step, target).is_zero())
            result.working.push_back(i);
    if (result.working.empty()) throw NoLiftDigitError(l);
    result.digit = result.working.front();
    result.u_next = u_l + result.digit * step;
    return result;
}

/// How the per-level S-sets are obtained during a lift.
struct ExplicitSets {
    std::vector<SSet> sets; // one per level n0 .. n_max-1, in order
};
struct AutoDiscover {};    // trajectory-mode discovery at each level
struct FullRange {};       // S(n) = {1, ..., p-1} throughout
using SStrategy = std::variant<ExplicitSets, AutoDiscover, FullRange>;

/**
 * A lifting run: start data (h, n0, u), target depth, and the S-set
 * strategy. The start conditions u < p^{1+Phi(n0)} and f(u) = 0 mod
 * p^{1+h+n0} are checked at construction.
 */
class LiftProblem {
public:
    LiftProblem(FunctionOracle f, ScaleFn phi, std::size_t h, std::size_t n0,
                Natural u, std::size_t n_max, SStrategy strategy)
        : f_(std::move(f)), phi_(std::move(phi)), h_(h), n0_(n0), u_(std::move(u)),
          n_max_(n_max), strategy_(std::move(strategy)) {
        if (n_max_ < n0_)
            throw std::invalid_argument("LiftProblem: n_max must be >= n0");
        if (sgn(u_) < 0 ||
            u_ >= nat_pow(f_.prime(), static_cast<std::size_t>(phi_(std::int64_t(n0_)) + 1)))
            throw std::invalid_argument("LiftProblem: u must lie in [0, p^{1+Phi(n0)})");
        if (!f_(u_, 1 + h_ + n0_).is_zero())
            throw std::invalid_argument("LiftProblem: f(u) != 0 mod p^{1+h+n0}");
        if (const auto* ex = std::get_if<ExplicitSets>(&strategy_)) {
            if (ex->sets.size() != n_max_ - n0_)
                throw std::invalid_argument("LiftProblem: need one explicit S-set per level");
            for (std::size_t l = n0_; l < n_max_; ++l)
                if (ex->sets[l - n0_].level != l)
                    throw std::invalid_argument("LiftProblem: explicit S-set level mismatch");
        }
    }

    const FunctionOracle& oracle() const { return f_; }
    const ScaleFn& scale() const { return phi_; }
    std::size_t h() const { return h_; }
    std::size_t n0() const { return n0_; }
    const Natural& start() const { return u_; }
    std::size_t n_max() const { return n_max_; }
    const SStrategy& strategy() const { return strategy_; }

private:
    FunctionOracle f_;
    ScaleFn phi_;
    std::size_t h_, n0_;
    Natural u_;
    std::size_t n_max_;
    SStrategy strategy_;
};

struct LiftFailure {
    std::size_t level = 0;
    std::string reason;
};

/**
 * Full record of a lifting run. On success the root is u_{n_max} taken mod
 * p^{1+Phi(n_max)} and certified to vanish mod p^{1+h+n_max} — never claimed
 * as an exact zero; only the limit of the full iteration is one.
 */
struct LiftTrace {
    std::size_t h = 0, n0 = 0, n_max = 0;
    std::vector<Natural> iterates;              // u_{n0} .. u_{last}
    std::vector<Natural> chosen;                // block digit per completed level
    std::vector<SSet> s_sets;                   // per completed level
    std::vector<PAdicApprox> residues;          // f(u_j) mod p^{1+h+j}
    std::vector<std::size_t> multiple_digit_levels; // uniqueness-warning levels
    std::optional<PAdicApprox> root;            // present on success
    std::size_t certification_exponent = 0;     // 1 + h + n_max
    bool success = false;
    std::optional<LiftFailure> failure;
};

namespace detail {

// The step identity: f(u_{l+1}) - f(u_l) must equal p^{l+1} b(u_{l+1})
// exactly at working precision. Recomputed from the oracle as a guard
// against precision bugs in the coefficient path.
inline void check_step_identity(const FunctionOracle& f, const ScaleFn& phi,
                                std::size_t h, std::size_t l,
                                const Natural& u_l, const Natural& u_next) {
    if (u_l == u_next) return;
    const std::size_t K = 4 + h + l;
    PAdicApprox lhs = f(u_next, K) - f(u_l, K);
    PAdicApprox b = vdp_coeff_normalized(f, phi, u_next, K);
    PAdicApprox rhs = PAdicApprox::from_natural(nat_pow(f.prime(), l + 1), f.prime(), K) * b;
    if (!(lhs == rhs))
        throw std::logic_error("lift: step identity violated at level " + std::to_string(l));
}

} // namespace detail

/// Runs the lifting iteration for l = n0 .. n_max-1, raising the certified
/// vanishing order of f by one per level.
inline LiftTrace lift(const LiftProblem& prob) {
    const FunctionOracle& f = prob.oracle();
    const ScaleFn& phi = prob.scale();
    const Prime p = f.prime();
    const std::size_t h = prob.h(), n0 = prob.n0(), n_max = prob.n_max();

    LiftTrace trace;
    trace.h = h;
    trace.n0 = n0;
    trace.n_max = n_max;
    trace.certification_exponent = 1 + h + n_max;
    trace.iterates.push_back(prob.start());
    trace.residues.push_back(f(prob.start(), 1 + h + n0));

    Natural u_cur = prob.start();
    for (std::size_t l = n0; l < n_max; ++l) {
        SSet S;
        try {
            if (const auto* ex = std::get_if<ExplicitSets>(&prob.strategy()))
                S = make_s_set(phi, p, l, ex->sets[l - n0].members);
            else if (std::holds_alternative<AutoDiscover>(prob.strategy()))
                S = discover_s(f, phi, h, l, prob.start(), n0, DiscoverTrajectory{u_cur});
            else
                S = full_range_s_set(p, l);

            LiftStepResult step = lift_step(f, phi, h, l, u_cur, S);
            if (step.working.size() > 1)
                trace.multiple_digit_levels.push_back(l);
            detail::check_step_identity(f, phi, h, l, u_cur, step.u_next);

            u_cur = step.u_next;
            trace.s_sets.push_back(std::move(S));
            trace.chosen.push_back(step.digit);
            trace.iterates.push_back(u_cur);
            trace.residues.push_back(f(u_cur, 2 + h + l));
        } catch (const NoSSetError& e) {
            trace.failure = LiftFailure{l, std::string("no_s_set: ") + e.what()};
            return trace;
        } catch (const NoLiftDigitError& e) {
            trace.failure = LiftFailure{l, std::string("no_lift_digit: ") + e.what()};
            return trace;
        } catch (const MembershipViolation& e) {
            trace.failure = LiftFailure{l, std::string("membership_violation: ") + e.what()};
            return trace;
        }
    }

    auto root_width = static_cast<std::size_t>(phi(std::int64_t(n_max)) + 1);
    trace.root = PAdicApprox::from_natural(u_cur, p, root_width);
    // Conclusion on the root's digit blocks: each level's block value must be
    // the digit the step chose (0 for skipped levels).
    for (std::size_t n = n0; n < n_max; ++n)
        if (block_value(*trace.root, n + 1, phi) != trace.chosen[n - n0])
            throw std::logic_error("lift: root block does not match chosen digit");
    trace.success = true;
    return trace;
}

/// Report of the uniqueness side condition b(m) = 0 mod p^h on the residue
/// class of u, checked over the window m < p^{1+Phi(depth)}.
struct UniquenessReport {
    bool pass = false;
    bool trivial = false;          // h = 0: nothing to check
    std::size_t depth = 0;
    std::optional<Natural> failing_m;
};

inline UniquenessReport verify_uniqueness_condition(const FunctionOracle& f, const ScaleFn& phi,
                                                    std::size_t h, const Natural& u,
                                                    std::size_t n0, std::size_t depth) {
    UniquenessReport report;
    report.depth = depth;
    if (h == 0) {
        report.pass = true;
        report.trivial = true;
        return report;
    }
    const Prime p = f.prime();
    CoeffCache cache(f, phi);
    const Natural res_step = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n0)) + 1));
    const Natural bound = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(depth)) + 1));
    for (Natural m = u % res_step + res_step; m < bound; m += res_step) {
        if (!cache.normalized(m, h).is_zero()) {
            report.pass = false;
            report.failing_m = m;
            return report;
        }
    }
    report.pass = true;
    return report;
}

/// All admissible starting points below p^{1+Phi(n0)}.
inline std::vector<Natural> find_start_points(const FunctionOracle& f, const ScaleFn& phi,
                                              std::size_t h, std::size_t n0) {
    const Natural bound = nat_pow(f.prime(), static_cast<std::size_t>(phi(std::int64_t(n0)) + 1));
    if (bound > 1000000)
        throw std::invalid_argument("find_start_points: window exceeds desk-scale cap");
    std::vector<Natural> out;
    for (Natural u = 0; u < bound; ++u)
        if (f(u, 1 + h + n0).is_zero())
            out.push_back(u);
    return out;
}

} // namespace padlift
