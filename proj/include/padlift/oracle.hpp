// include/padlift/oracle.hpp — independent brute-force verification:
// exhaustive residue search for roots and exhaustive pair checks, the ground
// truth every lifted root is validated against.

#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <padlift/funcspace.hpp>
#include <padlift/hensel.hpp>
#include <padlift/padic.hpp>
#include <padlift/scale.hpp>

namespace padlift {

class CapExceededError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-level allowed block values of a candidate root under a given scale.
struct RhoConstraint {
    ScaleFn phi;
    std::map<std::size_t, std::vector<Natural>> allowed; // level j -> sorted values
};

/// The constraint a successful lift imposes on its root: block n+1 must lie
/// in {0} union S(n) for each lifted level.
inline RhoConstraint rho_constraint_from_sets(const ScaleFn& phi, std::size_t n0,
                                              const std::vector<SSet>& sets) {
    RhoConstraint rc{phi, {}};
    for (std::size_t n = n0; n < n0 + sets.size(); ++n) {
        std::vector<Natural> allowed{0};
        const auto& members = sets[n - n0].members;
        allowed.insert(allowed.end(), members.begin(), members.end());
        std::sort(allowed.begin(), allowed.end());
        rc.allowed[n + 1] = std::move(allowed);
    }
    return rc;
}

/// Exhaustive root search: all r < p^{k_search} with f(r) = 0 mod
/// p^{k_target}, subject to an optional congruence and optional block
/// constraints.
struct RootQuery {
    FunctionOracle f;
    std::size_t k_search = 1;
    std::size_t k_target = 1;
    std::optional<std::pair<Natural, Natural>> congruence; // r = first mod second
    std::optional<RhoConstraint> rho;
    std::size_t jobs = 1; // contiguous range partitions; output is identical for any value
};

namespace detail {

inline bool satisfies_rho(const Natural& r, const RhoConstraint& rc, Prime p) {
    for (const auto& [level, allowed] : rc.allowed) {
        Natural block = block_value(r, level, rc.phi, p);
        if (!std::binary_search(allowed.begin(), allowed.end(), block))
            return false;
    }
    return true;
}

inline std::vector<Natural> scan_range(const RootQuery& q, const Natural& lo, const Natural& hi) {
    const Prime p = q.f.prime();
    Natural start = lo;
    Natural step = 1;
    if (q.congruence) {
        const auto& [residue, modulus] = *q.congruence;
        if (sgn(modulus) <= 0)
            throw std::invalid_argument("brute_roots: congruence modulus must be positive");
        step = modulus;
        Natural rem = residue % modulus;
        // First r >= lo with r = rem (mod modulus).
        Natural offset = (rem - lo % modulus + modulus) % modulus;
        start = lo + offset;
    }
    std::vector<Natural> found;
    for (Natural r = start; r < hi; r += step) {
        if (q.rho && !satisfies_rho(r, *q.rho, p)) continue;
        if (q.f(r, q.k_target).is_zero()) found.push_back(r);
    }
    return found;
}

} // namespace detail

/// All roots in ascending order. The search space is split into contiguous
/// ranges scanned independently; the merge concatenates them in range order,
/// so the result does not depend on the partitioning.
inline std::vector<Natural> brute_roots(const RootQuery& q) {
    const Natural space = nat_pow(q.f.prime(), q.k_search);
    if (space > 100000000)
        throw CapExceededError("brute_roots: p^k_search exceeds the desk-scale cap 10^8");

    const std::size_t jobs = std::max<std::size_t>(1, q.jobs);
    if (jobs == 1) return detail::scan_range(q, 0, space);

    const Natural chunk = space / static_cast<unsigned long>(jobs) + 1;
    std::vector<std::future<std::vector<Natural>>> futures;
    for (std::size_t j = 0; j < jobs; ++j) {
        Natural lo = chunk * static_cast<unsigned long>(j);
        Natural hi = lo + chunk;
        if (hi > space) hi = space;
        if (lo >= space) break;
        futures.push_back(std::async(std::launch::async,
                                     [&q, lo, hi] { return detail::scan_range(q, lo, hi); }));
    }
    std::vector<Natural> out;
    for (auto& fut : futures) {
        auto part = fut.get();
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Outcome of the exhaustive pair check of the scale condition.
struct PairCheckReport {
    bool pass = false;
    std::size_t depth = 0;
    std::optional<std::tuple<Natural, Natural, std::size_t>> counterexample; // (x, y, n)
};

/// The independent side of the membership equivalence: for every n <= depth
/// and every pair x, y < p^{1+Phi(depth)} agreeing mod p^{1+Phi(n-1)}, the
/// outputs must agree mod p^n. Output agreement is transitive, so each class
/// member is compared against its representative; that covers every pair.
inline PairCheckReport brute_check_membership(const FunctionOracle& f, const ScaleFn& phi,
                                              std::size_t depth) {
    const Prime p = f.prime();
    PairCheckReport report;
    report.depth = depth;
    const Natural space = nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(depth)) + 1));
    if (space > 10000000)
        throw CapExceededError("brute_check_membership: window exceeds the desk-scale cap");
    const unsigned long count = space.get_ui();

    std::vector<Natural> values;
    values.reserve(count);
    for (unsigned long x = 0; x < count; ++x)
        values.push_back(f(Natural(x), depth).to_natural());

    for (std::size_t n = 1; n <= depth; ++n) {
        const unsigned long classes =
            nat_pow(p, static_cast<std::size_t>(phi(std::int64_t(n) - 1) + 1)).get_ui();
        const Natural out_mod = nat_pow(p, n);
        for (unsigned long x = classes; x < count; ++x) {
            unsigned long rep = x % classes;
            if ((values[x] - values[rep]) % out_mod != 0) {
                report.pass = false;
                report.counterexample = {Natural(rep), Natural(x), n};
                return report;
            }
        }
    }
    report.pass = true;
    return report;
}

} // namespace padlift
