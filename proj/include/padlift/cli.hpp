// include/padlift/cli.hpp — subcommand pipelines behind the padlift binary.
// Every run is a pure function of its config; documents are emitted with
// sorted keys so identical configs produce byte-identical output.

#pragma once

#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <padlift/io.hpp>
#include <padlift/padlift.hpp>

namespace padlift::cli {

using nlohmann::json;

struct RunConfig {
    std::string subcommand;
    json fn_spec;
    json phi_spec;
    std::optional<std::size_t> h, n0, n_max, depth, K, l, n_hi, k_search, k_target;
    std::optional<std::string> u;       // decimal
    std::string s_strategy = "auto";    // auto | full | explicit
    json s_sets;                        // for explicit: array of arrays (or one array)
    std::size_t jobs = 1;
    std::string format = "json";        // json | csv
    std::optional<std::string> out_path;
    bool timestamp = false;
};

namespace detail {

inline std::size_t require(const std::optional<std::size_t>& v, const char* flag) {
    if (!v) throw std::invalid_argument(std::string("missing required option --") + flag);
    return *v;
}

inline Natural require_u(const RunConfig& cfg) {
    if (!cfg.u) throw std::invalid_argument("missing required option --u");
    return io::natural_from_string(*cfg.u);
}

inline std::vector<SSet> parse_explicit_sets(const json& spec, const ScaleFn& phi, Prime p,
                                             std::size_t n0, std::size_t n_max) {
    if (!spec.is_array() || spec.empty())
        throw std::invalid_argument("--s-sets must be a nonempty JSON array");
    auto parse_members = [](const json& arr) {
        std::vector<Natural> members;
        for (const auto& v : arr)
            members.push_back(v.is_string() ? io::natural_from_string(v.get<std::string>())
                                            : Natural(v.get<long>()));
        return members;
    };
    std::vector<SSet> sets;
    if (spec[0].is_array()) {
        if (spec.size() != n_max - n0)
            throw std::invalid_argument("--s-sets needs one set per level n0..n_max-1");
        for (std::size_t l = n0; l < n_max; ++l)
            sets.push_back(make_s_set(phi, p, l, parse_members(spec[l - n0])));
    } else {
        auto members = parse_members(spec);
        for (std::size_t l = n0; l < n_max; ++l)
            sets.push_back(make_s_set(phi, p, l, members));
    }
    return sets;
}

inline std::string join_digits(std::span<const std::uint32_t> digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(digits[i]);
    }
    return out;
}

} // namespace detail

struct RunResult {
    json document;
    std::optional<std::string> csv; // set when the subcommand supports csv
    int exit_code = 0;
};

inline RunResult run_coeffs(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    ScaleFn phi = io::scale_from_json(cfg.phi_spec);
    std::size_t depth = cfg.depth.value_or(2);
    std::size_t K = cfg.K.value_or(static_cast<std::size_t>(phi(std::int64_t(depth) + 1) + 1));
    const Natural bound = nat_pow(f.prime(), static_cast<std::size_t>(phi(std::int64_t(depth)) + 1));

    json rows = json::array();
    std::string csv = "m,tau,M,vp_B,B_digits,b_digits\n";
    for (Natural m = 0; m < bound; ++m) {
        VdpRow row = vdp_row(f, phi, m, K);
        rows.push_back(io::to_json(row));
        csv += io::decimal(row.m) + ',' + std::to_string(row.tau) + ',' +
               (row.top ? io::decimal(*row.top) : "") + ',' +
               (row.v_B.is_exact() ? std::to_string(row.v_B.value())
                                   : ">=" + std::to_string(row.v_B.value())) +
               ',' + detail::join_digits(row.B.digits()) + ',' +
               (row.b ? detail::join_digits(row.b->digits()) : "") + '\n';
    }
    json doc{{"command", "coeffs"},
             {"fn", io::function_spec(f)},
             {"phi", io::scale_spec(phi)},
             {"depth", depth},
             {"K", K},
             {"rows", rows}};
    return {doc, csv, 0};
}

inline RunResult run_verify(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    ScaleFn phi = io::scale_from_json(cfg.phi_spec);
    std::size_t depth = cfg.depth.value_or(2);
    MembershipReport membership = verify_membership(f, phi, depth, cfg.K.value_or(0));
    PairCheckReport pairs = brute_check_membership(f, phi, depth);
    json doc{{"command", "verify"},
             {"fn", io::function_spec(f)},
             {"phi", io::scale_spec(phi)},
             {"depth", depth},
             {"membership", io::to_json(membership)},
             {"pair_check", io::to_json(pairs)},
             {"agree", membership.pass == pairs.pass}};
    return {doc, std::nullopt, membership.pass && pairs.pass ? 0 : 2};
}

inline RunResult run_lift(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    ScaleFn phi = io::scale_from_json(cfg.phi_spec);
    const std::size_t h = cfg.h.value_or(0);
    const std::size_t n0 = cfg.n0.value_or(0);
    const std::size_t n_max = detail::require(cfg.n_max, "nmax");
    const Natural u = detail::require_u(cfg);

    SStrategy strategy;
    if (cfg.s_strategy == "full")
        strategy = FullRange{};
    else if (cfg.s_strategy == "auto")
        strategy = AutoDiscover{};
    else if (cfg.s_strategy == "explicit")
        strategy = ExplicitSets{detail::parse_explicit_sets(cfg.s_sets, phi, f.prime(), n0, n_max)};
    else
        throw std::invalid_argument("--s-strategy must be auto, full, or explicit");

    LiftTrace trace = lift(LiftProblem(f, phi, h, n0, u, n_max, strategy));
    json doc = io::to_json(trace);
    doc["command"] = "lift";
    doc["fn"] = io::function_spec(f);
    doc["phi"] = io::scale_spec(phi);
    doc["s_strategy"] = cfg.s_strategy;
    return {doc, std::nullopt, trace.success ? 0 : 2};
}

inline RunResult run_approx(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    ScaleFn phi = io::scale_from_json(cfg.phi_spec);
    const Natural u = detail::require_u(cfg);
    const std::size_t n0 = cfg.n0.value_or(0);
    const std::size_t h = cfg.h.value_or(0);
    const std::size_t l = detail::require(cfg.l, "l");
    const std::size_t n_hi = cfg.n_hi.value_or(l + 2);
    const std::size_t depth = cfg.depth.value_or(n0 + 1);
    UniformApproxReport report = verify_uniform_approx(f, phi, u, n0, h, l, n_hi, depth);
    json doc = io::to_json(report);
    doc["command"] = "approx";
    doc["fn"] = io::function_spec(f);
    doc["phi"] = io::scale_spec(phi);
    return {doc, std::nullopt, report.pass ? 0 : 2};
}

inline RunResult run_oracle(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    RootQuery q{f, detail::require(cfg.k_search, "ksearch"),
                detail::require(cfg.k_target, "ktarget"), std::nullopt, std::nullopt, cfg.jobs};

    std::optional<ScaleFn> phi;
    if (!cfg.phi_spec.is_null()) phi = io::scale_from_json(cfg.phi_spec);
    if (cfg.u) {
        std::size_t n0 = cfg.n0.value_or(0);
        if (!phi) throw std::invalid_argument("oracle: --phi required with a congruence start");
        q.congruence = {io::natural_from_string(*cfg.u),
                        nat_pow(f.prime(), static_cast<std::size_t>((*phi)(std::int64_t(n0)) + 1))};
    }
    if (cfg.s_strategy == "full" || cfg.s_strategy == "explicit") {
        if (!phi || !cfg.n_max)
            throw std::invalid_argument("oracle: block constraints need --phi and --nmax");
        std::size_t n0 = cfg.n0.value_or(0);
        std::vector<SSet> sets;
        if (cfg.s_strategy == "full")
            for (std::size_t l = n0; l < *cfg.n_max; ++l)
                sets.push_back(full_range_s_set(f.prime(), l));
        else
            sets = detail::parse_explicit_sets(cfg.s_sets, *phi, f.prime(), n0, *cfg.n_max);
        q.rho = rho_constraint_from_sets(*phi, n0, sets);
    }

    std::vector<Natural> roots = brute_roots(q);
    json list = json::array();
    for (const auto& r : roots) list.push_back(io::decimal(r));
    json doc{{"command", "oracle"},
             {"fn", io::function_spec(f)},
             {"k_search", q.k_search},
             {"k_target", q.k_target},
             {"count", roots.size()},
             {"roots", list}};
    if (phi) doc["phi"] = io::scale_spec(*phi);
    return {doc, std::nullopt, 0};
}

inline RunResult run_psi(const RunConfig& cfg) {
    FunctionOracle f = io::function_from_json(cfg.fn_spec);
    const std::size_t n_max = cfg.n_max.value_or(3);
    const std::size_t depth = cfg.depth.value_or(4);
    ModulusTable table = modulus_table(f, n_max, depth);
    ScaleFn phi = phi_from_psi(table);
    json doc{{"command", "psi"},
             {"fn", io::function_spec(f)},
             {"window_depth", table.window_depth},
             {"psi", table.psi},
             {"phi", io::scale_spec(phi)}};
    std::string csv = "n,psi\n";
    for (std::size_t n = 1; n <= table.psi.size(); ++n)
        csv += std::to_string(n) + ',' + std::to_string(table.psi[n - 1]) + '\n';
    return {doc, csv, 0};
}

struct ExampleOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The built-in golden configurations: the block-digit lifts, the digit-cube
/// lift, both square-root regimes, and the classical polynomial case, each
/// cross-checked against the exhaustive root search.
inline std::vector<ExampleOutcome> run_example_suite() {
    std::vector<ExampleOutcome> out;
    auto record = [&](const std::string& name, bool pass, std::string detail) {
        out.push_back({name, pass, std::move(detail)});
    };

    auto lift_and_confirm = [&](const std::string& name, const FunctionOracle& f,
                                const ScaleFn& phi, std::size_t h, std::size_t n0,
                                const Natural& u, std::size_t n_max, SStrategy strategy,
                                const Natural& expect_root, std::size_t k_search) {
        try {
            LiftTrace trace = lift(LiftProblem(f, phi, h, n0, u, n_max, strategy));
            if (!trace.success) {
                record(name, false, "lift failed: " + trace.failure->reason);
                return;
            }
            Natural got = trace.root->to_natural();
            RootQuery q{f, k_search, 1 + h + n_max,
                        {{u, nat_pow(f.prime(), static_cast<std::size_t>(phi(std::int64_t(n0)) + 1))}},
                        rho_constraint_from_sets(phi, n0, trace.s_sets), 1};
            std::vector<Natural> roots = brute_roots(q);
            bool pass = got == expect_root && roots.size() == 1 && roots[0] == got;
            record(name, pass,
                   "root=" + got.get_str() + " oracle_count=" + std::to_string(roots.size()));
        } catch (const std::exception& e) {
            record(name, false, e.what());
        }
    };

    const ScaleFn two_n_one = ScaleFn::affine(1, 2);
    lift_and_confirm("digit_linear_lift_S12", digit_linear(Prime(3), Natural(1)), two_n_one, 0, 0,
                     Natural(2), 2,
                     ExplicitSets{{make_s_set(two_n_one, Prime(3), 0, {Natural(1), Natural(2)}),
                                   make_s_set(two_n_one, Prime(3), 1, {Natural(1), Natural(2)})}},
                     Natural(182), 6);
    lift_and_confirm("digit_linear_lift_S45", digit_linear(Prime(3), Natural(1)), two_n_one, 0, 0,
                     Natural(2), 2,
                     ExplicitSets{{make_s_set(two_n_one, Prime(3), 0, {Natural(4), Natural(5)}),
                                   make_s_set(two_n_one, Prime(3), 1, {Natural(4), Natural(5)})}},
                     Natural(452), 6);
    lift_and_confirm("digit_cube_lift", digit_cube(Natural(2)), two_n_one, 0, 0, Natural(2), 2,
                     FullRange{}, Natural(1302), 6);
    lift_and_confirm("classical_sqrt2_mod_343", polynomial(Prime(7), {Natural(-2), Natural(0), Natural(1)}),
                     ScaleFn::identity(), 0, 0, Natural(3), 2, FullRange{}, Natural(108), 3);

    // Square roots through the approximability route, both the h = 0 and the
    // h = 1 regime.
    try {
        FunctionOracle f = digit_square(Prime(7), Natural(8));
        UniformApproxReport rep = verify_uniform_approx(f, two_n_one, 1, 0, 0, 1, 3, 1);
        LiftTrace trace = approx_lift(f, two_n_one, 1, 0, 0, 1, 3);
        bool pass = rep.pass && trace.success && f(trace.root->to_natural(), 4).is_zero();
        if (pass) {
            Natural y = 0;
            for (std::size_t j = 4; j-- > 0;) {
                y *= 7;
                y += trace.root->digit(2 * j);
            }
            pass = PAdicApprox::from_integer(y * y - 8, Prime(7), 4).is_zero();
        }
        record("digit_square_p7", pass, "root=" + trace.root->to_natural().get_str());
    } catch (const std::exception& e) {
        record("digit_square_p7", false, e.what());
    }
    try {
        FunctionOracle f = digit_square(Prime(2), Natural(17));
        UniformApproxReport rep = verify_uniform_approx(f, two_n_one, 1, 1, 1, 2, 4, 2);
        UniquenessReport uniq = verify_uniqueness_condition(f, two_n_one, 1, 1, 1, 3);
        LiftTrace trace = approx_lift(f, two_n_one, 1, 1, 1, 2, 4);
        bool pass = rep.pass && uniq.pass && trace.success &&
                    f(trace.root->to_natural(), 6).is_zero();
        record("digit_square_p2_h1", pass,
               trace.success ? "root=" + trace.root->to_natural().get_str() : "lift failed");
    } catch (const std::exception& e) {
        record("digit_square_p2_h1", false, e.what());
    }
    return out;
}

inline RunResult run_examples(const RunConfig&) {
    auto outcomes = run_example_suite();
    json rows = json::array();
    std::string csv = "name,pass,detail\n";
    bool all = true;
    for (const auto& o : outcomes) {
        rows.push_back(json{{"name", o.name}, {"pass", o.pass}, {"detail", o.detail}});
        csv += o.name + ',' + (o.pass ? "PASS" : "FAIL") + ',' + o.detail + '\n';
        all = all && o.pass;
    }
    json doc{{"command", "examples"}, {"results", rows}, {"all_pass", all}};
    return {doc, csv, all ? 0 : 2};
}

/// Executes a validated config. Exit status: 0 on success/PASS, 2 on a
/// mathematical failure report, 1 on usage errors (thrown before any
/// document is produced).
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    RunResult result;
    try {
        if (cfg.format != "json" && cfg.format != "csv")
            throw std::invalid_argument("--format must be json or csv");
        if (cfg.subcommand == "coeffs")
            result = run_coeffs(cfg);
        else if (cfg.subcommand == "verify")
            result = run_verify(cfg);
        else if (cfg.subcommand == "lift")
            result = run_lift(cfg);
        else if (cfg.subcommand == "approx")
            result = run_approx(cfg);
        else if (cfg.subcommand == "oracle")
            result = run_oracle(cfg);
        else if (cfg.subcommand == "psi")
            result = run_psi(cfg);
        else if (cfg.subcommand == "examples")
            result = run_examples(cfg);
        else
            throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
        if (cfg.format == "csv" && !result.csv)
            throw std::invalid_argument("--format csv is not available for " + cfg.subcommand);
    } catch (const WindowTooRough& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::string body;
    if (cfg.format == "csv") {
        body = *result.csv;
    } else {
        if (cfg.timestamp) result.document["timestamp"] = std::time(nullptr);
        body = result.document.dump(2) + "\n";
    }
    if (cfg.out_path) {
        std::ofstream file(*cfg.out_path, std::ios::binary);
        if (!file) {
            err << "usage error: cannot open output path " << *cfg.out_path << "\n";
            return 1;
        }
        file << body;
    } else {
        out << body;
    }
    return result.exit_code;
}

} // namespace padlift::cli
