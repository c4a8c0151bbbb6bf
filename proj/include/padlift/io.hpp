// include/padlift/io.hpp — JSON schemas: p-adic values, scale and function
// specs, and the report/trace documents the CLI emits. Large integers travel
// as decimal strings so consumers never hit word-size limits.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <padlift/approx.hpp>
#include <padlift/funcspace.hpp>
#include <padlift/hensel.hpp>
#include <padlift/oracle.hpp>
#include <padlift/padic.hpp>
#include <padlift/scale.hpp>
#include <padlift/vdp.hpp>

namespace padlift::io {

using nlohmann::json;

inline std::string decimal(const Natural& n) { return n.get_str(); }

inline Natural natural_from_string(const std::string& s) {
    mpz_class v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("not a decimal integer: " + s);
    return v;
}

// ---- p-adic values ---------------------------------------------------------

inline json to_json(const PAdicApprox& x) {
    json digits = json::array();
    for (auto d : x.digits()) digits.push_back(d);
    return json{{"p", x.prime().value()}, {"digits", digits}};
}

inline PAdicApprox padic_from_json(const json& j) {
    Prime p(j.at("p").get<std::uint32_t>());
    std::vector<std::uint32_t> digits = j.at("digits").get<std::vector<std::uint32_t>>();
    return PAdicApprox(p, std::move(digits));
}

// ---- scale specs ------------------------------------------------------------

inline json scale_spec(const ScaleFn& phi) {
    return json{{"table", phi.table()}, {"tail_slope", phi.tail_slope()}};
}

inline ScaleFn scale_from_json(const json& j) {
    if (j.contains("id") && j.at("id").get<bool>())
        return ScaleFn::identity();
    return ScaleFn(j.at("table").get<std::vector<std::int64_t>>(),
                   j.value("tail_slope", std::int64_t{1}));
}

// ---- function specs ---------------------------------------------------------

inline json function_spec(const FunctionOracle& f) {
    json j{{"family", f.family()}};
    json coeffs = json::array();
    for (const auto& [key, value] : f.params()) {
        if (key == "p")
            j["p"] = std::stoul(value);
        else if (key == "coeff")
            coeffs.push_back(value);
        else
            j[key] = value;
    }
    if (!coeffs.empty()) j["coeffs"] = coeffs;
    return j;
}

inline FunctionOracle function_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    auto nat = [&](const char* key) { return natural_from_string(j.at(key).get<std::string>()); };
    if (family == "digit_linear")
        return digit_linear(Prime(j.at("p").get<std::uint32_t>()), nat("a"));
    if (family == "digit_cube")
        return digit_cube(nat("a"));
    if (family == "digit_square")
        return digit_square(Prime(j.at("p").get<std::uint32_t>()), nat("a"));
    if (family == "constant")
        return constant_fn(Prime(j.at("p").get<std::uint32_t>()), nat("c"));
    if (family == "digit_shift")
        return digit_shift(Prime(j.at("p").get<std::uint32_t>()));
    if (family == "polynomial") {
        std::vector<Natural> coeffs;
        for (const auto& c : j.at("coeffs"))
            coeffs.push_back(natural_from_string(c.get<std::string>()));
        return polynomial(Prime(j.at("p").get<std::uint32_t>()), coeffs);
    }
    throw std::invalid_argument("unknown function family: " + family);
}

// ---- reports and traces -----------------------------------------------------

inline json to_json(const SSet& s) {
    json members = json::array();
    for (const auto& m : s.members) members.push_back(decimal(m));
    return json{{"level", s.level}, {"members", members}};
}

inline SSet s_set_from_json(const json& j) {
    SSet s;
    s.level = j.at("level").get<std::size_t>();
    for (const auto& m : j.at("members"))
        s.members.push_back(natural_from_string(m.get<std::string>()));
    return s;
}

inline json to_json(const LiftTrace& t) {
    json iterates = json::array();
    for (const auto& u : t.iterates) iterates.push_back(decimal(u));
    json chosen = json::array();
    for (const auto& i : t.chosen) chosen.push_back(decimal(i));
    json sets = json::array();
    for (const auto& s : t.s_sets) sets.push_back(to_json(s));
    json out{{"status", t.success ? "success" : "step_failure"},
             {"h", t.h},
             {"n0", t.n0},
             {"n_max", t.n_max},
             {"iterates", iterates},
             {"chosen_i", chosen},
             {"s_sets", sets},
             {"certification_exponent", t.certification_exponent},
             {"multiple_digit_levels", t.multiple_digit_levels}};
    if (t.root) {
        json digits = json::array();
        for (auto d : t.root->digits()) digits.push_back(d);
        out["root"] = decimal(t.root->to_natural());
        out["root_digits"] = digits;
        out["certification_modulus"] =
            decimal(nat_pow(t.root->prime(), t.certification_exponent));
    }
    if (t.failure)
        out["failure"] = json{{"level", t.failure->level}, {"reason", t.failure->reason}};
    return out;
}

inline json to_json(const MembershipReport& r) {
    json out{{"pass", r.pass}, {"depth", r.depth}, {"precision", r.precision}};
    if (r.failing_m) {
        out["failing_m"] = decimal(*r.failing_m);
        out["required_tau"] = *r.required;
        out["observed_valuation"] = *r.observed;
    }
    return out;
}

inline json to_json(const PairCheckReport& r) {
    json out{{"pass", r.pass}, {"depth", r.depth}};
    if (r.counterexample) {
        const auto& [x, y, n] = *r.counterexample;
        out["counterexample"] = json{{"x", decimal(x)}, {"y", decimal(y)}, {"n", n}};
    }
    return out;
}

inline json to_json(const UniquenessReport& r) {
    json out{{"pass", r.pass}, {"trivial", r.trivial}, {"depth", r.depth}};
    if (r.failing_m) out["failing_m"] = decimal(*r.failing_m);
    return out;
}

inline json to_json(const ApproxCertificate& c) {
    json deltas = json::object();
    for (const auto& [n, d] : c.delta_by_n) deltas[std::to_string(n)] = d;
    return json{{"u", decimal(c.u)},
                {"h", c.h},
                {"l", c.l},
                {"delta_by_n", deltas},
                {"unit_flag", c.unit_flag},
                {"window", json{{"depth", c.window.depth},
                                {"n_lo", c.window.n_lo},
                                {"n_hi", c.window.n_hi}}}};
}

inline json to_json(const UniformApproxReport& r) {
    json out = to_json(r.cert);
    out["pass"] = r.pass;
    if (r.violation)
        out["violation"] = json{{"u_prime", decimal(r.violation->u_prime)},
                                {"n", r.violation->n},
                                {"reason", r.violation->reason}};
    return out;
}

inline json to_json(const VdpRow& row) {
    json B_digits = json::array();
    for (auto d : row.B.digits()) B_digits.push_back(d);
    json out{{"m", decimal(row.m)}, {"tau", row.tau}, {"B_digits", B_digits}};
    out["M"] = row.top ? json(decimal(*row.top)) : json(nullptr);
    if (row.v_B.is_exact())
        out["vp_B"] = row.v_B.value();
    else
        out["vp_B_at_least"] = row.v_B.value();
    if (row.b) {
        json b_digits = json::array();
        for (auto d : row.b->digits()) b_digits.push_back(d);
        out["b_digits"] = b_digits;
    } else {
        out["b_digits"] = nullptr;
    }
    return out;
}

} // namespace padlift::io
