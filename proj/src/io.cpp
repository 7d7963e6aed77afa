#include "clustercert/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace clustercert {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double take_number(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        fail(std::string("missing or non-numeric field \"") + key + "\"");
    return j.at(key).get<double>();
}

std::vector<double> take_array(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        fail(std::string("missing or non-array field \"") + key + "\"");
    std::vector<double> out;
    for (const auto& x : j.at(key)) {
        if (!x.is_number()) fail(std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

ordered_json grid_function_to_json(const GridFunction& u) {
    const GridSpec& spec = u.spec();
    ordered_json j;
    j["dim"] = spec.dim();
    j["center"] = spec.cube().center();
    j["side"] = spec.cube().side();
    j["m"] = spec.m();
    j["values"] = u.values();
    return j;
}

GridFunction grid_function_from_json(const ordered_json& j) {
    const int dim = static_cast<int>(take_number(j, "dim"));
    const std::vector<double> center = take_array(j, "center");
    const double side = take_number(j, "side");
    const int m = static_cast<int>(take_number(j, "m"));
    const std::vector<double> values = take_array(j, "values");
    return GridFunction(GridSpec(Cube(dim, center, side), m), values);
}

void write_grid_function(const std::filesystem::path& path, const GridFunction& u) {
    write_json_file(path, grid_function_to_json(u));
}

GridFunction read_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
    }
    return grid_function_from_json(j);
}

ordered_json function_spec_to_json(const FunctionSpec& f) {
    ordered_json j;
    j["family"] = f.family_name();
    ordered_json& p = j["params"] = ordered_json::object();
    struct Fill {
        ordered_json& p;
        void operator()(const ConstantFn& f) const { p["value"] = f.value; }
        void operator()(const LinearFn& f) const { p["coeffs"] = f.coeffs; }
        void operator()(const BumpFn& f) const {
            p["center"] = f.center;
            p["width"] = f.width;
            p["height"] = f.height;
        }
        void operator()(const TanhPlateauFn& f) const {
            p["normal"] = f.normal;
            p["offset"] = f.offset;
            p["steepness"] = f.steepness;
            p["height"] = f.height;
        }
        void operator()(const IndicatorHalfspaceFn& f) const {
            p["axis"] = f.axis;
            p["threshold"] = f.threshold;
            p["low"] = f.low;
            p["high"] = f.high;
        }
        void operator()(const RandomTrigFn& f) const {
            p["seed"] = f.seed;
            p["terms"] = f.terms;
            p["amplitude"] = f.amplitude;
        }
    };
    std::visit(Fill{p}, f.family());
    return j;
}

FunctionSpec function_spec_from_json(const ordered_json& j) {
    if (!j.contains("family") || !j.at("family").is_string())
        fail("function spec needs a \"family\" string");
    const std::string family = j.at("family").get<std::string>();
    const ordered_json params =
        j.contains("params") ? j.at("params") : ordered_json::object();
    if (!params.is_object()) fail("\"params\" must be an object");

    if (family == "constant")
        return FunctionSpec(ConstantFn{params.value("value", 0.0)});
    if (family == "linear") return FunctionSpec(LinearFn{take_array(params, "coeffs")});
    if (family == "bump")
        return FunctionSpec(BumpFn{take_array(params, "center"),
                                   params.value("width", 1.0),
                                   params.value("height", 1.0)});
    if (family == "tanh-plateau")
        return FunctionSpec(TanhPlateauFn{take_array(params, "normal"),
                                          params.value("offset", 0.0),
                                          params.value("steepness", 1.0),
                                          params.value("height", 1.0)});
    if (family == "indicator-halfspace")
        return FunctionSpec(IndicatorHalfspaceFn{params.value("axis", 0),
                                                 params.value("threshold", 0.0),
                                                 params.value("low", 0.0),
                                                 params.value("high", 1.0)});
    if (family == "random-trig")
        return FunctionSpec(RandomTrigFn{params.value("seed", std::uint64_t{0}),
                                         params.value("terms", 1),
                                         params.value("amplitude", 1.0)});
    fail("unknown function family \"" + family + "\"");
}

FunctionSpec parse_function_spec(const std::string& text) {
    if (!text.empty() && text.front() == '@') {
        const std::filesystem::path path = text.substr(1);
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open function spec file: " + path.string());
        try {
            return function_spec_from_json(ordered_json::parse(in));
        } catch (const ordered_json::exception& e) {
            throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
        }
    }
    try {
        return function_spec_from_json(ordered_json::parse(text));
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("invalid function spec JSON: ") +
                                    e.what());
    }
}

ordered_json certificate_to_json(const ClusterCertificate& cert) {
    ordered_json j;
    j["found"] = cert.found;
    j["k"] = cert.k;
    j["eta"] = cert.eta;
    j["x1"] = cert.x1;
    j["witness_index"] = cert.witness_index;
    j["fraction"] = cert.fraction;
    j["k_star"] = cert.k_star;
    j["checked_ks"] = cert.checked_ks;
    j["plus_counts"] = cert.plus_counts;
    j["non_divisors_skipped"] = cert.non_divisors_skipped;
    j["best_fraction"] = cert.best_fraction;
    j["alpha_measured"] = cert.alpha_measured;
    j["gamma_measured"] = cert.gamma_measured;
    j["hypothesis_a"] = {{"passed", cert.hyp_a.passed},
                         {"fraction", cert.hyp_a.fraction},
                         {"measure", cert.hyp_a.measure},
                         {"threshold", cert.hyp_a.threshold}};
    j["hypothesis_b"] = {{"passed", cert.hyp_b.passed},
                         {"gamma_measured", cert.hyp_b.gamma_measured},
                         {"seminorm", cert.hyp_b.seminorm},
                         {"budget", cert.hyp_b.budget}};
    return j;
}

ordered_json corollary_result_to_json(const CorollaryResult& result) {
    ordered_json j = certificate_to_json(result.certificate);
    j["reduction"] = {{"kind", result.kind == ReductionKind::w1p ? "w1p" : "bv"},
                      {"gamma_prime", result.gamma_prime},
                      {"gamma_prime_measured", result.gamma_prime_measured},
                      {"budget_passed", result.budget_passed},
                      {"C", result.embedding_C},
                      {"gamma", result.gamma}};
    return j;
}

ordered_json partition_report_to_json(const PartitionReport& report) {
    ordered_json j;
    j["k"] = report.k;
    j["plus_count"] = report.plus_count;
    j["clu1_lhs"] = report.clu1_lhs;
    j["clu1_rhs"] = report.clu1_rhs;
    j["clu1_holds"] = report.clu1_holds;
    j["plus_indices"] = report.plus_indices;
    return j;
}

void write_partition_csv(std::ostream& out, const GridFunction& u, double c,
                         double alpha, double lambda, const std::vector<int>& ks) {
    out << "k,index,count_c,count_lambda_c,class\n";
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    for (int k : ks) {
        const PartitionReport report = classify_partition(u, c, alpha, k);
        std::size_t groups = 1;
        for (int a = 0; a < n; ++a) groups *= static_cast<std::size_t>(k);
        std::vector<bool> plus(groups, false);
        for (const std::vector<int>& j : report.plus_indices) {
            std::size_t sc = 0;
            for (int a = 0; a < n; ++a)
                sc = sc * static_cast<std::size_t>(k) +
                     static_cast<std::size_t>(j[static_cast<std::size_t>(a)]);
            plus[sc] = true;
        }

        // Per-subcube counts at both levels, lexicographic subcube order.
        std::vector<long long> count_c(groups, 0), count_l(groups, 0);
        const int sub_m = m / k;
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        for (std::size_t fl = 0; fl < u.values().size(); ++fl) {
            const double v = u.value(fl);
            if (v > c || v > lambda * c) {
                std::size_t sc = 0;
                for (int a = 0; a < n; ++a)
                    sc = sc * static_cast<std::size_t>(k) +
                         static_cast<std::size_t>(idx[static_cast<std::size_t>(a)] /
                                                  sub_m);
                if (v > c) ++count_c[sc];
                if (v > lambda * c) ++count_l[sc];
            }
            for (int a = n - 1; a >= 0; --a) {
                if (++idx[static_cast<std::size_t>(a)] < m) break;
                idx[static_cast<std::size_t>(a)] = 0;
            }
        }

        for (std::size_t sc = 0; sc < groups; ++sc) {
            out << k << ",";
            std::size_t rest = sc;
            std::vector<int> j(static_cast<std::size_t>(n));
            for (int a = n - 1; a >= 0; --a) {
                j[static_cast<std::size_t>(a)] = static_cast<int>(
                    rest % static_cast<std::size_t>(k));
                rest /= static_cast<std::size_t>(k);
            }
            for (int a = 0; a < n; ++a) out << (a ? " " : "") << j[static_cast<std::size_t>(a)];
            out << "," << count_c[sc] << "," << count_l[sc] << ","
                << (plus[sc] ? "plus" : "minus") << "\n";
        }
    }
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << dump_json(j);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace clustercert
