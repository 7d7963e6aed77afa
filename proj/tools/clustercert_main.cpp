// Command-line front end. Exit codes: 0 success/found, 2 validation or I/O
// error, 3 search exhausted; verify exits 1 when a sweep row fails.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clustercert/clustering.hpp"
#include "clustercert/corpus.hpp"
#include "clustercert/geometry.hpp"
#include "clustercert/io.hpp"
#include "clustercert/numeric.hpp"
#include "clustercert/reductions.hpp"
#include "clustercert/seminorms.hpp"

namespace {

using namespace clustercert;

constexpr double kScalingTol = 1e-12;
constexpr double kEmbeddingSlack = 1.05;

int default_m(int dim) {
    if (dim == 2) return 120;
    if (dim == 3) return 24;
    return 16;
}

// --grid "N,m,c1,...,cN,side"; m = 0 selects the per-dimension default.
GridSpec parse_grid_flag(const std::string& text) {
    std::vector<std::string> tokens;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) tokens.push_back(tok);
    auto bad = [&](const std::string& why) -> GridSpec {
        throw std::invalid_argument("bad --grid \"" + text + "\": " + why +
                                    " (expected \"N,m,c1,...,cN,side\")");
    };
    if (tokens.size() < 4) return bad("too few fields");
    int dim = 0, m = 0;
    std::vector<double> nums;
    try {
        std::size_t pos = 0;
        dim = std::stoi(tokens[0], &pos);
        if (pos != tokens[0].size()) return bad("dimension is not an integer");
        m = std::stoi(tokens[1], &pos);
        if (pos != tokens[1].size()) return bad("m is not an integer");
        for (std::size_t i = 2; i < tokens.size(); ++i) {
            nums.push_back(std::stod(tokens[i], &pos));
            if (pos != tokens[i].size()) return bad("non-numeric field");
        }
    } catch (const std::exception&) {
        return bad("non-numeric field");
    }
    if (dim < 1) return bad("dimension must be at least 1");
    if (nums.size() != static_cast<std::size_t>(dim) + 1)
        return bad("need exactly N center coordinates plus the side");
    if (m == 0) m = default_m(dim);
    const double side = nums.back();
    nums.pop_back();
    return GridSpec(Cube(dim, nums, side), m);
}

void warn_if_dim_one(int dim) {
    if (dim == 1)
        std::cerr << "note: the clustering statement is only claimed for "
                     "dimension >= 2; dimension-1 output is diagnostic only\n";
}

// Input source: either a grid file, or a function spec sampled on a grid.
GridFunction load_input(const std::string& input_path,
                        const std::string& function_text,
                        const std::string& grid_text,
                        const std::optional<std::uint64_t>& seed) {
    if (!input_path.empty()) {
        if (!function_text.empty() || !grid_text.empty())
            throw std::invalid_argument(
                "give either --input or --function/--grid, not both");
        return read_grid_function(input_path);
    }
    if (function_text.empty() || grid_text.empty())
        throw std::invalid_argument(
            "no input: give --input FILE, or --function SPEC with --grid");
    FunctionSpec f = parse_function_spec(function_text);
    if (seed) {
        if (const auto* trig = std::get_if<RandomTrigFn>(&f.family())) {
            RandomTrigFn reseeded = *trig;
            reseeded.seed = *seed;
            f = FunctionSpec(reseeded);
        }
    }
    return sample(f, parse_grid_flag(grid_text));
}

void emit(const ordered_json& j, const std::string& output_path) {
    std::cout << dump_json(j);
    if (!output_path.empty()) write_json_file(output_path, j);
}

struct SampleArgs {
    std::string function_text, grid_text, output_path;
    std::optional<std::uint64_t> seed;
    std::vector<double> levels;
};

int cmd_sample(const SampleArgs& a) {
    FunctionSpec f = parse_function_spec(a.function_text);
    if (a.seed) {
        if (const auto* trig = std::get_if<RandomTrigFn>(&f.family())) {
            RandomTrigFn reseeded = *trig;
            reseeded.seed = *a.seed;
            f = FunctionSpec(reseeded);
        }
    }
    const GridSpec spec = parse_grid_flag(a.grid_text);
    warn_if_dim_one(spec.dim());
    const GridFunction u = sample(f, spec);
    write_grid_function(a.output_path, u);

    const auto [lo, hi] =
        std::minmax_element(u.values().begin(), u.values().end());
    ordered_json j;
    j["file"] = a.output_path;
    j["family"] = f.family_name();
    j["dim"] = spec.dim();
    j["m"] = spec.m();
    j["cells"] = u.values().size();
    j["min"] = *lo;
    j["max"] = *hi;
    ordered_json fracs = ordered_json::array();
    const double volume = spec.cube().volume();
    for (double c : a.levels)
        fracs.push_back(
            {{"c", c}, {"fraction", superlevel_measure(u, c) / volume}});
    j["superlevel_fractions"] = fracs;
    std::cout << dump_json(j);
    return 0;
}

struct SeminormArgs {
    std::string input_path, function_text, grid_text, output_path;
    std::optional<std::uint64_t> seed;
    double s = 0.5, p = 2.0;
    std::vector<std::string> which;
    bool oracle = false;
    int workers = 0;
};

int cmd_seminorm(const SeminormArgs& a) {
    const GridFunction u =
        load_input(a.input_path, a.function_text, a.grid_text, a.seed);
    warn_if_dim_one(u.spec().dim());
    std::vector<std::string> which = a.which;
    if (which.empty()) which = {"gagliardo", "grad", "bv"};
    const FractionalParams params(a.s, a.p);

    ordered_json j;
    j["dim"] = u.spec().dim();
    j["m"] = u.spec().m();
    j["s"] = a.s;
    j["p"] = a.p;
    for (const std::string& w : which) {
        if (w == "gagliardo") j["gagliardo"] = gagliardo(u, params, a.workers);
        else if (w == "grad") j["grad_lp"] = grad_lp(u, a.p);
        else j["bv"] = bv_seminorm(u);
    }
    if (a.oracle) {
        const double fast = j.contains("gagliardo")
                                ? j["gagliardo"].get<double>()
                                : gagliardo(u, params, a.workers);
        const double ref = gagliardo_naive(u, params);
        j["gagliardo"] = fast;
        j["gagliardo_naive"] = ref;
        j["oracle_relative_gap"] =
            std::fabs(fast - ref) / std::max(std::fabs(ref), 1e-300);
    }
    emit(j, a.output_path);
    return 0;
}

struct SearchArgs {
    std::string input_path, function_text, grid_text, output_path, plot_path;
    std::optional<std::uint64_t> seed;
    double c = 0.0, alpha = 0.0;
    std::optional<double> gamma, gamma_prime;
    double delta = 0.5, lambda = 0.5, s = 0.5, p = 2.0;
    std::string corollary;  // empty, "w1p", or "bv"
    bool rigorous = false;
    int workers = 0;
};

int cmd_search(const SearchArgs& a) {
    const GridFunction u =
        load_input(a.input_path, a.function_text, a.grid_text, a.seed);
    warn_if_dim_one(u.spec().dim());

    ordered_json j;
    bool found = false;
    double report_c = a.c, report_alpha = a.alpha, report_lambda = a.lambda;
    if (!a.corollary.empty()) {
        if (a.gamma)
            throw std::invalid_argument(
                "--gamma conflicts with --corollary; give --gamma-prime");
        if (!a.gamma_prime)
            throw std::invalid_argument("--corollary requires --gamma-prime");
        const ReductionInput input =
            a.corollary == "w1p"
                ? ReductionInput::w1p(*a.gamma_prime, FractionalParams(a.s, a.p))
                : ReductionInput::bv(*a.gamma_prime, a.s);
        const EmbeddingMethod method = a.rigorous ? EmbeddingMethod::ball_bound
                                                  : EmbeddingMethod::quadrature;
        const CorollaryQuery query{a.c, a.alpha, a.delta, a.lambda};
        const CorollaryResult result =
            corollary_pipeline(u, query, input, method, a.workers);
        j = corollary_result_to_json(result);
        found = result.certificate.found;
    } else {
        if (!a.gamma)
            throw std::invalid_argument("--gamma is required (or use --corollary)");
        const ClusterQuery query(a.c, a.alpha, *a.gamma, a.delta, a.lambda,
                                 FractionalParams(a.s, a.p));
        const ClusterCertificate cert = cluster_search(u, query, a.workers);
        j = certificate_to_json(cert);
        found = cert.found;
    }

    if (!a.plot_path.empty()) {
        std::ofstream csv(a.plot_path);
        if (!csv)
            throw std::runtime_error("cannot open output file: " + a.plot_path);
        std::vector<int> ks;
        for (const auto& k : j["checked_ks"]) ks.push_back(k.get<int>());
        write_partition_csv(csv, u, report_c, report_alpha, report_lambda, ks);
    }
    emit(j, a.output_path);
    return found ? 0 : 3;
}

struct BoundArgs {
    double alpha = 0.0, gamma = 0.0, delta = 0.5, lambda = 0.5;
    double s = 0.5, p = 2.0;
    int dim = 2;
    std::string output_path;
};

int cmd_bound(const BoundArgs& a) {
    warn_if_dim_one(a.dim);
    const FractionalParams params(a.s, a.p);
    // The level c does not enter the bound; 1 satisfies the query contract.
    const ClusterQuery query(1.0, a.alpha, a.gamma, a.delta, a.lambda, params);
    const KStarBound b = k_star_bound(query, a.dim);

    const double n = static_cast<double>(a.dim);
    ordered_json j;
    j["query"] = {{"alpha", a.alpha}, {"gamma", a.gamma}, {"delta", a.delta},
                  {"lambda", a.lambda}, {"dim", a.dim}, {"s", a.s}, {"p", a.p}};
    j["factors"] = {
        {"four_pow_p", std::pow(4.0, a.p)},
        {"two_minus_alpha", 2.0 - a.alpha},
        {"dim_pow", std::pow(n, 0.5 * (n + a.p * a.s))},
        {"gamma_pow_p", std::pow(a.gamma, a.p)},
        {"alpha_pow_p_plus_1", std::pow(a.alpha, a.p + 1.0)},
        {"one_minus_lambda_pow_p", std::pow(1.0 - a.lambda, a.p)},
        {"delta", a.delta}};
    j["B"] = b.bound;
    j["k_star"] = b.k_star;
    j["eta_lower_bound"] = b.eta_lower_bound;
    emit(j, a.output_path);
    return 0;
}

struct VerifyArgs {
    std::string sweep = "all";
    std::string family;
    std::string grid_text, output_path, plot_path;
    int dim = 2;
    int workers = 0;
};

struct SweepRow {
    std::string sweep, name, param;
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};

void scaling_rows(const VerifyArgs& a, const std::vector<CorpusEntry>& corpus,
                  int m, std::vector<SweepRow>& rows) {
    const std::vector<double> radii{0.5, 2.0, 3.0};
    const std::vector<double> svals{0.25, 0.5, 0.75};
    const std::vector<double> pvals{1.0, 2.0};
    const std::vector<double> center(static_cast<std::size_t>(a.dim), 0.2);
    for (const CorpusEntry& entry : corpus) {
        for (double r : radii) {
            const GridFunction u =
                sample(entry.spec, GridSpec(Cube(a.dim, center, r), m));
            auto push = [&](ScalingWhich which, const FractionalParams& prm,
                            const std::string& tag) {
                const ScalingReport rep =
                    verify_scaling(u, which, prm, a.workers);
                rows.push_back({"scaling", entry.name, tag, rep.lhs, rep.rhs,
                                rep.rel_error <= kScalingTol});
            };
            for (double s : svals)
                for (double p : pvals) {
                    std::ostringstream tag;
                    tag << "gagliardo r=" << r << " s=" << s << " p=" << p;
                    push(ScalingWhich::gagliardo, FractionalParams(s, p),
                         tag.str());
                }
            for (double p : pvals) {
                std::ostringstream tag;
                tag << "grad r=" << r << " p=" << p;
                push(ScalingWhich::grad, FractionalParams(0.5, p), tag.str());
            }
            std::ostringstream tag;
            tag << "bv r=" << r;
            push(ScalingWhich::bv, FractionalParams(0.5, 1.0), tag.str());
        }
    }
}

void embedding_rows(const VerifyArgs& a, const std::vector<CorpusEntry>& corpus,
                    int m, std::vector<SweepRow>& rows) {
    const std::vector<double> svals{0.25, 0.5, 0.75};
    const GridSpec spec(
        Cube(a.dim, std::vector<double>(static_cast<std::size_t>(a.dim), 0.0),
             1.0),
        m);
    for (const CorpusEntry& entry : corpus) {
        const GridFunction u = sample(entry.spec, spec);
        for (double s : svals) {
            if (entry.smooth) {
                for (double p : {1.0, 2.0}) {
                    const FractionalParams prm(s, p);
                    const double lhs = gagliardo(u, prm, a.workers);
                    const double C = embedding_constant(a.dim, prm).value;
                    const double rhs = kEmbeddingSlack * C * grad_lp(u, p);
                    std::ostringstream tag;
                    tag << "sob1 s=" << s << " p=" << p;
                    rows.push_back(
                        {"embedding", entry.name, tag.str(), lhs, rhs, lhs <= rhs});
                }
            } else {
                const FractionalParams prm(s, 1.0);
                const double lhs = gagliardo(u, prm, a.workers);
                const double C = embedding_constant(a.dim, prm).value;
                const double rhs = kEmbeddingSlack * C * bv_seminorm(u);
                std::ostringstream tag;
                tag << "bvo1 s=" << s;
                rows.push_back(
                    {"embedding", entry.name, tag.str(), lhs, rhs, lhs <= rhs});
            }
        }
    }
}

void constants_rows(const VerifyArgs& a, std::vector<SweepRow>& rows) {
    for (double s : {0.25, 0.5, 0.75})
        for (double p : {1.0, 2.0}) {
            const FractionalParams prm(s, p);
            const EmbeddingConstant quad = embedding_constant(a.dim, prm);
            const EmbeddingConstant ball =
                embedding_constant(a.dim, prm, EmbeddingMethod::ball_bound);
            const EmbeddingConstant mc =
                embedding_constant(a.dim, prm, EmbeddingMethod::monte_carlo);
            std::ostringstream tag;
            tag << "s=" << s << " p=" << p;
            rows.push_back({"constants", "quad<=ball", tag.str(), quad.value,
                            ball.value, quad.value <= ball.value});
            rows.push_back({"constants", "quad-vs-mc", tag.str(),
                            std::fabs(quad.integral - mc.integral),
                            3.0 * mc.std_error,
                            std::fabs(quad.integral - mc.integral) <=
                                3.0 * mc.std_error});
        }
}

int cmd_verify(const VerifyArgs& a) {
    warn_if_dim_one(a.dim);
    std::vector<CorpusEntry> corpus = builtin_corpus(a.dim);
    if (!a.family.empty()) {
        std::erase_if(corpus, [&](const CorpusEntry& e) {
            return e.name.find(a.family) == std::string::npos;
        });
        if (corpus.empty())
            throw std::invalid_argument("no corpus member matches --family \"" +
                                        a.family + "\"");
    }
    int m_scaling = 24, m_embedding = 48;
    if (!a.grid_text.empty()) {
        const GridSpec g = parse_grid_flag(a.grid_text);
        if (g.dim() != a.dim)
            throw std::invalid_argument("--grid dimension disagrees with --dim");
        m_scaling = m_embedding = g.m();
    }

    std::vector<SweepRow> rows;
    const bool all = a.sweep == "all";
    if (all || a.sweep == "scaling") scaling_rows(a, corpus, m_scaling, rows);
    if (all || a.sweep == "embedding")
        embedding_rows(a, corpus, m_embedding, rows);
    if (all || a.sweep == "constants") constants_rows(a, rows);

    ordered_json jrows = ordered_json::array();
    int failures = 0;
    for (const SweepRow& r : rows) {
        const double ratio = r.lhs / std::max(r.rhs, 1e-300);
        jrows.push_back({{"sweep", r.sweep}, {"name", r.name},
                         {"param", r.param}, {"lhs", r.lhs}, {"rhs", r.rhs},
                         {"ratio", ratio}, {"pass", r.pass}});
        if (!r.pass) ++failures;
    }
    ordered_json j;
    j["sweep"] = a.sweep;
    j["dim"] = a.dim;
    j["rows"] = jrows;
    j["total"] = rows.size();
    j["failures"] = failures;

    if (!a.plot_path.empty()) {
        std::ofstream csv(a.plot_path);
        if (!csv)
            throw std::runtime_error("cannot open output file: " + a.plot_path);
        csv << "sweep,name,param,lhs,rhs,ratio,pass\n";
        for (const auto& r : jrows)
            csv << r["sweep"].get<std::string>() << ","
                << r["name"].get<std::string>() << ",\""
                << r["param"].get<std::string>() << "\"," << r["lhs"] << ","
                << r["rhs"] << "," << r["ratio"] << ","
                << (r["pass"].get<bool>() ? "pass" : "fail") << "\n";
    }
    emit(j, a.output_path);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "clustercert: discrete seminorms, clustering certificates, and "
        "verification sweeps on cube grids"};
    app.require_subcommand(1);

    SampleArgs sa;
    CLI::App* sample_cmd =
        app.add_subcommand("sample", "sample a function family onto a grid file");
    sample_cmd->add_option("--function", sa.function_text,
                           "function spec JSON, or @file")->required();
    sample_cmd->add_option("--grid", sa.grid_text,
                           "grid as \"N,m,c1,...,cN,side\" (m=0 for default)")
        ->required();
    sample_cmd->add_option("--output", sa.output_path, "grid JSON output path")
        ->required();
    sample_cmd->add_option("--seed", sa.seed,
                           "override the seed of a random-trig family");
    sample_cmd->add_option("--c", sa.levels,
                           "levels for the superlevel-fraction summary");

    SeminormArgs na;
    CLI::App* seminorm_cmd =
        app.add_subcommand("seminorm", "compute seminorms of a grid function");
    seminorm_cmd->add_option("--input", na.input_path, "grid JSON input file");
    seminorm_cmd->add_option("--function", na.function_text,
                             "function spec JSON, or @file");
    seminorm_cmd->add_option("--grid", na.grid_text, "grid for --function");
    seminorm_cmd->add_option("--seed", na.seed, "seed override for --function");
    seminorm_cmd->add_option("--s", na.s, "fractional order in (0,1)");
    seminorm_cmd->add_option("--p", na.p, "integrability exponent >= 1");
    seminorm_cmd
        ->add_option("--which", na.which, "subset to compute (default: all)")
        ->check(CLI::IsMember({"gagliardo", "grad", "bv"}));
    seminorm_cmd->add_flag("--oracle", na.oracle,
                           "cross-check gagliardo against the naive oracle");
    seminorm_cmd->add_option("--workers", na.workers,
                             "worker threads (0 = auto)");
    seminorm_cmd->add_option("--output", na.output_path, "JSON output path");

    SearchArgs ra;
    CLI::App* search_cmd =
        app.add_subcommand("search", "search for a clustering certificate");
    search_cmd->add_option("--input", ra.input_path, "grid JSON input file");
    search_cmd->add_option("--function", ra.function_text,
                           "function spec JSON, or @file");
    search_cmd->add_option("--grid", ra.grid_text, "grid for --function");
    search_cmd->add_option("--seed", ra.seed, "seed override for --function");
    search_cmd->add_option("--c", ra.c, "level c > 0")->required();
    search_cmd->add_option("--alpha", ra.alpha, "mass fraction in (0,1)")
        ->required();
    search_cmd->add_option("--gamma", ra.gamma, "seminorm budget multiplier");
    search_cmd->add_option("--delta", ra.delta, "clustering deficit in (0,1)");
    search_cmd->add_option("--lambda", ra.lambda, "level reduction in (0,1)");
    search_cmd->add_option("--s", ra.s, "fractional order in (0,1)");
    search_cmd->add_option("--p", ra.p, "integrability exponent >= 1");
    search_cmd
        ->add_option("--corollary", ra.corollary,
                     "route through a gradient (w1p) or BV reduction")
        ->check(CLI::IsMember({"w1p", "bv"}));
    search_cmd->add_option("--gamma-prime", ra.gamma_prime,
                           "budget multiplier for --corollary");
    search_cmd->add_flag("--rigorous", ra.rigorous,
                         "use the ball-bound constant in the reduction");
    search_cmd->add_option("--workers", ra.workers, "worker threads (0 = auto)");
    search_cmd->add_option("--output", ra.output_path, "certificate JSON path");
    search_cmd->add_option("--plot-data", ra.plot_path,
                           "per-subcube CSV across the checked depths");

    BoundArgs ba;
    CLI::App* bound_cmd = app.add_subcommand(
        "bound", "evaluate the worst-case partition depth bound");
    bound_cmd->add_option("--alpha", ba.alpha, "mass fraction in (0,1)")
        ->required();
    bound_cmd->add_option("--gamma", ba.gamma, "seminorm budget multiplier")
        ->required();
    bound_cmd->add_option("--delta", ba.delta, "clustering deficit in (0,1)");
    bound_cmd->add_option("--lambda", ba.lambda, "level reduction in (0,1)");
    bound_cmd->add_option("--dim", ba.dim, "space dimension");
    bound_cmd->add_option("--s", ba.s, "fractional order in (0,1)");
    bound_cmd->add_option("--p", ba.p, "integrability exponent >= 1");
    bound_cmd->add_option("--output", ba.output_path, "JSON output path");

    VerifyArgs va;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run verification sweeps over the corpus");
    verify_cmd
        ->add_option("--sweep", va.sweep, "which sweep to run")
        ->check(CLI::IsMember({"scaling", "embedding", "constants", "all"}));
    verify_cmd->add_option("--family", va.family,
                           "restrict the corpus to names containing this text");
    verify_cmd->add_option("--dim", va.dim, "space dimension");
    verify_cmd->add_option("--grid", va.grid_text,
                           "override the sweep grid (m in particular)");
    verify_cmd->add_option("--workers", va.workers, "worker threads (0 = auto)");
    verify_cmd->add_option("--output", va.output_path, "JSON report path");
    verify_cmd->add_option("--plot-data", va.plot_path, "CSV of sweep rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(sample_cmd)) return cmd_sample(sa);
        if (app.got_subcommand(seminorm_cmd)) return cmd_seminorm(na);
        if (app.got_subcommand(search_cmd)) return cmd_search(ra);
        if (app.got_subcommand(bound_cmd)) return cmd_bound(ba);
        return cmd_verify(va);
    } catch (const search_infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
